#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chabtrop/intpoly.hpp"
#include "chabtrop/series.hpp"

namespace chabtrop {

// Hyperelliptic curve c*y^2 = f(x) with integer c != 0 and integer f of
// degree 2g+1 or 2g+2, squarefree over Q, genus g >= 2.
class HyperellipticCurve {
 public:
  HyperellipticCurve(BigInt c, std::vector<BigInt> f_coeffs)
      : c_(std::move(c)), f_(std::move(f_coeffs)) {
    if (c_.is_zero()) throw Error("InvalidCurve", "c must be nonzero");
    int64_t d = intpoly::degree(f_);
    if (d < 5)
      throw Error("InvalidCurve", "need deg f >= 5 (genus >= 2)");
    f_.resize(static_cast<size_t>(d) + 1);
    genus_ = (d - 1) / 2;
    res_f_fprime_ = intpoly::resultant(f_, intpoly::derivative(f_));
    if (res_f_fprime_.is_zero())
      throw Error("InvalidCurve", "f must be squarefree (disc != 0)");
  }

  const BigInt& c() const { return c_; }
  const std::vector<BigInt>& f() const { return f_; }
  int64_t degree() const { return intpoly::degree(f_); }
  int64_t genus() const { return genus_; }
  const BigInt& leading_coeff() const { return f_.back(); }
  const BigInt& resultant_f_fprime() const { return res_f_fprime_; }

 private:
  BigInt c_;
  std::vector<BigInt> f_;
  int64_t genus_;
  BigInt res_f_fprime_;
};

// Good reduction at odd p: p divides neither c, nor lc(f), nor disc(f).
// With p coprime to lc, p | disc(f) iff p | Res(f, f').
inline bool good_reduction(const HyperellipticCurve& curve, int64_t p) {
  if (p == 2) throw Error("EvenPrime", "only odd primes are supported");
  require_prime(p);
  BigInt P(p);
  if (BigInt::mod_floor(curve.c(), P).is_zero()) return false;
  if (BigInt::mod_floor(curve.leading_coeff(), P).is_zero()) return false;
  return !BigInt::mod_floor(curve.resultant_f_fprime(), P).is_zero();
}

// #X(F_p) for p of good reduction: one point per Weierstrass x, 1 + chi
// otherwise, plus the points at infinity (1 for odd degree, 2 or 0 for even
// degree depending on whether lc(f)/c is a square).
inline int64_t count_points_Fp(const HyperellipticCurve& curve, int64_t p) {
  if (!good_reduction(curve, p))
    throw Error("BadReduction", "count requires good reduction");
  BigInt P(p);
  int64_t c_mod = BigInt::mod_floor(curve.c(), P).to_int64();
  int64_t c_inv = PadicNumber::mod_inv_small(c_mod, p);
  int64_t total = 0;
  std::vector<int64_t> f_mod;
  for (const BigInt& a : curve.f())
    f_mod.push_back(BigInt::mod_floor(a, P).to_int64());
  for (int64_t x = 0; x < p; ++x) {
    int64_t fx = 0;
    for (size_t i = f_mod.size(); i > 0; --i)
      fx = (PadicNumber::mod_mul(fx, x, p) + f_mod[i - 1]) % p;
    int64_t v = PadicNumber::mod_mul(fx, c_inv, p);
    if (v == 0)
      total += 1;
    else
      total += 1 + legendre(FiniteFieldElement(p, v));
  }
  if (curve.degree() % 2 == 1) {
    total += 1;
  } else {
    int64_t lc = BigInt::mod_floor(curve.leading_coeff(), P).to_int64();
    int64_t v = PadicNumber::mod_mul(lc, c_inv, p);
    total += 1 + legendre(FiniteFieldElement(p, v));
  }
  return total;
}

// Hasse-Weil sanity window |N - (p+1)| <= 2g sqrt(p), checked exactly as
// (N - p - 1)^2 <= 4 g^2 p.
inline bool hasse_weil_window(const HyperellipticCurve& curve, int64_t p,
                              int64_t count) {
  BigInt diff = BigInt(count) - BigInt(p) - BigInt(1);
  return diff * diff <= BigInt(4) * BigInt(curve.genus() * curve.genus()) *
                            BigInt(p);
}

inline bool is_rational_point(const HyperellipticCurve& curve,
                              const BigRational& x, const BigRational& y) {
  return BigRational(curve.c()) * y * y == intpoly::eval(curve.f(), x);
}

struct ColemanBound {
  int64_t points_fp = 0;
  int64_t bound = 0;
};

// Coleman's effective Chabauty bound #X(F_p) + 2g - 2 under p > 2g, r < g,
// good reduction.
inline ColemanBound coleman_bound_for_curve(const HyperellipticCurve& curve,
                                            int64_t p, int64_t r) {
  if (p % 2 == 0) throw Error("HypothesisFailure", "p must be odd");
  if (!(p > 2 * curve.genus()))
    throw Error("HypothesisFailure", "p > 2g violated");
  if (!(r >= 0 && r < curve.genus()))
    throw Error("HypothesisFailure", "r < g violated");
  if (!good_reduction(curve, p))
    throw Error("HypothesisFailure", "good reduction violated");
  ColemanBound out;
  out.points_fp = count_points_Fp(curve, p);
  out.bound = out.points_fp + 2 * curve.genus() - 2;
  return out;
}

// Affine residue disc around a smooth non-Weierstrass point (a, b) mod p:
// the tube is parametrized by x = a + p t, t in Z_p.
class ResidueDisc {
 public:
  ResidueDisc(const HyperellipticCurve& curve, int64_t p, int64_t a, int64_t b)
      : curve_(&curve), p_(p), a_((a % p + p) % p), b_((b % p + p) % p) {
    require_prime(p);
    if (p == 2) throw Error("EvenPrime", "only odd primes are supported");
    if (!good_reduction(curve, p))
      throw Error("BadDisc", "disc needs good reduction");
    if (b_ == 0)
      throw Error("WeierstrassDisc",
                  "Weierstrass discs are not supported (y-uniformizer)");
    BigInt P(p);
    int64_t fa =
        BigInt::mod_floor(intpoly::eval(curve.f(), BigInt(a_)), P).to_int64();
    int64_t cb2 = PadicNumber::mod_mul(
        BigInt::mod_floor(curve.c(), P).to_int64(),
        PadicNumber::mod_mul(b_, b_, p), p);
    if (fa != cb2) throw Error("BadDisc", "f(a) != c b^2 mod p");
  }

  const HyperellipticCurve& curve() const { return *curve_; }
  int64_t prime() const { return p_; }
  int64_t center_x() const { return a_; }
  int64_t center_y() const { return b_; }

 private:
  const HyperellipticCurve* curve_;
  int64_t p_;
  int64_t a_, b_;
};

namespace detail {

// Power series inverse square root data for the disc: returns the exact
// rational coefficient lists S (with S^2 = f(a+pt)/(c F0) as series) and
// T = 1/S, both with v(coeff_n) >= n, plus F0 and the Hensel root y0 of F0.
struct DiscExpansionCore {
  std::vector<BigRational> S, T;
  BigRational F0;
  PadicNumber y0;
};

inline DiscExpansionCore disc_core(const ResidueDisc& disc, int64_t terms,
                                   int64_t digits) {
  const HyperellipticCurve& curve = disc.curve();
  int64_t p = disc.prime();
  std::vector<BigInt> shifted =
      intpoly::compose_affine(curve.f(), BigInt(disc.center_x()), BigInt(p));
  std::vector<BigRational> F(static_cast<size_t>(terms), BigRational(0));
  for (size_t i = 0; i < shifted.size() && i < static_cast<size_t>(terms); ++i)
    F[i] = BigRational(shifted[i]) / BigRational(curve.c());
  DiscExpansionCore core{
      {}, {}, F[0],
      hensel_sqrt(PadicNumber(p, F[0]),
                  FiniteFieldElement(p, disc.center_y()), digits)};
  // S = sqrt(F / F0) via the coefficient recursion; exact rationals.
  std::vector<BigRational> A(F.size());
  for (size_t i = 0; i < F.size(); ++i) A[i] = F[i] / core.F0;
  core.S.assign(F.size(), BigRational(0));
  core.S[0] = BigRational(1);
  for (size_t n = 1; n < F.size(); ++n) {
    BigRational acc = A[n];
    for (size_t i = 1; i < n; ++i) acc -= core.S[i] * core.S[n - i];
    core.S[n] = acc / BigRational(2);
  }
  // Internal consistency: S^2 must reproduce A termwise.
  for (size_t n = 0; n < F.size(); ++n) {
    BigRational acc(0);
    for (size_t i = 0; i <= n; ++i) acc += core.S[i] * core.S[n - i];
    if (acc != A[n])
      throw Error("InternalError", "series square root recursion failed");
  }
  // T = S^{-1}.
  core.T.assign(F.size(), BigRational(0));
  core.T[0] = BigRational(1);
  for (size_t n = 1; n < F.size(); ++n) {
    BigRational acc(0);
    for (size_t i = 1; i <= n; ++i) acc += core.S[i] * core.T[n - i];
    core.T[n] = -acc;
  }
  return core;
}

}  // namespace detail

// Expansion of omega = q(x) dx / y on the disc in the coordinate x = a + pt:
// q(x(t)) * p dt / (y0 * S(t)). Returned as the dt-coefficient series with
// certified tail v(a_n) >= n + 1.
inline PadicSeries expand_combination(const ResidueDisc& disc,
                                      const std::vector<BigInt>& q_coeffs,
                                      int64_t terms, int64_t digits = 0) {
  const HyperellipticCurve& curve = disc.curve();
  int64_t p = disc.prime();
  if (terms < 1) throw Error("InvalidParameters", "terms must be >= 1");
  if (digits <= 0)
    digits = std::max<int64_t>(2 * (2 * curve.genus() + 4), terms + 4);
  detail::DiscExpansionCore core = detail::disc_core(disc, terms, digits);
  // Numerator q(a + p t), exact.
  std::vector<BigInt> qt =
      intpoly::compose_affine(q_coeffs, BigInt(disc.center_x()), BigInt(p));
  // q(x(t)) * T(t) * p / y0.
  PadicNumber inv_y0 = core.y0.inverse();
  std::vector<PadicNumber> coeffs;
  coeffs.reserve(static_cast<size_t>(terms));
  for (int64_t n = 0; n < terms; ++n) {
    BigRational acc(0);
    for (size_t j = 0; j <= static_cast<size_t>(n) && j < qt.size(); ++j)
      acc += BigRational(qt[j]) * core.T[static_cast<size_t>(n) - j];
    acc *= BigRational(p);
    coeffs.push_back(PadicNumber(p, acc) * inv_y0);
  }
  return PadicSeries(p, 0, std::move(coeffs), TailBound::affine(1, 1));
}

// Basis differential omega_i = x^i dx / y, i in [0, g).
inline PadicSeries expand_differential(const ResidueDisc& disc, int64_t i,
                                       int64_t terms, int64_t digits = 0) {
  if (i < 0 || i >= disc.curve().genus())
    throw Error("InvalidParameters", "differential index must be in [0, g)");
  std::vector<BigInt> q(static_cast<size_t>(i) + 1, BigInt(0));
  q.back() = BigInt(1);
  return expand_combination(disc, q, terms, digits);
}

// Tiny integral of omega_i between two disc points t1, t2 (valuations
// >= 0): evaluate the termwise antiderivative at both ends. The certified
// absolute precision combines the arithmetic precision with the truncation
// tail bound.
inline PadicNumber tiny_integral(const ResidueDisc& disc, int64_t i,
                                 const PadicNumber& t1, const PadicNumber& t2,
                                 int64_t terms) {
  int64_t p = disc.prime();
  if (t1.prime() != p || t2.prime() != p)
    throw Error("PrimeMismatch", "disc points live in the wrong Q_p");
  for (const PadicNumber* t : {&t1, &t2})
    if (!t->is_zero() && t->finite_valuation() < 0)
      throw Error("OutsideDisc", "tiny integrals need v(t) >= 0");
  if (t1 == t2) return PadicNumber::zero(p);
  PadicSeries omega = expand_differential(disc, i, terms);
  // Reindex the dt-series as a dt/t-series: the coefficient of t^m dt/t is
  // the dt-coefficient c_{m-1}, so the structural bound v(c_n) >= n + 1
  // becomes v(a_m) >= m.
  PadicSeries as_dt_over_t(p, 1, omega.coeffs(), TailBound::affine(0, 1));
  PadicSeries F = antiderivative(as_dt_over_t);
  if (F.tail().kind != TailBound::Kind::Affine)
    throw Error("InsufficientPrecision", "tail bound lost in antiderivative");
  int64_t tail_abs = F.tail().base;  // v(truncated terms) at v(t) >= 0
  auto eval = [&](const PadicNumber& t) {
    PadicNumber acc = PadicNumber::zero(p);
    for (int64_t n = F.first_truncated() - 1; n >= F.low(); --n) {
      acc = acc * t + F.coeff(n);
    }
    for (int64_t k = 0; k < F.low(); ++k) acc = acc * t;
    return acc;
  };
  PadicNumber val = eval(t2) - eval(t1);
  if (val.is_zero())
    throw Error("InsufficientPrecision",
                "value vanishes to working precision; raise terms to certify");
  ExtInt arith = val.absolute_precision();
  int64_t abs_prec = arith.infinite ? tail_abs
                                    : std::min(arith.value, tail_abs);
  int64_t digits = abs_prec - val.finite_valuation();
  if (digits < 1)
    throw Error("InsufficientPrecision",
                "requested truncation certifies no digits of the result");
  return PadicNumber::from_unit(p, val.unit(), val.finite_valuation(), digits);
}

struct DiscZeroData {
  int64_t n0 = 0;
  int64_t local_bound = 0;
};

// n0 = first coefficient index of minimal valuation in the rescaled
// expansion; the per-disc Chabauty bound is 1 + n0 for p > n0 - 2 and picks
// up the N_p denominator correction on the smaller disc otherwise.
inline DiscZeroData disc_zero_data(const ResidueDisc& disc, int64_t i,
                                   int64_t terms = 0) {
  const HyperellipticCurve& curve = disc.curve();
  if (terms <= 0) terms = 4 * curve.genus() + 8;
  PadicSeries omega = expand_differential(disc, i, terms);
  int64_t min_v = 0;
  bool seen = false;
  for (int64_t n = 0; n < omega.first_truncated(); ++n) {
    const PadicNumber c = omega.coeff(n);
    if (c.is_zero()) continue;
    if (!seen || c.finite_valuation() < min_v) {
      min_v = c.finite_valuation();
      seen = true;
    }
  }
  if (!seen) throw Error("ZeroSeries", "expansion vanished identically");
  DiscZeroData out;
  for (int64_t n = 0; n < omega.first_truncated(); ++n) {
    const PadicNumber c = omega.coeff(n);
    if (!c.is_zero() && c.finite_valuation() == min_v) {
      out.n0 = n;
      break;
    }
  }
  int64_t p = disc.prime();
  if (p > out.n0 - 2) {
    out.local_bound = 1 + out.n0;
  } else {
    // Zeros of the antiderivative on the smaller disc v(t) >= 1: indices
    // m with m - v_p(m) <= n0 + 1 all sit below N_p(1, n0 + 1).
    BigInt np = compute_Np(p, BigRational(1), out.n0 + 1);
    out.local_bound = (np - BigInt(1)).to_int64();
  }
  return out;
}

// Minimal vanishing order at the disc over a subspace of reduced
// differentials, given as coefficient rows over F_p: the first column
// carrying a nonzero entry. Rows must be independent and long enough to
// witness full rank.
inline int64_t stoll_order(int64_t p, const std::vector<std::vector<int64_t>>& rows) {
  require_prime(p);
  if (rows.empty()) throw Error("InvalidParameters", "no rows");
  size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw Error("InvalidParameters", "ragged rows");
  // Rank by Gaussian elimination over F_p.
  std::vector<std::vector<int64_t>> m = rows;
  for (auto& r : m)
    for (auto& x : r) x = ((x % p) + p) % p;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < m.size(); ++col) {
    size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    int64_t inv = PadicNumber::mod_inv_small(m[rank][col], p);
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      int64_t f = PadicNumber::mod_mul(m[r][col], inv, p);
      for (size_t c2 = col; c2 < cols; ++c2) {
        m[r][c2] =
            (m[r][c2] - PadicNumber::mod_mul(f, m[rank][c2], p) % p + p * 2) %
            p;
      }
    }
    ++rank;
  }
  bool any_nonzero = false;
  size_t first_col = 0;
  for (size_t col = 0; col < cols && !any_nonzero; ++col)
    for (const auto& r : rows)
      if (((r[col] % p) + p) % p != 0) {
        any_nonzero = true;
        first_col = col;
        break;
      }
  if (!any_nonzero)
    throw Error("RankNotStabilized", "all stored columns vanish");
  if (rank < rows.size())
    throw Error("DependentRows",
                "rows are dependent over the stored columns");
  return static_cast<int64_t>(first_col);
}

}  // namespace chabtrop
