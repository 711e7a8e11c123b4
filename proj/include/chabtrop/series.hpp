#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chabtrop/padic.hpp"

namespace chabtrop {

// Certified lower bound on the valuations of the truncated coefficients:
// v(a_n) >= base + gradient*n for every n at or beyond the first truncated
// exponent. Exact series (Laurent polynomials) have no truncated terms at
// all; Unknown means no claim can be certified past the stored window.
struct TailBound {
  enum class Kind { Exact, Affine, Unknown };
  Kind kind = Kind::Exact;
  int64_t base = 0;
  int64_t gradient = 0;  // >= 0

  static TailBound exact() { return TailBound{Kind::Exact, 0, 0}; }
  static TailBound affine(int64_t base, int64_t gradient) {
    if (gradient < 0)
      throw Error("InvalidParameters", "tail gradient must be >= 0");
    return TailBound{Kind::Affine, base, gradient};
  }
  static TailBound unknown() { return TailBound{Kind::Unknown, 0, 0}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::Exact:
        return "exact";
      case Kind::Unknown:
        return "unknown";
      default:
        return "v(a_n) >= " + std::to_string(base) + " + " +
               std::to_string(gradient) + "*n";
    }
  }
};

// Truncated Laurent series over Q_p: exact coefficients for exponents
// low .. low+len-1 plus a tail bound for everything beyond.
class PadicSeries {
 public:
  PadicSeries(int64_t prime, int64_t low, std::vector<PadicNumber> coeffs,
              TailBound tail = TailBound::exact())
      : prime_(prime), low_(low), coeffs_(std::move(coeffs)), tail_(tail) {
    require_prime(prime_);
    if (coeffs_.empty())
      throw Error("InvalidParameters", "series needs at least one coefficient");
    for (const auto& c : coeffs_)
      if (c.prime() != prime_)
        throw Error("PrimeMismatch", "coefficient in wrong Q_p");
  }

  static PadicSeries from_rationals(int64_t prime, int64_t low,
                                    const std::vector<BigRational>& coeffs,
                                    TailBound tail = TailBound::exact()) {
    std::vector<PadicNumber> c;
    c.reserve(coeffs.size());
    for (const auto& r : coeffs) c.emplace_back(prime, r);
    return PadicSeries(prime, low, std::move(c), tail);
  }

  int64_t prime() const { return prime_; }
  int64_t low() const { return low_; }
  int64_t length() const { return static_cast<int64_t>(coeffs_.size()); }
  int64_t first_truncated() const { return low_ + length(); }
  const TailBound& tail() const { return tail_; }
  const std::vector<PadicNumber>& coeffs() const { return coeffs_; }

  PadicNumber coeff(int64_t exponent) const {
    if (exponent < low_ || exponent >= first_truncated())
      return PadicNumber::zero(prime_);
    return coeffs_[static_cast<size_t>(exponent - low_)];
  }

  // Strips exactly-zero leading and trailing stored coefficients (keeps at
  // least one slot).
  PadicSeries normalized() const {
    size_t lo = 0, hi = coeffs_.size();
    while (lo + 1 < hi && coeffs_[lo].is_zero()) ++lo;
    while (hi > lo + 1 && coeffs_[hi - 1].is_zero()) --hi;
    std::vector<PadicNumber> c(coeffs_.begin() + lo, coeffs_.begin() + hi);
    // Stored zeros moved into the tail region satisfy any tail bound, so the
    // bound carries over unchanged.
    return PadicSeries(prime_, low_ + static_cast<int64_t>(lo), std::move(c),
                       tail_);
  }

 private:
  int64_t prime_;
  int64_t low_;
  std::vector<PadicNumber> coeffs_;
  TailBound tail_;
};

// Lower convex hull of {(n, v(a_n))}; slopes strictly increase left to
// right. `provisional` is set when the tail bound admits points below the
// rightward extension of the hull.
struct NewtonPolygon {
  std::vector<std::pair<int64_t, int64_t>> vertices;  // (exponent, valuation)
  bool provisional = false;
};

// Half-open/closed interval of coordinate valuations, lo >= 0.
struct ValuationWindow {
  BigRational lo;
  bool lo_open = true;
  bool hi_infinite = true;
  BigRational hi;  // meaningful when !hi_infinite
  bool hi_open = true;

  static ValuationWindow open(const BigRational& lo, const BigRational& hi) {
    return ValuationWindow{lo, true, false, hi, true};
  }
  static ValuationWindow open_above(const BigRational& lo) {
    return ValuationWindow{lo, true, true, BigRational(0), true};
  }
  static ValuationWindow closed(const BigRational& lo, const BigRational& hi) {
    return ValuationWindow{lo, false, false, hi, false};
  }

  void validate() const {
    if (lo.sign() < 0)
      throw Error("WindowError", "valuation window must have lo >= 0");
    if (!hi_infinite) {
      if (lo > hi || (lo == hi && (lo_open || hi_open)))
        throw Error("WindowError", "empty valuation window");
    }
  }
  bool contains(const BigRational& v) const {
    if (lo_open ? !(v > lo) : !(v >= lo)) return false;
    if (hi_infinite) return true;
    return hi_open ? v < hi : v <= hi;
  }
  std::string to_string() const {
    std::string s = lo_open ? "(" : "[";
    s += lo.to_string();
    s += ",";
    s += hi_infinite ? "inf" : hi.to_string();
    s += (hi_infinite || hi_open) ? ")" : "]";
    return s;
  }
};

namespace detail {

// floor(log_p(n)) for n >= 1.
inline int64_t floor_log_p(int64_t p, const BigInt& n) {
  if (n < BigInt(1)) throw Error("InvalidParameters", "log of non-positive");
  int64_t k = 0;
  BigInt pk(p);
  while (pk <= n) {
    pk = pk * BigInt(p);
    ++k;
  }
  return k;
}

struct HullPoint {
  int64_t exponent;
  int64_t valuation;
};

// Infimum of slopes any tail point could contribute as a new hull segment,
// together with whether that infimum is attained at some finite exponent.
struct TailSlopeInfo {
  bool unbounded_below = false;  // unknown tail
  bool infinite = false;         // exact tail: no new segments at all
  BigRational inf;
  bool attained = false;
};

inline TailSlopeInfo tail_slope_infimum(
    const std::vector<std::pair<int64_t, int64_t>>& hull, const TailBound& t,
    int64_t first_truncated) {
  TailSlopeInfo info;
  if (t.kind == TailBound::Kind::Exact) {
    info.infinite = true;
    return info;
  }
  if (t.kind == TailBound::Kind::Unknown) {
    info.unbounded_below = true;
    return info;
  }
  bool first = true;
  for (const auto& [n_k, v_k] : hull) {
    // Slope to a tail point at exponent m >= M on the bound line:
    //   gradient + (base + gradient*n_k - v_k) / (m - n_k),
    // monotone in m; minimized at m = M when the numerator is negative,
    // approaching `gradient` from above (never attained) otherwise.
    BigRational c = BigRational(t.base) + BigRational(t.gradient) *
                                              BigRational(n_k) -
                    BigRational(v_k);
    BigRational cand;
    bool cand_attained;
    if (c.sign() > 0) {
      cand = BigRational(t.gradient);
      cand_attained = false;  // approached as m -> infinity
    } else {
      // c == 0: every admissible m realizes exactly `gradient`.
      cand = BigRational(t.gradient) + c / BigRational(first_truncated - n_k);
      cand_attained = true;
    }
    if (first || cand < info.inf ||
        (cand == info.inf && cand_attained && !info.attained)) {
      info.inf = cand;
      info.attained = cand_attained;
      first = false;
    }
  }
  return info;
}

}  // namespace detail

inline NewtonPolygon newton_polygon(const PadicSeries& f) {
  std::vector<detail::HullPoint> pts;
  for (int64_t n = f.low(); n < f.first_truncated(); ++n) {
    const PadicNumber& c = f.coeff(n);
    if (!c.is_zero()) pts.push_back({n, c.finite_valuation()});
  }
  if (pts.empty())
    throw Error("AllZero", "series has no nonzero stored coefficient");
  NewtonPolygon poly;
  // Monotone-chain lower hull; exponents already sorted.
  for (const auto& pt : pts) {
    while (poly.vertices.size() >= 2) {
      auto& b = poly.vertices[poly.vertices.size() - 1];
      auto& a = poly.vertices[poly.vertices.size() - 2];
      // Keep hull lower-convex: drop b if (a, b, pt) turns left or is flat.
      __int128 lhs = static_cast<__int128>(b.second - a.second) *
                     (pt.exponent - a.first);
      __int128 rhs = static_cast<__int128>(pt.valuation - a.second) *
                     (b.first - a.first);
      if (lhs >= rhs)
        poly.vertices.pop_back();
      else
        break;
    }
    poly.vertices.emplace_back(pt.exponent, pt.valuation);
  }
  // Provisional iff some admissible tail point falls strictly below the
  // rightward extension of the final segment (or below the last vertex for
  // a single-vertex hull).
  const TailBound& t = f.tail();
  if (t.kind == TailBound::Kind::Unknown) {
    poly.provisional = true;
  } else if (t.kind == TailBound::Kind::Affine) {
    int64_t M = f.first_truncated();
    const auto& last = poly.vertices.back();
    BigRational ext_slope;
    if (poly.vertices.size() >= 2) {
      const auto& prev = poly.vertices[poly.vertices.size() - 2];
      ext_slope = BigRational(last.second - prev.second) /
                  BigRational(last.first - prev.first);
    } else {
      ext_slope = BigRational(0);
    }
    // Tail line at m: base + gradient*m; extension: v_last + s*(m - n_last).
    // Strictly below for some m >= M?
    BigRational g(t.gradient), s = ext_slope;
    BigRational diff_at_M = BigRational(t.base) + g * BigRational(M) -
                            (BigRational(last.second) +
                             s * BigRational(M - last.first));
    if (g < s)
      poly.provisional = true;  // eventually dips below
    else if (diff_at_M.sign() < 0)
      poly.provisional = true;
    else
      poly.provisional = false;
  }
  return poly;
}

// Number of zeros (with multiplicity, over C_p) of f whose coordinate
// valuation lies in `w`, certified against the truncation tail. A hull
// segment of slope s contributes its horizontal width at valuation -s.
inline int64_t count_zeros(const PadicSeries& f, const ValuationWindow& w) {
  w.validate();
  NewtonPolygon poly = newton_polygon(f);
  detail::TailSlopeInfo tail =
      detail::tail_slope_infimum(poly.vertices, f.tail(), f.first_truncated());
  // Slopes of interest are s with -s in w; their supremum is -lo.
  if (!tail.infinite) {
    if (tail.unbounded_below)
      throw Error("InsufficientTail",
                  "tail bound is unknown; zero count not certified");
    BigRational s_sup = -w.lo;
    bool sup_included = !w.lo_open;
    if (tail.inf < s_sup ||
        (tail.inf == s_sup && sup_included && tail.attained))
      throw Error("InsufficientTail",
                  "tail bound too weak to certify the window " +
                      w.to_string());
  }
  int64_t count = 0;
  for (size_t i = 1; i < poly.vertices.size(); ++i) {
    const auto& [n0, v0] = poly.vertices[i - 1];
    const auto& [n1, v1] = poly.vertices[i];
    BigRational neg_slope = BigRational(v0 - v1) / BigRational(n1 - n0);
    if (w.contains(neg_slope)) count += (n1 - n0);
  }
  return count;
}

// Termwise antiderivative of omega = sum a_n t^n dt/t (so the primitive is
// sum_{n != 0} (a_n/n) t^n). The residue a_0 must be exactly zero.
inline PadicSeries antiderivative(const PadicSeries& omega) {
  int64_t M = omega.first_truncated();
  if (omega.tail().kind != TailBound::Kind::Exact && M <= 0)
    throw Error("InsufficientTail",
                "residue coefficient hidden in the truncated tail");
  if (omega.low() <= 0 && M > 0) {
    if (!omega.coeff(0).is_zero())
      throw Error("NonExactResidue",
                  "dt/t coefficient a_0 != 0: form is not exact");
  }
  std::vector<PadicNumber> out;
  out.reserve(static_cast<size_t>(omega.length()));
  for (int64_t n = omega.low(); n < M; ++n) {
    if (n == 0) {
      out.push_back(PadicNumber::zero(omega.prime()));
      continue;
    }
    out.push_back(omega.coeff(n) *
                  PadicNumber(omega.prime(), BigRational(BigInt(1), BigInt(n))));
  }
  TailBound t = omega.tail();
  TailBound out_tail = TailBound::exact();
  switch (t.kind) {
    case TailBound::Kind::Exact:
      out_tail = TailBound::exact();
      break;
    case TailBound::Kind::Unknown:
      out_tail = TailBound::unknown();
      break;
    case TailBound::Kind::Affine: {
      // v(a_n/n) >= base + gradient*n - floor(log_p n). With gradient >= 1
      // this stays affine of gradient-1 because n - floor(log_p n) is
      // nondecreasing; a flat bound cannot survive the division.
      if (t.gradient >= 1) {
        int64_t flog = detail::floor_log_p(omega.prime(), BigInt(M));
        out_tail = TailBound::affine(t.base + M - flog, t.gradient - 1);
      } else {
        out_tail = TailBound::unknown();
      }
      break;
    }
  }
  return PadicSeries(omega.prime(), omega.low(), std::move(out), out_tail);
}

// Smallest positive integer N with r(n - N0) > floor(log_p n) for all
// n >= N. Solved block-by-block over k = floor(log_p n): the failing n in
// block k are those <= N0 + k/r, so only O(log_p(N0 + 1/r)) blocks matter.
// A definitional scan would not terminate for the astronomically small
// rates the uniform torsion bounds feed in here.
inline BigInt compute_Np(int64_t p, const BigRational& rate,
                         const BigInt& N0) {
  require_prime(p);
  if (rate.sign() <= 0)
    throw Error("NonpositiveRate", "N_p needs a positive rate");
  BigInt best_fail(0);  // 0 = none seen (failing n are >= 1)
  BigInt pk(1);
  for (int64_t k = 0;; ++k) {
    // Threshold: n fails in block k iff n <= N0 + k/r.
    BigRational thr = BigRational(N0) + BigRational(k) / rate;
    BigInt t = thr.floor();
    BigInt block_lo = k == 0 ? BigInt(1) : pk;
    BigInt block_hi = pk * BigInt(p) - BigInt(1);
    if (t >= block_lo) {
      BigInt top = t < block_hi ? t : block_hi;
      if (top > best_fail) best_fail = top;
    }
    // Once p^k clears the threshold line and keeps growing faster than it,
    // no later block can fail.
    bool cleared = BigRational(pk) > thr;
    bool dominating =
        BigRational(pk) * BigRational(p - 1) > rate.inverse();
    if (cleared && dominating) break;
    pk = pk * BigInt(p);
  }
  BigInt N = best_fail + BigInt(1);
  return N < BigInt(1) ? BigInt(1) : N;
}

inline BigInt compute_Np(int64_t p, const BigRational& rate, int64_t N0) {
  return compute_Np(p, rate, BigInt(N0));
}

struct AnnularSlopeReport {
  int64_t n0 = 0;              // boundary slope at the outer end
  int64_t interior_slope = 0;  // slope at distance r-a from the outer end
  BigInt bound;                // N_p(r - a, n0)
  bool holds = false;
};

namespace detail {

// Active exponent of the lower envelope min_m(v_m + m*s) immediately to the
// right of position s (ties resolved toward the smaller exponent, which is
// the one that stays minimal as s grows).
inline int64_t envelope_active_exponent(
    const std::vector<std::pair<int64_t, int64_t>>& lines,
    const BigRational& s) {
  bool first = true;
  BigRational best;
  int64_t best_m = 0;
  for (const auto& [m, v] : lines) {
    BigRational val = BigRational(v) + BigRational(m) * s;
    if (first || val < best || (val == best && m < best_m)) {
      best = val;
      best_m = m;
      first = false;
    }
  }
  return best_m;
}

}  // namespace detail

// Checks the annular Rolle bound on the annulus of logarithmic modulus r
// with skeleton coordinate s in (0, r), s = 0 at the outer end. For an
// exact residue-zero form omega = sum a_m t^m dt/t, the slope of
// F = -log|primitive| at distance r-a from the outer end must not exceed
// N_p(r-a, N0), where N0 is the boundary slope of G = -log||omega|| there.
inline AnnularSlopeReport annular_slope_bound_check(const PadicSeries& omega,
                                                    const BigRational& r,
                                                    const BigRational& a) {
  if (omega.tail().kind != TailBound::Kind::Exact)
    throw Error("InsufficientTail", "annular check needs an exact form");
  if (!(BigRational(0) < a && a < r))
    throw Error("WindowError", "need 0 < a < r");
  PadicSeries f = antiderivative(omega.normalized());

  std::vector<std::pair<int64_t, int64_t>> g_lines, f_lines;
  for (int64_t n = omega.low(); n < omega.first_truncated(); ++n)
    if (!omega.coeff(n).is_zero())
      g_lines.emplace_back(n, omega.coeff(n).finite_valuation());
  for (int64_t n = f.low(); n < f.first_truncated(); ++n)
    if (!f.coeff(n).is_zero())
      f_lines.emplace_back(n, f.coeff(n).finite_valuation());
  if (g_lines.empty()) throw Error("AllZero", "zero form");

  AnnularSlopeReport rep;
  rep.n0 = detail::envelope_active_exponent(g_lines, BigRational(0));
  BigRational z = r - a;  // distance from the outer end
  rep.interior_slope = detail::envelope_active_exponent(f_lines, z);
  rep.bound = compute_Np(omega.prime(), z, BigInt(rep.n0));
  rep.holds = BigInt(rep.interior_slope) <= rep.bound;
  return rep;
}

}  // namespace chabtrop
