#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "chabtrop/rational.hpp"

namespace chabtrop {

// Largest prime accepted for Q_p scaffolding; primality is certified by
// trial division, so unboundedly large primes are rejected at construction.
constexpr int64_t kMaxPrime = 1000000;

inline bool is_small_prime(int64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(int64_t p) {
  if (p >= kMaxPrime)
    throw Error("InvalidParameters",
                "primes >= 10^6 are rejected (trial-division certification)");
  if (!is_small_prime(p))
    throw Error("InvalidParameters", std::to_string(p) + " is not prime");
}

// Extended integer: finite value or +infinity (valuation of zero).
struct ExtInt {
  bool infinite = false;
  int64_t value = 0;

  static ExtInt inf() { return ExtInt{true, 0}; }
  static ExtInt of(int64_t v) { return ExtInt{false, v}; }
  friend bool operator==(const ExtInt& a, const ExtInt& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator<(const ExtInt& a, const ExtInt& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator<=(const ExtInt& a, const ExtInt& b) {
    return a == b || a < b;
  }
  std::string to_string() const {
    return infinite ? "inf" : std::to_string(value);
  }
};

// Element of Q_p held exactly as unit * p^valuation with a rational unit
// whose numerator and denominator are coprime to p. `precision` counts the
// known p-adic digits of the unit; it is metadata for refusing claims, not a
// rounding control -- all arithmetic below is exact on the representatives.
class PadicNumber {
 public:
  static constexpr int64_t kExactPrecision =
      std::numeric_limits<int64_t>::max() / 4;

  PadicNumber(int64_t prime, const BigRational& value,
              int64_t precision = kExactPrecision)
      : prime_(prime), precision_(precision) {
    require_prime(prime);
    if (precision_ < 1) throw Error("InvalidParameters", "precision < 1");
    if (value.is_zero()) {
      unit_ = BigRational(0);
      valuation_ = 0;
      return;
    }
    BigInt num = value.num(), den = value.den();
    int64_t v = 0;
    v += strip_prime(num);
    v -= strip_prime(den);
    unit_ = BigRational(num, den);
    valuation_ = v;
  }

  static PadicNumber zero(int64_t prime) { return PadicNumber(prime, 0); }
  static PadicNumber from_unit(int64_t prime, const BigRational& unit,
                               int64_t valuation,
                               int64_t precision = kExactPrecision) {
    PadicNumber x(prime, unit, precision);
    if (!x.is_zero()) x.valuation_ += valuation;
    return x;
  }

  int64_t prime() const { return prime_; }
  bool is_zero() const { return unit_.is_zero(); }
  const BigRational& unit() const { return unit_; }
  int64_t precision() const { return precision_; }
  bool precision_exact() const { return precision_ >= kExactPrecision; }

  ExtInt valuation() const {
    return is_zero() ? ExtInt::inf() : ExtInt::of(valuation_);
  }
  // Finite valuation accessor; only valid off zero.
  int64_t finite_valuation() const {
    if (is_zero()) throw Error("InvalidParameters", "valuation of zero");
    return valuation_;
  }

  // Exact rational representative unit * p^valuation.
  BigRational to_rational() const {
    if (is_zero()) return BigRational(0);
    BigInt pk = BigInt::pow(BigInt(prime_), static_cast<uint64_t>(
                                                std::abs(valuation_)));
    return valuation_ >= 0 ? unit_ * BigRational(pk)
                           : unit_ / BigRational(pk);
  }

  // Absolute precision: digits are known up to (not including) p^abs.
  ExtInt absolute_precision() const {
    if (precision_exact()) return ExtInt::inf();
    return ExtInt::of(valuation_ + precision_);
  }

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    a.require_same_prime(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    BigRational sum = a.to_rational() + b.to_rational();
    int64_t abs_prec = min_abs_precision(a, b);
    PadicNumber r(a.prime_, sum);
    if (!r.is_zero() && abs_prec != kExactPrecision)
      r.precision_ = std::max<int64_t>(abs_prec - r.valuation_, 1);
    else if (r.is_zero() && abs_prec != kExactPrecision)
      r.precision_ = 1;  // exact zero of the representatives
    return r;
  }
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
    return a + (-b);
  }
  PadicNumber operator-() const {
    PadicNumber r = *this;
    r.unit_ = -r.unit_;
    return r;
  }
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    a.require_same_prime(b);
    if (a.is_zero() || b.is_zero()) return zero(a.prime_);
    PadicNumber r = a;
    r.unit_ = a.unit_ * b.unit_;
    r.valuation_ = a.valuation_ + b.valuation_;
    r.precision_ = std::min(a.precision_, b.precision_);
    return r;
  }
  PadicNumber inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "inverse of p-adic zero");
    PadicNumber r = *this;
    r.unit_ = unit_.inverse();
    r.valuation_ = -valuation_;
    return r;
  }
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    return a * b.inverse();
  }

  // Exact equality of representatives.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b) {
    if (a.prime_ != b.prime_) return false;
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.valuation_ == b.valuation_ && a.unit_ == b.unit_;
  }
  friend bool operator!=(const PadicNumber& a, const PadicNumber& b) {
    return !(a == b);
  }

  // Reduction of the unit mod p (unit is p-integral by the type invariant).
  int64_t unit_mod_p() const {
    if (is_zero()) return 0;
    BigInt n = BigInt::mod_floor(unit_.num(), BigInt(prime_));
    BigInt d = BigInt::mod_floor(unit_.den(), BigInt(prime_));
    int64_t ni = n.to_int64(), di = d.to_int64();
    return mod_mul(ni, mod_inv_small(di, prime_), prime_);
  }

  // Unit as an integer approximation mod p^digits.
  BigInt unit_mod_pk(int64_t digits) const {
    BigInt pk = BigInt::pow(BigInt(prime_), static_cast<uint64_t>(digits));
    BigInt n = BigInt::mod_floor(unit_.num(), pk);
    BigInt d = BigInt::mod_floor(unit_.den(), pk);
    return BigInt::mod_floor(n * BigInt::mod_inverse(d, pk), pk);
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s = unit_.to_string() + "*" + std::to_string(prime_) + "^" +
                    std::to_string(valuation_);
    if (!precision_exact())
      s += " + O(" + std::to_string(prime_) + "^" +
           std::to_string(valuation_ + precision_) + ")";
    return s;
  }

  static int64_t mod_mul(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
  }
  static int64_t mod_pow_small(int64_t b, int64_t e, int64_t m) {
    int64_t acc = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
      if (e & 1) acc = mod_mul(acc, b, m);
      b = mod_mul(b, b, m);
      e >>= 1;
    }
    return acc;
  }
  static int64_t mod_inv_small(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, a1 = a % m;
    if (a1 < 0) a1 += m;
    while (a1) {
      int64_t q = g / a1;
      g -= q * a1;
      std::swap(g, a1);
      x -= q * x1;
      std::swap(x, x1);
    }
    if (g != 1) throw Error("DivisionByZero", "residue not invertible");
    return x < 0 ? x + m : x;
  }

 private:
  int64_t prime_;
  BigRational unit_;
  int64_t valuation_ = 0;
  int64_t precision_;

  void require_same_prime(const PadicNumber& other) const {
    if (prime_ != other.prime_)
      throw Error("PrimeMismatch", "operands live in different Q_p");
  }

  static int64_t min_abs_precision(const PadicNumber& a, const PadicNumber& b) {
    if (a.precision_exact() && b.precision_exact()) return kExactPrecision;
    int64_t pa = a.precision_exact()
                     ? kExactPrecision
                     : a.valuation_ + a.precision_;
    int64_t pb = b.precision_exact()
                     ? kExactPrecision
                     : b.valuation_ + b.precision_;
    return std::min(pa, pb);
  }

  int64_t strip_prime(BigInt& n) {
    // Removes all factors of p from n, returning the multiplicity.
    int64_t count = 0;
    BigInt p(prime_);
    for (;;) {
      BigInt q, r;
      BigInt::divmod(n, p, q, r);
      if (!r.is_zero()) break;
      n = std::move(q);
      ++count;
    }
    return count;
  }
};

// Residue-field element: an integer mod p.
struct FiniteFieldElement {
  int64_t prime;
  int64_t residue;

  FiniteFieldElement(int64_t p, int64_t r) : prime(p), residue(r % p) {
    require_prime(p);
    if (residue < 0) residue += p;
  }
};

// Legendre symbol by Euler's criterion with fast exponentiation.
inline int legendre(const FiniteFieldElement& a) {
  if (a.prime == 2) throw Error("EvenPrime", "Legendre symbol needs odd p");
  if (a.residue == 0) return 0;
  int64_t e = PadicNumber::mod_pow_small(a.residue, (a.prime - 1) / 2, a.prime);
  return e == 1 ? 1 : -1;
}

// Square root of `a` in Q_p by Newton iteration on the unit part, doubling
// the number of correct digits each step. The branch fixes the mod-p sign:
// the result satisfies s = branch * p^{v(a)/2} + higher-order terms.
inline PadicNumber hensel_sqrt(const PadicNumber& a,
                               const FiniteFieldElement& branch,
                               int64_t digits) {
  int64_t p = a.prime();
  if (p == 2) throw Error("EvenPrime", "square roots implemented for odd p");
  if (branch.prime != p) throw Error("PrimeMismatch", "branch in wrong field");
  if (digits < 1) throw Error("InvalidParameters", "digits < 1");
  if (a.is_zero()) return PadicNumber::zero(p);
  if (a.finite_valuation() % 2 != 0)
    throw Error("OddValuation", "v(a) must be even for a p-adic square root");
  int64_t u0 = a.unit_mod_p();
  if (legendre(FiniteFieldElement(p, u0)) != 1)
    throw Error("NonResidue", "unit of a is not a square mod p");
  if (PadicNumber::mod_mul(branch.residue, branch.residue, p) != u0)
    throw Error("BranchMismatch", "branch^2 != unit of a mod p");

  BigInt U = a.unit_mod_pk(digits);
  BigInt s(branch.residue);
  int64_t correct = 1;
  while (correct < digits) {
    correct = std::min(2 * correct, digits);
    BigInt pk = BigInt::pow(BigInt(p), static_cast<uint64_t>(correct));
    BigInt s_inv = BigInt::mod_inverse(s, pk);
    BigInt two_inv = BigInt::mod_inverse(BigInt(2), pk);
    s = BigInt::mod_floor((s + BigInt::mod_floor(U, pk) * s_inv) * two_inv,
                          pk);
  }
  return PadicNumber::from_unit(p, BigRational(s), a.finite_valuation() / 2,
                                digits);
}

}  // namespace chabtrop
