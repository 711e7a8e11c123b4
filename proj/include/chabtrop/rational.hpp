#pragma once

#include <string>
#include <type_traits>
#include <string_view>
#include <utility>

#include "chabtrop/bigint.hpp"

namespace chabtrop {

// Exact rational number. Always normalized: gcd(num, den) = 1, den > 0,
// zero is 0/1.
class BigRational {
 public:
  BigRational() : num_(0), den_(1) {}
  BigRational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT
  template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
  BigRational(T n) : num_(n), den_(1) {}  // NOLINT
  BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }

  // Accepts "a", "-a", "a/b".
  static BigRational from_string(std::string_view s) {
    size_t slash = s.find('/');
    if (slash == std::string_view::npos)
      return BigRational(BigInt::from_string(s));
    BigInt n = BigInt::from_string(s.substr(0, slash));
    BigInt d = BigInt::from_string(s.substr(slash + 1));
    return BigRational(std::move(n), std::move(d));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_.is_one(); }
  int sign() const { return num_.sign(); }

  friend BigRational operator+(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator-(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator*(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw Error("DivisionByZero", "rational division by zero");
    return BigRational(a.num_ * b.den_, a.den_ * b.num_);
  }
  BigRational operator-() const {
    BigRational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  BigRational& operator+=(const BigRational& b) { return *this = *this + b; }
  BigRational& operator-=(const BigRational& b) { return *this = *this - b; }
  BigRational& operator*=(const BigRational& b) { return *this = *this * b; }
  BigRational& operator/=(const BigRational& b) { return *this = *this / b; }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const BigRational& a, const BigRational& b) {
    return !(a == b);
  }
  friend bool operator<(const BigRational& a, const BigRational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const BigRational& a, const BigRational& b) {
    return b < a;
  }
  friend bool operator<=(const BigRational& a, const BigRational& b) {
    return !(b < a);
  }
  friend bool operator>=(const BigRational& a, const BigRational& b) {
    return !(a < b);
  }

  BigInt floor() const { return BigInt::fdiv(num_, den_); }
  BigInt ceil() const { return -BigInt::fdiv(-num_, den_); }

  BigRational inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "inverse of zero");
    return BigRational(den_, num_);
  }

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

 private:
  BigInt num_, den_;

  void normalize() {
    if (den_.is_zero())
      throw Error("DivisionByZero", "rational with zero denominator");
    if (den_.is_negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

inline BigRational abs(const BigRational& a) { return a.sign() < 0 ? -a : a; }

inline BigRational min(const BigRational& a, const BigRational& b) {
  return a < b ? a : b;
}
inline BigRational max(const BigRational& a, const BigRational& b) {
  return a < b ? b : a;
}

}  // namespace chabtrop
