#pragma once

#include <algorithm>
#include <cstdint>
#include <type_traits>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chabtrop {

// Domain error with a stable machine-readable code (mirrored into CLI output).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Signed arbitrary-precision integer, sign-magnitude over base-10^9 limbs
// (little endian, no leading zero limbs). Sizes in this project stay modest
// (a few hundred decimal digits), so schoolbook algorithms are used
// throughout.
class BigInt {
 public:
  static constexpr uint32_t kBase = 1000000000u;  // 10^9

  BigInt() = default;
  template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
  BigInt(T v) {  // NOLINT: implicit by design
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m;
    if constexpr (std::is_signed_v<T>)
      m = v < 0 ? -static_cast<unsigned long long>(v)
                : static_cast<unsigned long long>(v);
    else
      m = static_cast<unsigned long long>(v);
    while (m != 0) {
      mag_.push_back(static_cast<uint32_t>(m % kBase));
      m /= kBase;
    }
  }

  static BigInt from_string(std::string_view s) {
    BigInt r;
    if (s.empty()) throw Error("ParseError", "empty integer literal");
    int sign = 1;
    size_t i = 0;
    if (s[0] == '-') {
      sign = -1;
      i = 1;
    } else if (s[0] == '+') {
      i = 1;
    }
    if (i == s.size()) throw Error("ParseError", "sign without digits");
    size_t digits = s.size() - i;
    r.mag_.assign((digits + 8) / 9, 0u);
    size_t limb = 0, filled = 0;
    uint32_t cur = 0, pow = 1;
    for (size_t k = s.size(); k > i; --k) {
      char c = s[k - 1];
      if (c < '0' || c > '9')
        throw Error("ParseError", "bad digit in integer literal");
      cur += static_cast<uint32_t>(c - '0') * pow;
      pow *= 10;
      if (++filled == 9) {
        r.mag_[limb++] = cur;
        cur = 0;
        pow = 1;
        filled = 0;
      }
    }
    if (filled) r.mag_[limb] = cur;
    r.trim();
    r.sign_ = r.mag_.empty() ? 0 : sign;
    return r;
  }

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }
  bool is_negative() const { return sign_ < 0; }
  bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }
  bool is_even() const { return mag_.empty() || (mag_[0] % 2 == 0); }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  BigInt operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) return BigInt();
      if (c > 0) {
        r.mag_ = sub_mag(a.mag_, b.mag_);
        r.sign_ = a.sign_;
      } else {
        r.mag_ = sub_mag(b.mag_, a.mag_);
        r.sign_ = b.sign_;
      }
    }
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.mag_ = mul_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }

  BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
  BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
  BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

  // Truncated division (C semantics): quotient rounds toward zero and the
  // remainder has the sign of the dividend.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw Error("DivisionByZero", "integer division by zero");
    int c = cmp_mag(a.mag_, b.mag_);
    if (c < 0) {
      q = BigInt();
      r = a;
      return;
    }
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q.mag_ = std::move(qm);
    q.trim();
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.mag_ = std::move(rm);
    r.trim();
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  // Floor division: quotient rounds toward -infinity.
  static BigInt fdiv(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    if (!r.is_zero() && (a.sign_ * b.sign_) < 0) q -= BigInt(1);
    return q;
  }
  // Nonnegative remainder: a - fdiv(a,b)*b for b > 0.
  static BigInt mod_floor(const BigInt& a, const BigInt& b) {
    BigInt r = a % b;
    if (r.is_negative()) r += (b.is_negative() ? -b : b);
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  static BigInt pow(const BigInt& base, uint64_t e) {
    BigInt acc(1), sq = base;
    while (e) {
      if (e & 1) acc *= sq;
      e >>= 1;
      if (e) sq *= sq;
    }
    return acc;
  }

  // Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
  static BigInt extended_gcd(const BigInt& a, const BigInt& b, BigInt& x,
                             BigInt& y) {
    if (b.is_zero()) {
      x = BigInt(a.sign() >= 0 ? 1 : -1);
      y = BigInt(0);
      BigInt g = a;
      g.sign_ = g.mag_.empty() ? 0 : 1;
      return g;
    }
    BigInt q, r;
    divmod(a, b, q, r);
    BigInt x1, y1;
    BigInt g = extended_gcd(b, r, x1, y1);
    x = y1;
    y = x1 - q * y1;
    return g;
  }

  // Inverse of a modulo m (m > 1); throws if not coprime.
  static BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt x, y;
    BigInt g = extended_gcd(mod_floor(a, m), m, x, y);
    if (!g.is_one()) throw Error("DivisionByZero", "element not invertible");
    return mod_floor(x, m);
  }

  static BigInt mod_pow(BigInt base, BigInt e, const BigInt& m) {
    if (e.is_negative()) throw Error("InvalidParameters", "negative exponent");
    BigInt acc(1);
    base = mod_floor(base, m);
    while (!e.is_zero()) {
      if (!e.is_even()) acc = mod_floor(acc * base, m);
      e = e / BigInt(2);
      if (!e.is_zero()) base = mod_floor(base * base, m);
    }
    return acc;
  }

  bool fits_int64() const {
    static const BigInt kMin = BigInt::from_string("-9223372036854775808");
    static const BigInt kMax = BigInt::from_string("9223372036854775807");
    return kMin <= *this && *this <= kMax;
  }
  int64_t to_int64() const {
    if (!fits_int64()) throw Error("Overflow", "value exceeds 64-bit range");
    unsigned long long v = 0;
    for (size_t i = mag_.size(); i > 0; --i)
      v = v * kBase + mag_[i - 1];
    // Two's-complement wrap handles INT64_MIN.
    return sign_ < 0 ? static_cast<int64_t>(~v + 1) : static_cast<int64_t>(v);
  }

  std::string to_string() const {
    if (mag_.empty()) return "0";
    std::string s;
    if (sign_ < 0) s.push_back('-');
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u", mag_.back());
    s += buf;
    for (size_t i = mag_.size() - 1; i > 0; --i) {
      std::snprintf(buf, sizeof buf, "%09u", mag_[i - 1]);
      s += buf;
    }
    return s;
  }

  size_t limb_count() const { return mag_.size(); }

 private:
  int sign_ = 0;
  std::vector<uint32_t> mag_;

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }

  static int cmp_mag(const std::vector<uint32_t>& a,
                     const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i > 0; --i)
      if (a[i - 1] != b[i - 1]) return a[i - 1] < b[i - 1] ? -1 : 1;
    return 0;
  }

  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    const std::vector<uint32_t>&big = a.size() >= b.size() ? a : b,
          &small = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(big.size() + 1, 0u);
    uint32_t carry = 0;
    for (size_t i = 0; i < big.size(); ++i) {
      uint64_t s = static_cast<uint64_t>(big[i]) + carry +
                   (i < small.size() ? small[i] : 0u);
      r[i] = static_cast<uint32_t>(s % kBase);
      carry = static_cast<uint32_t>(s / kBase);
    }
    r[big.size()] = carry;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Requires |a| >= |b|.
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0u);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      int64_t s = static_cast<int64_t>(a[i]) - borrow -
                  (i < b.size() ? static_cast<int64_t>(b[i]) : 0);
      if (s < 0) {
        s += kBase;
        borrow = 1;
      } else {
        borrow = 0;
      }
      r[i] = static_cast<uint32_t>(s);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    std::vector<uint64_t> acc(a.size() + b.size(), 0u);
    for (size_t i = 0; i < a.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.size(); ++j) {
        uint64_t cur =
            acc[i + j] + carry + static_cast<uint64_t>(a[i]) * b[j];
        acc[i + j] = cur % kBase;
        carry = cur / kBase;
      }
      size_t k = i + b.size();
      while (carry) {
        uint64_t cur = acc[k] + carry;
        acc[k] = cur % kBase;
        carry = cur / kBase;
        ++k;
      }
    }
    std::vector<uint32_t> r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<uint32_t>(acc[i]);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<uint32_t> mul_scalar(const std::vector<uint32_t>& a,
                                          uint32_t s) {
    std::vector<uint32_t> r(a.size() + 1, 0u);
    uint64_t carry = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      uint64_t cur = static_cast<uint64_t>(a[i]) * s + carry;
      r[i] = static_cast<uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    r[a.size()] = static_cast<uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth algorithm D in base 10^9; requires |u| >= |v|, v nonzero.
  static void divmod_mag(const std::vector<uint32_t>& u_in,
                         const std::vector<uint32_t>& v_in,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (v_in.size() == 1) {
      uint32_t d = v_in[0];
      q.assign(u_in.size(), 0u);
      uint64_t rem = 0;
      for (size_t i = u_in.size(); i > 0; --i) {
        uint64_t cur = rem * kBase + u_in[i - 1];
        q[i - 1] = static_cast<uint32_t>(cur / d);
        rem = cur % d;
      }
      r.clear();
      if (rem) r.push_back(static_cast<uint32_t>(rem));
      return;
    }
    uint32_t d = kBase / (v_in.back() + 1);
    std::vector<uint32_t> u = mul_scalar(u_in, d);
    std::vector<uint32_t> v = mul_scalar(v_in, d);
    size_t n = v.size();
    size_t m = u.size() - n;
    u.resize(u.size() + 1, 0u);
    q.assign(m + 1, 0u);
    for (size_t j = m + 1; j > 0; --j) {
      size_t jj = j - 1;
      uint64_t top = static_cast<uint64_t>(u[jj + n]) * kBase + u[jj + n - 1];
      uint64_t qhat = top / v[n - 1];
      uint64_t rhat = top % v[n - 1];
      while (qhat >= kBase ||
             qhat * v[n - 2] > rhat * kBase + u[jj + n - 2]) {
        --qhat;
        rhat += v[n - 1];
        if (rhat >= kBase) break;
      }
      // Multiply-subtract qhat*v from u[jj..jj+n].
      int64_t borrow = 0;
      uint64_t carry = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t p = qhat * v[i] + carry;
        carry = p / kBase;
        int64_t sub = static_cast<int64_t>(u[jj + i]) -
                      static_cast<int64_t>(p % kBase) - borrow;
        if (sub < 0) {
          sub += kBase;
          borrow = 1;
        } else {
          borrow = 0;
        }
        u[jj + i] = static_cast<uint32_t>(sub);
      }
      int64_t sub = static_cast<int64_t>(u[jj + n]) -
                    static_cast<int64_t>(carry) - borrow;
      if (sub < 0) {
        // qhat was one too large: add v back once.
        sub += kBase;
        --qhat;
        uint32_t c2 = 0;
        for (size_t i = 0; i < n; ++i) {
          uint64_t s = static_cast<uint64_t>(u[jj + i]) + v[i] + c2;
          u[jj + i] = static_cast<uint32_t>(s % kBase);
          c2 = static_cast<uint32_t>(s / kBase);
        }
        sub += c2;
        if (sub >= kBase) sub -= kBase;  // final carry closes the borrow
      }
      u[jj + n] = static_cast<uint32_t>(sub);
      q[jj] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    // Remainder is u[0..n-1] / d.
    u.resize(n);
    std::vector<uint32_t> rr(u.size(), 0u);
    uint64_t rem = 0;
    for (size_t i = u.size(); i > 0; --i) {
      uint64_t cur = rem * kBase + u[i - 1];
      rr[i - 1] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    while (!rr.empty() && rr.back() == 0) rr.pop_back();
    r = std::move(rr);
  }
};

inline BigInt abs(const BigInt& a) { return a.is_negative() ? -a : a; }

}  // namespace chabtrop
