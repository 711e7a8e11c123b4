#pragma once

#include <cstdint>
#include <vector>

#include "chabtrop/rational.hpp"

namespace chabtrop {

// Dense integer polynomial helpers (ascending coefficients).
namespace intpoly {

inline int64_t degree(const std::vector<BigInt>& f) {
  for (size_t i = f.size(); i > 0; --i)
    if (!f[i - 1].is_zero()) return static_cast<int64_t>(i - 1);
  return -1;
}

inline BigInt eval(const std::vector<BigInt>& f, const BigInt& x) {
  BigInt acc(0);
  for (size_t i = f.size(); i > 0; --i) acc = acc * x + f[i - 1];
  return acc;
}

inline BigRational eval(const std::vector<BigInt>& f, const BigRational& x) {
  BigRational acc(0);
  for (size_t i = f.size(); i > 0; --i) acc = acc * x + BigRational(f[i - 1]);
  return acc;
}

inline std::vector<BigInt> derivative(const std::vector<BigInt>& f) {
  std::vector<BigInt> d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * BigInt(i));
  if (d.empty()) d.push_back(BigInt(0));
  return d;
}

// Composition f(a + c*t) by Horner in the shifted variable; exact integers.
inline std::vector<BigInt> compose_affine(const std::vector<BigInt>& f,
                                          const BigInt& a, const BigInt& c) {
  std::vector<BigInt> acc{BigInt(0)};
  for (size_t i = f.size(); i > 0; --i) {
    // acc = acc * (a + c t) + f[i-1]
    std::vector<BigInt> next(acc.size() + 1, BigInt(0));
    for (size_t j = 0; j < acc.size(); ++j) {
      next[j] += acc[j] * a;
      next[j + 1] += acc[j] * c;
    }
    next[0] += f[i - 1];
    while (next.size() > 1 && next.back().is_zero()) next.pop_back();
    acc = std::move(next);
  }
  return acc;
}

// Resultant of f and g via fraction-free Gaussian elimination (Bareiss) of
// the Sylvester matrix. Exact; used for discriminant-style squarefreeness
// and good-reduction tests.
inline BigInt resultant(const std::vector<BigInt>& f,
                        const std::vector<BigInt>& g) {
  int64_t m = degree(f), n = degree(g);
  if (m < 0 || n < 0) return BigInt(0);
  if (m == 0) return BigInt::pow(f[0], static_cast<uint64_t>(n));
  if (n == 0) return BigInt::pow(g[0], static_cast<uint64_t>(m));
  size_t size = static_cast<size_t>(m + n);
  std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, BigInt(0)));
  for (int64_t row = 0; row < n; ++row)
    for (int64_t i = 0; i <= m; ++i)
      s[static_cast<size_t>(row)][static_cast<size_t>(row + i)] =
          f[static_cast<size_t>(m - i)];
  for (int64_t row = 0; row < m; ++row)
    for (int64_t i = 0; i <= n; ++i)
      s[static_cast<size_t>(n + row)][static_cast<size_t>(row + i)] =
          g[static_cast<size_t>(n - i)];
  // Bareiss: determinant of an integer matrix without fractions.
  BigInt prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < size; ++k) {
    if (s[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < size && s[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == size) return BigInt(0);
      std::swap(s[k], s[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < size; ++i)
      for (size_t j = k + 1; j < size; ++j)
        s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
    prev = s[k][k];
  }
  BigInt det = s[size - 1][size - 1];
  return sign < 0 ? -det : det;
}

}  // namespace intpoly
}  // namespace chabtrop
