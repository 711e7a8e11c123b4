#pragma once

#include <vector>

#include "chabtrop/hyperelliptic.hpp"
#include "chabtrop/metric_graph.hpp"

namespace chabtrop {
namespace fixtures {

inline std::vector<BigInt> poly_mul(const std::vector<BigInt>& a,
                                    const std::vector<BigInt>& b) {
  std::vector<BigInt> out(a.size() + b.size() - 1, BigInt(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline std::vector<BigInt> linear_factor(long long root) {
  return {BigInt(-root), BigInt(1)};  // x - root
}

// y^2 = x(x-1)(x-2)(x-5)(x-6): genus 2, Jacobian rank 1.
inline HyperellipticCurve gordon_grant() {
  std::vector<BigInt> f{BigInt(0), BigInt(1)};
  for (long long r : {1, 2, 5, 6}) f = poly_mul(f, linear_factor(r));
  return HyperellipticCurve(BigInt(1), f);
}

// y^2 = x^6 + 8x^5 + 22x^4 + 22x^3 + 5x^2 + 6x + 1: genus 2.
inline HyperellipticCurve mccallum_poonen() {
  return HyperellipticCurve(
      BigInt(1), {BigInt(1), BigInt(6), BigInt(5), BigInt(22), BigInt(22),
                  BigInt(8), BigInt(1)});
}

// Genus-3 rank-1 curve y^2 = -2*11*19*173 (x-50)(x-9)(x-3)(x+13)
// (x^3+2x^2+3x+4). The constant sits inside f so that the known rational point
// (25, 20247920) satisfies the equation as written here.
inline HyperellipticCurve krzb_genus3() {
  std::vector<BigInt> f = linear_factor(50);
  for (long long r : {9, 3, -13}) f = poly_mul(f, linear_factor(r));
  f = poly_mul(f, {BigInt(4), BigInt(3), BigInt(2), BigInt(1)});
  BigInt scale = BigInt(-2) * BigInt(11) * BigInt(19) * BigInt(173);
  for (auto& a : f) a *= scale;
  return HyperellipticCurve(BigInt(1), f);
}

inline MetricGraph theta_graph(const BigRational& a, const BigRational& b,
                               const BigRational& c) {
  return MetricGraph({{"v1", 0}, {"v2", 0}},
                     {{"e1", 0, 1, a}, {"e2", 0, 1, b}, {"e3", 0, 1, c}});
}

}  // namespace fixtures
}  // namespace chabtrop
