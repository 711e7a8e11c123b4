#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "chabtrop/rational.hpp"

namespace chabtrop {

// Finite connected multigraph without loops, stored as a symmetric
// multiplicity matrix. The divisor theory below (reduced divisors, rank,
// Riemann-Roch) lives on this discrete model.
class FiniteGraph {
 public:
  FiniteGraph(std::vector<std::string> names,
              std::vector<std::vector<int>> mult)
      : names_(std::move(names)), mult_(std::move(mult)) {
    int n = static_cast<int>(names_.size());
    if (n == 0) throw Error("InvalidGraph", "graph needs at least one vertex");
    if (mult_.size() != static_cast<size_t>(n))
      throw Error("InvalidGraph", "multiplicity matrix shape mismatch");
    for (int i = 0; i < n; ++i) {
      if (mult_[static_cast<size_t>(i)].size() != static_cast<size_t>(n))
        throw Error("InvalidGraph", "multiplicity matrix shape mismatch");
      if (mult_[static_cast<size_t>(i)][static_cast<size_t>(i)] != 0)
        throw Error("InvalidGraph", "loops are not allowed");
      for (int j = 0; j < n; ++j) {
        if (mult_[static_cast<size_t>(i)][static_cast<size_t>(j)] < 0)
          throw Error("InvalidGraph", "negative multiplicity");
        if (mult_[static_cast<size_t>(i)][static_cast<size_t>(j)] !=
            mult_[static_cast<size_t>(j)][static_cast<size_t>(i)])
          throw Error("InvalidGraph", "multiplicity matrix not symmetric");
      }
    }
    if (!connected()) throw Error("InvalidGraph", "graph is not connected");
  }

  static FiniteGraph from_edge_list(
      std::vector<std::string> names,
      const std::vector<std::pair<int, int>>& edges) {
    int n = static_cast<int>(names.size());
    std::vector<std::vector<int>> mult(static_cast<size_t>(n),
                                       std::vector<int>(static_cast<size_t>(n), 0));
    for (auto [u, v] : edges) {
      if (u == v) throw Error("InvalidGraph", "loops are not allowed");
      ++mult[static_cast<size_t>(u)][static_cast<size_t>(v)];
      ++mult[static_cast<size_t>(v)][static_cast<size_t>(u)];
    }
    return FiniteGraph(std::move(names), std::move(mult));
  }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_[static_cast<size_t>(v)]; }
  int vertex_id(const std::string& name) const {
    for (int i = 0; i < vertex_count(); ++i)
      if (names_[static_cast<size_t>(i)] == name) return i;
    throw Error("InvalidGraph", "unknown vertex " + name);
  }
  int multiplicity(int u, int v) const {
    return mult_[static_cast<size_t>(u)][static_cast<size_t>(v)];
  }
  int degree(int v) const {
    int d = 0;
    for (int u = 0; u < vertex_count(); ++u) d += multiplicity(v, u);
    return d;
  }
  int edge_count() const {
    int e = 0;
    for (int u = 0; u < vertex_count(); ++u)
      for (int v = u + 1; v < vertex_count(); ++v) e += multiplicity(u, v);
    return e;
  }
  int64_t genus() const { return edge_count() - vertex_count() + 1; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> mult_;

  bool connected() const {
    int n = vertex_count();
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int u = 0; u < n; ++u)
        if (multiplicity(v, u) > 0 && !seen[static_cast<size_t>(u)]) {
          seen[static_cast<size_t>(u)] = true;
          q.push(u);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
};

using IntDivisor = std::vector<int64_t>;

inline int64_t degree(const IntDivisor& d) {
  return std::accumulate(d.begin(), d.end(), static_cast<int64_t>(0));
}

inline IntDivisor canonical_divisor(const FiniteGraph& g) {
  IntDivisor k(static_cast<size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v)
    k[static_cast<size_t>(v)] = g.degree(v) - 2;
  return k;
}

namespace detail {

// Dhar's burning algorithm: starting the fire at q, a vertex burns once the
// number of edges from burnt neighbours exceeds its chips. Returns the
// unburnt set; firing it keeps the divisor effective away from q.
inline std::vector<bool> dhar_unburnt(const FiniteGraph& g, const IntDivisor& d,
                                      int q) {
  int n = g.vertex_count();
  std::vector<bool> burnt(static_cast<size_t>(n), false);
  burnt[static_cast<size_t>(q)] = true;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int v = 0; v < n; ++v) {
      if (burnt[static_cast<size_t>(v)]) continue;
      int64_t heat = 0;
      for (int u = 0; u < n; ++u)
        if (burnt[static_cast<size_t>(u)]) heat += g.multiplicity(v, u);
      if (heat > d[static_cast<size_t>(v)]) {
        burnt[static_cast<size_t>(v)] = true;
        progress = true;
      }
    }
  }
  for (auto&& b : burnt) b = !b;
  return burnt;  // true = unburnt
}

inline void fire_set(const FiniteGraph& g, IntDivisor& d,
                     const std::vector<bool>& set) {
  int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    if (!set[static_cast<size_t>(v)]) continue;
    for (int u = 0; u < n; ++u) {
      if (set[static_cast<size_t>(u)]) continue;
      int m = g.multiplicity(v, u);
      d[static_cast<size_t>(v)] -= m;
      d[static_cast<size_t>(u)] += m;
    }
  }
}

}  // namespace detail

// The unique q-reduced representative of the class of d: effective away
// from q, and no nonempty subset avoiding q can fire without going
// negative. Phase 1 clears debt outward-in by unfiring distance shells;
// phase 2 is repeated Dhar burning.
inline IntDivisor q_reduce(const FiniteGraph& g, IntDivisor d, int q) {
  int n = g.vertex_count();
  if (q < 0 || q >= n) throw Error("InvalidParameters", "bad base vertex");
  // BFS distances from q.
  std::vector<int> dist(static_cast<size_t>(n), -1);
  std::queue<int> bfs;
  bfs.push(q);
  dist[static_cast<size_t>(q)] = 0;
  int max_dist = 0;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u = 0; u < n; ++u)
      if (g.multiplicity(v, u) > 0 && dist[static_cast<size_t>(u)] < 0) {
        dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
        max_dist = std::max(max_dist, dist[static_cast<size_t>(u)]);
        bfs.push(u);
      }
  }
  // Phase 1: for k from the far shell inward, unfire T_k = {dist >= k}
  // until the shell at distance k holds no debt. Unfiring T_k only raises
  // chips inside T_k (boundary vertices strictly) and the shell k boundary
  // vertices all gain, so this terminates.
  for (int k = max_dist; k >= 1; --k) {
    std::vector<bool> tk(static_cast<size_t>(n), false);
    for (int v = 0; v < n; ++v)
      tk[static_cast<size_t>(v)] = dist[static_cast<size_t>(v)] >= k;
    for (;;) {
      bool debt = false;
      for (int v = 0; v < n; ++v)
        if (dist[static_cast<size_t>(v)] == k && d[static_cast<size_t>(v)] < 0)
          debt = true;
      if (!debt) break;
      // Unfire = fire the complement.
      std::vector<bool> comp = tk;
      for (auto&& b : comp) b = !b;
      detail::fire_set(g, d, comp);
    }
  }
  // Phase 2: fire unburnt sets until the burn covers everything.
  for (;;) {
    std::vector<bool> s = detail::dhar_unburnt(g, d, q);
    if (std::none_of(s.begin(), s.end(), [](bool b) { return b; })) break;
    detail::fire_set(g, d, s);
  }
  return d;
}

// Linear equivalence oracle, independent of the burning machinery: d1 - d2
// must be an integer combination of Laplacian rows, decided by an exact
// rational solve of the reduced system plus an integrality check.
inline bool linearly_equivalent(const FiniteGraph& g, const IntDivisor& d1,
                                const IntDivisor& d2) {
  int n = g.vertex_count();
  if (degree(d1) != degree(d2)) return false;
  if (n == 1) return true;
  // Solve L' x = diff' where L' drops the last row/column.
  std::vector<std::vector<BigRational>> A(
      static_cast<size_t>(n - 1),
      std::vector<BigRational>(static_cast<size_t>(n - 1), BigRational(0)));
  std::vector<BigRational> b(static_cast<size_t>(n - 1), BigRational(0));
  for (int i = 0; i < n - 1; ++i) {
    b[static_cast<size_t>(i)] =
        BigRational(d1[static_cast<size_t>(i)] - d2[static_cast<size_t>(i)]);
    for (int j = 0; j < n - 1; ++j) {
      int64_t lij = i == j ? g.degree(i) : -g.multiplicity(i, j);
      A[static_cast<size_t>(i)][static_cast<size_t>(j)] = BigRational(lij);
    }
  }
  // Gaussian elimination (reduced Laplacian of a connected graph is
  // invertible).
  size_t m = A.size();
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    while (piv < m && A[piv][col].is_zero()) ++piv;
    if (piv == m) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = 0; r < m; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      BigRational f = A[r][col] / A[col][col];
      for (size_t c = col; c < m; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (size_t i = 0; i < m; ++i)
    if (!(b[i] / A[i][i]).is_integer()) return false;
  return true;
}

// Baker-Norine rank with memoization per graph. r(D) >= k iff D - E is
// equivalent to an effective divisor for every effective E of degree k;
// peeling E one chip at a time gives the recursion
//   can(D, k) = for all v: can(D - (v), k - 1),
// memoized on the q-reduced representative, which also answers k = 0.
class RankEngine {
 public:
  explicit RankEngine(const FiniteGraph& g) : g_(g) {}

  int64_t rank(const IntDivisor& d) {
    if (degree(d) < 0) return -1;
    int64_t k = 0;
    while (can_cover(q_reduce(g_, d, 0), k)) ++k;
    return k - 1;
  }

  const FiniteGraph& graph() const { return g_; }

 private:
  const FiniteGraph& g_;
  std::map<std::pair<IntDivisor, int64_t>, bool> memo_;

  // d must be 0-reduced on entry.
  bool can_cover(const IntDivisor& d, int64_t k) {
    if (degree(d) < k) return false;
    if (k == 0) return d[0] >= 0;  // reduced: effective iff base is clear
    auto key = std::make_pair(d, k);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = true;
    for (int v = 0; v < g_.vertex_count() && ok; ++v) {
      IntDivisor next = d;
      --next[static_cast<size_t>(v)];
      ok = can_cover(q_reduce(g_, next, 0), k - 1);
    }
    memo_.emplace(std::move(key), ok);
    return ok;
  }
};

inline int64_t bn_rank(const FiniteGraph& g, const IntDivisor& d) {
  RankEngine engine(g);
  return engine.rank(d);
}

inline bool check_riemann_roch(const FiniteGraph& g, const IntDivisor& d,
                               RankEngine* engine = nullptr) {
  RankEngine local(g);
  RankEngine& e = engine ? *engine : local;
  IntDivisor k = canonical_divisor(g);
  IntDivisor kd = k;
  for (size_t i = 0; i < kd.size(); ++i) kd[i] -= d[i];
  int64_t lhs = e.rank(d) - e.rank(kd);
  return lhs == degree(d) - g.genus() + 1;
}

// Clifford inequality for special divisors: r(D) <= deg(D)/2 when both D
// and K - D have nonnegative rank.
inline bool check_clifford(const FiniteGraph& g, const IntDivisor& d,
                           RankEngine* engine = nullptr) {
  RankEngine local(g);
  RankEngine& e = engine ? *engine : local;
  IntDivisor k = canonical_divisor(g);
  IntDivisor kd = k;
  for (size_t i = 0; i < kd.size(); ++i) kd[i] -= d[i];
  int64_t r = e.rank(d);
  if (r < 0 || e.rank(kd) < 0)
    throw Error("PreconditionNotMet",
                "Clifford needs r(D) >= 0 and r(K-D) >= 0");
  return 2 * r <= degree(d);
}

}  // namespace chabtrop
