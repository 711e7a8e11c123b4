#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chabtrop/metric_graph.hpp"

namespace chabtrop {

// Fundamental cycles of a spanning tree: one cycle per non-tree edge, as a
// signed incidence vector over all edges (entries in {-1, 0, +1}).
struct CycleBasis {
  std::vector<int> parent_edge;   // per vertex, -1 at the root
  std::vector<int> parent;        // per vertex, -1 at the root
  std::vector<int> nontree;       // non-tree edge indices
  std::vector<std::vector<int64_t>> cycles;  // [cycle][edge]
  int root = 0;
};

inline CycleBasis cycle_basis(const MetricGraph& g, int root = 0) {
  CycleBasis b;
  b.root = root;
  int n = g.vertex_count(), m = g.edge_count();
  b.parent.assign(static_cast<size_t>(n), -1);
  b.parent_edge.assign(static_cast<size_t>(n), -1);
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<bool> tree_edge(static_cast<size_t>(m), false);
  std::queue<int> q;
  q.push(root);
  seen[static_cast<size_t>(root)] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e = 0; e < m; ++e) {
      if (g.is_loop(e)) continue;
      int other = -1;
      if (g.edge(e).from == v) other = g.edge(e).to;
      else if (g.edge(e).to == v) other = g.edge(e).from;
      if (other < 0 || seen[static_cast<size_t>(other)]) continue;
      seen[static_cast<size_t>(other)] = true;
      tree_edge[static_cast<size_t>(e)] = true;
      b.parent[static_cast<size_t>(other)] = v;
      b.parent_edge[static_cast<size_t>(other)] = e;
      q.push(other);
    }
  }
  for (int e = 0; e < m; ++e)
    if (!tree_edge[static_cast<size_t>(e)]) b.nontree.push_back(e);

  // Signed tree path from `from` to `to` accumulated into vec.
  auto add_tree_path = [&](int from, int to, std::vector<int64_t>& vec,
                           int64_t scale) {
    auto depth = [&](int v) {
      int d = 0;
      while (b.parent[static_cast<size_t>(v)] >= 0) {
        v = b.parent[static_cast<size_t>(v)];
        ++d;
      }
      return d;
    };
    int u = from, w = to, du = depth(from), dw = depth(to);
    while (du > dw) {
      int e = b.parent_edge[static_cast<size_t>(u)];
      // Walking u -> parent(u): with the edge's own orientation.
      vec[static_cast<size_t>(e)] +=
          (g.edge(e).from == u ? 1 : -1) * scale;
      u = b.parent[static_cast<size_t>(u)];
      --du;
    }
    while (dw > du) {
      int e = b.parent_edge[static_cast<size_t>(w)];
      vec[static_cast<size_t>(e)] -=
          (g.edge(e).from == w ? 1 : -1) * scale;
      w = b.parent[static_cast<size_t>(w)];
      --dw;
    }
    while (u != w) {
      int eu = b.parent_edge[static_cast<size_t>(u)];
      vec[static_cast<size_t>(eu)] += (g.edge(eu).from == u ? 1 : -1) * scale;
      u = b.parent[static_cast<size_t>(u)];
      int ew = b.parent_edge[static_cast<size_t>(w)];
      vec[static_cast<size_t>(ew)] -= (g.edge(ew).from == w ? 1 : -1) * scale;
      w = b.parent[static_cast<size_t>(w)];
    }
  };

  for (int e : b.nontree) {
    std::vector<int64_t> cyc(static_cast<size_t>(m), 0);
    cyc[static_cast<size_t>(e)] = 1;  // traverse e from -> to
    if (!g.is_loop(e))
      add_tree_path(g.edge(e).to, g.edge(e).from, cyc, 1);
    b.cycles.push_back(std::move(cyc));
  }
  return b;
}

// Edge-length pairing restricted to the cycle space: the Gram matrix of the
// fundamental-cycle basis. Positive definite of rank h1.
struct PeriodLattice {
  CycleBasis basis;
  std::vector<std::vector<BigRational>> gram;  // h1 x h1
  int64_t rank() const { return static_cast<int64_t>(gram.size()); }
};

inline PeriodLattice period_lattice(const MetricGraph& g, int root = 0) {
  PeriodLattice L;
  L.basis = cycle_basis(g, root);
  size_t h = L.basis.cycles.size();
  L.gram.assign(h, std::vector<BigRational>(h, BigRational(0)));
  for (size_t i = 0; i < h; ++i)
    for (size_t j = i; j < h; ++j) {
      BigRational s(0);
      for (int e = 0; e < g.edge_count(); ++e) {
        int64_t a = L.basis.cycles[i][static_cast<size_t>(e)];
        int64_t c = L.basis.cycles[j][static_cast<size_t>(e)];
        if (a != 0 && c != 0)
          s += BigRational(a * c) * g.edge(e).length;
      }
      L.gram[i][j] = s;
      L.gram[j][i] = s;
    }
  return L;
}

namespace detail {

// Signed chain of a path from x0 to x through the spanning tree, as
// traversed length per edge (sign follows the edge orientation).
inline std::vector<BigRational> path_chain(const MetricGraph& g,
                                           const CycleBasis& b,
                                           const GraphPoint& x0,
                                           const GraphPoint& x) {
  std::vector<BigRational> chain(static_cast<size_t>(g.edge_count()),
                                 BigRational(0));
  // Reduce edge points to vertex endpoints plus partial segments.
  auto land = [&](const GraphPoint& p, int64_t sign) {
    if (p.is_vertex()) return p.vertex;
    // Walk from the `from` endpoint: partial segment of length `offset`.
    chain[static_cast<size_t>(p.edge)] += BigRational(sign) * p.offset;
    return g.edge(p.edge).from;
  };
  // chain(x0 -> x) = chain(x0 -> anchor0) + tree path + (anchor -> x).
  int a1 = land(x, +1);
  int a0 = land(x0, -1);
  // Tree path a0 -> a1 via depths.
  auto depth = [&](int v) {
    int d = 0;
    while (b.parent[static_cast<size_t>(v)] >= 0) {
      v = b.parent[static_cast<size_t>(v)];
      ++d;
    }
    return d;
  };
  int u = a0, w = a1;
  int du = depth(u), dw = depth(w);
  auto step_up = [&](int v, int64_t sign) {
    int e = b.parent_edge[static_cast<size_t>(v)];
    chain[static_cast<size_t>(e)] +=
        BigRational((g.edge(e).from == v ? 1 : -1) * sign) * g.edge(e).length;
    return b.parent[static_cast<size_t>(v)];
  };
  while (du > dw) {
    u = step_up(u, +1);
    --du;
  }
  while (dw > du) {
    w = step_up(w, -1);
    --dw;
  }
  while (u != w) {
    u = step_up(u, +1);
    w = step_up(w, -1);
  }
  return chain;
}

// Edge-length pairing of a fractional chain with a basis cycle.
inline BigRational pair_chain_cycle(const MetricGraph& g,
                                    const std::vector<BigRational>& chain,
                                    const std::vector<int64_t>& cycle) {
  BigRational s(0);
  for (int e = 0; e < g.edge_count(); ++e) {
    int64_t c = cycle[static_cast<size_t>(e)];
    if (c != 0 && !chain[static_cast<size_t>(e)].is_zero())
      s += BigRational(c) * chain[static_cast<size_t>(e)];
  }
  return s;
}

}  // namespace detail

// Tropical Abel-Jacobi map: coordinates ([path(x0 -> x), gamma_i])_i, well
// defined modulo the lattice spanned by the Gram matrix columns.
inline std::vector<BigRational> abel_jacobi(const MetricGraph& g,
                                            const PeriodLattice& L,
                                            const GraphPoint& x0,
                                            const GraphPoint& x) {
  std::vector<BigRational> chain = detail::path_chain(g, L.basis, x0, x);
  std::vector<BigRational> out;
  out.reserve(L.basis.cycles.size());
  for (const auto& cyc : L.basis.cycles)
    out.push_back(detail::pair_chain_cycle(g, chain, cyc));
  return out;
}

// Exact rational linear solve (Gaussian elimination); A must be square and
// invertible.
inline std::vector<BigRational> solve_rational(
    std::vector<std::vector<BigRational>> A, std::vector<BigRational> rhs) {
  size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col].is_zero()) ++piv;
    if (piv == n) throw Error("SingularMatrix", "matrix not invertible");
    std::swap(A[piv], A[col]);
    std::swap(rhs[piv], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      BigRational f = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<BigRational> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / A[i][i];
  return x;
}

// Membership of a coordinate vector in the period lattice: v = gram * z
// with z integral.
inline bool in_period_lattice(const PeriodLattice& L,
                              const std::vector<BigRational>& v) {
  size_t h = static_cast<size_t>(L.rank());
  if (v.size() != h) throw Error("InvalidParameters", "dimension mismatch");
  if (h == 0) return true;
  std::vector<BigRational> z = solve_rational(L.gram, v);
  for (const auto& c : z)
    if (!c.is_integer()) return false;
  return true;
}

// Degree-zero divisor principality via the tropical Jacobian.
inline bool is_principal(const MetricGraph& g, const GraphDivisor& D) {
  if (D.degree() != 0)
    throw Error("NonzeroDegree", "principality needs deg D = 0");
  PeriodLattice L = period_lattice(g);
  if (L.rank() == 0) return true;  // trees: Jac = 0
  GraphPoint base = GraphPoint::at_vertex(0);
  std::vector<BigRational> acc(static_cast<size_t>(L.rank()), BigRational(0));
  for (const auto& [p, c] : D.entries()) {
    std::vector<BigRational> aj = abel_jacobi(g, L, base, p);
    for (size_t i = 0; i < acc.size(); ++i)
      acc[i] += BigRational(c) * aj[i];
  }
  return in_period_lattice(L, acc);
}

// Independent construction: the unique real PL solution F of L F = D on the
// graph subdivided at supp(D). D is principal exactly when every slope of F
// is an integer; in that case the PLFunction is returned.
inline std::optional<PLFunction> principal_function(const MetricGraph& g,
                                                    const GraphDivisor& D) {
  if (D.degree() != 0)
    throw Error("NonzeroDegree", "principality needs deg D = 0");
  // Subdivide at interior support points (largest offset first so stored
  // offsets stay valid while splitting).
  MetricGraph work = g;
  std::vector<std::pair<std::string, int64_t>> vertex_coeffs;
  std::vector<std::tuple<int, BigRational, int64_t>> edge_pts;
  for (const auto& [p, c] : D.entries()) {
    if (p.is_vertex())
      vertex_coeffs.emplace_back(g.vertex(p.vertex).id, c);
    else
      edge_pts.emplace_back(p.edge, p.offset, c);
  }
  std::sort(edge_pts.begin(), edge_pts.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  });
  // Offsets are split largest-first, so each later point of the same edge
  // lands in the surviving from-side piece ("<id>.a" after every split).
  std::map<int, std::string> piece_of;
  int synth = 0;
  for (const auto& [e, off, c] : edge_pts) {
    std::string vid = "__D" + std::to_string(synth++);
    auto it = piece_of.find(e);
    std::string pid = it == piece_of.end() ? g.edge(e).id : it->second;
    work = work.subdivide_edge(work.edge_id(pid), off, vid);
    piece_of[e] = pid + ".a";
    vertex_coeffs.emplace_back(vid, c);
  }
  int n = work.vertex_count();
  std::vector<BigRational> rhs(static_cast<size_t>(n), BigRational(0));
  for (const auto& [vid, c] : vertex_coeffs)
    rhs[static_cast<size_t>(work.vertex_id(vid))] += BigRational(c);
  // Weighted Laplacian: (L F)(v) = sum_e (F(v) - F(other)) / len.
  std::vector<std::vector<BigRational>> L(
      static_cast<size_t>(n),
      std::vector<BigRational>(static_cast<size_t>(n), BigRational(0)));
  for (int e = 0; e < work.edge_count(); ++e) {
    const auto& ed = work.edge(e);
    if (ed.from == ed.to) continue;  // loops are harmonic for any F
    BigRational w = ed.length.inverse();
    L[static_cast<size_t>(ed.from)][static_cast<size_t>(ed.from)] += w;
    L[static_cast<size_t>(ed.to)][static_cast<size_t>(ed.to)] += w;
    L[static_cast<size_t>(ed.from)][static_cast<size_t>(ed.to)] -= w;
    L[static_cast<size_t>(ed.to)][static_cast<size_t>(ed.from)] -= w;
  }
  // Pin F = 0 at vertex 0 (Laplacian kernel = constants).
  std::vector<std::vector<BigRational>> A(
      static_cast<size_t>(n - 1),
      std::vector<BigRational>(static_cast<size_t>(n - 1), BigRational(0)));
  std::vector<BigRational> b(static_cast<size_t>(n - 1), BigRational(0));
  for (int r = 1; r < n; ++r) {
    for (int c = 1; c < n; ++c)
      A[static_cast<size_t>(r - 1)][static_cast<size_t>(c - 1)] =
          L[static_cast<size_t>(r)][static_cast<size_t>(c)];
    b[static_cast<size_t>(r - 1)] = rhs[static_cast<size_t>(r)];
  }
  std::vector<BigRational> F(static_cast<size_t>(n), BigRational(0));
  if (n > 1) {
    std::vector<BigRational> sol = solve_rational(A, b);
    for (int v = 1; v < n; ++v) F[static_cast<size_t>(v)] = sol[static_cast<size_t>(v - 1)];
  }
  // Integer-slope check on the subdivided graph.
  std::vector<PLFunction::EdgeData> ed(static_cast<size_t>(work.edge_count()));
  for (int e = 0; e < work.edge_count(); ++e) {
    const auto& we = work.edge(e);
    BigRational diff = F[static_cast<size_t>(we.to)] -
                       F[static_cast<size_t>(we.from)];
    BigRational slope = diff / we.length;
    if (we.from == we.to) slope = BigRational(0);
    if (!slope.is_integer()) return std::nullopt;
    ed[static_cast<size_t>(e)].slopes = {slope.num().to_int64()};
  }
  return PLFunction(work, std::move(F), std::move(ed));
}

// Balancing at a vertex: the outgoing per-unit-length derivative vectors of
// the lifted Abel-Jacobi map sum to zero (each basis cycle has zero net
// boundary through the vertex).
inline bool balancing_check(const MetricGraph& g) {
  CycleBasis b = cycle_basis(g);
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (size_t i = 0; i < b.cycles.size(); ++i) {
      int64_t flux = 0;
      for (auto [e, from_end] : g.incident_ends(v)) {
        int64_t c = b.cycles[i][static_cast<size_t>(e)];
        // Outgoing derivative along this end: +c leaving the from end,
        // -c leaving the to end; a loop contributes both and cancels.
        flux += from_end ? c : -c;
      }
      if (flux != 0) return false;
    }
  }
  return true;
}

// Lagrange reduction of a positive definite integer binary quadratic form
// given as a Gram matrix [[A, B], [B, C]] (congruence by GL_2(Z)); the
// reduced triple is a complete invariant.
inline std::array<BigInt, 3> reduce_binary_form(BigInt A, BigInt B, BigInt C) {
  for (;;) {
    if (C < A) {
      std::swap(A, C);
      B = -B;
      continue;
    }
    BigInt twoB = B + B;
    if (twoB > A || twoB < -A) {
      // Shift x -> x - k y with k = round(B / A).
      BigInt k = BigInt::fdiv(B + BigInt::fdiv(A, BigInt(2)), A);
      C = C - (B + B) * k + A * k * k;
      B = B - A * k;
      continue;
    }
    if (twoB == -A) {  // boundary: (A, -A/2, C) ~ (A, A/2, C), C unchanged
      B = -B;
      continue;
    }
    break;
  }
  // det(-1) congruence flips the sign of B, so |B| is the GL_2(Z) invariant.
  if (B.is_negative()) B = -B;
  return {A, B, C};
}

// Unimodular (GL_2(Z)) equivalence of rank-2 rational Gram matrices: clear
// denominators by a common factor and compare Lagrange-reduced forms.
inline bool gram_rank2_equivalent(
    const std::vector<std::vector<BigRational>>& G1,
    const std::vector<std::vector<BigRational>>& G2) {
  BigInt l(1);
  for (const auto* G : {&G1, &G2})
    for (const auto& row : *G)
      for (const auto& x : row) {
        BigInt d = x.den();
        l = l / BigInt::gcd(l, d) * d;
      }
  auto to_form = [&](const std::vector<std::vector<BigRational>>& G) {
    return reduce_binary_form((G[0][0] * BigRational(l)).num(),
                              (G[0][1] * BigRational(l)).num(),
                              (G[1][1] * BigRational(l)).num());
  };
  auto a = to_form(G1), b = to_form(G2);
  return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
}

}  // namespace chabtrop
