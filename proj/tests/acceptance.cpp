// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion prints the measurements that justify the
// verdict; failures carry the counterexamples.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chabtrop/bounds.hpp"
#include "chabtrop/chipfiring.hpp"
#include "chabtrop/fixtures.hpp"
#include "chabtrop/hyperelliptic.hpp"
#include "chabtrop/trop_jacobian.hpp"

using namespace chabtrop;

namespace {

std::mt19937_64 rng(20260808);
int64_t rand_i64(int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

int failures = 0;

void criterion(int number, const std::string& name, double limit_seconds,
               const std::function<bool(std::string&)>& body) {
  std::string note;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    note = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  if (ok && secs > limit_seconds) {
    ok = false;
    note += " [exceeded " + std::to_string(limit_seconds) + "s budget]";
  }
  std::printf("%s criterion %2d: %s (%.2fs, limit %gs)%s%s\n",
              ok ? "PASS" : "FAIL", number, name.c_str(), secs, limit_seconds,
              note.empty() ? "" : " -- ", note.c_str());
  if (!ok) ++failures;
}

// ---------------------------------------------------------------------------

bool criterion1_gordon_grant(std::string& note) {
  HyperellipticCurve gg = fixtures::gordon_grant();
  bool ok = true;
  ok &= good_reduction(gg, 7);
  int64_t n = count_points_Fp(gg, 7);
  ok &= (n == 8);
  ColemanBound cb = coleman_bound_for_curve(gg, 7, 1);
  ok &= (cb.bound == 10);
  std::vector<std::pair<BigRational, BigRational>> pts{
      {BigRational(0), BigRational(0)},   {BigRational(1), BigRational(0)},
      {BigRational(2), BigRational(0)},   {BigRational(5), BigRational(0)},
      {BigRational(6), BigRational(0)},   {BigRational(3), BigRational(6)},
      {BigRational(3), BigRational(-6)},  {BigRational(10), BigRational(120)},
      {BigRational(10), BigRational(-120)}};
  for (const auto& [x, y] : pts) ok &= is_rational_point(gg, x, y);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      ok &= !(pts[i].first == pts[j].first && pts[i].second == pts[j].second);
  // Tenth point: infinity, rational since deg f = 5 is odd.
  ok &= (gg.degree() % 2 == 1);
  std::ostringstream os;
  os << "#X(F_7)=" << n << ", bound=" << cb.bound << ", 9 affine + infinity";
  note = os.str();
  return ok;
}

bool criterion2_mccallum_poonen(std::string& note) {
  HyperellipticCurve mp = fixtures::mccallum_poonen();
  bool ok = good_reduction(mp, 3);
  int64_t n = count_points_Fp(mp, 3);
  ok &= (n == 4);
  for (const auto& [x, y] : std::vector<std::pair<int64_t, int64_t>>{
           {0, 1}, {0, -1}, {-3, 1}, {-3, -1}})
    ok &= is_rational_point(mp, BigRational(x), BigRational(y));
  // infinity+ and infinity-: even degree with square leading ratio.
  ok &= (mp.degree() % 2 == 0);
  ok &= (mp.leading_coeff() == BigInt(1) && mp.c() == BigInt(1));
  std::ostringstream os;
  os << "#X(F_3)=" << n << ", 4 affine + 2 at infinity";
  note = os.str();
  return ok;
}

bool criterion3_krzb(std::string& note) {
  HyperellipticCurve kz = fixtures::krzb_genus3();
  bool points_ok = true;
  points_ok &= is_rational_point(kz, BigRational(50), BigRational(0));
  points_ok &= is_rational_point(kz, BigRational(9), BigRational(0));
  points_ok &= is_rational_point(kz, BigRational(3), BigRational(0));
  points_ok &= is_rational_point(kz, BigRational(-13), BigRational(0));
  points_ok &=
      is_rational_point(kz, BigRational(25), BigRational(20247920));
  points_ok &=
      is_rational_point(kz, BigRational(25), BigRational(-20247920));
  points_ok &= (kz.degree() % 2 == 1);  // seventh point: infinity
  bool genus_ok = (kz.genus() == 3);
  bool good5 = good_reduction(kz, 5);  // required true by the criterion
  std::ostringstream os;
  os << "points " << (points_ok ? "ok" : "FAIL") << ", genus "
     << (genus_ok ? "ok" : "FAIL") << ", good_reduction(5)="
     << (good5 ? "true" : "false");
  if (!good5)
    os << " [unattainable: f = lc*x(x-1)^3(x-2)(x-3)(x-4) mod 5, so "
          "disc(f) = 0 mod 5; see decisions ledger]";
  note = os.str();
  return points_ok && genus_ok && good5;
}

bool criterion4_uniform_identity(std::string& note) {
  for (int64_t g = 3; g <= 50; ++g) {
    BoundRequest gen;
    gen.kind = "krzb_general";
    gen.params.emplace("g", BigRational(g));
    gen.params.emplace("p", BigRational(3));
    BoundRequest p3;
    p3.kind = "krzb_p3";
    p3.params.emplace("g", BigRational(g));
    BoundResult a = evaluate_bound(gen), b = evaluate_bound(p3);
    if (!a.value || !b.value || !(*a.value == *b.value)) {
      note = "mismatch at g = " + std::to_string(g);
      return false;
    }
    BigInt expect = BigInt(84) * BigInt(g) * BigInt(g) -
                    BigInt(98) * BigInt(g) + BigInt(28);
    if (!(*b.value == expect)) {
      note = "polynomial mismatch at g = " + std::to_string(g);
      return false;
    }
  }
  note = "krzb_general(p=3, g) = 84g^2 - 98g + 28 for g in [3, 50]";
  return true;
}

bool criterion5_np_suite(std::string& note) {
  std::vector<int64_t> primes;
  for (int64_t p = 2; p <= 97; ++p)
    if (is_small_prime(p)) primes.push_back(p);
  std::vector<BigRational> rates{BigRational(1),
                                 BigRational{BigInt(1), BigInt(2)},
                                 BigRational(2)};
  int identity_fails = 0;
  std::string first_fail;
  for (int64_t p : primes)
    for (int64_t N0 = 0; N0 <= 50; ++N0) {
      if (p < N0 + 2) continue;
      for (const auto& r : rates) {
        if (!(compute_Np(p, r, N0) == BigInt(N0 + 1))) {
          if (identity_fails == 0) {
            std::ostringstream os;
            os << "N_" << p << "(" << r.to_string() << ", " << N0
               << ") = " << compute_Np(p, r, N0).to_string() << " != "
               << N0 + 1;
            first_fail = os.str();
          }
          ++identity_fails;
        }
      }
    }
  bool cap_ok = true;
  for (int64_t p : {3, 5, 7})
    for (int64_t N0 = 1; N0 <= 500; ++N0)
      cap_ok &= (compute_Np(p, BigRational(1), N0) <= BigInt(2 * N0));
  bool mono_ok = true;
  std::vector<int64_t> mono_primes{3, 5, 7, 11};
  for (size_t pi = 0; pi < mono_primes.size(); ++pi)
    for (int64_t N0 = 0; N0 <= 20; ++N0)
      for (int64_t k = 1; k <= 20; ++k) {
        BigRational r{BigInt(1), BigInt(k)};
        BigInt cur = compute_Np(mono_primes[pi], r, N0);
        if (pi > 0) mono_ok &= (cur <= compute_Np(mono_primes[pi - 1], r, N0));
        if (k > 1)
          mono_ok &= (compute_Np(mono_primes[pi],
                                 BigRational{BigInt(1), BigInt(k - 1)}, N0) <=
                      cur);
        if (N0 > 0) mono_ok &= (compute_Np(mono_primes[pi], r, N0 - 1) <= cur);
      }
  std::ostringstream os;
  os << "identity fails on " << identity_fails
     << " grid points (all with r = 1/2, p = N0 + 2; e.g. " << first_fail
     << "; provable counterexamples, see decisions ledger), cap "
     << (cap_ok ? "ok" : "FAIL") << ", monotonicity "
     << (mono_ok ? "ok" : "FAIL");
  note = os.str();
  return identity_fails == 0 && cap_ok && mono_ok;
}

bool criterion6_geometric_torsion(std::string& note) {
  // gsp_order gated behind brute-force enumeration.
  for (auto [g, q] : std::vector<std::pair<int64_t, int64_t>>{
           {1, 2}, {1, 3}, {2, 2}, {2, 3}})
    if (!(enumerate_gsp_order(g, q) == gsp_order(g, q))) {
      note = "gsp enumeration mismatch at (" + std::to_string(g) + "," +
             std::to_string(q) + ")";
      return false;
    }
  std::ostringstream os;
  os << "gsp validated at (1,2),(1,3),(2,2),(2,3);";
  for (int64_t g : {4, 5, 6})
    for (int64_t p : {3, 11, 13}) {
      auto t0 = std::chrono::steady_clock::now();
      BoundRequest req;
      req.kind = "geometric_torsion";
      req.params.emplace("g", BigRational(g));
      req.params.emplace("p", BigRational(p));
      BoundResult r = evaluate_bound(req);
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      if (!r.value || secs > 10.0) {
        note = "geometric_torsion(" + std::to_string(g) + "," +
               std::to_string(p) + ") failed or exceeded 10s";
        return false;
      }
      if (g == 4 && p == 3)
        os << " value(4,3) has " << r.value->to_string().size() << " digits;";
    }
  note = os.str() + " all 9 cases finite";
  return true;
}

bool criterion7_slope_formula(std::string& note) {
  // Fixed case f = p + t.
  MetricGraph seg0 = MetricGraph::single_segment(BigRational(2));
  PLFunction fc = pl_from_coefficient_lines(
      seg0, {{BigRational(1), 0}, {BigRational(0), 1}});
  PLFunction fr = pl_from_root_valuations(seg0, {{BigRational(1), 1}});
  if (!(fc == fr)) {
    note = "fixed case p + t mismatch";
    return false;
  }
  if (divisor_of(seg0, fr).coeff(GraphPoint::on_edge(0, BigRational(1))) != 1) {
    note = "fixed case divisor mismatch";
    return false;
  }
  int done = 0;
  for (int iter = 0; iter < 400 && done < 100; ++iter) {
    int64_t p = std::vector<int64_t>{3, 5, 7}[rand_i64(0, 2)];
    int nroots = static_cast<int>(rand_i64(1, 4));
    std::vector<BigRational> roots;
    std::vector<int64_t> mults;
    std::vector<std::pair<BigRational, int64_t>> root_vals;
    for (int i = 0; i < nroots; ++i) {
      int64_t v = rand_i64(0, 3);
      int64_t u = rand_i64(1, 9);
      while (u % p == 0) ++u;
      BigRational r = BigRational(u) * BigRational(BigInt::pow(BigInt(p), v));
      if (rand_i64(0, 1)) r = -r;
      bool dup = false;
      for (const auto& x : roots) dup |= (x == r);
      if (dup) continue;
      roots.push_back(r);
      mults.push_back(rand_i64(1, 2));
      root_vals.emplace_back(BigRational(v), mults.back());
    }
    if (roots.empty()) continue;
    std::vector<BigRational> coeffs{BigRational(1)};
    for (size_t i = 0; i < roots.size(); ++i)
      for (int64_t k = 0; k < mults[i]; ++k) {
        std::vector<BigRational> next(coeffs.size() + 1, BigRational(0));
        for (size_t j = 0; j < coeffs.size(); ++j) {
          next[j + 1] += coeffs[j];
          next[j] -= coeffs[j] * roots[i];
        }
        coeffs = std::move(next);
      }
    MetricGraph seg = MetricGraph::single_segment(BigRational(5));
    std::vector<std::pair<BigRational, int64_t>> lines;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i].is_zero()) continue;
      BigInt num = coeffs[i].num(), den = coeffs[i].den();
      int64_t v = 0;
      while (BigInt::mod_floor(num, BigInt(p)).is_zero()) {
        num = num / BigInt(p);
        ++v;
      }
      while (BigInt::mod_floor(den, BigInt(p)).is_zero()) {
        den = den / BigInt(p);
        --v;
      }
      lines.emplace_back(BigRational(v), static_cast<int64_t>(i));
    }
    PLFunction a = pl_from_coefficient_lines(seg, lines);
    PLFunction b = pl_from_root_valuations(seg, root_vals);
    if (!(a == b)) {
      note = "envelope mismatch at iteration " + std::to_string(iter);
      return false;
    }
    GraphDivisor div = divisor_of(seg, b);
    for (const auto& [v, m] : root_vals) {
      if (!(BigRational(0) < v) || !(v < BigRational(5))) continue;
      int64_t expect = 0;
      for (const auto& [v2, m2] : root_vals)
        if (v2 == v) expect += m2;
      if (div.coeff(GraphPoint::on_edge(0, v)) != expect) {
        note = "pushforward mismatch at iteration " + std::to_string(iter);
        return false;
      }
    }
    ++done;
  }
  note = std::to_string(done) + " random factored polynomials + fixed case";
  return done >= 100;
}

// Connected multigraph catalog (loops allowed when with_loops).
struct CatalogGraph {
  std::vector<std::pair<int, int>> edges;
  int n;
};

std::vector<CatalogGraph> multigraph_catalog(int max_v, int max_e,
                                             bool with_loops) {
  std::vector<CatalogGraph> out;
  for (int n = 1; n <= max_v; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (i == j && !with_loops) continue;
        slots.emplace_back(i, j);
      }
    }
    std::vector<int> mult(slots.size(), 0);
    auto connected = [&] {
      std::vector<int> parent(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
      std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x)
          x = parent[static_cast<size_t>(x)] =
              parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
      };
      for (size_t s = 0; s < slots.size(); ++s)
        if (mult[s] > 0)
          parent[static_cast<size_t>(find(slots[s].first))] =
              find(slots[s].second);
      int root = find(0);
      for (int i = 1; i < n; ++i)
        if (find(i) != root) return false;
      return true;
    };
    std::function<void(size_t, int)> rec = [&](size_t idx, int remaining) {
      if (idx == slots.size()) {
        if (!connected()) return;
        CatalogGraph g;
        g.n = n;
        for (size_t s = 0; s < slots.size(); ++s)
          for (int c = 0; c < mult[s]; ++c) g.edges.push_back(slots[s]);
        out.push_back(std::move(g));
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        mult[idx] = c;
        rec(idx + 1, remaining - c);
      }
      mult[idx] = 0;
    };
    rec(0, max_e);
  }
  return out;
}

MetricGraph random_metric_graph(int max_v, int max_extra, bool weights) {
  int n = static_cast<int>(rand_i64(1, max_v));
  std::vector<MetricGraph::Vertex> vs;
  for (int i = 0; i < n; ++i)
    vs.push_back({"v" + std::to_string(i), weights ? rand_i64(0, 2) : 0});
  std::vector<MetricGraph::Edge> es;
  int id = 0;
  auto len = [&] {
    return BigRational{BigInt(rand_i64(1, 5)), BigInt(rand_i64(1, 3))};
  };
  for (int i = 1; i < n; ++i)
    es.push_back({"e" + std::to_string(id++),
                  static_cast<int>(rand_i64(0, i - 1)), i, len()});
  int extra = static_cast<int>(rand_i64(1, max_extra));
  for (int k = 0; k < extra; ++k)
    es.push_back({"e" + std::to_string(id++),
                  static_cast<int>(rand_i64(0, n - 1)),
                  static_cast<int>(rand_i64(0, n - 1)), len()});
  if (es.empty()) es.push_back({"loop", 0, 0, len()});
  return MetricGraph(std::move(vs), std::move(es));
}

bool criterion8_tropical_canonical(std::string& note) {
  // deg K = 2g - 2 on 1000 random weighted graphs.
  for (int iter = 0; iter < 1000; ++iter) {
    MetricGraph g = random_metric_graph(4, 4, true);
    if (canonical_divisor(g).degree() != 2 * g.genus() - 2) {
      note = "deg K mismatch";
      return false;
    }
  }
  // Exhaustive slope-bound check: for every connected multigraph with <= 4
  // vertices and <= 6 edges (unit lengths), enumerate every section of the
  // tropical canonical bundle whose divisor is supported on vertices and
  // edge midpoints: D = E' - K with E' effective of degree 2g-2. The
  // section is the Laplacian solve of D on the midpoint subdivision;
  // whenever its slopes are integers, the canonical-section slope bound
  // |slope| <= 2g - 1 must hold. Two-vertex graphs are additionally swept
  // with small positive vertex weights.
  auto catalog = multigraph_catalog(4, 6, true);
  int64_t graphs = 0, sections = 0, max_seen = 0, api_checks = 0;
  std::string error;
  auto sweep = [&](const CatalogGraph& cg, const std::vector<int64_t>& wts) {
    int64_t wsum = 0;
    for (int64_t w : wts) wsum += w;
    int64_t genus = wsum + static_cast<int64_t>(cg.edges.size()) - cg.n + 1;
    if (genus < 1) return true;
    ++graphs;
    int V = cg.n, E = static_cast<int>(cg.edges.size());
    int W = V + E;  // subdivided vertex count: one midpoint per edge
    // Subdivided graph: edge k runs (u_k, V+k) and (V+k, w_k), length 1/2,
    // i.e. conductance 2. Reduced weighted Laplacian over vertices 1..W-1.
    std::vector<std::vector<BigRational>> L(
        static_cast<size_t>(W),
        std::vector<BigRational>(static_cast<size_t>(W), BigRational(0)));
    auto add_edge = [&](int a, int b) {
      L[static_cast<size_t>(a)][static_cast<size_t>(a)] += BigRational(2);
      L[static_cast<size_t>(b)][static_cast<size_t>(b)] += BigRational(2);
      L[static_cast<size_t>(a)][static_cast<size_t>(b)] -= BigRational(2);
      L[static_cast<size_t>(b)][static_cast<size_t>(a)] -= BigRational(2);
    };
    for (int k = 0; k < E; ++k) {
      add_edge(cg.edges[static_cast<size_t>(k)].first, V + k);
      add_edge(V + k, cg.edges[static_cast<size_t>(k)].second);
    }
    // Invert the reduced Laplacian once (exact rationals).
    int m = W - 1;
    std::vector<std::vector<BigRational>> A(
        static_cast<size_t>(m),
        std::vector<BigRational>(static_cast<size_t>(2 * m), BigRational(0)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j)
        A[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            L[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)];
      A[static_cast<size_t>(i)][static_cast<size_t>(m + i)] = BigRational(1);
    }
    for (int col = 0; col < m; ++col) {
      int piv = col;
      while (A[static_cast<size_t>(piv)][static_cast<size_t>(col)].is_zero())
        ++piv;
      std::swap(A[static_cast<size_t>(piv)], A[static_cast<size_t>(col)]);
      BigRational d = A[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int j = col; j < 2 * m; ++j)
        A[static_cast<size_t>(col)][static_cast<size_t>(j)] /= d;
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        BigRational f = A[static_cast<size_t>(r)][static_cast<size_t>(col)];
        if (f.is_zero()) continue;
        for (int j = col; j < 2 * m; ++j)
          A[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
              f * A[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
    // Common denominator so the solve becomes an int64 matrix-vector product.
    BigInt det(1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const BigInt& dn = A[static_cast<size_t>(i)]
                            [static_cast<size_t>(m + j)].den();
        det = det / BigInt::gcd(det, dn) * dn;
      }
    std::vector<std::vector<int64_t>> Minv(
        static_cast<size_t>(m), std::vector<int64_t>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        Minv[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            (A[static_cast<size_t>(i)][static_cast<size_t>(m + j)] *
             BigRational(det))
                .num()
                .to_int64();
    int64_t det64 = det.to_int64();
    // K on the subdivided graph: midpoints have valency 2 and weight 0.
    std::vector<int64_t> K(static_cast<size_t>(W), 0);
    for (int v = 0; v < V; ++v) {
      int64_t val = 0;
      for (auto [u, w] : cg.edges) {
        if (u == v) ++val;
        if (w == v) ++val;
      }
      K[static_cast<size_t>(v)] = 2 * wts[static_cast<size_t>(v)] + val - 2;
    }
    for (int k = 0; k < E; ++k) K[static_cast<size_t>(V + k)] = 0;
    // The subdivided graph as a MetricGraph, for spot checks through the
    // public PL-function operations.
    MetricGraph metric = [&] {
      std::vector<MetricGraph::Vertex> vs;
      for (int v = 0; v < V; ++v)
        vs.push_back({"v" + std::to_string(v), wts[static_cast<size_t>(v)]});
      for (int k = 0; k < E; ++k) vs.push_back({"m" + std::to_string(k), 0});
      std::vector<MetricGraph::Edge> es;
      BigRational half{BigInt(1), BigInt(2)};
      for (int k = 0; k < E; ++k) {
        es.push_back({"h" + std::to_string(2 * k),
                      cg.edges[static_cast<size_t>(k)].first, V + k, half});
        es.push_back({"h" + std::to_string(2 * k + 1), V + k,
                      cg.edges[static_cast<size_t>(k)].second, half});
      }
      return MetricGraph(std::move(vs), std::move(es));
    }();
    // Enumerate effective E' of degree 2g-2 over the W points.
    int64_t target = 2 * genus - 2;
    std::vector<int64_t> eff(static_cast<size_t>(W), 0);
    int64_t bound = 2 * genus - 1;
    std::function<void(int, int64_t)> enumerate = [&](int idx, int64_t left) {
      if (!error.empty()) return;
      if (idx == W - 1) {
        eff[static_cast<size_t>(idx)] = left;
        // D = E' - K; rhs for the reduced system drops vertex 0.
        std::vector<int64_t> rhs(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
          rhs[static_cast<size_t>(i)] = eff[static_cast<size_t>(i + 1)] -
                                        K[static_cast<size_t>(i + 1)];
        // F = Minv * rhs / det (F(0) = 0).
        std::vector<int64_t> F(static_cast<size_t>(W), 0);
        for (int i = 0; i < m; ++i) {
          int64_t acc = 0;
          for (int j = 0; j < m; ++j)
            acc += Minv[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                   rhs[static_cast<size_t>(j)];
          F[static_cast<size_t>(i + 1)] = acc;  // scaled by det
        }
        // Slopes on half-edges: (F_b - F_a) / (1/2) = 2 (F_b - F_a) / det.
        bool integral = true;
        int64_t local_max = 0;
        std::vector<int64_t> slopes;
        slopes.reserve(static_cast<size_t>(2 * E));
        auto check_half = [&](int a, int b) {
          if (!integral) return;
          int64_t num =
              2 * (F[static_cast<size_t>(b)] - F[static_cast<size_t>(a)]);
          if (num % det64 != 0) {
            integral = false;
            return;
          }
          slopes.push_back(num / det64);
          local_max = std::max(local_max, std::abs(slopes.back()));
        };
        for (int k = 0; k < E; ++k) {
          check_half(cg.edges[static_cast<size_t>(k)].first, V + k);
          check_half(V + k, cg.edges[static_cast<size_t>(k)].second);
        }
        if (integral) {
          ++sections;
          max_seen = std::max(max_seen, local_max);
          if (local_max > bound) error = "slope bound violated";
          if (sections % 1000 == 0) {
            // Rebuild through the public API and cross-check everything.
            std::vector<BigRational> vv;
            for (int i = 0; i < W; ++i)
              vv.push_back(BigRational(BigInt(F[static_cast<size_t>(i)]),
                                       det));
            std::vector<PLFunction::EdgeData> ed;
            for (int64_t s : slopes) ed.push_back({{}, {s}});
            PLFunction pl(metric, std::move(vv), std::move(ed));
            if (pl.max_abs_slope() != local_max)
              error = "fast path disagrees with max_abs_slope";
            else if (!is_canonical_section(metric, pl).ok)
              error = "fast path produced a non-section";
            else if (!check_slope_bound(metric, pl))
              error = "check_slope_bound rejected a section";
            else {
              GraphDivisor div = divisor_of(metric, pl);
              for (int i = 0; i < W && error.empty(); ++i)
                if (div.coeff(GraphPoint::at_vertex(i)) !=
                    eff[static_cast<size_t>(i)] - K[static_cast<size_t>(i)])
                  error = "fast path disagrees with divisor_of";
            }
            if (error.empty()) ++api_checks;
          }
        }
        return;
      }
      for (int64_t c = 0; c <= left; ++c) {
        eff[static_cast<size_t>(idx)] = c;
        enumerate(idx + 1, left - c);
      }
    };
    enumerate(0, target);
    return error.empty();
  };
  for (const auto& cg : catalog) {
    std::vector<int64_t> zero(static_cast<size_t>(cg.n), 0);
    if (!sweep(cg, zero)) {
      note = error;
      return false;
    }
    if (cg.n <= 2) {
      // Weighted variants: every weight vector with 1 <= total <= 2.
      std::vector<std::vector<int64_t>> variants;
      if (cg.n == 1)
        variants = {{1}, {2}};
      else
        variants = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
      for (const auto& w : variants)
        if (!sweep(cg, w)) {
          note = error;
          return false;
        }
    }
  }
  std::ostringstream os;
  os << graphs << " weighted graphs, " << sections
     << " integer-slope canonical sections, max |slope| seen " << max_seen
     << ", " << api_checks << " API cross-checks";
  note = os.str();
  return true;
}

bool criterion9_tropical_jacobian(std::string& note) {
  // Theta Gram matrices for three length triples.
  for (auto [a, b, c] : std::vector<std::array<int64_t, 3>>{
           {1, 1, 1}, {2, 3, 5}, {1, 4, 6}}) {
    MetricGraph t = fixtures::theta_graph(BigRational(a), BigRational(b),
                                          BigRational(c));
    PeriodLattice L = period_lattice(t);
    std::vector<std::vector<BigRational>> target{
        {BigRational(a + b), BigRational(b)},
        {BigRational(b), BigRational(b + c)}};
    if (L.rank() != 2 || !gram_rank2_equivalent(L.gram, target)) {
      note = "theta gram mismatch";
      return false;
    }
  }
  // Path independence mod lattice, 100 random graphs.
  for (int iter = 0; iter < 100; ++iter) {
    MetricGraph g = random_metric_graph(4, 4, false);
    PeriodLattice L1 = period_lattice(g, 0);
    PeriodLattice L2 = period_lattice(
        g, static_cast<int>(rand_i64(0, g.vertex_count() - 1)));
    auto pt = [&] {
      if (rand_i64(0, 1) == 0)
        return GraphPoint::at_vertex(
            static_cast<int>(rand_i64(0, g.vertex_count() - 1)));
      int e = static_cast<int>(rand_i64(0, g.edge_count() - 1));
      return GraphPoint::on_edge(
          e, g.edge(e).length * BigRational{BigInt(rand_i64(1, 7)), BigInt(8)});
    };
    GraphPoint x0 = pt(), x = pt();
    auto c1 = detail::path_chain(g, L1.basis, x0, x);
    auto c2 = detail::path_chain(g, L2.basis, x0, x);
    std::vector<BigRational> diff;
    for (const auto& cyc : L1.basis.cycles)
      diff.push_back(detail::pair_chain_cycle(g, c1, cyc) -
                     detail::pair_chain_cycle(g, c2, cyc));
    if (L1.rank() > 0 && !in_period_lattice(L1, diff)) {
      note = "path dependence detected";
      return false;
    }
  }
  // is_principal(div F) for 200 random PL functions on unit-length graphs.
  int built = 0;
  for (int iter = 0; iter < 2000 && built < 200; ++iter) {
    MetricGraph g = [&] {
      int n = static_cast<int>(rand_i64(1, 4));
      std::vector<MetricGraph::Vertex> vs;
      for (int i = 0; i < n; ++i) vs.push_back({"v" + std::to_string(i), 0});
      std::vector<MetricGraph::Edge> es;
      int id = 0;
      for (int i = 1; i < n; ++i)
        es.push_back({"e" + std::to_string(id++),
                      static_cast<int>(rand_i64(0, i - 1)), i, BigRational(1)});
      int extra = static_cast<int>(rand_i64(1, 4));
      for (int k = 0; k < extra; ++k)
        es.push_back({"e" + std::to_string(id++),
                      static_cast<int>(rand_i64(0, n - 1)),
                      static_cast<int>(rand_i64(0, n - 1)), BigRational(1)});
      if (es.empty()) es.push_back({"loop", 0, 0, BigRational(1)});
      return MetricGraph(std::move(vs), std::move(es));
    }();
    std::vector<BigRational> vv;
    for (int v = 0; v < g.vertex_count(); ++v)
      vv.emplace_back(BigInt(rand_i64(-2, 2)));
    std::vector<PLFunction::EdgeData> ed(static_cast<size_t>(g.edge_count()));
    bool ok = true;
    for (int e = 0; e < g.edge_count(); ++e) {
      BigRational diff = vv[static_cast<size_t>(g.edge(e).to)] -
                         vv[static_cast<size_t>(g.edge(e).from)];
      if (!diff.is_integer()) {
        ok = false;
        break;
      }
      int64_t d = diff.num().to_int64();
      // Optionally bend at the midpoint: slopes s and 2d - s.
      if (rand_i64(0, 1)) {
        int64_t s = rand_i64(-3, 3);
        if (s == 2 * d - s)
          ed[static_cast<size_t>(e)] = {{}, {d}};
        else
          ed[static_cast<size_t>(e)] = {{BigRational{BigInt(1), BigInt(2)}},
                                        {s, 2 * d - s}};
      } else {
        ed[static_cast<size_t>(e)] = {{}, {d}};
      }
    }
    if (!ok) continue;
    PLFunction f(g, std::move(vv), std::move(ed));
    if (!is_principal(g, divisor_of(g, f))) {
      note = "div(F) not principal";
      return false;
    }
    ++built;
  }
  if (built < 200) {
    note = "only built " + std::to_string(built) + " PL functions";
    return false;
  }
  // Balancing on 100 random graphs.
  for (int iter = 0; iter < 100; ++iter)
    if (!balancing_check(random_metric_graph(4, 4, false))) {
      note = "balancing failed";
      return false;
    }
  note = "3 theta grams, 100 paths, 200 principal divisors, 100 balanced";
  return true;
}

bool criterion10_chipfiring(std::string& note) {
  auto catalog = multigraph_catalog(4, 6, false);
  int64_t graphs = 0, rr_checks = 0, clifford_checks = 0, invariance = 0;
  for (const auto& cg : catalog) {
    std::vector<std::string> names;
    for (int i = 0; i < cg.n; ++i) names.push_back("v" + std::to_string(i));
    FiniteGraph g = FiniteGraph::from_edge_list(names, cg.edges);
    ++graphs;
    RankEngine engine(g);
    IntDivisor k = canonical_divisor(g);
    int n = g.vertex_count();
    std::vector<int64_t> coeffs{-2, -1, 0, 1, 2, 3};
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    for (;;) {
      IntDivisor d(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        d[static_cast<size_t>(i)] = coeffs[idx[static_cast<size_t>(i)]];
      if (!check_riemann_roch(g, d, &engine)) {
        note = "Riemann-Roch failed";
        return false;
      }
      ++rr_checks;
      IntDivisor kd = k;
      for (size_t i = 0; i < kd.size(); ++i) kd[i] -= d[i];
      if (engine.rank(d) >= 0 && engine.rank(kd) >= 0) {
        if (!check_clifford(g, d, &engine)) {
          note = "Clifford failed";
          return false;
        }
        ++clifford_checks;
      }
      int pos = 0;
      while (pos < n && ++idx[static_cast<size_t>(pos)] == coeffs.size()) {
        idx[static_cast<size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
    // Equivalence invariance on a few randomized perturbations.
    for (int iter = 0; iter < 3; ++iter) {
      IntDivisor d(static_cast<size_t>(n));
      for (auto& c : d) c = rand_i64(-2, 3);
      IntDivisor d2 = d;
      for (int moves = 0; moves < 4; ++moves) {
        int v = static_cast<int>(rand_i64(0, n - 1));
        int sign = rand_i64(0, 1) ? 1 : -1;
        for (int u = 0; u < n; ++u) {
          int mlt = g.multiplicity(v, u);
          d2[static_cast<size_t>(v)] -= sign * mlt;
          d2[static_cast<size_t>(u)] += sign * mlt;
        }
      }
      if (engine.rank(d) != engine.rank(d2)) {
        note = "rank not equivalence-invariant";
        return false;
      }
      ++invariance;
    }
  }
  std::ostringstream os;
  os << graphs << " graphs, " << rr_checks << " Riemann-Roch identities, "
     << clifford_checks << " Clifford checks, " << invariance
     << " invariance probes";
  note = os.str();
  return true;
}

bool criterion11_annular_rolle(std::string& note) {
  int done = 0;
  for (int iter = 0; iter < 1000 && done < 200; ++iter) {
    int64_t p = std::vector<int64_t>{3, 5, 7}[rand_i64(0, 2)];
    int64_t low = -rand_i64(1, 5), high = rand_i64(1, 8);
    std::vector<BigRational> coeffs;
    bool nonzero = false;
    for (int64_t n = low; n <= high; ++n) {
      if (n == 0 || rand_i64(0, 2) == 0) {
        coeffs.emplace_back(0);
        continue;
      }
      int64_t u = rand_i64(1, 30);
      if (u % p == 0) ++u;
      BigRational c =
          BigRational(u) * BigRational(BigInt::pow(BigInt(p), rand_i64(0, 5)));
      if (rand_i64(0, 1)) c = -c;
      coeffs.push_back(c);
      nonzero = true;
    }
    if (!nonzero) continue;
    PadicSeries omega = PadicSeries::from_rationals(p, low, coeffs);
    BigRational r(rand_i64(3, 8));
    BigRational a{BigInt(1), BigInt(rand_i64(1, 3))};
    if (!(a + a < r)) continue;
    // N0 at each end of the annulus from the form's envelope: the boundary
    // slope toward the interior. At s = r the active exponent approached
    // from the left is the largest minimizer of v + m r.
    std::vector<std::pair<int64_t, int64_t>> lines;
    for (int64_t n = omega.low(); n < omega.first_truncated(); ++n)
      if (!omega.coeff(n).is_zero())
        lines.emplace_back(n, omega.coeff(n).finite_valuation());
    int64_t n0_near = detail::envelope_active_exponent(lines, BigRational(0));
    bool first = true;
    BigRational best;
    int64_t m_left = 0;
    for (const auto& [mm, vv] : lines) {
      BigRational val = BigRational(vv) + BigRational(mm) * r;
      if (first || val < best || (val == best && mm > m_left)) {
        best = val;
        m_left = mm;
        first = false;
      }
    }
    int64_t n0_far = -m_left;  // incoming slope at the far end
    BigInt cap = compute_Np(p, a, std::max(n0_near, n0_far));
    PadicSeries f = antiderivative(omega);
    ValuationWindow w{a, false, false, r - a, false};
    int64_t zeros = count_zeros(f, w);
    if (!(BigInt(zeros) <= BigInt(2) * cap)) {
      note = "annular bound violated at iteration " + std::to_string(iter);
      return false;
    }
    ++done;
  }
  note = std::to_string(done) + " random exact residue-zero forms";
  return done >= 200;
}

}  // namespace

int main() {
  criterion(1, "Gordon-Grant reproduction", 1.0, criterion1_gordon_grant);
  criterion(2, "McCallum-Poonen example", 1.0, criterion2_mccallum_poonen);
  criterion(3, "genus-3 regular-model example", 1.0, criterion3_krzb);
  criterion(4, "uniform-bound identity", 1.0, criterion4_uniform_identity);
  criterion(5, "N_p suite", 5.0, criterion5_np_suite);
  // Criterion 6 additionally enforces its 10-second cap per (g, p) case.
  criterion(6, "geometric torsion computability", 120.0,
            criterion6_geometric_torsion);
  criterion(7, "slope-formula property suite", 5.0, criterion7_slope_formula);
  criterion(8, "tropical canonical suite", 60.0, criterion8_tropical_canonical);
  criterion(9, "tropical Jacobian suite", 30.0, criterion9_tropical_jacobian);
  criterion(10, "chip-firing Riemann-Roch/Clifford", 300.0,
            criterion10_chipfiring);
  criterion(11, "annular Rolle suite", 10.0, criterion11_annular_rolle);
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
