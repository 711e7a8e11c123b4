#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chabtrop/metric_graph.hpp"
#include "chabtrop/series.hpp"

namespace chabtrop {

// #GSp_2g(F_q) = (q - 1) q^{g^2} prod_{i=1..g} (q^{2i} - 1). The formula is
// standard but not quoted in the sources this artifact follows, so tests
// gate it behind enumerate_gsp_order below.
inline BigInt gsp_order(int64_t g, int64_t q) {
  if (g < 1) throw Error("InvalidParameters", "g must be >= 1");
  require_prime(q);
  BigInt Q(q);
  BigInt out = (Q - BigInt(1)) *
               BigInt::pow(Q, static_cast<uint64_t>(g) * static_cast<uint64_t>(g));
  for (int64_t i = 1; i <= g; ++i)
    out *= BigInt::pow(Q, static_cast<uint64_t>(2 * i)) - BigInt(1);
  return out;
}

// Brute-force count of 2g x 2g matrices over F_q preserving the standard
// symplectic form up to a nonzero scalar. Backtracks over matrix columns
// checking the pairwise form constraints; feasible for (g, q) in
// {(1,2),(1,3),(2,2),(2,3)}.
inline BigInt enumerate_gsp_order(int64_t g, int64_t q) {
  if (g < 1 || g > 2) throw Error("InvalidParameters", "enumeration needs g <= 2");
  require_prime(q);
  int n = static_cast<int>(2 * g);
  int64_t total_vecs = 1;
  for (int i = 0; i < n; ++i) total_vecs *= q;
  // Standard form J: <x, y> = sum_i (x_{2i} y_{2i+1} - x_{2i+1} y_{2i}).
  auto pairing = [&](int64_t a, int64_t b) {
    int64_t s = 0;
    int64_t aa = a, bb = b;
    std::vector<int64_t> xa(static_cast<size_t>(n)), xb(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      xa[static_cast<size_t>(i)] = aa % q;
      xb[static_cast<size_t>(i)] = bb % q;
      aa /= q;
      bb /= q;
    }
    for (int i = 0; i < n; i += 2)
      s += xa[static_cast<size_t>(i)] * xb[static_cast<size_t>(i + 1)] -
           xa[static_cast<size_t>(i + 1)] * xb[static_cast<size_t>(i)];
    return ((s % q) + q) % q;
  };
  BigInt count(0);
  for (int64_t lambda = 1; lambda < q; ++lambda) {
    // Columns c_1..c_n with <c_{2i-1}, c_{2i}> = lambda and all other
    // pairings zero.
    std::vector<int64_t> cols(static_cast<size_t>(n), 0);
    uint64_t found = 0;
    auto rec = [&](auto&& self, int idx) -> void {
      if (idx == n) {
        ++found;
        return;
      }
      for (int64_t v = 0; v < total_vecs; ++v) {
        bool ok = true;
        for (int j = 0; j < idx && ok; ++j) {
          int64_t want = (j % 2 == 0 && idx == j + 1) ? lambda : 0;
          if (pairing(cols[static_cast<size_t>(j)], v) != want) ok = false;
        }
        if (!ok) continue;
        cols[static_cast<size_t>(idx)] = v;
        self(self, idx + 1);
      }
    };
    rec(rec, 0);
    count += BigInt(static_cast<long long>(found));
  }
  return count;
}

// E(g, p): the field-of-definition degree bound for stable models entering
// the geometric torsion bound.
inline BigInt symplectic_degree_bound(int64_t g, int64_t p) {
  if (g < 2) throw Error("InvalidParameters", "g must be >= 2");
  require_prime(p);
  return p != 5 ? gsp_order(g, 5) : gsp_order(g, 7);
}

// Condition (dagger): g(Gamma) > 2 weight(x) + valency(x) at every vertex.
struct DaggerReport {
  bool holds = true;
  std::optional<std::string> witness;
};

inline DaggerReport check_dagger(const MetricGraph& g) {
  DaggerReport rep;
  int64_t genus = g.genus();
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!(genus > 2 * g.vertex(v).weight + g.valency(v))) {
      rep.holds = false;
      rep.witness = g.vertex(v).id;
      return rep;
    }
  }
  return rep;
}

// Closed-form uniform bound evaluators with an explicit hypothesis ledger.
struct BoundRequest {
  std::string kind;
  std::map<std::string, BigRational> params;

  bool has(const std::string& k) const { return params.count(k) > 0; }
  BigRational get(const std::string& k) const {
    auto it = params.find(k);
    if (it == params.end())
      throw Error("MissingParameter", "bound needs parameter '" + k + "'");
    return it->second;
  }
  int64_t get_int(const std::string& k) const {
    BigRational v = get(k);
    if (!v.is_integer() || !v.num().fits_int64())
      throw Error("MissingParameter", "parameter '" + k + "' must be an integer");
    return v.num().to_int64();
  }
};

struct Hypothesis {
  std::string name;
  bool satisfied = false;
};

struct BoundResult {
  std::optional<BigInt> value;
  std::vector<Hypothesis> hypotheses;
  std::string formula;
  std::map<std::string, BigInt> extras;

  bool all_satisfied() const {
    for (const auto& h : hypotheses)
      if (!h.satisfied) return false;
    return true;
  }
};

namespace detail {

inline void finish(BoundResult& r, BigInt value) {
  if (r.all_satisfied()) r.value = std::move(value);
}

}  // namespace detail

inline BoundResult evaluate_bound(const BoundRequest& req) {
  BoundResult r;
  const std::string& kind = req.kind;
  auto hyp = [&](const std::string& name, bool ok) {
    r.hypotheses.push_back({name, ok});
    return ok;
  };
  auto prime_ok = [&](int64_t p) { return p >= 2 && is_small_prime(p); };

  if (kind == "coleman" || kind == "stoll") {
    int64_t g = req.get_int("g"), rk = req.get_int("r"), p = req.get_int("p");
    int64_t nfp = req.get_int("nFp");
    hyp("p prime", prime_ok(p));
    hyp("p > 2g", p > 2 * g);
    hyp("0 <= r < g", rk >= 0 && rk < g);
    hyp("g >= 2", g >= 2);
    if (kind == "coleman") {
      r.formula = "#X(F_p) + 2g - 2";
      detail::finish(r, BigInt(nfp) + BigInt(2 * g - 2));
    } else {
      r.formula = "#X(F_p) + 2r";
      detail::finish(r, BigInt(nfp) + BigInt(2 * rk));
    }
    return r;
  }
  if (kind == "lorenzini_tucker" || kind == "kzb") {
    int64_t g = req.get_int("g"), rk = req.get_int("r"), p = req.get_int("p");
    int64_t nsm = req.get_int("nSm");
    hyp("p prime", prime_ok(p));
    if (kind == "lorenzini_tucker")
      hyp("p > 2g", p > 2 * g);
    else
      hyp("p > 2r + 2", p > 2 * rk + 2);
    hyp("0 <= r < g", rk >= 0 && rk < g);
    hyp("g >= 2", g >= 2);
    if (kind == "lorenzini_tucker") {
      r.formula = "#Xsm(F_p) + 2g - 2";
      detail::finish(r, BigInt(nsm) + BigInt(2 * g - 2));
    } else {
      r.formula = "#Xsm(F_p) + 2r";
      detail::finish(r, BigInt(nsm) + BigInt(2 * rk));
    }
    return r;
  }
  if (kind == "stoll_uniform_hyp") {
    int64_t g = req.get_int("g"), rk = req.get_int("r");
    hyp("0 <= r <= g - 3", rk >= 0 && rk <= g - 3);
    hyp("X hyperelliptic (assumed)", true);
    r.formula = "8(r+4)(g-1) + max{1,4r} g";
    BigInt cap = BigInt(8) * BigInt(rk + 4) * BigInt(g - 1) +
                 BigInt(std::max<int64_t>(1, 4 * rk)) * BigInt(g);
    detail::finish(r, cap);
    return r;
  }
  if (kind == "krzb_general") {
    int64_t g = req.get_int("g"), p = req.get_int("p");
    hyp("p prime", prime_ok(p));
    hyp("p >= 3", p >= 3);
    hyp("g >= 3", g >= 3);
    if (req.has("r")) {
      int64_t rk = req.get_int("r");
      hyp("0 <= r <= g - 3", rk >= 0 && rk <= g - 3);
    } else {
      hyp("rank <= g - 3 (assumed)", true);
    }
    r.formula = "(5pg + 6g - 2p - 8)(4g - 2)";
    detail::finish(r, (BigInt(5 * p * g) + BigInt(6 * g) - BigInt(2 * p) -
                       BigInt(8)) *
                          BigInt(4 * g - 2));
    return r;
  }
  if (kind == "krzb_p3" || kind == "rational_torsion") {
    int64_t g = req.get_int("g");
    hyp("g >= 3", g >= 3);
    if (req.has("r")) {
      int64_t rk = req.get_int("r");
      hyp("0 <= r <= g - 3", rk >= 0 && rk <= g - 3);
    }
    r.formula = "84g^2 - 98g + 28";
    detail::finish(r, BigInt(84) * BigInt(g) * BigInt(g) - BigInt(98) * BigInt(g) +
                       BigInt(28));
    return r;
  }
  if (kind == "geometric_torsion") {
    int64_t g = req.get_int("g"), p = req.get_int("p");
    std::string over = "Qp";
    if (req.has("overQ") && req.get("overQ") == BigRational(1)) over = "Q";
    hyp("p prime", prime_ok(p));
    BigRational rate;
    if (over == "Q") {
      hyp("g >= 4", g >= 4);
      // rate = (4 * 7^{2g^2 + g + 1})^{-1}
      BigInt denom = BigInt(4) * BigInt::pow(BigInt(7),
                                             static_cast<uint64_t>(
                                                 2 * g * g + g + 1));
      rate = BigRational(BigInt(1), denom);
      r.formula = "(16g^2 - 12g) N_p((4*7^{2g^2+g+1})^{-1}, 2g-2)";
    } else {
      hyp("g >= 2", g >= 2);
      hyp("condition (dagger) at p (assumed; see `dagger`)", true);
      rate = BigRational(BigInt(1), BigInt(4) * symplectic_degree_bound(g, p));
      r.formula = "(16g^2 - 12g) N_p((4E(g,p))^{-1}, 2g-2)";
    }
    if (!r.all_satisfied()) return r;
    BigInt np = compute_Np(p, rate, 2 * g - 2);
    r.extras.emplace("Np", np);
    detail::finish(r, (BigInt(16) * BigInt(g) * BigInt(g) -
                       BigInt(12) * BigInt(g)) *
                          np);
    return r;
  }
  if (kind == "wideopen_zeros") {
    int64_t g = req.get_int("g"), p = req.get_int("p"), d = req.get_int("d");
    BigRational a = req.get("a");
    bool no_leaves =
        req.has("no_genus_zero_leaves") &&
        req.get("no_genus_zero_leaves") == BigRational(1);
    hyp("p prime", prime_ok(p));
    hyp("a > 0", a.sign() > 0);
    hyp("d >= 1", d >= 1);
    hyp("g >= 2", g >= 2);
    int64_t n0 = no_leaves ? 2 * g - 2 : 2 * g - 1;
    r.formula = no_leaves ? "d N_p(a, 2g-2)" : "d N_p(a, 2g-1)";
    if (!r.all_satisfied()) return r;
    BigInt np = compute_Np(p, a, n0);
    r.extras.emplace("Np", np);
    detail::finish(r, BigInt(d) * np);
    return r;
  }
  if (kind == "stoll_cover") {
    int64_t g = req.get_int("g"), q = req.get_int("q"), t = req.get_int("t");
    hyp("g >= 2", g >= 2);
    hyp("q >= 2", q >= 2);
    hyp("0 <= t <= g", t >= 0 && t <= g);
    r.formula = "(5q+2)(g-1) - 3q(t-1) balls; 2g-3+t annuli";
    BigInt balls = (BigInt(5 * q) + BigInt(2)) * BigInt(g - 1) -
                   BigInt(3 * q) * BigInt(t - 1);
    r.extras.emplace("annuli", BigInt(2 * g - 3 + t));
    detail::finish(r, balls);
    return r;
  }
  throw Error("MissingParameter", "unknown bound kind '" + kind + "'");
}

}  // namespace chabtrop
