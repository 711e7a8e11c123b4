#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chabtrop/rational.hpp"

namespace chabtrop {

// Connected multigraph with positive rational edge lengths and nonnegative
// integer vertex weights. Loops and parallel edges are allowed; loops count
// twice toward valency.
class MetricGraph {
 public:
  struct Vertex {
    std::string id;
    int64_t weight = 0;
  };
  struct Edge {
    std::string id;
    int from = 0;
    int to = 0;
    BigRational length;
  };

  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (vertices_.empty())
      throw Error("InvalidGraph", "graph needs at least one vertex");
    for (size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i].weight < 0)
        throw Error("InvalidGraph", "negative vertex weight");
      if (!vertex_index_.emplace(vertices_[i].id, static_cast<int>(i)).second)
        throw Error("InvalidGraph", "duplicate vertex id " + vertices_[i].id);
    }
    for (size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.from < 0 || e.from >= static_cast<int>(vertices_.size()) ||
          e.to < 0 || e.to >= static_cast<int>(vertices_.size()))
        throw Error("InvalidGraph", "edge endpoint out of range");
      if (!(e.length > BigRational(0)))
        throw Error("InvalidGraph", "edge length must be positive");
      if (!edge_index_.emplace(e.id, static_cast<int>(i)).second)
        throw Error("InvalidGraph", "duplicate edge id " + e.id);
    }
    if (!connected()) throw Error("InvalidGraph", "graph is not connected");
  }

  static MetricGraph single_segment(const BigRational& length) {
    return MetricGraph({{"u", 0}, {"w", 0}}, {{"e", 0, 1, length}});
  }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(int i) const { return vertices_[static_cast<size_t>(i)]; }
  const Edge& edge(int i) const { return edges_[static_cast<size_t>(i)]; }

  int vertex_id(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end())
      throw Error("InvalidGraph", "unknown vertex id " + id);
    return it->second;
  }
  int edge_id(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end())
      throw Error("InvalidGraph", "unknown edge id " + id);
    return it->second;
  }

  bool is_loop(int e) const { return edges_[static_cast<size_t>(e)].from ==
                                     edges_[static_cast<size_t>(e)].to; }

  int64_t valency(int v) const {
    int64_t d = 0;
    for (const Edge& e : edges_) {
      if (e.from == v) ++d;
      if (e.to == v) ++d;  // loops hit both branches
    }
    return d;
  }

  int64_t first_betti() const {
    return edge_count() - vertex_count() + 1;
  }
  int64_t genus() const {
    int64_t w = 0;
    for (const Vertex& v : vertices_) w += v.weight;
    return w + first_betti();
  }

  // Incident edge ends at v as (edge index, leaves-from-end?) pairs; loops
  // produce two entries.
  std::vector<std::pair<int, bool>> incident_ends(int v) const {
    std::vector<std::pair<int, bool>> ends;
    for (int i = 0; i < edge_count(); ++i) {
      if (edges_[static_cast<size_t>(i)].from == v) ends.emplace_back(i, true);
      if (edges_[static_cast<size_t>(i)].to == v) ends.emplace_back(i, false);
    }
    return ends;
  }

  // Inserts a weight-0 valence-2 vertex at `offset` along edge e; neither
  // the genus nor deg K changes. Used to break loop edges before star
  // constructions.
  MetricGraph subdivide_edge(int e, const BigRational& offset,
                             const std::string& new_vertex_id) const {
    const Edge& old = edges_[static_cast<size_t>(e)];
    if (!(BigRational(0) < offset && offset < old.length))
      throw Error("InvalidGraph", "subdivision offset must be interior");
    std::vector<Vertex> vs = vertices_;
    vs.push_back({new_vertex_id, 0});
    int mid = static_cast<int>(vs.size()) - 1;
    std::vector<Edge> es;
    for (int i = 0; i < edge_count(); ++i) {
      if (i == e) continue;
      es.push_back(edges_[static_cast<size_t>(i)]);
    }
    es.push_back({old.id + ".a", old.from, mid, offset});
    es.push_back({old.id + ".b", mid, old.to, old.length - offset});
    return MetricGraph(std::move(vs), std::move(es));
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vertex_index_;
  std::map<std::string, int> edge_index_;

  bool connected() const {
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Edge& e : edges_) {
        int other = -1;
        if (e.from == v) other = e.to;
        else if (e.to == v) other = e.from;
        if (other >= 0 && !seen[static_cast<size_t>(other)]) {
          seen[static_cast<size_t>(other)] = true;
          stack.push_back(other);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
};

// A point of the metric graph: a vertex, or an interior point of an edge at
// `offset` from the edge's `from` endpoint.
struct GraphPoint {
  int vertex = -1;
  int edge = -1;
  BigRational offset;

  static GraphPoint at_vertex(int v) {
    GraphPoint p;
    p.vertex = v;
    return p;
  }
  static GraphPoint on_edge(int e, const BigRational& offset) {
    GraphPoint p;
    p.edge = e;
    p.offset = offset;
    return p;
  }
  bool is_vertex() const { return vertex >= 0; }

  friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
    if (a.is_vertex() != b.is_vertex()) return false;
    if (a.is_vertex()) return a.vertex == b.vertex;
    return a.edge == b.edge && a.offset == b.offset;
  }
  friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
    if (a.is_vertex() != b.is_vertex()) return a.is_vertex();
    if (a.is_vertex()) return a.vertex < b.vertex;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.offset < b.offset;
  }
};

// Formal integer sum of graph points; zero coefficients are dropped and
// points deduplicated.
class GraphDivisor {
 public:
  GraphDivisor() = default;

  void add(const GraphPoint& p, int64_t coeff) {
    if (coeff == 0) return;
    entries_[p] += coeff;
    if (entries_[p] == 0) entries_.erase(p);
  }
  int64_t coeff(const GraphPoint& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? 0 : it->second;
  }
  int64_t degree() const {
    int64_t d = 0;
    for (const auto& [p, c] : entries_) d += c;
    return d;
  }
  bool empty() const { return entries_.empty(); }
  const std::map<GraphPoint, int64_t>& entries() const { return entries_; }

  friend GraphDivisor operator-(const GraphDivisor& a, const GraphDivisor& b) {
    GraphDivisor r = a;
    for (const auto& [p, c] : b.entries_) r.add(p, -c);
    return r;
  }
  friend GraphDivisor operator+(const GraphDivisor& a, const GraphDivisor& b) {
    GraphDivisor r = a;
    for (const auto& [p, c] : b.entries_) r.add(p, c);
    return r;
  }
  friend bool operator==(const GraphDivisor& a, const GraphDivisor& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::map<GraphPoint, int64_t> entries_;
};

// K_Gamma = sum_x (2 weight(x) - 2 + valency(x)) (x); supported on vertices,
// degree 2g - 2.
inline GraphDivisor canonical_divisor(const MetricGraph& g) {
  GraphDivisor K;
  for (int v = 0; v < g.vertex_count(); ++v)
    K.add(GraphPoint::at_vertex(v),
          2 * g.vertex(v).weight - 2 + g.valency(v));
  return K;
}

// Continuous piecewise affine-linear function with integer slopes. Stored
// per edge as strictly increasing interior breakpoints plus the slope on
// each resulting segment (slopes measured in the from -> to direction).
class PLFunction {
 public:
  struct EdgeData {
    std::vector<BigRational> breakpoints;
    std::vector<int64_t> slopes;  // size = breakpoints.size() + 1
  };

  PLFunction(const MetricGraph& g, std::vector<BigRational> vertex_values,
             std::vector<EdgeData> edges)
      : vertex_values_(std::move(vertex_values)), edges_(std::move(edges)) {
    if (vertex_values_.size() != static_cast<size_t>(g.vertex_count()) ||
        edges_.size() != static_cast<size_t>(g.edge_count()))
      throw Error("InvalidPL", "shape mismatch with graph");
    for (int e = 0; e < g.edge_count(); ++e) {
      const EdgeData& d = edges_[static_cast<size_t>(e)];
      if (d.slopes.size() != d.breakpoints.size() + 1)
        throw Error("InvalidPL", "slope count must be breakpoints + 1");
      const BigRational& len = g.edge(e).length;
      BigRational prev(0);
      for (size_t i = 0; i < d.breakpoints.size(); ++i) {
        if (!(d.breakpoints[i] > prev) || !(d.breakpoints[i] < len))
          throw Error("InvalidPL",
                      "breakpoints must be strictly increasing and interior");
        prev = d.breakpoints[i];
      }
      // Continuity: integrate slopes across the edge.
      BigRational total(0);
      BigRational last(0);
      for (size_t i = 0; i < d.slopes.size(); ++i) {
        BigRational end = i < d.breakpoints.size() ? d.breakpoints[i] : len;
        total += BigRational(d.slopes[i]) * (end - last);
        last = end;
      }
      BigRational expect = vertex_values_[static_cast<size_t>(g.edge(e).to)] -
                           vertex_values_[static_cast<size_t>(g.edge(e).from)];
      if (total != expect)
        throw Error("InvalidPL", "discontinuous along edge " + g.edge(e).id);
    }
  }

  static PLFunction constant(const MetricGraph& g, const BigRational& value) {
    std::vector<BigRational> vv(static_cast<size_t>(g.vertex_count()), value);
    std::vector<EdgeData> ed(static_cast<size_t>(g.edge_count()));
    for (auto& d : ed) d.slopes = {0};
    return PLFunction(g, std::move(vv), std::move(ed));
  }

  const std::vector<BigRational>& vertex_values() const {
    return vertex_values_;
  }
  const EdgeData& edge_data(int e) const {
    return edges_[static_cast<size_t>(e)];
  }

  BigRational value_at(const MetricGraph& g, const GraphPoint& p) const {
    if (p.is_vertex()) return vertex_values_[static_cast<size_t>(p.vertex)];
    const EdgeData& d = edges_[static_cast<size_t>(p.edge)];
    BigRational acc =
        vertex_values_[static_cast<size_t>(g.edge(p.edge).from)];
    BigRational last(0);
    for (size_t i = 0; i < d.slopes.size(); ++i) {
      BigRational end =
          i < d.breakpoints.size() ? d.breakpoints[i] : g.edge(p.edge).length;
      BigRational seg_end = p.offset < end ? p.offset : end;
      if (seg_end > last) acc += BigRational(d.slopes[i]) * (seg_end - last);
      if (p.offset <= end) break;
      last = end;
    }
    return acc;
  }

  // Slope on the segment immediately after `offset` in the from->to
  // direction (offset < length).
  int64_t slope_right(const MetricGraph& g, int e, const BigRational& offset)
      const {
    const EdgeData& d = edges_[static_cast<size_t>(e)];
    (void)g;
    for (size_t i = 0; i < d.breakpoints.size(); ++i)
      if (offset < d.breakpoints[i]) return d.slopes[i];
    return d.slopes.back();
  }
  // Slope on the segment immediately before `offset` (offset > 0).
  int64_t slope_left(const MetricGraph& g, int e, const BigRational& offset)
      const {
    const EdgeData& d = edges_[static_cast<size_t>(e)];
    (void)g;
    for (size_t i = d.breakpoints.size(); i > 0; --i)
      if (offset > d.breakpoints[i - 1]) return d.slopes[i];
    return d.slopes.front();
  }

  int64_t max_abs_slope() const {
    int64_t m = 0;
    for (const EdgeData& d : edges_)
      for (int64_t s : d.slopes) m = std::max(m, std::abs(s));
    return m;
  }

  bool operator==(const PLFunction& other) const {
    if (vertex_values_ != other.vertex_values_) return false;
    if (edges_.size() != other.edges_.size()) return false;
    for (size_t e = 0; e < edges_.size(); ++e) {
      if (canonical_edge(edges_[e]) != canonical_edge(other.edges_[e]))
        return false;
    }
    return true;
  }

 private:
  std::vector<BigRational> vertex_values_;
  std::vector<EdgeData> edges_;

  static std::pair<std::vector<BigRational>, std::vector<int64_t>>
  canonical_edge(const EdgeData& d) {
    std::vector<BigRational> bp;
    std::vector<int64_t> sl{d.slopes[0]};
    for (size_t i = 0; i < d.breakpoints.size(); ++i) {
      if (d.slopes[i + 1] == sl.back()) continue;  // drop spurious breakpoint
      bp.push_back(d.breakpoints[i]);
      sl.push_back(d.slopes[i + 1]);
    }
    return {bp, sl};
  }
};

// ord_x(F): minus the sum of outgoing derivatives over the tangent
// directions at x (equivalently the sum of incoming slopes).
inline int64_t ord_at(const MetricGraph& g, const PLFunction& f,
                      const GraphPoint& p) {
  if (p.is_vertex()) {
    int64_t total = 0;
    for (auto [e, from_end] : g.incident_ends(p.vertex)) {
      const auto& d = f.edge_data(e);
      total += from_end ? d.slopes.front() : -d.slopes.back();
    }
    return -total;
  }
  int64_t out = f.slope_right(g, p.edge, p.offset) -
                f.slope_left(g, p.edge, p.offset);
  return -out;
}

inline GraphDivisor divisor_of(const MetricGraph& g, const PLFunction& f) {
  GraphDivisor div;
  for (int v = 0; v < g.vertex_count(); ++v) {
    GraphPoint p = GraphPoint::at_vertex(v);
    div.add(p, ord_at(g, f, p));
  }
  for (int e = 0; e < g.edge_count(); ++e)
    for (const BigRational& b : f.edge_data(e).breakpoints) {
      GraphPoint p = GraphPoint::on_edge(e, b);
      div.add(p, ord_at(g, f, p));
    }
  return div;
}

struct CanonicalSectionCheck {
  bool ok = true;
  std::optional<GraphPoint> witness;
};

// div(F) + K_Gamma >= 0 pointwise; off vertices and breakpoints both terms
// vanish, so only those points need checking.
inline CanonicalSectionCheck is_canonical_section(const MetricGraph& g,
                                                  const PLFunction& f) {
  GraphDivisor K = canonical_divisor(g);
  CanonicalSectionCheck res;
  for (int v = 0; v < g.vertex_count(); ++v) {
    GraphPoint p = GraphPoint::at_vertex(v);
    if (ord_at(g, f, p) + K.coeff(p) < 0) {
      res.ok = false;
      res.witness = p;
      return res;
    }
  }
  for (int e = 0; e < g.edge_count(); ++e)
    for (const BigRational& b : f.edge_data(e).breakpoints) {
      GraphPoint p = GraphPoint::on_edge(e, b);
      if (ord_at(g, f, p) < 0) {
        res.ok = false;
        res.witness = p;
        return res;
      }
    }
  return res;
}

// Slope bound for sections of the tropical canonical bundle.
inline bool check_slope_bound(const MetricGraph& g, const PLFunction& f) {
  return f.max_abs_slope() <= 2 * g.genus() - 1;
}

// Zeros of F on the open star around `center` cut at the given interior
// offsets: the sum of the inward slopes at the cut points. Checked against
// the divisor mass strictly inside the region.
inline int64_t zeros_from_slopes(const MetricGraph& g, int center,
                                 const std::map<int, BigRational>& cuts,
                                 const PLFunction& f) {
  int64_t inward_sum = 0;
  int64_t mass = ord_at(g, f, GraphPoint::at_vertex(center));
  if (mass < 0) throw Error("PoleInRegion", "pole at the star center");
  for (auto [e, from_end] : g.incident_ends(center)) {
    if (g.is_loop(e))
      throw Error("LoopEdge",
                  "star regions must not contain loop edges; subdivide first");
    auto it = cuts.find(e);
    if (it == cuts.end())
      throw Error("InvalidGraph", "missing cut for adjacent edge " +
                                      g.edge(e).id);
    const BigRational& cut = it->second;
    if (!(BigRational(0) < cut && cut < g.edge(e).length))
      throw Error("InvalidGraph", "cut offset must be interior");
    // Inward slope at the cut point, toward the center.
    if (from_end) {
      inward_sum += -f.slope_left(g, e, cut);
      for (const BigRational& b : f.edge_data(e).breakpoints)
        if (b < cut) {
          int64_t o = ord_at(g, f, GraphPoint::on_edge(e, b));
          if (o < 0) throw Error("PoleInRegion", "pole inside star region");
          mass += o;
        }
    } else {
      inward_sum += f.slope_right(g, e, g.edge(e).length - cut);
      for (const BigRational& b : f.edge_data(e).breakpoints)
        if (b > g.edge(e).length - cut) {
          int64_t o = ord_at(g, f, GraphPoint::on_edge(e, b));
          if (o < 0) throw Error("PoleInRegion", "pole inside star region");
          mass += o;
        }
    }
  }
  if (inward_sum != mass)
    throw Error("SlopeMassMismatch",
                "inward slope sum disagrees with interior divisor mass");
  return inward_sum;
}

// Lower envelope of the lines {intercept_i + slope_i * s} over [0, L],
// returned as PL data (breakpoints interior to (0, L), one slope per
// segment). Slopes strictly decrease left to right.
struct EnvelopeSegment {
  std::vector<BigRational> breakpoints;
  std::vector<int64_t> slopes;
  BigRational value_at_zero;
};

inline EnvelopeSegment lower_envelope(
    std::vector<std::pair<BigRational, int64_t>> lines, const BigRational& L) {
  if (lines.empty()) throw Error("InvalidParameters", "no lines");
  EnvelopeSegment env;
  // Active line at s = 0+ (min value, then min slope).
  size_t active = 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    BigRational vi = lines[i].first, va = lines[active].first;
    if (vi < va || (vi == va && lines[i].second < lines[active].second))
      active = i;
  }
  env.value_at_zero = lines[active].first;
  BigRational s(0);
  for (;;) {
    // Next crossing after s where some line dips below the active one.
    bool found = false;
    BigRational best;
    size_t best_i = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].second >= lines[active].second) continue;
      // intercept_i + m_i x = intercept_a + m_a x
      BigRational x = (lines[i].first - lines[active].first) /
                      BigRational(lines[active].second - lines[i].second);
      if (!(x > s) || !(x < L)) continue;
      if (!found || x < best ||
          (x == best && lines[i].second < lines[best_i].second)) {
        found = true;
        best = x;
        best_i = i;
      }
    }
    if (!found) break;
    env.breakpoints.push_back(best);
    env.slopes.push_back(lines[active].second);
    active = best_i;
    s = best;
  }
  env.slopes.push_back(lines[active].second);
  return env;
}

// PLFunction on a single segment graph [0, L] from coefficient lines
// v(a_i) + i*s (the Gauss-point formula for -log|f| on a segment skeleton).
inline PLFunction pl_from_coefficient_lines(
    const MetricGraph& segment,
    const std::vector<std::pair<BigRational, int64_t>>& lines) {
  const BigRational& L = segment.edge(0).length;
  EnvelopeSegment env = lower_envelope(lines, L);
  BigRational end_value = env.value_at_zero;
  BigRational last(0);
  for (size_t i = 0; i < env.slopes.size(); ++i) {
    BigRational end = i < env.breakpoints.size() ? env.breakpoints[i] : L;
    end_value += BigRational(env.slopes[i]) * (end - last);
    last = end;
  }
  std::vector<BigRational> vv{env.value_at_zero, end_value};
  std::vector<PLFunction::EdgeData> ed{{env.breakpoints, env.slopes}};
  return PLFunction(segment, std::move(vv), std::move(ed));
}

// PLFunction on [0, L] built from root data: F(s) = sum m_j * min(s, v_j),
// clipped to the segment.
inline PLFunction pl_from_root_valuations(
    const MetricGraph& segment,
    const std::vector<std::pair<BigRational, int64_t>>& roots) {
  const BigRational& L = segment.edge(0).length;
  std::vector<BigRational> bps;
  for (const auto& [v, m] : roots)
    if (BigRational(0) < v && v < L) bps.push_back(v);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<int64_t> slopes;
  for (size_t i = 0; i <= bps.size(); ++i) {
    BigRational lo = i == 0 ? BigRational(0) : bps[i - 1];
    int64_t slope = 0;
    for (const auto& [v, m] : roots)
      if (v > lo) slope += m;  // min(s, v) still rising on this segment
    slopes.push_back(slope);
  }
  BigRational v0(0);  // every min(0, v_j) vanishes for v_j >= 0
  BigRational end_value = v0;
  BigRational last(0);
  for (size_t i = 0; i < slopes.size(); ++i) {
    BigRational end = i < bps.size() ? bps[i] : L;
    end_value += BigRational(slopes[i]) * (end - last);
    last = end;
  }
  std::vector<BigRational> vv{v0, end_value};
  std::vector<PLFunction::EdgeData> ed{{bps, slopes}};
  return PLFunction(segment, std::move(vv), std::move(ed));
}

}  // namespace chabtrop
