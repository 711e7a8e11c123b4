#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chabtrop/bounds.hpp"
#include "chabtrop/chipfiring.hpp"
#include "chabtrop/hyperelliptic.hpp"
#include "chabtrop/metric_graph.hpp"
#include "chabtrop/series.hpp"

namespace chabtrop {
namespace io {

using nlohmann::json;

inline Error parse_error(const std::string& what) {
  return Error("ParseError", what);
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(std::string("malformed JSON in ") + path + ": " +
                      e.what());
  }
  return j;
}

inline BigInt parse_bigint(const json& j, const std::string& what) {
  try {
    if (j.is_number_integer())
      return BigInt(static_cast<long long>(j.get<int64_t>()));
    if (j.is_string()) return BigInt::from_string(j.get<std::string>());
  } catch (const Error& e) {
    throw parse_error(what + ": " + e.what());
  }
  throw parse_error(what + " must be an integer or integer string");
}

inline BigRational parse_rational(const json& j, const std::string& what) {
  try {
    if (j.is_number_integer())
      return BigRational(BigInt(static_cast<long long>(j.get<int64_t>())));
    if (j.is_string()) return BigRational::from_string(j.get<std::string>());
  } catch (const Error& e) {
    throw parse_error(what + ": " + e.what());
  }
  throw parse_error(what + " must be an integer or rational string");
}

inline json dump_bigint(const BigInt& v) {
  if (v.fits_int64()) return json(v.to_int64());
  return json(v.to_string());
}

inline json dump_rational(const BigRational& v) {
  if (v.is_integer() && v.num().fits_int64()) return json(v.num().to_int64());
  return json(v.to_string());
}

// ---- curves: {"c": -1, "f": [a0, a1, ...]} --------------------------------

inline HyperellipticCurve parse_curve(const json& j) {
  if (!j.is_object() || !j.contains("c") || !j.contains("f") ||
      !j["f"].is_array())
    throw parse_error("curve needs fields c and f (array)");
  std::vector<BigInt> f;
  for (const auto& a : j["f"]) f.push_back(parse_bigint(a, "f coefficient"));
  return HyperellipticCurve(parse_bigint(j["c"], "c"), std::move(f));
}

inline json dump_curve(const HyperellipticCurve& c) {
  json f = json::array();
  for (const auto& a : c.f()) f.push_back(dump_bigint(a));
  return json{{"c", dump_bigint(c.c())}, {"f", f}};
}

// ---- series: {"prime": p, "low": n, "coeffs": ["a/b", ...]} ---------------

inline PadicSeries parse_series(const json& j) {
  if (!j.is_object() || !j.contains("prime") || !j.contains("low") ||
      !j.contains("coeffs") || !j["coeffs"].is_array())
    throw parse_error("series needs prime, low and coeffs");
  int64_t p = parse_bigint(j["prime"], "prime").to_int64();
  int64_t low = parse_bigint(j["low"], "low").to_int64();
  std::vector<BigRational> coeffs;
  for (const auto& a : j["coeffs"])
    coeffs.push_back(parse_rational(a, "coefficient"));
  TailBound tail = TailBound::exact();
  if (j.contains("tail")) {
    const json& t = j["tail"];
    std::string kind = t.value("kind", "exact");
    if (kind == "exact")
      tail = TailBound::exact();
    else if (kind == "unknown")
      tail = TailBound::unknown();
    else if (kind == "affine")
      tail = TailBound::affine(parse_bigint(t.at("base"), "tail base").to_int64(),
                               parse_bigint(t.at("gradient"), "tail gradient")
                                   .to_int64());
    else
      throw parse_error("unknown tail kind " + kind);
  }
  try {
    return PadicSeries::from_rationals(p, low, coeffs, tail);
  } catch (const json::exception& e) {
    throw parse_error(e.what());
  }
}

inline json dump_series(const PadicSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(dump_rational(c.to_rational()));
  json tail;
  switch (s.tail().kind) {
    case TailBound::Kind::Exact:
      tail = json{{"kind", "exact"}};
      break;
    case TailBound::Kind::Unknown:
      tail = json{{"kind", "unknown"}};
      break;
    case TailBound::Kind::Affine:
      tail = json{{"kind", "affine"},
                  {"base", s.tail().base},
                  {"gradient", s.tail().gradient}};
      break;
  }
  return json{{"prime", s.prime()},
              {"low", s.low()},
              {"coeffs", coeffs},
              {"tail", tail}};
}

// ---- metric graphs --------------------------------------------------------

inline MetricGraph parse_metric_graph(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw parse_error("graph needs vertices and edges");
  std::vector<MetricGraph::Vertex> vs;
  std::vector<std::string> ids;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id"))
      throw parse_error("vertex needs an id");
    int64_t w = v.contains("weight")
                    ? parse_bigint(v["weight"], "weight").to_int64()
                    : 0;
    vs.push_back({v["id"].get<std::string>(), w});
    ids.push_back(vs.back().id);
  }
  auto index_of = [&](const std::string& id) {
    for (size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return static_cast<int>(i);
    throw parse_error("edge endpoint references unknown vertex " + id);
  };
  std::vector<MetricGraph::Edge> es;
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("id") || !e.contains("from") ||
        !e.contains("to") || !e.contains("length"))
      throw parse_error("edge needs id, from, to, length");
    es.push_back({e["id"].get<std::string>(),
                  index_of(e["from"].get<std::string>()),
                  index_of(e["to"].get<std::string>()),
                  parse_rational(e["length"], "edge length")});
  }
  return MetricGraph(std::move(vs), std::move(es));
}

inline json dump_metric_graph(const MetricGraph& g) {
  json vs = json::array(), es = json::array();
  for (const auto& v : g.vertices())
    vs.push_back(json{{"id", v.id}, {"weight", v.weight}});
  for (const auto& e : g.edges())
    es.push_back(json{{"id", e.id},
                      {"from", g.vertex(e.from).id},
                      {"to", g.vertex(e.to).id},
                      {"length", dump_rational(e.length)}});
  return json{{"vertices", vs}, {"edges", es}};
}

// ---- PL functions ---------------------------------------------------------

inline PLFunction parse_pl_function(const MetricGraph& g, const json& j) {
  if (!j.is_object() || !j.contains("vertex_values") || !j.contains("edges"))
    throw parse_error("pl function needs vertex_values and edges");
  std::vector<BigRational> vv(static_cast<size_t>(g.vertex_count()),
                              BigRational(0));
  for (const auto& [id, val] : j["vertex_values"].items())
    vv[static_cast<size_t>(g.vertex_id(id))] =
        parse_rational(val, "vertex value");
  std::vector<PLFunction::EdgeData> ed(static_cast<size_t>(g.edge_count()));
  for (auto& d : ed) d.slopes = {0};
  for (const auto& [id, data] : j["edges"].items()) {
    PLFunction::EdgeData d;
    d.breakpoints.clear();
    d.slopes.clear();
    if (data.contains("breakpoints"))
      for (const auto& b : data["breakpoints"])
        d.breakpoints.push_back(parse_rational(b, "breakpoint"));
    if (!data.contains("slopes")) throw parse_error("edge data needs slopes");
    for (const auto& s : data["slopes"])
      d.slopes.push_back(parse_bigint(s, "slope").to_int64());
    ed[static_cast<size_t>(g.edge_id(id))] = std::move(d);
  }
  return PLFunction(g, std::move(vv), std::move(ed));
}

// ---- metric-graph points and divisors -------------------------------------

// "v1" names a vertex; "e1@3/4" an interior edge point.
inline GraphPoint parse_graph_point(const MetricGraph& g,
                                    const std::string& token) {
  size_t at = token.find('@');
  if (at == std::string::npos) return GraphPoint::at_vertex(g.vertex_id(token));
  std::string edge = token.substr(0, at);
  BigRational off = BigRational::from_string(token.substr(at + 1));
  return GraphPoint::on_edge(g.edge_id(edge), off);
}

inline std::string dump_graph_point(const MetricGraph& g, const GraphPoint& p) {
  if (p.is_vertex()) return g.vertex(p.vertex).id;
  return g.edge(p.edge).id + "@" + p.offset.to_string();
}

inline GraphDivisor parse_graph_divisor(const MetricGraph& g, const json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw parse_error("divisor needs a points array");
  GraphDivisor d;
  for (const auto& e : j["points"]) {
    if (!e.contains("coeff")) throw parse_error("divisor point needs coeff");
    int64_t c = parse_bigint(e["coeff"], "coeff").to_int64();
    if (e.contains("vertex")) {
      d.add(GraphPoint::at_vertex(g.vertex_id(e["vertex"].get<std::string>())),
            c);
    } else if (e.contains("edge") && e.contains("offset")) {
      d.add(GraphPoint::on_edge(g.edge_id(e["edge"].get<std::string>()),
                                parse_rational(e["offset"], "offset")),
            c);
    } else {
      throw parse_error("divisor point needs vertex or edge+offset");
    }
  }
  return d;
}

inline json dump_graph_divisor(const MetricGraph& g, const GraphDivisor& d) {
  json pts = json::array();
  for (const auto& [p, c] : d.entries()) {
    json e;
    if (p.is_vertex()) {
      e["vertex"] = g.vertex(p.vertex).id;
    } else {
      e["edge"] = g.edge(p.edge).id;
      e["offset"] = dump_rational(p.offset);
    }
    e["coeff"] = c;
    pts.push_back(e);
  }
  return json{{"points", pts}};
}

// ---- finite graphs and integer divisors -----------------------------------

inline FiniteGraph parse_finite_graph(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw parse_error("finite graph needs vertices and edges");
  std::vector<std::string> names;
  for (const auto& v : j["vertices"]) names.push_back(v.get<std::string>());
  auto index_of = [&](const std::string& id) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == id) return static_cast<int>(i);
    throw parse_error("edge references unknown vertex " + id);
  };
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw parse_error("finite-graph edges are [u, v] pairs");
    edges.emplace_back(index_of(e[0].get<std::string>()),
                       index_of(e[1].get<std::string>()));
  }
  return FiniteGraph::from_edge_list(std::move(names), edges);
}

inline IntDivisor parse_int_divisor(const FiniteGraph& g, const json& j) {
  if (!j.is_object()) throw parse_error("divisor must be an object");
  IntDivisor d(static_cast<size_t>(g.vertex_count()), 0);
  for (const auto& [name, c] : j.items())
    d[static_cast<size_t>(g.vertex_id(name))] =
        parse_bigint(c, "divisor coefficient").to_int64();
  return d;
}

// ---- bound requests --------------------------------------------------------

inline BoundRequest parse_bound_request(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw parse_error("bound request needs a kind");
  BoundRequest r;
  r.kind = j["kind"].get<std::string>();
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object())
      throw parse_error("parameters must be an object");
    for (const auto& [k, v] : j["parameters"].items())
      r.params.emplace(k, parse_rational(v, "parameter " + k));
  }
  return r;
}

inline json dump_bound_result(const BoundResult& r) {
  json hyps = json::array();
  for (const auto& h : r.hypotheses)
    hyps.push_back(json{{"name", h.name}, {"satisfied", h.satisfied}});
  json out{{"hypotheses", hyps}, {"formula", r.formula}};
  if (r.value) out["value"] = dump_bigint(*r.value);
  for (const auto& [k, v] : r.extras) out[k] = dump_bigint(v);
  return out;
}

// ---- valuation windows: "(0,2)", "[1,inf)" --------------------------------

inline ValuationWindow parse_window(const std::string& s) {
  if (s.size() < 3) throw parse_error("bad window " + s);
  char open = s.front(), close = s.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']'))
    throw parse_error("window must look like (lo,hi] etc.");
  std::string body = s.substr(1, s.size() - 2);
  size_t comma = body.find(',');
  if (comma == std::string::npos) throw parse_error("window needs a comma");
  std::string lo = body.substr(0, comma), hi = body.substr(comma + 1);
  ValuationWindow w;
  w.lo = BigRational::from_string(lo);
  w.lo_open = open == '(';
  if (hi == "inf" || hi == "+inf") {
    w.hi_infinite = true;
    w.hi_open = true;
  } else {
    w.hi_infinite = false;
    w.hi = BigRational::from_string(hi);
    w.hi_open = close == ')';
  }
  w.validate();
  return w;
}

inline json dump_padic(const PadicNumber& x) {
  json out{{"prime", x.prime()}};
  if (x.is_zero()) {
    out["value"] = 0;
    out["valuation"] = "inf";
    return out;
  }
  out["valuation"] = x.finite_valuation();
  out["unit"] = dump_rational(x.unit());
  if (!x.precision_exact()) {
    out["precision"] = x.precision();
    // A few explicit digits of the unit for regression diffs.
    int64_t digits = std::min<int64_t>(x.precision(), 12);
    json ds = json::array();
    BigInt u = x.unit_mod_pk(digits);
    for (int64_t i = 0; i < digits; ++i) {
      BigInt q, r;
      BigInt::divmod(u, BigInt(x.prime()), q, r);
      ds.push_back(r.to_int64());
      u = q;
    }
    out["digits"] = ds;
  } else {
    out["precision"] = "exact";
  }
  return out;
}

}  // namespace io
}  // namespace chabtrop
