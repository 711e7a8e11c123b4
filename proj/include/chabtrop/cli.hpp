#pragma once

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chabtrop/fixtures.hpp"
#include "chabtrop/io_json.hpp"
#include "chabtrop/trop_jacobian.hpp"

namespace chabtrop {

namespace cli_detail {

using nlohmann::json;

inline json cmd_bounds_eval(const std::string& file) {
  BoundRequest req = io::parse_bound_request(io::load_json_file(file));
  BoundResult res = evaluate_bound(req);
  json out = io::dump_bound_result(res);
  if (!res.all_satisfied())
    throw Error("HypothesisFailure", out.dump());
  return out;
}

inline json cmd_np(const std::string& p, const std::string& r,
                   const std::string& n0) {
  BigInt np = compute_Np(BigInt::from_string(p).to_int64(),
                         BigRational::from_string(r),
                         BigInt::from_string(n0));
  return json{{"Np", io::dump_bigint(np)}};
}

inline json cmd_curve_count(const std::string& file, const std::string& p) {
  HyperellipticCurve c = io::parse_curve(io::load_json_file(file));
  int64_t prime = BigInt::from_string(p).to_int64();
  int64_t n = count_points_Fp(c, prime);
  return json{{"points_Fp", n},
              {"genus", c.genus()},
              {"hasse_weil_window", hasse_weil_window(c, prime, n)}};
}

inline json cmd_curve_coleman(const std::string& file, const std::string& p,
                              const std::string& r) {
  HyperellipticCurve c = io::parse_curve(io::load_json_file(file));
  ColemanBound cb = coleman_bound_for_curve(c, BigInt::from_string(p).to_int64(),
                                            BigInt::from_string(r).to_int64());
  return json{{"bound", cb.bound}, {"points_Fp", cb.points_fp}};
}

inline json cmd_curve_check_point(const std::string& file, const std::string& x,
                                  const std::string& y) {
  HyperellipticCurve c = io::parse_curve(io::load_json_file(file));
  bool on = is_rational_point(c, BigRational::from_string(x),
                              BigRational::from_string(y));
  return json{{"on_curve", on}};
}

inline json cmd_curve_tiny_int(const std::string& file, const std::string& p,
                               const std::string& disc_spec, int64_t i,
                               const std::string& t1, const std::string& t2,
                               int64_t terms) {
  HyperellipticCurve c = io::parse_curve(io::load_json_file(file));
  size_t comma = disc_spec.find(',');
  if (comma == std::string::npos)
    throw io::parse_error("disc spec must be 'a,b'");
  int64_t prime = BigInt::from_string(p).to_int64();
  ResidueDisc disc(c, prime,
                   BigInt::from_string(disc_spec.substr(0, comma)).to_int64(),
                   BigInt::from_string(disc_spec.substr(comma + 1)).to_int64());
  PadicNumber v =
      tiny_integral(disc, i, PadicNumber(prime, BigRational::from_string(t1)),
                    PadicNumber(prime, BigRational::from_string(t2)), terms);
  return json{{"integral", io::dump_padic(v)}};
}

inline json cmd_graph_canonical(const std::string& file) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(file));
  GraphDivisor K = canonical_divisor(g);
  json out = io::dump_graph_divisor(g, K);
  out["degree"] = K.degree();
  return out;
}

inline json cmd_graph_genus(const std::string& file) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(file));
  return json{{"genus", g.genus()},
              {"first_betti", g.first_betti()},
              {"vertices", g.vertex_count()},
              {"edges", g.edge_count()}};
}

inline json cmd_graph_slope_check(const std::string& gfile,
                                  const std::string& plfile) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(gfile));
  PLFunction f = io::parse_pl_function(g, io::load_json_file(plfile));
  auto section = is_canonical_section(g, f);
  json out{{"canonical_section", section.ok},
           {"max_abs_slope", f.max_abs_slope()},
           {"slope_bound", 2 * g.genus() - 1},
           {"bound_holds", check_slope_bound(g, f)}};
  if (section.witness)
    out["witness"] = io::dump_graph_point(g, *section.witness);
  return out;
}

inline json cmd_graph_jacobian(const std::string& file) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(file));
  PeriodLattice L = period_lattice(g);
  json gram = json::array();
  for (const auto& row : L.gram) {
    json r = json::array();
    for (const auto& x : row) r.push_back(io::dump_rational(x));
    gram.push_back(r);
  }
  return json{{"rank", L.rank()}, {"gram", gram}};
}

inline json cmd_graph_aj(const std::string& file, const std::string& base,
                         const std::string& point) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(file));
  PeriodLattice L = period_lattice(g);
  auto v = abel_jacobi(g, L, io::parse_graph_point(g, base),
                       io::parse_graph_point(g, point));
  json coords = json::array();
  for (const auto& x : v) coords.push_back(io::dump_rational(x));
  return json{{"coordinates", coords}, {"rank", L.rank()}};
}

inline json cmd_graph_principal(const std::string& gfile,
                                const std::string& dfile) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(gfile));
  GraphDivisor d = io::parse_graph_divisor(g, io::load_json_file(dfile));
  bool principal = is_principal(g, d);
  return json{{"principal", principal}, {"degree", d.degree()}};
}

inline json cmd_chip_rank(const std::string& gfile, const std::string& dfile) {
  FiniteGraph g = io::parse_finite_graph(io::load_json_file(gfile));
  IntDivisor d = io::parse_int_divisor(g, io::load_json_file(dfile));
  int64_t rank = bn_rank(g, d);
  return json{{"rank", rank}, {"degree", degree(d)}};
}

inline json cmd_chip_rr(const std::string& gfile, const std::string& dfile) {
  FiniteGraph g = io::parse_finite_graph(io::load_json_file(gfile));
  IntDivisor d = io::parse_int_divisor(g, io::load_json_file(dfile));
  RankEngine e(g);
  IntDivisor k = canonical_divisor(g);
  IntDivisor kd = k;
  for (size_t i = 0; i < kd.size(); ++i) kd[i] -= d[i];
  int64_t rk = e.rank(d), rk_kd = e.rank(kd);
  bool rr = check_riemann_roch(g, d, &e);
  return json{{"rank", rk},
              {"rank_K_minus_D", rk_kd},
              {"degree", degree(d)},
              {"genus", g.genus()},
              {"riemann_roch_holds", rr}};
}

inline json cmd_series_zeros(const std::string& file, const std::string& win) {
  PadicSeries s = io::parse_series(io::load_json_file(file));
  ValuationWindow w = io::parse_window(win);
  // Throwing calls stay outside json initializer lists: a throw while the
  // list's temporaries are live leaks the already-built json_ref entries.
  int64_t zeros = count_zeros(s, w);
  return json{{"zeros", zeros}, {"window", w.to_string()}};
}

inline json cmd_series_antider(const std::string& file) {
  PadicSeries s = io::parse_series(io::load_json_file(file));
  json inner = io::dump_series(antiderivative(s));
  return json{{"antiderivative", std::move(inner)}};
}

inline json cmd_dagger(const std::string& file) {
  MetricGraph g = io::parse_metric_graph(io::load_json_file(file));
  DaggerReport rep = check_dagger(g);
  json out{{"dagger", rep.holds}, {"genus", g.genus()}};
  if (rep.witness) out["witness"] = *rep.witness;
  return out;
}

inline json cmd_fixtures(const std::string& dir) {
  auto write = [&](const std::string& name, const json& j) {
    std::ofstream f(dir + "/" + name);
    if (!f) throw Error("IOError", "cannot write " + dir + "/" + name);
    f << j.dump(2) << "\n";
  };
  auto points = [](std::vector<std::pair<std::string, std::string>> pts) {
    json out = json::array();
    for (auto& [x, y] : pts) out.push_back(json::array({x, y}));
    return out;
  };
  write("gordon_grant.json", io::dump_curve(fixtures::gordon_grant()));
  write("gordon_grant_points.json",
        points({{"0", "0"},
                {"1", "0"},
                {"2", "0"},
                {"5", "0"},
                {"6", "0"},
                {"3", "6"},
                {"3", "-6"},
                {"10", "120"},
                {"10", "-120"}}));
  write("mccallum_poonen.json", io::dump_curve(fixtures::mccallum_poonen()));
  write("mccallum_poonen_points.json",
        points({{"0", "1"}, {"0", "-1"}, {"-3", "1"}, {"-3", "-1"}}));
  write("krzb.json", io::dump_curve(fixtures::krzb_genus3()));
  write("krzb_points.json", points({{"50", "0"},
                                    {"9", "0"},
                                    {"3", "0"},
                                    {"-13", "0"},
                                    {"25", "20247920"},
                                    {"25", "-20247920"}}));
  write("theta.json",
        io::dump_metric_graph(fixtures::theta_graph(
            BigRational(1), BigRational(1), BigRational(1))));
  return json{{"written",
               {"gordon_grant.json", "gordon_grant_points.json",
                "mccallum_poonen.json", "mccallum_poonen_points.json",
                "krzb.json", "krzb_points.json", "theta.json"}},
              {"dir", dir}};
}

}  // namespace cli_detail

// Command-line driver: one subcommand per invocation, single JSON document
// on stdout. Exit codes: 0 success, 1 domain error (hypothesis failures and
// invariant violations), 2 parse or schema errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using cli_detail::json;
  CLI::App app{"chabtrop: effective Chabauty-Coleman and tropical toolkit"};
  app.require_subcommand(1);
  json result;
  bool have_result = false;
  auto set = [&](json j) {
    result = std::move(j);
    have_result = true;
  };

  std::string file, file2, arg1, arg2, arg3, arg4;
  int64_t idx = 0, terms = 16;

  auto* bounds = app.add_subcommand("bounds", "uniform bound calculators");
  auto* beval = bounds->add_subcommand("eval", "evaluate a bound request");
  beval->add_option("request", file, "request JSON file")->required();
  beval->callback([&] { set(cli_detail::cmd_bounds_eval(file)); });

  auto* np = app.add_subcommand("np", "N_p(r, N0) correction term");
  np->add_option("p", arg1)->required();
  np->add_option("r", arg2)->required();
  np->add_option("N0", arg3)->required();
  np->callback([&] { set(cli_detail::cmd_np(arg1, arg2, arg3)); });

  auto* curve = app.add_subcommand("curve", "hyperelliptic curve operations");
  auto* ccount = curve->add_subcommand("count", "#X(F_p)");
  ccount->add_option("curve", file)->required();
  ccount->add_option("p", arg1)->required();
  ccount->callback([&] { set(cli_detail::cmd_curve_count(file, arg1)); });
  auto* ccole = curve->add_subcommand("coleman", "effective Chabauty bound");
  ccole->add_option("curve", file)->required();
  ccole->add_option("p", arg1)->required();
  ccole->add_option("r", arg2)->required();
  ccole->callback([&] { set(cli_detail::cmd_curve_coleman(file, arg1, arg2)); });
  auto* cpt = curve->add_subcommand("check-point", "is (x, y) on the curve?");
  cpt->add_option("curve", file)->required();
  cpt->add_option("x", arg1)->required();
  cpt->add_option("y", arg2)->required();
  cpt->callback(
      [&] { set(cli_detail::cmd_curve_check_point(file, arg1, arg2)); });
  auto* ctiny = curve->add_subcommand("tiny-int", "tiny integral on a disc");
  ctiny->add_option("curve", file)->required();
  ctiny->add_option("p", arg1)->required();
  ctiny->add_option("disc", arg2, "disc center 'a,b'")->required();
  ctiny->add_option("i", idx, "differential index")->required();
  ctiny->add_option("t1", arg3)->required();
  ctiny->add_option("t2", arg4)->required();
  ctiny->add_option("--terms", terms, "series truncation length");
  ctiny->callback([&] {
    set(cli_detail::cmd_curve_tiny_int(file, arg1, arg2, idx, arg3, arg4,
                                       terms));
  });

  auto* graph = app.add_subcommand("graph", "metric graph operations");
  auto* gcan = graph->add_subcommand("canonical", "canonical divisor");
  gcan->add_option("graph", file)->required();
  gcan->callback([&] { set(cli_detail::cmd_graph_canonical(file)); });
  auto* ggen = graph->add_subcommand("genus", "genus and Betti number");
  ggen->add_option("graph", file)->required();
  ggen->callback([&] { set(cli_detail::cmd_graph_genus(file)); });
  auto* gslope = graph->add_subcommand("slope-check", "canonical section test");
  gslope->add_option("graph", file)->required();
  gslope->add_option("pl", file2)->required();
  gslope->callback([&] { set(cli_detail::cmd_graph_slope_check(file, file2)); });
  auto* gjac = graph->add_subcommand("jacobian", "period lattice Gram matrix");
  gjac->add_option("graph", file)->required();
  gjac->callback([&] { set(cli_detail::cmd_graph_jacobian(file)); });
  auto* gaj = graph->add_subcommand("aj", "tropical Abel-Jacobi coordinates");
  gaj->add_option("graph", file)->required();
  gaj->add_option("basepoint", arg1, "vertex id or edge@offset")->required();
  gaj->add_option("point", arg2, "vertex id or edge@offset")->required();
  gaj->callback([&] { set(cli_detail::cmd_graph_aj(file, arg1, arg2)); });
  auto* gprin = graph->add_subcommand("principal", "degree-zero divisor test");
  gprin->add_option("graph", file)->required();
  gprin->add_option("divisor", file2)->required();
  gprin->callback([&] { set(cli_detail::cmd_graph_principal(file, file2)); });

  auto* chip = app.add_subcommand("chip", "chip-firing on finite graphs");
  auto* crank = chip->add_subcommand("rank", "Baker-Norine rank");
  crank->add_option("graph", file)->required();
  crank->add_option("divisor", file2)->required();
  crank->callback([&] { set(cli_detail::cmd_chip_rank(file, file2)); });
  auto* crr = chip->add_subcommand("rr", "Riemann-Roch report");
  crr->add_option("graph", file)->required();
  crr->add_option("divisor", file2)->required();
  crr->callback([&] { set(cli_detail::cmd_chip_rr(file, file2)); });

  auto* series = app.add_subcommand("series", "p-adic series operations");
  auto* szeros = series->add_subcommand("zeros", "certified zero count");
  szeros->add_option("series", file)->required();
  szeros->add_option("window", arg1, "valuation window, e.g. (0,2)")
      ->required();
  szeros->callback([&] { set(cli_detail::cmd_series_zeros(file, arg1)); });
  auto* santi = series->add_subcommand("antider", "termwise antiderivative");
  santi->add_option("series", file)->required();
  santi->callback([&] { set(cli_detail::cmd_series_antider(file)); });

  auto* dagger = app.add_subcommand("dagger", "condition (dagger) check");
  dagger->add_option("graph", file)->required();
  dagger->callback([&] { set(cli_detail::cmd_dagger(file)); });

  auto* fix = app.add_subcommand("fixtures", "write worked-example fixtures");
  std::string dir = ".";
  fix->add_option("--dir", dir, "output directory");
  fix->callback([&] { set(cli_detail::cmd_fixtures(dir)); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    json msg{{"error", "UsageError"}, {"message", e.what()}};
    out << msg.dump(2) << std::endl;
    err << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    json msg{{"error", e.code()}, {"message", e.what()}};
    out << msg.dump(2) << std::endl;
    err << e.what() << std::endl;
    return e.code() == "ParseError" ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    json msg{{"error", "ParseError"}, {"message", e.what()}};
    out << msg.dump(2) << std::endl;
    err << e.what() << std::endl;
    return 2;
  }
  if (have_result) out << result.dump(2) << std::endl;
  return 0;
}

}  // namespace chabtrop
