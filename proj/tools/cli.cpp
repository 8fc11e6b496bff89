#include "cli.hpp"

#include "intrinsic/approximation.hpp"
#include "intrinsic/dirichlet.hpp"
#include "intrinsic/enumerate.hpp"
#include "intrinsic/game.hpp"
#include "intrinsic/simplex.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#ifndef INTRINSIC_VERSION
#define INTRINSIC_VERSION "0.0.0"
#endif

namespace intrinsic::cli {

namespace {

std::string decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string flatten(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_fraction(const Json& v) {
  static const std::regex re("-?[0-9]+/[0-9]+");
  return v.is_string() && std::regex_match(v.get_ref<const std::string&>(), re);
}

Json point_json(const RationalPoint& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.dim(); ++i) a.push_back(to_string(p.coordinate(i)));
  return a;
}

Json vector_json(const RationalVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_string(v(i)));
  return a;
}

Json interval_json(const RationalInterval& iv) { return Json::array({to_string(iv.lo), to_string(iv.hi)}); }

// Settings shared by every subcommand.
struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::string output;
  std::string format = "jsonl";
  std::string precision = "2^-64";
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  bool emit_config = false;

  Json echo() const {
    return Json{{"seed", seed}, {"budget", budget}, {"format", format}, {"precision", to_string(parse_rational(precision))}};
  }
};

Integer parse_height(const std::string& s) {
  const Integer T = parse_integer(s);
  if (T < 1) throw InvalidArgument("height must be at least 1");
  return T;
}

Rational parse_positive(const std::string& s, const char* what) {
  const Rational r = parse_rational(s);
  if (r <= 0) throw InvalidArgument(std::string(what) + " must be positive");
  return r;
}

// ---------------------------------------------------------------------------
// ckd

struct CkdArgs {
  std::vector<unsigned> values;
  unsigned table = 0;
  bool veronese = false;
  bool oracle = false;
};

Json constants_row(const DirichletConstants& c, bool oracle) {
  Json row{{"record", "constants"}, {"k", c.k},          {"d", c.d},
           {"n", c.n_kd},          {"m", c.m_kd},        {"N", to_string(c.N_kd)},
           {"c", to_string(c.c_kd)}};
  if (oracle) {
    const Integer nb = N_bruteforce(c.k, c.d);
    row["N_bruteforce"] = to_string(nb);
    row["agree"] = nb == c.N_kd;
  }
  return row;
}

Report cmd_ckd(const CkdArgs& a, const Globals&) {
  Report r;
  r.command = "ckd";
  r.config = Json{{"values", a.values}, {"table", a.table}, {"veronese_condition", a.veronese}, {"oracle", a.oracle}};
  unsigned table = a.table;
  if (table == 0 && a.values.size() == 1 && !a.veronese) table = a.values[0];
  if (table > 0) {
    if (!a.values.empty() && a.table > 0) throw InvalidArgument("ckd: --table takes no positional values");
    if (a.oracle && table > 30) throw InvalidArgument("ckd: --oracle supports d <= 30");
    bool all = true;
    for (unsigned d = 1; d <= table; ++d)
      for (unsigned k = 1; k <= d; ++k) {
        r.rows.push_back(constants_row(dirichlet_constants(k, d), a.oracle));
        if (a.oracle) all = all && r.rows.back()["agree"].get<bool>();
      }
    r.summary = Json{{"record", "summary"}, {"d_max", table}, {"entries", r.rows.size()}};
    if (a.oracle) r.summary["oracle_agrees"] = all;
    return r;
  }
  if (a.veronese) {
    if (a.values.size() != 3) throw InvalidArgument("ckd --veronese-condition needs k d n");
    const auto v = veronese_condition(a.values[0], a.values[1], a.values[2]);
    r.rows.push_back(Json{{"record", "veronese_condition"},
                          {"k", a.values[0]},
                          {"d", a.values[1]},
                          {"n", a.values[2]},
                          {"holds", v.holds},
                          {"lhs", to_string(v.lhs)},
                          {"rhs", to_string(v.rhs)}});
    return r;
  }
  if (a.values.size() != 2) throw InvalidArgument("ckd needs --table D, d_max, k d, or k d n --veronese-condition");
  if (a.oracle && a.values[1] > 30) throw InvalidArgument("ckd: --oracle supports d <= 30");
  r.rows.push_back(constants_row(dirichlet_constants(a.values[0], a.values[1]), a.oracle));
  return r;
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateArgs {
  std::string chart;
  std::string height;
  std::string box;
  bool oracle = false;
};

Report cmd_enumerate(const EnumerateArgs& a, const Globals& g) {
  Report r;
  r.command = "enumerate";
  r.chart = a.chart;
  const Atlas atlas = atlas_from_spec(a.chart);
  const Integer T = parse_height(a.height);
  std::optional<Box> box;
  if (!a.box.empty()) box = parse_box(a.box, atlas.d());
  r.config = Json{{"height", to_string(T)}, {"box", box ? to_string(*box) : ""}, {"oracle", a.oracle}};
  const auto pts = enumerate_rationals(atlas, T, box, g.budget);
  for (const auto& p : pts)
    r.rows.push_back(Json{{"record", "point"},
                          {"height", to_string(p.point.height())},
                          {"point", point_json(p.point)},
                          {"parameter", vector_json(p.parameter)},
                          {"chart", p.chart}});
  r.summary = Json{{"record", "summary"}, {"points", pts.size()}};
  if (a.oracle) {
    if (atlas.implicit_equations().empty()) throw InvalidArgument("enumerate --oracle needs a chart with implicit equations");
    const Box obox = box ? *box : Box::cube(atlas.d(), -1, 1);
    const auto brute = bruteforce_intrinsic(atlas.implicit_equations(), T, obox, g.budget);
    std::vector<RationalPoint> mine;
    for (const auto& p : box ? pts : enumerate_rationals(atlas, T, obox, g.budget)) mine.push_back(p.point);
    std::vector<RationalPoint> missing, extra;
    std::set_difference(brute.begin(), brute.end(), mine.begin(), mine.end(), std::back_inserter(missing));
    std::set_difference(mine.begin(), mine.end(), brute.begin(), brute.end(), std::back_inserter(extra));
    Json jm = Json::array(), je = Json::array();
    for (const auto& p : missing) jm.push_back(point_json(p));
    for (const auto& p : extra) je.push_back(point_json(p));
    r.summary["oracle_box"] = to_string(obox);
    r.summary["oracle_points"] = brute.size();
    r.summary["oracle_agrees"] = missing.empty() && extra.empty();
    r.summary["missing"] = jm;
    r.summary["extra"] = je;
  }
  return r;
}

// ---------------------------------------------------------------------------
// simplex

struct SimplexArgs {
  std::string chart;
  std::string kappa = "1/10";
  std::size_t samples = 1000;
  std::string rho_min = "2^-20";
  std::string rho_max = "1";
  int calibrate = -1;
};

Report cmd_simplex(const SimplexArgs& a, const Globals& g, bool& violated) {
  Report r;
  r.command = "simplex";
  r.chart = a.chart;
  const Chart chart = atlas_from_spec(a.chart).primary();
  SweepOptions o;
  o.samples = a.samples;
  o.rho_min = parse_positive(a.rho_min, "--rho-min");
  o.rho_max = parse_positive(a.rho_max, "--rho-max");
  o.kappa = parse_positive(a.kappa, "--kappa");
  o.seed = g.seed;
  o.budget = g.budget;
  o.workers = g.workers;
  r.config = Json{{"kappa", to_string(o.kappa)}, {"samples", o.samples}, {"rho_min", to_string(o.rho_min)},
                  {"rho_max", to_string(o.rho_max)}, {"calibrate", a.calibrate}};
  Json calibration;
  if (a.calibrate >= 0) {
    const auto cal = kappa_calibrate(chart, o, static_cast<unsigned>(a.calibrate));
    calibration = Json{{"kappa", to_string(cal.kappa)}, {"precision", cal.precision},
                       {"double_fails", cal.double_fails}, {"capped", cal.capped}, {"evaluations", cal.evaluations}};
    if (cal.kappa > 0) o.kappa = cal.kappa;
  }
  const auto rep = simplex_sweep(chart, o);
  for (const auto& rec : rep.records) {
    Json row{{"record", "sample"},
             {"index", rec.index},
             {"center", vector_json(rec.center)},
             {"radius", to_string(rec.radius)},
             {"height_bound", to_string(rec.height_bound)},
             {"size", rec.size},
             {"rank", rec.rank},
             {"passed", rec.passed},
             {"functional", rec.functional ? to_string(*rec.functional) : ""}};
    if (rec.failure) {
      Json s = Json::array();
      for (const auto& p : rec.failure->simplex) s.push_back(point_json(p));
      row["failure"] = Json{{"simplex", s},
                            {"determinant", to_string(rec.failure->determinant)},
                            {"scaled_determinant", to_string(rec.failure->scaled_determinant)},
                            {"integral", rec.failure->integral},
                            {"lower_bound_holds", rec.failure->lower_bound_holds}};
    }
    r.rows.push_back(std::move(row));
  }
  r.summary = Json{{"record", "summary"},
                   {"kappa", to_string(o.kappa)},
                   {"samples", rep.records.size()},
                   {"passed", rep.passed},
                   {"pass_rate", rep.pass_rate},
                   {"worst", rep.worst},
                   {"failures", rep.failures}};
  if (!calibration.is_null()) r.summary["calibration"] = calibration;
  violated = !rep.failures.empty();
  return r;
}

// ---------------------------------------------------------------------------
// exponent

struct ExponentArgs {
  std::string chart;
  std::string target;
  std::string height = "1e4";
  std::string c;
  bool strict = false;
};

Report cmd_exponent(const ExponentArgs& a, const Globals& g) {
  Report r;
  r.command = "exponent";
  r.chart = a.chart;
  const Atlas atlas = atlas_from_spec(a.chart);
  const TargetPoint target = parse_target(a.target);
  const Integer T = parse_height(a.height);
  const Rational c = a.c.empty() ? dirichlet_constants(atlas.k(), atlas.d()).c_kd : parse_positive(a.c, "--c");
  RecordOptions o;
  o.precision = parse_positive(g.precision, "--precision");
  o.min_precision = std::min<Rational>(o.min_precision, o.precision);
  o.strict = a.strict;
  o.budget = g.budget;
  r.config = Json{{"target", a.target}, {"height", to_string(T)}, {"c", to_string(c)}, {"strict", a.strict}};
  const RecordSet set = best_approximations(atlas, target, T, o);
  for (const auto& rec : set.records)
    r.rows.push_back(Json{{"record", "approximation"},
                          {"height", to_string(rec.height)},
                          {"witness", point_json(rec.witness)},
                          {"parameter", vector_json(rec.parameter)},
                          {"chart", rec.chart},
                          {"distance_lo", to_string(rec.distance.lo)},
                          {"distance_hi", to_string(rec.distance.hi)}});
  Json unresolved = Json::array();
  for (const auto& u : set.unresolved) unresolved.push_back(Json::array({point_json(u.first), point_json(u.second)}));
  r.summary = Json{{"record", "summary"},
                   {"records", set.records.size()},
                   {"unresolved", unresolved},
                   {"search_domain", to_string(set.search_domain)},
                   {"parameter_window", set.pruned},
                   {"enclosure_width", to_string(set.enclosure_width)}};
  try {
    const auto e = exponent_estimate(set.records, c);
    r.summary["estimate"] = Json{{"slope", e.slope},         {"tail_slope", e.tail_slope}, {"tail_inf", e.tail_inf},
                                 {"tail_sup", e.tail_sup},   {"c_reference", to_string(e.c_reference)},
                                 {"used", e.used},           {"tail_used", e.tail_used},
                                 {"tail_fraction", e.tail_fraction}, {"arithmetic", "float64 fit of log enclosure midpoints"}};
  } catch (const InsufficientData& e) {
    r.summary["estimate"] = Json{{"error", e.what()}};
  }
  const auto ba = ba_test(set, c);
  const auto vwa = vwa_test(set, c);
  r.summary["ba"] = Json{{"label", ba.label},
                         {"infimum", interval_json(ba.infimum)},
                         {"last_window", ba.last_window ? interval_json(*ba.last_window) : Json()},
                         {"earlier_windows", ba.earlier_windows ? interval_json(*ba.earlier_windows) : Json()}};
  Json counts = Json::array();
  for (const auto& [eps, n] : vwa.counts) counts.push_back(Json::array({to_string(eps), n}));
  r.summary["vwa"] = Json{{"label", vwa.label},
                          {"degenerate", vwa.degenerate},
                          {"supported_epsilon", vwa.supported_epsilon ? Json(to_string(*vwa.supported_epsilon)) : Json()},
                          {"counts", counts}};
  r.summary["classification"] = to_string(classify(ba, vwa));
  return r;
}

// ---------------------------------------------------------------------------
// game

struct GameArgs {
  std::string chart;
  std::string kind = "algebraic-set";
  std::string mode = "simulation";
  std::string beta = "1/8";
  unsigned depth = 25;
  int D = -1;
  std::string C1 = "2";
  std::string kappa;
  std::size_t calibration_samples = 200;
  unsigned calibration_precision = 6;
  std::string alice = "simplex";
  std::string bob = "greedy";
  std::string lure_height = "100";
  std::string ba_height = "10000";
  std::string center;
  std::string radius;
  std::string transcript_path;
  std::string replay_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Json move_row(const MoveRecord& m) {
  Json row{{"record", "move"}, {"n", m.n}, {"player", to_string(m.player)}};
  if (const auto* b = std::get_if<Ball>(&m.move)) {
    row["center"] = vector_json(b->center);
    row["radius"] = to_string(b->radius);
    row["deletion"] = "";
    row["thickness"] = "";
    row["dummy"] = false;
  } else {
    const auto& d = std::get<Deletion>(m.move);
    row["center"] = Json::array();
    row["radius"] = "";
    row["deletion"] = to_string(d);
    row["thickness"] = to_string(d.thickness);
    row["dummy"] = d.dummy;
  }
  row["legal"] = m.verdict.legal;
  row["violation"] = to_string(m.verdict.violation);
  return row;
}

Report cmd_replay(const GameArgs& a, bool& violated) {
  Report r;
  r.command = "game";
  r.config = Json{{"replay", a.replay_path}};
  const auto rep = replay(read_file(a.replay_path));
  if (rep.result) {
    r.chart = rep.result->state.config.chart;
    for (const auto& m : rep.result->moves) r.rows.push_back(move_row(m));
  }
  r.summary = Json{{"record", "replay"},
                   {"valid", rep.valid},
                   {"byte_identical", rep.byte_identical},
                   {"moves", rep.moves},
                   {"detail", rep.detail}};
  violated = !rep.valid || !rep.byte_identical;
  return r;
}

Report cmd_game(const GameArgs& a, const Globals& g) {
  Report r;
  r.command = "game";
  r.chart = a.chart;
  const Chart chart = atlas_from_spec(a.chart).primary();
  GameConfig cfg;
  cfg.kind = parse_game_kind(a.kind);
  if (a.mode != "simulation" && a.mode != "tournament") throw InvalidArgument("--mode is simulation or tournament");
  cfg.mode = a.mode == "simulation" ? GameMode::Simulation : GameMode::Tournament;
  cfg.beta = parse_positive(a.beta, "--beta");
  if (cfg.beta >= 1) throw InvalidArgument("--beta must be below 1");
  cfg.D = a.D >= 0 ? static_cast<unsigned>(a.D) : std::max(chart.degree(), chart.denominator().degree());
  cfg.C1 = parse_positive(a.C1, "--C1");
  cfg.depth = a.depth;
  cfg.chart = a.chart;
  cfg.seed = g.seed;

  const Box& dom = chart.domain();
  RationalVector center = (dom.lo + dom.hi) / Rational(2);
  Rational radius = (dom.hi(0) - dom.lo(0)) / 2;
  for (Eigen::Index i = 1; i < dom.dim(); ++i) radius = std::min<Rational>(radius, (dom.hi(i) - dom.lo(i)) / 2);
  if (!a.center.empty()) {
    const Box c = parse_box(a.center + ".." + a.center, chart.k());
    center = c.lo;
  }
  if (!a.radius.empty()) radius = parse_positive(a.radius, "--radius");
  cfg.initial = Ball(center, radius);

  Json calibration;
  if (a.alice == "simplex") {
    if (a.kappa.empty()) {
      SweepOptions so;
      so.samples = a.calibration_samples;
      so.seed = g.seed;
      so.budget = g.budget;
      so.workers = g.workers;
      const auto cal = kappa_calibrate(chart, so, a.calibration_precision);
      if (cal.kappa <= 0) throw SimplexViolation("kappa calibration found no passing value");
      cfg.kappa = cal.kappa;
      calibration = Json{{"kappa", to_string(cal.kappa)}, {"samples", so.samples}, {"precision", cal.precision},
                         {"double_fails", cal.double_fails}, {"capped", cal.capped}};
    } else {
      cfg.kappa = parse_positive(a.kappa, "--kappa");
    }
  } else if (a.alice != "noop") {
    throw InvalidArgument("--alice is simplex or noop");
  }

  AliceStrategy alice = a.alice == "simplex" ? alice_simplex(chart, cfg.kappa, g.budget) : alice_noop();
  BobStrategy bob;
  std::size_t lures = 0;
  if (a.bob == "greedy") {
    std::vector<RationalVector> params;
    for (const auto& p : enumerate_rationals(chart, parse_height(a.lure_height), std::nullopt, g.budget))
      params.push_back(p.parameter);
    lures = params.size();
    bob = bob_greedy(std::move(params));
  } else if (a.bob == "random") {
    bob = bob_random(g.seed);
  } else {
    throw InvalidArgument("--bob is greedy or random");
  }

  r.config = Json{{"kind", to_string(cfg.kind)}, {"mode", a.mode}, {"beta", to_string(cfg.beta)},
                  {"depth", cfg.depth},          {"D", cfg.D},     {"C1", to_string(cfg.C1)},
                  {"alice", a.alice},            {"bob", a.bob},   {"kappa", a.kappa},
                  {"calibration_samples", a.calibration_samples},
                  {"calibration_precision", a.calibration_precision},
                  {"lure_height", a.lure_height}, {"ba_height", a.ba_height},
                  {"initial", Json{{"center", vector_json(cfg.initial.center)}, {"radius", to_string(cfg.initial.radius)}}}};

  const GameResult res = play(cfg, alice, bob);
  for (const auto& m : res.moves) r.rows.push_back(move_row(m));
  std::size_t dummies = 0;
  for (const auto& d : res.state.deletions) dummies += d.dummy;
  const auto disjoint = verify_disjointness(res);
  r.summary = Json{{"record", "summary"},
                   {"outcome", to_string(res.outcome)},
                   {"kappa", to_string(cfg.kappa)},
                   {"lures", lures},
                   {"dummy_deletions", dummies},
                   {"final", Json{{"center", vector_json(res.final_ball().center)},
                                  {"radius", to_string(res.final_ball().radius)}}},
                   {"disjoint", disjoint.legal}};
  if (!calibration.is_null()) r.summary["calibration"] = calibration;
  if (res.outcome == Outcome::Completed) {
    const auto ba = ba_check(chart, res.final_ball(), parse_height(a.ba_height), g.budget);
    r.summary["ba"] = Json{{"height_bound", to_string(ba.height_bound)},
                           {"checked", ba.checked},
                           {"exponent", to_string(ba.exponent)},
                           {"constant", to_string(ba.constant)},
                           {"positive", ba.positive()},
                           {"witness", ba.witness ? point_json(ba.witness->point) : Json()}};
  }
  if (chart.k() == 1) {
    Json pq = Json::array();
    for (const auto& x : determined_partial_quotients(res.final_ball())) pq.push_back(to_string(x));
    r.summary["partial_quotients"] = pq;
  }
  if (!a.transcript_path.empty()) {
    std::ofstream f(a.transcript_path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + a.transcript_path + "'");
    f << transcript(res);
  }
  if (!disjoint.legal) throw Error("disjointness check failed: " + disjoint.detail);
  return r;
}

// ---------------------------------------------------------------------------
// dirichlet

struct DirichletArgs {
  std::string chart;
  std::size_t targets = 100;
  std::string target_kind = "quadratic";
  std::string c = "1";
  std::string height = "2^16";
  std::string window = "-1..1";
  std::string max_den = "1000";
};

Report cmd_dirichlet(const DirichletArgs& a, const Globals& g) {
  Report r;
  r.command = "dirichlet";
  r.chart = a.chart;
  const Atlas atlas = atlas_from_spec(a.chart);
  const Rational c = parse_positive(a.c, "--c");
  const Integer T = parse_height(a.height);
  const Box window = parse_box(a.window, atlas.k());
  std::vector<TargetPoint> targets;
  if (a.target_kind == "quadratic") {
    targets = sample_quadratic_targets(a.targets, g.seed, window);
  } else if (a.target_kind == "rational") {
    targets = sample_rational_targets(a.targets, g.seed, window, parse_height(a.max_den).convert_to<long long>());
  } else {
    throw InvalidArgument("--target-kind is quadratic or rational");
  }
  RecordOptions o;
  o.precision = parse_positive(g.precision, "--precision");
  o.min_precision = std::min<Rational>(o.min_precision, o.precision);
  o.budget = g.budget;
  r.config = Json{{"targets", a.targets}, {"target_kind", a.target_kind}, {"c", to_string(c)},
                  {"height", to_string(T)}, {"window", to_string(window)}};
  if (a.target_kind == "rational") r.config["max_den"] = a.max_den;
  const auto res = dirichlet_test(atlas, targets, c, T, o, g.workers);
  for (const auto& lv : res.levels)
    r.rows.push_back(Json{{"record", "level"},
                          {"height", to_string(lv.height)},
                          {"constant_lo", to_string(lv.constant.lo)},
                          {"constant_hi", to_string(lv.constant.hi)},
                          {"witness_target", targets.at(lv.witness_target).spec},
                          {"witness_height", to_string(lv.witness_height)}});
  Json specs = Json::array();
  for (const auto& t : targets) specs.push_back(t.spec);
  const std::size_t n = res.levels.size() > 1 ? std::min<std::size_t>(3, res.levels.size() - 1) : 0;
  r.summary = Json{{"record", "summary"},
                   {"levels", res.levels.size()},
                   {"doubling_ratios", doubling_ratios(res, n)},
                   {"ratio_arithmetic", "float64 ratio of enclosure midpoints"},
                   {"targets", specs}};
  return r;
}

// ---------------------------------------------------------------------------

int exit_code_for(const std::exception& e, std::string& kind) {
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kind = "BudgetExceeded", kBudget;
  if (dynamic_cast<const SimplexViolation*>(&e)) return kind = "SimplexViolation", kInvariant;
  if (dynamic_cast<const IllegalMoveBy*>(&e)) return kind = "IllegalMove", kInvariant;
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return kind = "PrecisionExhausted", kInvariant;
  if (dynamic_cast<const InvalidArgument*>(&e)) return kind = "InvalidArgument", kUsage;
  if (dynamic_cast<const Error*>(&e)) return kind = "Error", kOther;
  return kind = "InternalError", kOther;
}

}  // namespace

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render(const Report& report, Format format) {
  std::string out;
  if (format == Format::Jsonl) {
    Json env{{"record", "envelope"},
             {"version", INTRINSIC_VERSION},
             {"command", report.command},
             {"chart", report.chart},
             {"config", report.config}};
    out += env.dump() + "\n";
    for (const auto& row : report.rows) out += row.dump() + "\n";
    if (!report.summary.is_null()) out += report.summary.dump() + "\n";
    return out;
  }
  out += "# version: " INTRINSIC_VERSION "\n";
  out += "# command: " + report.command + "\n";
  out += "# chart: " + report.chart + "\n";
  out += "# config: " + report.config.dump() + "\n";
  std::vector<std::string> columns;
  std::vector<bool> approx;
  for (const auto& row : report.rows)
    for (const auto& [key, value] : row.items()) {
      if (key == "record") continue;
      auto it = std::find(columns.begin(), columns.end(), key);
      const std::size_t i = static_cast<std::size_t>(it - columns.begin());
      if (it == columns.end()) {
        columns.push_back(key);
        approx.push_back(false);
      }
      if (is_fraction(value)) approx[i] = true;
    }
  if (!columns.empty()) {
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) header += ",";
      header += csv_field(columns[i]);
      if (approx[i]) header += "," + csv_field(columns[i] + "_approx");
    }
    out += header + "\n";
    for (const auto& row : report.rows) {
      std::string line;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) line += ",";
        const Json v = row.contains(columns[i]) ? row.at(columns[i]) : Json();
        line += csv_field(flatten(v));
        if (approx[i]) line += "," + (is_fraction(v) ? decimal(to_double(parse_rational(v.get<std::string>()))) : "");
      }
      out += line + "\n";
    }
  }
  if (!report.summary.is_null()) out += "# summary: " + report.summary.dump() + "\n";
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Intrinsic Diophantine approximation on rational manifolds", "intrinsic"};
  app.set_version_flag("--version", INTRINSIC_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for every sampler");
  app.add_option("--budget", g.budget, "maximum enumerated candidates");
  app.add_option("--output", g.output, "write the report to this file instead of stdout");
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--precision", g.precision, "enclosure width target for algebraic targets");
  app.add_option("--workers", g.workers, "worker threads (default: available parallelism)")->check(CLI::PositiveNumber);
  app.add_flag("--emit-config", g.emit_config, "print the resolved configuration and exit");

  CkdArgs ckd;
  auto* c_ckd = app.add_subcommand("ckd", "Dirichlet constants n, m, N and c(k, d)");
  c_ckd->add_option("values", ckd.values, "d_max | k d | k d n");
  c_ckd->add_option("--table", ckd.table, "table for 1 <= k <= d <= D");
  c_ckd->add_flag("--veronese-condition", ckd.veronese, "evaluate the Veronese transfer condition for k d n");
  c_ckd->add_flag("--oracle", ckd.oracle, "cross-check N against the independent minimiser");

  EnumerateArgs en;
  auto* c_en = app.add_subcommand("enumerate", "intrinsic rationals of bounded height");
  c_en->add_option("chart", en.chart, "chart specifier")->required();
  c_en->add_option("--height", en.height, "height bound T")->required();
  c_en->add_option("--box", en.box, "ambient box, a..b or a..b,c..d,...");
  c_en->add_flag("--oracle", en.oracle, "diff against the brute-force search on the box (default [-1,1]^d)");

  SimplexArgs sx;
  auto* c_sx = app.add_subcommand("simplex", "seeded sweep of the simplex lemma");
  c_sx->add_option("chart", sx.chart, "chart specifier")->required();
  c_sx->add_option("--kappa", sx.kappa, "simplex constant");
  c_sx->add_option("--samples", sx.samples, "number of (center, radius) samples");
  c_sx->add_option("--rho-min", sx.rho_min, "smallest radius");
  c_sx->add_option("--rho-max", sx.rho_max, "largest radius");
  c_sx->add_option("--calibrate", sx.calibrate, "calibrate kappa on a 2^-P grid first");

  ExponentArgs ex;
  auto* c_ex = app.add_subcommand("exponent", "best intrinsic approximations and exponent estimates");
  c_ex->add_option("chart", ex.chart, "chart specifier")->required();
  c_ex->add_option("--target", ex.target, "target parameter, e.g. \"x^2-x-1,[1,2]\" or 1/3;2/5")->required();
  c_ex->add_option("--height", ex.height, "height bound T");
  c_ex->add_option("--c", ex.c, "reference exponent (default c(k, d))");
  c_ex->add_flag("--strict", ex.strict, "fail on distance ties left undecided");

  GameArgs gm;
  auto* c_gm = app.add_subcommand("game", "play or replay a hyperplane / algebraic-set / levelset game");
  c_gm->add_option("chart", gm.chart, "chart specifier");
  c_gm->add_option("--replay", gm.replay_path, "validate a transcript file");
  c_gm->add_option("--kind", gm.kind, "hyperplane | algebraic-set | levelset");
  c_gm->add_option("--mode", gm.mode, "simulation | tournament");
  c_gm->add_option("--beta", gm.beta, "shrink factor");
  c_gm->add_option("--depth", gm.depth, "rounds");
  c_gm->add_option("--D", gm.D, "degree bound (default: chart degree)");
  c_gm->add_option("--C1", gm.C1, "levelset constant");
  c_gm->add_option("--kappa", gm.kappa, "Alice's simplex constant (default: calibrated)");
  c_gm->add_option("--calibration-samples", gm.calibration_samples, "samples for kappa calibration");
  c_gm->add_option("--calibration-precision", gm.calibration_precision, "kappa grid 2^-P");
  c_gm->add_option("--alice", gm.alice, "simplex | noop");
  c_gm->add_option("--bob", gm.bob, "greedy | random");
  c_gm->add_option("--lure-height", gm.lure_height, "greedy Bob aims at intrinsic rationals up to this height");
  c_gm->add_option("--ba-height", gm.ba_height, "height bound of the post-hoc check");
  c_gm->add_option("--center", gm.center, "initial center, comma separated (default: domain center)");
  c_gm->add_option("--radius", gm.radius, "initial radius (default: domain half-width)");
  c_gm->add_option("--transcript", gm.transcript_path, "write the replayable transcript here");

  DirichletArgs di;
  auto* c_di = app.add_subcommand("dirichlet", "uniform Dirichlet constant over seeded targets");
  c_di->add_option("chart", di.chart, "chart specifier")->required();
  c_di->add_option("--targets", di.targets, "number of targets");
  c_di->add_option("--target-kind", di.target_kind, "quadratic | rational");
  c_di->add_option("--c", di.c, "exponent");
  c_di->add_option("--height", di.height, "height bound T");
  c_di->add_option("--window", di.window, "parameter window for targets");
  c_di->add_option("--max-den", di.max_den, "denominator bound for rational targets");

  std::vector<const char*> argv{"intrinsic"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  int code = kOk;
  try {
    const Format format = g.format == "csv" ? Format::Csv : Format::Jsonl;
    std::function<Report(bool&)> job;
    if (c_ckd->parsed()) {
      job = [&](bool&) { return cmd_ckd(ckd, g); };
    } else if (c_en->parsed()) {
      job = [&](bool&) { return cmd_enumerate(en, g); };
    } else if (c_sx->parsed()) {
      job = [&](bool& v) { return cmd_simplex(sx, g, v); };
    } else if (c_ex->parsed()) {
      job = [&](bool&) { return cmd_exponent(ex, g); };
    } else if (c_gm->parsed()) {
      if (gm.replay_path.empty() && gm.chart.empty()) throw InvalidArgument("game needs a chart or --replay FILE");
      if (!gm.replay_path.empty()) {
        job = [&](bool& v) { return cmd_replay(gm, v); };
      } else {
        job = [&](bool&) { return cmd_game(gm, g); };
      }
    } else {
      job = [&](bool&) { return cmd_dirichlet(di, g); };
    }
    const std::string command = app.get_subcommands().front()->get_name();

    if (g.emit_config) {
      Json cfg{{"command", command}, {"args", args}};
      cfg.update(g.echo());
      cfg["workers"] = g.workers;
      cfg["output"] = g.output;
      out << cfg.dump() << "\n";
      return kOk;
    }

    bool violated = false;
    Report report = job(violated);
    Json echo = g.echo();
    echo.update(report.config);
    report.config = std::move(echo);
    const std::string text = render(report, format);
    if (g.output.empty()) {
      out << text;
    } else {
      std::ofstream f(g.output, std::ios::binary);
      if (!f) throw InvalidArgument("cannot write '" + g.output + "'");
      f << text;
    }
    if (violated) {
      err << Json{{"record", "error"}, {"kind", "InvariantViolation"}, {"message", "see the report"}, {"exit", kInvariant}}.dump()
          << "\n";
      code = kInvariant;
    }
  } catch (const std::exception& e) {
    std::string kind;
    code = exit_code_for(e, kind);
    err << Json{{"record", "error"}, {"kind", kind}, {"message", e.what()}, {"exit", code}}.dump() << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", secs);
  err << "wall-time: " << buf << " s\n";
  return code;
}

}  // namespace intrinsic::cli
