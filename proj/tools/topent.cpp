// topent: exact and estimated entropies of sequence sets.
//
//   topent counts  EXPR [--nmax N]
//   topent entropy EXPR [--mode auto|exact|tail-max|regression] [--nmax N] [--window W]
//   topent bowen   EXPR | map:NAME [--horizon H] [--points N] [--p P] [--eps-grid e1,e2,...]
//   topent fractal [--set cantor|whole|rationals|irrationals|cantor-level:M|interval:a,b[;c,d...]]
//                  [--base K] [--ifs FILE|cantor] [--nmax N]
//   topent check   SUITE|all [--seed S] [--instances N]
//
// Exit codes: 0 success, 1 usage or parse error, 2 validation error,
// 3 check-suite violation.

#include "topent/bowen.hpp"
#include "topent/checks.hpp"
#include "topent/dsl.hpp"
#include "topent/dynamics.hpp"
#include "topent/entropy.hpp"
#include "topent/fractal.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace topent;

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kCheckFailed = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "csv";
  bool bits = false;
  std::size_t nmax = 12;
  std::string mode = "auto";
  std::size_t window = 0;
  std::vector<double> eps;
  std::string p = "inf";
  std::string target;
  std::size_t horizon = 14;
  std::size_t points = 1001;
  std::string counter = "separated";
  std::string count_mode = "greedy";
  double tolerance = 0.05;
  std::string set = "cantor";
  std::uint32_t base = 3;
  std::string ifs;
  std::uint64_t seed = checks::SuiteConfig{}.seed;
  std::size_t instances = 0;
};

double unit(const Options& o, double nats) { return o.bits ? nats / std::log(2.0) : nats; }
const char* unit_name(const Options& o) { return o.bits ? "bits" : "nats"; }

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json jnum(double x) { return std::isfinite(x) ? json(x) : json(num(x)); }

SeqSetExpr parse_expr(const std::string& text) {
  auto prog = dsl::parse(text);
  if (prog.ok()) return *prog.expr;
  std::ostringstream msg;
  for (const auto& d : prog.diagnostics) msg << d.str() << '\n';
  const std::string m = msg.str();
  if (prog.exit_code() == kValidation) throw ValidationError(m.substr(0, m.size() - 1));
  throw UsageError(m.substr(0, m.size() - 1));
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return bowen::kInfinity;
  try {
    std::size_t used = 0;
    const double p = std::stod(s, &used);
    if (used == s.size() && p >= 1.0) return p;
  } catch (const std::exception&) {
  }
  throw UsageError("--p must be a number >= 1 or 'inf', got '" + s + "'");
}

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s), 1);
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw UsageError("not a rational number: '" + s + "'");
  }
}

// ---------------------------------------------------------------------------

int cmd_counts(const std::string& text, const Options& o) {
  const SeqSetExpr e = parse_expr(text);
  const CountSeries series = count_series(e, o.nmax);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& [n, c] : series.entries)
      rows.push_back({{"n", n}, {"count", c.str()}, {"a_n", jnum(unit(o, log_count(c) / double(n)))}});
    json out = {{"expression", dsl::print(e)}, {"unit", unit_name(o)}, {"rows", rows}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "n,count,a_n\n";
    for (const auto& [n, c] : series.entries)
      std::cout << n << ',' << c.str() << ',' << num(unit(o, log_count(c) / double(n))) << '\n';
  }
  return kOk;
}

int cmd_entropy(const std::string& text, const Options& o) {
  const SeqSetExpr e = parse_expr(text);
  json diag = json::object();
  std::optional<EntropyEstimate> est;
  if (o.mode == "auto" || o.mode == "exact") {
    est = entropy_exact(e);
    if (!est && o.mode == "exact") {
      json out = {{"expression", dsl::print(e)}, {"value", nullptr}, {"mode", "exact"},
                  {"diagnostics", {{"declined", "no closed form for this expression"}}}};
      std::cout << out.dump(2) << '\n';
      return kOk;
    }
  }
  if (!est) {
    EstimatorConfig cfg;
    cfg.mode = o.mode == "regression" ? EstimateMode::regression : EstimateMode::tail_max;
    cfg.window = o.window;
    cfg.max_n = o.nmax;
    est = entropy_estimate(count_series(e, o.nmax), cfg);
    json rates = json::array();
    for (double r : est->rates) rates.push_back(jnum(unit(o, r)));
    diag = {{"n_max", o.nmax}, {"window", est->window}, {"rates", rates},
            {"rates_nonincreasing", est->rates_nonincreasing}, {"rates_nondecreasing", est->rates_nondecreasing},
            {"clamped", est->clamped}};
  } else {
    diag = {{"closed_form", est->proof_tag}};
  }
  json out = {{"expression", dsl::print(e)}, {"value", jnum(unit(o, est->value))}, {"unit", unit_name(o)},
              {"mode", to_string(est->mode)}, {"diagnostics", diag}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

PointMap named_map(const std::string& name) {
  auto wrap = [](double (*f)(double)) {
    return PointMap([f](std::span<const double> x) { return std::vector<double>{f(x[0])}; });
  };
  if (name == "identity") return wrap([](double x) { return x; });
  if (name == "doubling") return wrap([](double x) { return x < 0.5 ? 2 * x : 2 * x - 1; });
  if (name == "tent") return wrap([](double x) { return x < 0.5 ? 2 * x : 2 - 2 * x; });
  if (name == "logistic") return wrap([](double x) { return 4 * x * (1 - x); });
  if (name == "rotation") return wrap([](double x) {
      const double y = x + (std::sqrt(5.0) - 1) / 2;
      return y >= 1 ? y - 1 : y;
    });
  if (name == "contraction") return wrap([](double x) { return x / 2; });
  throw UsageError("unknown map '" + name + "' (identity, doubling, tent, logistic, rotation, contraction)");
}

bowen::GridConfig grid_config(const Options& o) {
  bowen::GridConfig cfg;
  cfg.eps = o.eps;
  cfg.window = o.window;
  cfg.tolerance = o.tolerance;
  if (o.counter == "separated") cfg.counter = bowen::CounterKind::separated;
  else if (o.counter == "spanning") cfg.counter = bowen::CounterKind::intrinsic_spanning;
  else throw UsageError("--counter must be separated or spanning");
  if (o.count_mode == "greedy") cfg.mode = bowen::CountMode::greedy;
  else if (o.count_mode == "exact") cfg.mode = bowen::CountMode::exact;
  else throw UsageError("--count-mode must be greedy or exact");
  return cfg;
}

int cmd_bowen(const std::string& target, const Options& o) {
  const double p = parse_p(o.p);
  bowen::GridConfig cfg = grid_config(o);
  if (o.horizon == 0) throw UsageError("--horizon must be positive");
  for (std::size_t n = 1; n <= o.horizon; ++n) cfg.ns.push_back(n);

  bowen::BowenEstimate est;
  std::string source;
  std::optional<double> exact;
  if (target.rfind("map:", 0) == 0) {
    const PointMap map = named_map(target.substr(4));
    est = bowen::map_bowen_entropy(map, PointCloud::uniform_grid(o.points), bowen::BaseMetric::euclidean(), p,
                                   o.horizon, cfg);
    source = target + " on " + std::to_string(o.points) + " grid points";
  } else {
    const SeqSetExpr e = parse_expr(target);
    const PrefixSet words = prefixes(e, o.horizon);
    auto cloud = std::make_shared<const bowen::SeqCloud>(bowen::SeqCloud::from_prefixes(words));
    est = bowen::bowen_entropy(bowen::DnpSeq(cloud, bowen::BaseMetric::discrete(), p), cfg);
    source = dsl::print(e);
    if (auto ex = entropy_exact(e)) exact = ex->value;
  }

  if (o.format == "csv") {
    if (!o.bits) {
      bowen::write_grid_csv(std::cout, est);
    } else {
      std::cout << "eps,n,count,a_n\n";
      for (std::size_t a = 0; a < est.eps.size(); ++a)
        for (std::size_t j = 0; j < est.ns.size(); ++j)
          std::cout << num(est.eps[a]) << ',' << est.ns[j] << ',' << est.counts[a][j] << ','
                    << num(unit(o, est.rates[a][j])) << '\n';
    }
    return kOk;
  }
  json tail = json::array(), eps = json::array();
  for (std::size_t a = 0; a < est.eps.size(); ++a) {
    eps.push_back(est.eps[a]);
    tail.push_back(jnum(unit(o, est.tail[a])));
  }
  json out = {{"source", source},
              {"p", o.p},
              {"value", jnum(unit(o, est.value))},
              {"unit", unit_name(o)},
              {"mode", to_string(est.mode)},
              {"diagnostics",
               {{"counter", to_string(est.counter)},
                {"method", est.method},
                {"stabilized", est.stabilized},
                {"value_eps", est.eps.empty() ? json(nullptr) : json(est.eps[est.value_index])},
                {"grid_value", jnum(unit(o, est.grid_value))},
                {"window", est.window},
                {"eps", eps},
                {"tail", tail}}}};
  if (exact) out["diagnostics"]["exact_topological"] = jnum(unit(o, *exact));
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

fractal::FractalSubset parse_set(const std::string& s) {
  using fractal::FractalSubset;
  if (s == "cantor") return FractalSubset::cantor();
  if (s == "whole") return FractalSubset::whole_interval();
  if (s == "rationals") return FractalSubset::rationals();
  if (s == "irrationals") return FractalSubset::irrationals();
  if (s.rfind("cantor-level:", 0) == 0) {
    try {
      return FractalSubset::cantor_level(std::stoul(s.substr(13)));
    } catch (const std::logic_error& e) {
      throw UsageError(std::string("bad cantor level: ") + e.what());
    }
  }
  if (s.rfind("interval:", 0) == 0) {
    std::vector<std::pair<Rational, Rational>> parts;
    std::stringstream in(s.substr(9));
    std::string piece;
    while (std::getline(in, piece, ';')) {
      const auto comma = piece.find(',');
      if (comma == std::string::npos) throw UsageError("interval needs 'a,b': '" + piece + "'");
      parts.emplace_back(parse_rational(piece.substr(0, comma)), parse_rational(piece.substr(comma + 1)));
    }
    return FractalSubset::interval_union(std::move(parts));
  }
  throw UsageError("unknown set '" + s + "'");
}

int cmd_fractal(const Options& o) {
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::optional<EntropyEstimate> exact;
  std::uint32_t k = o.base;
  std::string source;
  if (!o.ifs.empty()) {
    fractal::IfsSystem sys = fractal::IfsSystem::cantor();
    if (o.ifs != "cantor") {
      std::ifstream in(o.ifs);
      if (!in) throw UsageError("cannot read " + o.ifs);
      std::stringstream buf;
      buf << in.rdbuf();
      sys = fractal::IfsSystem::from_json(buf.str());
    }
    k = static_cast<std::uint32_t>(sys.size());
    source = "ifs " + o.ifs + " attractor";
    for (std::size_t n = 1; n <= o.nmax; ++n)
      rows.emplace_back(n, fractal::ifs_preimage_prefixes(sys, fractal::AmbientSubset::attractor(), n).size());
  } else {
    const auto set = parse_set(o.set);
    const fractal::DigitCoding coding{o.base};
    source = set.description + ", base " + std::to_string(o.base);
    for (std::size_t n = 1; n <= o.nmax; ++n) rows.emplace_back(n, fractal::digit_prefixes(set, coding, n).size());
    if (auto e = fractal::digit_seqset(set, coding)) exact = entropy_exact(*e);
  }

  auto rate = [&](std::size_t n, std::size_t c) { return unit(o, std::log(double(c)) / double(n)); };
  if (o.format == "csv") {
    std::cout << "n,count,a_n\n";
    for (auto [n, c] : rows) std::cout << n << ',' << c << ',' << num(rate(n, c)) << '\n';
    return kOk;
  }
  CountSeries series;
  series.alphabet_size = k;
  for (auto [n, c] : rows) series.entries.emplace_back(n, Count(c));
  const EntropyEstimate est = exact ? *exact : entropy_estimate(series);
  json jrows = json::array();
  for (auto [n, c] : rows) jrows.push_back({{"n", n}, {"count", c}, {"a_n", jnum(rate(n, c))}});
  json out = {{"source", source},         {"value", jnum(unit(o, est.value))}, {"unit", unit_name(o)},
              {"mode", to_string(est.mode)}, {"diagnostics", {{"closed_form", est.proof_tag}, {"rows", jrows}}}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& name, const Options& o) {
  std::vector<std::string> names;
  if (name == "all") names = checks::suite_names();
  else names.push_back(name);
  checks::SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.instances = o.instances;

  bool ok = true;
  json reports = json::array();
  for (const auto& n : names) {
    checks::SuiteReport r;
    try {
      r = checks::run_suite(n, cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ok = ok && r.passed();
    if (o.format == "json") {
      json v = json::array();
      for (const auto& x : r.violations) v.push_back({{"property", x.property}, {"counterexample", x.counterexample}});
      reports.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"instances", r.instances},
                         {"checks", r.checks}, {"skipped", r.skipped}, {"violations", v}, {"notes", r.notes}});
      continue;
    }
    std::cout << r.suite << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.instances << " instances, "
              << r.checks << " checks, " << r.skipped << " skipped, " << r.violations.size() << " violations)\n";
    for (const auto& x : r.violations) std::cout << "  violation: " << x.property << "\n    " << x.counterexample << '\n';
    for (const auto& note : r.notes) std::cout << "  note: " << note << '\n';
  }
  if (o.format == "json") std::cout << json{{"passed", ok}, {"suites", reports}}.dump(2) << '\n';
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and estimated entropies of sequence sets"};
  app.set_config("--config", "", "TOML/INI file with option values; sections name subcommands");
  app.require_subcommand(1);
  Options o;
  std::string expr;

  auto common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    c->add_flag("--bits", o.bits, "Report entropies in bits instead of nats");
  };

  auto* counts = app.add_subcommand("counts", "Prefix counts n, N(n), log N(n)/n");
  counts->add_option("expr", expr, "Sequence-set expression")->required();
  counts->add_option("--nmax", o.nmax, "Largest prefix length");
  common(counts);

  auto* entropy = app.add_subcommand("entropy", "Exact or estimated entropy of an expression");
  entropy->add_option("expr", expr, "Sequence-set expression")->required();
  entropy->add_option("--mode", o.mode, "Estimator")->check(CLI::IsMember({"auto", "exact", "tail-max", "regression"}));
  entropy->add_option("--nmax", o.nmax, "Largest prefix length for estimates");
  entropy->add_option("--window", o.window, "Tail window; 0 picks ceil(nmax/3)");
  common(entropy);

  auto* bowen_cmd = app.add_subcommand("bowen", "Bowen entropy from separated or spanning counts");
  bowen_cmd->add_option("target", o.target, "Expression (discrete metric) or map:NAME on [0,1]")->required();
  bowen_cmd->add_option("--horizon", o.horizon, "Orbit or prefix length");
  bowen_cmd->add_option("--points", o.points, "Grid points for map targets");
  bowen_cmd->add_option("--p", o.p, "Exponent of d_{n,p}: a number >= 1 or inf");
  bowen_cmd->add_option("--eps-grid", o.eps, "Comma-separated eps values; default diameter * 2^-1..2^-10")
      ->delimiter(',');
  bowen_cmd->add_option("--window", o.window, "Tail window over n");
  bowen_cmd->add_option("--counter", o.counter, "separated or spanning");
  bowen_cmd->add_option("--count-mode", o.count_mode, "greedy or exact");
  bowen_cmd->add_option("--tolerance", o.tolerance, "eps stabilization threshold in nats");
  common(bowen_cmd);

  auto* fractal_cmd = app.add_subcommand("fractal", "Digit or IFS coding counts of a subset of [0,1]");
  fractal_cmd->add_option("--set", o.set, "cantor, whole, rationals, irrationals, cantor-level:M, interval:a,b[;c,d]");
  fractal_cmd->add_option("--base", o.base, "Digit base")->check(CLI::Range(2u, 64u));
  fractal_cmd->add_option("--ifs", o.ifs, "IFS JSON file, or 'cantor'; codes the attractor");
  fractal_cmd->add_option("--nmax", o.nmax, "Largest word length");
  common(fractal_cmd);

  auto* check = app.add_subcommand("check", "Run a property suite");
  std::string suite;
  check->add_option("suite", suite, "Suite name or 'all'")->required();
  check->add_option("--seed", o.seed, "Random seed");
  check->add_option("--instances", o.instances, "Instances per suite; 0 uses the suite default");
  check->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  // Per-command default formats; an explicit --format overrides.
  auto explicit_format = [](CLI::App* c) { return c->count("--format") > 0; };

  try {
    if (*counts) {
      if (!explicit_format(counts)) o.format = "csv";
      return cmd_counts(expr, o);
    }
    if (*entropy) {
      if (!explicit_format(entropy)) o.format = "json";
      return cmd_entropy(expr, o);
    }
    if (*bowen_cmd) {
      if (!explicit_format(bowen_cmd)) o.format = "json";
      return cmd_bowen(o.target, o);
    }
    if (*fractal_cmd) {
      if (!explicit_format(fractal_cmd)) o.format = "csv";
      return cmd_fractal(o);
    }
    if (!explicit_format(check)) o.format = "text";
    return cmd_check(suite, o);
  } catch (const UsageError& e) {
    std::cerr << "topent: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "topent: " << e.what() << '\n';
    return kValidation;
  } catch (const BudgetExceeded& e) {
    std::cerr << "topent: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "topent: " << e.what() << '\n';
    return kValidation;
  }
}
