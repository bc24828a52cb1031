#pragma once

// Command-line driver. Needs CLI11.hpp and json.hpp on the include path.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twoarm/core_types.hpp"
#include "twoarm/deviation_lab.hpp"
#include "twoarm/montecarlo.hpp"
#include "twoarm/theory.hpp"

namespace twoarm::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kIoError = 3 };

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSimulateHeader =
    "policy,T,delta,reps,seed,mean_regret,stderr,mean_tau,misid_rate";
inline constexpr std::string_view kBoundsHeader = "policy,T,delta,bound,regime_ok,fallback,minimax,asymptotic_slope";
inline constexpr std::string_view kConstantsHeader = "strategy_class,parameter_class,constant";
inline constexpr std::string_view kCurveHeader = "policy,T,log_T,delta_R";
inline constexpr std::string_view kSlopeHeader = "policy,slope,intercept,r_squared,T_min,T_max,points,asymptotic_slope";
inline constexpr std::string_view kDeviationHeader =
    "check,parameters,bound,empirical,stderr,reps,seed,passed,exact,truncation_cap";
inline constexpr std::string_view kTasHeader = "K,t_star,track_and_stop_constant,lai_robbins_constant,ratio,weights";

enum class Format { csv, json };

struct CliConfig {
  std::string command;
  std::vector<PolicyKind> policies;
  double delta = 0.2;
  std::vector<std::int64_t> horizons;
  std::int64_t reps = 10000;
  std::uint64_t seed = 0;
  std::optional<std::string> output_path;
  Format format = Format::csv;
  unsigned threads = 1;  // 0 = auto
  std::optional<std::int64_t> budget;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw config_error("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

inline std::int64_t parse_integer(std::string_view text, std::string_view what) {
  // Accepts plain integers and exact real spellings such as 1e5.
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec == std::errc() && res.ptr == text.data() + text.size()) return v;
  const double d = parse_double(text, what);
  if (!(std::abs(d) < 9.0e18) || d != std::floor(d)) {
    throw config_error("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(d);
}

inline std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw config_error("invalid seed: '" + std::string(text) + "'");
  }
  return v;
}

inline unsigned parse_threads(std::string_view text) {
  if (text == "auto") return 0;
  const std::int64_t v = parse_integer(text, "thread count");
  if (v < 1 || v > 4096) throw config_error("thread count must be 'auto' or between 1 and 4096");
  return static_cast<unsigned>(v);
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

/// "1000,2000,5000" or a geometric range "start..stopxfactor"
/// (start, start·f, start·f², ... up to stop).
inline std::vector<std::int64_t> parse_horizons(std::string_view text) {
  std::vector<std::int64_t> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const auto x = text.find('x', dots + 2);
    if (x == std::string_view::npos) throw config_error("horizon range must look like start..stopxfactor");
    const std::int64_t start = parse_integer(text.substr(0, dots), "range start");
    const std::int64_t stop = parse_integer(text.substr(dots + 2, x - dots - 2), "range stop");
    const double factor = parse_double(text.substr(x + 1), "range factor");
    if (start < 2) throw config_error("horizons must be at least 2");
    if (stop < start) throw config_error("range stop must not be below its start");
    if (!(factor > 1.0)) throw config_error("range factor must exceed 1");
    for (int k = 0;; ++k) {
      const double h = std::round(static_cast<double>(start) * std::pow(factor, k));
      if (h > static_cast<double>(stop)) break;
      const auto v = static_cast<std::int64_t>(h);
      if (out.empty() || v > out.back()) out.push_back(v);
    }
  } else {
    for (auto part : split(text, ',')) out.push_back(parse_integer(part, "horizon"));
  }
  if (out.empty()) throw config_error("no horizons given");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 2) throw config_error("horizons must be at least 2");
    if (i > 0 && out[i] <= out[i - 1]) throw config_error("horizons must be strictly increasing");
  }
  return out;
}

inline std::vector<PolicyKind> parse_policies(const std::vector<std::string>& names) {
  std::vector<PolicyKind> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.assign(kAllPolicies.begin(), kAllPolicies.end());
      return out;
    }
    const auto k = parse_policy_kind(n);
    if (!k) throw config_error("unknown policy '" + n + "'");
    if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
  }
  if (out.empty()) throw config_error("no policies given");
  return out;
}

inline std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

// ---- simulate ----

inline std::string render_simulate(const std::vector<RegretEstimate>& rows, double delta, Format format) {
  if (format == Format::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"policy", std::string(to_string(r.policy.kind()))},
                     {"T", r.horizon},
                     {"delta", delta},
                     {"reps", r.reps},
                     {"seed", r.seed},
                     {"mean_regret", r.mean},
                     {"stderr", r.std_error},
                     {"mean_tau", optional_json(r.mean_tau)},
                     {"misid_rate", optional_json(r.misid_rate)}});
    }
    return arr.dump(2) + "\n";
  }
  std::string s(kSimulateHeader);
  s += '\n';
  for (const auto& r : rows) {
    s += std::string(to_string(r.policy.kind())) + ',' + std::to_string(r.horizon) + ',' + format_double(delta) + ',' +
         std::to_string(r.reps) + ',' + std::to_string(r.seed) + ',' + format_double(r.mean) + ',' +
         format_double(r.std_error) + ',' + optional_cell(r.mean_tau) + ',' + optional_cell(r.misid_rate) + '\n';
  }
  return s;
}

inline std::string cmd_simulate(const CliConfig& cfg) {
  ExperimentPlan plan{.policies = cfg.policies,
                      .instance = BanditInstance::with_gap(cfg.delta),
                      .horizons = cfg.horizons,
                      .reps = cfg.reps,
                      .master_seed = cfg.seed,
                      .fb_budget = cfg.budget};
  const auto rows = run_plan(plan, SimulationOptions{.threads = cfg.threads});
  return render_simulate(rows, cfg.delta, cfg.format);
}

// ---- bounds ----

inline std::string constant_cell(StrategyClass s, ParameterClass p) {
  try {
    return format_double(lower_bound_constant(s, p));
  } catch (const not_applicable_error&) {
    return "NA";
  }
}

inline std::string_view to_string(StrategyClass s) {
  switch (s) {
    case StrategyClass::all: return "all";
    case StrategyClass::etc: return "etc";
    case StrategyClass::detc: return "detc";
  }
  return "?";
}

inline std::string_view to_string(ParameterClass p) { return p == ParameterClass::h ? "H" : "H_delta"; }

inline std::string cmd_bounds(const CliConfig& cfg) {
  struct Row {
    PolicyKind kind;
    std::int64_t T;
    BoundReport b;
  };
  std::vector<Row> rows;
  for (PolicyKind k : cfg.policies) {
    for (std::int64_t T : cfg.horizons) rows.push_back({k, T, regret_bound(k, static_cast<double>(T), cfg.delta)});
  }
  constexpr StrategyClass classes[] = {StrategyClass::all, StrategyClass::etc, StrategyClass::detc};
  constexpr ParameterClass params[] = {ParameterClass::h, ParameterClass::h_delta};

  if (cfg.format == Format::json) {
    nlohmann::ordered_json doc;
    doc["bounds"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      doc["bounds"].push_back({{"policy", std::string(twoarm::to_string(r.kind))},
                               {"T", r.T},
                               {"delta", cfg.delta},
                               {"bound", r.b.value},
                               {"regime_ok", r.b.regime_ok},
                               {"fallback", r.b.fallback_value},
                               {"minimax", r.b.minimax_value},
                               {"asymptotic_slope", asymptotic_slope(r.kind)}});
    }
    doc["lower_bound_constants"] = nlohmann::ordered_json::array();
    for (auto s : classes) {
      for (auto p : params) {
        nlohmann::ordered_json c = {{"strategy_class", std::string(to_string(s))},
                                    {"parameter_class", std::string(to_string(p))}};
        const std::string cell = constant_cell(s, p);
        if (cell == "NA") {
          c["constant"] = "NA";
        } else {
          c["constant"] = lower_bound_constant(s, p);
        }
        doc["lower_bound_constants"].push_back(c);
      }
    }
    return doc.dump(2) + "\n";
  }
  std::string s(kBoundsHeader);
  s += '\n';
  for (const auto& r : rows) {
    s += std::string(twoarm::to_string(r.kind)) + ',' + std::to_string(r.T) + ',' + format_double(cfg.delta) + ',' +
         format_double(r.b.value) + ',' + (r.b.regime_ok ? "true" : "false") + ',' +
         format_double(r.b.fallback_value) + ',' + format_double(r.b.minimax_value) + ',' +
         format_double(asymptotic_slope(r.kind)) + '\n';
  }
  s += '\n';
  s += kConstantsHeader;
  s += '\n';
  for (auto c : classes) {
    for (auto p : params) s += std::string(to_string(c)) + ',' + std::string(to_string(p)) + ',' + constant_cell(c, p) + '\n';
  }
  return s;
}

// ---- slopes ----

struct SimulateRow {
  PolicyKind policy;
  std::int64_t horizon;
  double delta;
  double mean_regret;
};

/// Reads the policy, T, delta and mean_regret columns of a simulate CSV.
inline std::vector<SimulateRow> parse_simulate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw config_error("simulate CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw config_error("simulate CSV lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cp = column("policy"), ct = column("T"), cd = column("delta"), cr = column("mean_regret");
  std::vector<SimulateRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw config_error("malformed simulate CSV row: " + line);
    const auto kind = parse_policy_kind(cells[cp]);
    if (!kind) throw config_error("unknown policy in simulate CSV: " + std::string(cells[cp]));
    rows.push_back({*kind, parse_integer(cells[ct], "T"), parse_double(cells[cd], "delta"),
                    parse_double(cells[cr], "mean_regret")});
  }
  return rows;
}

struct PolicySlope {
  PolicyKind policy;
  double delta;
  std::vector<RegretPoint> points;
  SlopeFit fit;
};

/// One fit of Δ·R against log T per policy, policies in order of first appearance.
inline std::vector<PolicySlope> fit_slopes(const std::vector<SimulateRow>& rows, FitRange range) {
  std::vector<PolicySlope> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PolicySlope& p) { return p.policy == r.policy; });
    if (it == out.end()) {
      out.push_back({r.policy, r.delta, {}, {}});
      it = std::prev(out.end());
    } else if (it->delta != r.delta) {
      throw config_error("simulate CSV mixes deltas for policy " + std::string(to_string(r.policy)));
    }
    it->points.push_back({static_cast<double>(r.horizon), r.mean_regret});
  }
  for (auto& p : out) p.fit = estimate_slope(p.points, p.delta, range);
  return out;
}

inline std::string render_slopes(const std::vector<PolicySlope>& slopes, Format format) {
  if (format == Format::json) {
    nlohmann::ordered_json doc;
    doc["curve"] = nlohmann::ordered_json::array();
    doc["slopes"] = nlohmann::ordered_json::array();
    for (const auto& p : slopes) {
      for (const auto& pt : p.points) {
        doc["curve"].push_back({{"policy", std::string(to_string(p.policy))},
                                {"T", static_cast<std::int64_t>(pt.horizon)},
                                {"log_T", std::log(pt.horizon)},
                                {"delta_R", p.delta * pt.mean_regret}});
      }
      doc["slopes"].push_back({{"policy", std::string(to_string(p.policy))},
                               {"slope", p.fit.slope},
                               {"intercept", p.fit.intercept},
                               {"r_squared", p.fit.r_squared},
                               {"T_min", static_cast<std::int64_t>(p.fit.fit_range.min_horizon)},
                               {"T_max", static_cast<std::int64_t>(p.fit.fit_range.max_horizon)},
                               {"points", p.fit.points},
                               {"asymptotic_slope", asymptotic_slope(p.policy)}});
    }
    return doc.dump(2) + "\n";
  }
  std::string s(kCurveHeader);
  s += '\n';
  for (const auto& p : slopes) {
    for (const auto& pt : p.points) {
      s += std::string(to_string(p.policy)) + ',' + std::to_string(static_cast<std::int64_t>(pt.horizon)) + ',' +
           format_double(std::log(pt.horizon)) + ',' + format_double(p.delta * pt.mean_regret) + '\n';
    }
  }
  s += '\n';
  s += kSlopeHeader;
  s += '\n';
  for (const auto& p : slopes) {
    s += std::string(to_string(p.policy)) + ',' + format_double(p.fit.slope) + ',' + format_double(p.fit.intercept) +
         ',' + format_double(p.fit.r_squared) + ',' +
         std::to_string(static_cast<std::int64_t>(p.fit.fit_range.min_horizon)) + ',' +
         std::to_string(static_cast<std::int64_t>(p.fit.fit_range.max_horizon)) + ',' + std::to_string(p.fit.points) +
         ',' + format_double(asymptotic_slope(p.policy)) + '\n';
  }
  return s;
}

// ---- deviation ----

struct DeviationConfig {
  std::vector<std::string> checks{"all"};
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::int64_t> horizon;
  double x = 2.0;
  std::int64_t n = 100;
  std::optional<std::int64_t> cap;
  std::int64_t reps = 100000;
};

struct DeviationRow {
  std::string parameters;
  DeviationReport report;
};

inline std::vector<DeviationRow> run_deviation(const DeviationConfig& d, std::uint64_t seed, unsigned threads) {
  static const std::vector<std::string> kChecks = {"lemma_a", "lemma_b", "lemma_c", "reflection", "sprt_error"};
  std::vector<std::string> checks;
  for (const auto& c : d.checks) {
    if (c == "all") {
      checks = kChecks;
      break;
    }
    if (std::find(kChecks.begin(), kChecks.end(), c) == kChecks.end()) throw config_error("unknown check '" + c + "'");
    checks.push_back(c);
  }
  const DeviationOptions opt{.threads = threads};
  std::vector<DeviationRow> rows;
  for (const auto& c : checks) {
    if (c == "lemma_a") {
      const double eps = d.epsilon.value_or(0.5);
      auto r = check_lemma_a(eps, d.reps, d.cap, seed, opt);
      rows.push_back({"epsilon=" + format_double(eps), std::move(r)});
    } else if (c == "lemma_b") {
      const double gap = d.delta.value_or(0.5);
      const std::int64_t T = d.horizon.value_or(1000);
      rows.push_back({"delta=" + format_double(gap) + ";T=" + std::to_string(T), check_lemma_b(gap, T, d.reps, seed, opt)});
    } else if (c == "lemma_c") {
      const double eps = d.epsilon.value_or(0.2);
      const std::int64_t T = d.horizon.value_or(10000);
      rows.push_back({"epsilon=" + format_double(eps) + ";T=" + std::to_string(T), check_lemma_c(eps, T, d.reps, seed, opt)});
    } else if (c == "reflection") {
      rows.push_back({"x=" + format_double(d.x) + ";n=" + std::to_string(d.n), check_reflection(d.x, d.n, d.reps, seed, opt)});
    } else {
      const double gap = d.delta.value_or(0.5);
      const std::int64_t T = d.horizon.value_or(10000);
      rows.push_back({"delta=" + format_double(gap) + ";T=" + std::to_string(T), check_sprt_error(gap, T, d.reps, seed, opt)});
    }
  }
  return rows;
}

inline std::string render_deviation(const std::vector<DeviationRow>& rows, std::uint64_t seed, Format format) {
  if (format == Format::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [params, r] : rows) {
      arr.push_back({{"check", r.check},
                     {"parameters", params},
                     {"bound", r.bound_value},
                     {"empirical", r.empirical_value},
                     {"stderr", r.empirical_stderr},
                     {"reps", r.reps},
                     {"seed", seed},
                     {"passed", r.passed},
                     {"exact", optional_json(r.exact_value)},
                     {"truncation_cap", r.truncation_cap ? nlohmann::ordered_json(*r.truncation_cap)
                                                         : nlohmann::ordered_json(nullptr)}});
    }
    return arr.dump(2) + "\n";
  }
  std::string s(kDeviationHeader);
  s += '\n';
  for (const auto& [params, r] : rows) {
    s += r.check + ',' + params + ',' + format_double(r.bound_value) + ',' + format_double(r.empirical_value) + ',' +
         format_double(r.empirical_stderr) + ',' + std::to_string(r.reps) + ',' + std::to_string(seed) + ',' +
         (r.passed ? "true" : "false") + ',' + optional_cell(r.exact_value) + ',' +
         (r.truncation_cap ? std::to_string(*r.truncation_cap) : std::string()) + '\n';
  }
  return s;
}

// ---- tas ----

inline std::string render_tas(const std::vector<double>& means, Format format) {
  const TasResult tas = tas_characteristic(means);
  const TasConstants c = tas_regret_constant(means);
  if (format == Format::json) {
    nlohmann::ordered_json doc = {{"K", means.size()},
                                  {"means", means},
                                  {"t_star", tas.t_star},
                                  {"track_and_stop_constant", c.track_and_stop},
                                  {"lai_robbins_constant", c.lai_robbins},
                                  {"ratio", c.ratio()},
                                  {"weights", tas.weights}};
    return doc.dump(2) + "\n";
  }
  std::string w;
  for (std::size_t i = 0; i < tas.weights.size(); ++i) {
    if (i) w += ';';
    w += format_double(tas.weights[i]);
  }
  std::string s(kTasHeader);
  s += '\n';
  s += std::to_string(means.size()) + ',' + format_double(tas.t_star) + ',' + format_double(c.track_and_stop) + ',' +
       format_double(c.lai_robbins) + ',' + format_double(c.ratio()) + ',' + w + '\n';
  return s;
}

// ---- driver ----

inline void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path) {
    out << text;
    out.flush();
    if (!out) throw io_error("failed to write to standard output");
    return;
  }
  std::ofstream f(*path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open '" + *path + "' for writing");
  f << text;
  f.close();
  if (!f) throw io_error("failed to write '" + *path + "'");
}

/// Runs the tool with the given arguments. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-armed Gaussian bandit laboratory: regret simulation, bounds and deviation checks", "twoarm"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::vector<std::string> policy_names{"all"};
  std::string horizons_text = "1024..131072x2";
  std::string seed_text = "0";
  std::string threads_text = "1";
  std::string format_text = "csv";
  std::string out_path;
  std::optional<std::int64_t> budget;
  std::string input_path;
  double fit_min = 0.0;
  double fit_max = std::numeric_limits<double>::infinity();
  DeviationConfig dev;
  std::vector<double> means;
  std::optional<int> arms;
  std::optional<double> tas_delta;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (standard output when absent)");
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto seeded = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_text, "Master seed (flag wins over TWOARM_SEED)")->envname("TWOARM_SEED");
    sub->add_option("--threads", threads_text, "Worker threads: integer or 'auto'");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--policy", policy_names, "fb_etc, sprt_etc, bai_etc, delta_ucb, ucb_star or all")
        ->delimiter(',');
    sub->add_option("--delta", cfg.delta, "Gap between the arm means");
    sub->add_option("--horizons", horizons_text, "Comma list or start..stopxfactor");
  };

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo regret per policy and horizon");
  grid(simulate);
  simulate->add_option("--reps", cfg.reps, "Replications per cell");
  simulate->add_option("--budget", budget, "Exploration budget per arm for fb_etc (default: optimal)");
  seeded(simulate);
  common(simulate);

  auto* bounds = app.add_subcommand("bounds", "Finite-time regret bounds and lower-bound constants");
  grid(bounds);
  common(bounds);

  auto* slopes = app.add_subcommand("slopes", "Fit delta*R against log T from a simulate CSV");
  slopes->add_option("--in", input_path, "Simulate CSV to read")->required();
  slopes->add_option("--min-T", fit_min, "Smallest horizon in the fit");
  slopes->add_option("--max-T", fit_max, "Largest horizon in the fit");
  common(slopes);

  auto* deviation = app.add_subcommand("deviation", "Empirical checks of the deviation inequalities");
  deviation->add_option("--check", dev.checks, "lemma_a, lemma_b, lemma_c, reflection, sprt_error or all")
      ->delimiter(',');
  deviation->add_option("--epsilon", dev.epsilon, "Slack for lemma_a (default 0.5) and lemma_c (default 0.2)");
  deviation->add_option("--delta", dev.delta, "Gap for lemma_b and sprt_error (default 0.5)");
  deviation->add_option("--T", dev.horizon, "Horizon for lemma_b (1000), lemma_c and sprt_error (10000)");
  deviation->add_option("--x", dev.x, "Barrier for reflection");
  deviation->add_option("--n", dev.n, "Steps for reflection");
  deviation->add_option("--cap", dev.cap, "Truncation horizon for lemma_a (default ceil(200/eps^2))");
  deviation->add_option("--reps", dev.reps, "Replications per check");
  seeded(deviation);
  common(deviation);

  auto* tas = app.add_subcommand("tas", "Track-and-Stop characteristic time and regret constants");
  tas->add_option("--means", means, "Arm means, best first")->delimiter(',');
  tas->add_option("--delta", tas_delta, "Common gap (with --arms)");
  tas->add_option("--arms", arms, "Number of arms (with --delta)");
  common(tas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    cfg.format = format_text == "json" ? Format::json : Format::csv;
    if (!out_path.empty()) cfg.output_path = out_path;
    std::string text;
    if (simulate->parsed() || bounds->parsed()) {
      cfg.command = simulate->parsed() ? "simulate" : "bounds";
      cfg.policies = parse_policies(policy_names);
      cfg.horizons = parse_horizons(horizons_text);
      if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw config_error("--delta must be positive");
      if (simulate->parsed()) {
        cfg.seed = parse_seed(seed_text);
        cfg.threads = parse_threads(threads_text);
        cfg.budget = budget;
        if (cfg.reps < 2) throw config_error("--reps must be at least 2");
        if (budget && std::find(cfg.policies.begin(), cfg.policies.end(), PolicyKind::fb_etc) == cfg.policies.end()) {
          throw config_error("--budget applies to fb_etc only");
        }
        text = cmd_simulate(cfg);
      } else {
        text = cmd_bounds(cfg);
      }
    } else if (slopes->parsed()) {
      cfg.command = "slopes";
      std::ifstream in(input_path);
      if (!in) throw io_error("cannot open '" + input_path + "'");
      const auto rows = parse_simulate_csv(in);
      text = render_slopes(fit_slopes(rows, FitRange{fit_min, fit_max}), cfg.format);
    } else if (deviation->parsed()) {
      cfg.command = "deviation";
      cfg.seed = parse_seed(seed_text);
      cfg.threads = parse_threads(threads_text);
      text = render_deviation(run_deviation(dev, cfg.seed, cfg.threads), cfg.seed, cfg.format);
    } else {
      cfg.command = "tas";
      if (means.empty()) {
        if (!tas_delta || !arms) throw config_error("tas needs --means or both --delta and --arms");
        if (*arms < 2) throw config_error("--arms must be at least 2");
        means.assign(static_cast<std::size_t>(*arms), 0.0);
        means[0] = *tas_delta;
      } else if (tas_delta || arms) {
        throw config_error("give either --means or --delta with --arms");
      }
      text = render_tas(means, cfg.format);
    }
    emit(text, cfg.output_path, out);
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kSuccess;
}

}  // namespace twoarm::cli
