#include "starcore/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "starcore/core.hpp"
#include "starcore/errors.hpp"
#include "starcore/freeze.hpp"
#include "starcore/greedy.hpp"
#include "starcore/hypergraph.hpp"
#include "starcore/instance.hpp"
#include "starcore/model.hpp"
#include "starcore/sampler.hpp"
#include "starcore/summary.hpp"
#include "starcore/thresholds.hpp"

namespace starcore {

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  return cfg;
}

// Flags override the config file; the config file overrides defaults.
template <typename T>
std::optional<T> setting(const CLI::Option* opt, const T& cli_value,
                         const json& cfg, const std::string& key) {
  if (opt->count() > 0) return cli_value;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const std::exception&) {
      throw ConfigError("config key has the wrong type: " + key);
    }
  }
  return std::nullopt;
}

template <typename T>
T require_setting(const CLI::Option* opt, const T& cli_value, const json& cfg,
                  const std::string& key) {
  auto v = setting(opt, cli_value, cfg, key);
  if (!v) throw ConfigError("missing required setting: --" + key);
  return *v;
}

template <typename T>
T setting_or(const CLI::Option* opt, const T& cli_value, const json& cfg,
             const std::string& key, T fallback) {
  return setting(opt, cli_value, cfg, key).value_or(fallback);
}

struct DensityChoice {
  double r = 0;
  std::uint64_t m = 0;
};

// Exactly one of r and M; the other is derived through M = round(r n).
DensityChoice resolve_density(const CLI::Option* opt_r, double r,
                              const CLI::Option* opt_m, std::uint64_t m_val,
                              const json& cfg, std::uint64_t n) {
  if (opt_r->count() > 0 && opt_m->count() > 0)
    throw ConfigError("--r and --M are mutually exclusive");
  DensityChoice d;
  if (opt_r->count() > 0) {
    d.r = r;
  } else if (opt_m->count() > 0) {
    d.m = m_val;
    d.r = static_cast<double>(m_val) / static_cast<double>(n);
    return d;
  } else if (cfg.contains("r") && cfg.contains("M")) {
    throw ConfigError("--r and --M are mutually exclusive");
  } else if (cfg.contains("r")) {
    d.r = cfg.at("r").get<double>();
  } else if (cfg.contains("M")) {
    d.m = cfg.at("M").get<std::uint64_t>();
    d.r = static_cast<double>(d.m) / static_cast<double>(n);
    return d;
  } else {
    throw ConfigError("missing required setting: --r or --M");
  }
  if (!(d.r >= 0)) throw ConfigError("r must be nonnegative");
  d.m = static_cast<std::uint64_t>(std::llround(d.r * static_cast<double>(n)));
  return d;
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + out_path);
    f << text;
  }
}

json report_json(const ThresholdReport& rep) {
  return {{"k", rep.k},
          {"alpha_k", rep.alpha_k},
          {"x1", rep.x1},
          {"xi", rep.xi},
          {"omega_f", rep.omega_f},
          {"omega_p", rep.omega_p},
          {"r_f", rep.r_f},
          {"r_p", rep.r_p},
          {"r_p_lower_bound", rep.r_p_lower_bound},
          {"r_sat_reference", rep.r_sat_reference}};
}

int cmd_thresholds(const std::string& model, int k,
                   const std::vector<double>& r_list, int grid_steps,
                   bool as_json, const std::string& out_path) {
  ThresholdReport rep;
  if (is_builtin_model_name(model) && k > 20) {
    rep = threshold_report(builtin_spectrum(model, k), grid_steps);
  } else {
    rep = threshold_report(resolve_model(model, k), grid_steps);
  }
  json j{{"schema_version", kSchemaVersion},
         {"command", "thresholds"},
         {"config",
          {{"model", model}, {"k", k}, {"grid_steps", grid_steps}, {"r", r_list}}},
         {"report", report_json(rep)}};
  json densities = json::array();
  for (double r : r_list)
    densities.push_back({{"r", r},
                         {"essential_density", essential_density(rep, r)},
                         {"predicted_survival", predicted_survival(rep, r)}});
  j["densities"] = densities;
  if (as_json) {
    emit(j.dump(2) + "\n", out_path);
    return 0;
  }
  std::ostringstream os;
  os << "model " << model << " k=" << k << "\n"
     << "  alpha_k          " << format_number(rep.alpha_k) << "\n"
     << "  x1               " << format_number(rep.x1) << "\n"
     << "  xi               " << format_number(rep.xi) << "\n"
     << "  omega_f          " << format_number(rep.omega_f) << "\n"
     << "  omega_p          " << format_number(rep.omega_p) << "\n"
     << "  r_f              " << format_number(rep.r_f) << "\n"
     << "  r_p              " << format_number(rep.r_p) << "\n"
     << "  r_p_lower_bound  " << format_number(rep.r_p_lower_bound) << "\n"
     << "  r_sat_reference  " << format_number(rep.r_sat_reference) << "\n";
  for (double r : r_list)
    os << "  r=" << format_number(r) << "  essential_density="
       << format_number(essential_density(rep, r)) << "  predicted_survival="
       << format_number(predicted_survival(rep, r)) << "\n";
  emit(os.str(), out_path);
  return 0;
}

int cmd_sample(const std::string& model, int k, std::uint32_t n,
               std::uint64_t M, double r, std::uint64_t seed, bool planted,
               bool uniform_small, bool as_json, const std::string& out_path) {
  if (planted && uniform_small)
    throw ConfigError("--planted and --uniform-small are mutually exclusive");
  if (out_path.empty()) throw ConfigError("missing required setting: --out");
  CspModel m_model = resolve_model(model, k);
  json summary{{"schema_version", kSchemaVersion},
               {"command", "sample"},
               {"config",
                {{"model", model},
                 {"k", k},
                 {"n", n},
                 {"M", M},
                 {"r", r},
                 {"seed", seed},
                 {"mode", uniform_small ? "uniform-small" : "planted"},
                 {"out", out_path}}}};
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + out_path);
  if (uniform_small) {
    UniformSmallPair us = sample_uniform_small(m_model, n, M, seed);
    write_instance(f, us.instance, model, &us.sigma);
    summary["instance_retries"] = us.instance_retries;
    summary["solution_count"] = us.solution_count;
  } else {
    PlantedPair pp = sample_planted(m_model, n, M, seed);
    write_instance(f, pp.instance, model, &pp.sigma);
    summary["rejections"] = pp.rejections;
  }
  if (!f) throw ConfigError("write failed: " + out_path);
  if (as_json)
    std::cout << summary.dump(2) << "\n";
  else
    std::cout << "wrote " << out_path << " (" << M << " constraints on " << n
              << " variables)\n";
  return 0;
}

int cmd_core_scan(const std::string& model, int k, std::uint32_t n,
                  const DensityChoice& density, std::uint32_t trials,
                  std::uint64_t seed, int jobs, std::uint32_t i_max,
                  bool as_json, const std::string& out_path) {
  if (i_max == 0) throw ConfigError("i-max must be positive");
  CspModel m_model = resolve_model(model, k);
  ThresholdReport rep = threshold_report(m_model);
  const double alpha_pred = rep.xi * density.r;
  const double rho_pred = rho_k(k, alpha_pred);
  const double lambda_pred = alpha_pred * std::pow(rho_pred, k - 1);
  const double gamma_margin = fixed_point_trace(k, alpha_pred).gamma_margin;

  struct Trial {
    std::uint64_t seed = 0;
    std::uint64_t essential_edges = 0;
    CoreStats stats;
    std::uint32_t rounds = 0;
  };
  auto start = std::chrono::steady_clock::now();
  std::vector<Trial> results =
      run_trials(trials, jobs, [&](std::uint32_t t) -> Trial {
        Trial tr;
        tr.seed = derive_seed(seed, t);
        PlantedPair pp = sample_planted(m_model, n, density.m, tr.seed);
        EssentialHypergraph g = build_gamma(m_model, pp.instance, pp.sigma);
        tr.essential_edges = g.edge_count();
        PeelTrace trace = parallel_rounds(g, i_max);
        tr.stats = core_stats(trace.core, k);
        tr.rounds = trace.rounds;
        return tr;
      });
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  CsvWriter csv({"trial", "seed", "n", "k", "r", "M", "essential_edges",
                 "alpha_hat", "core_vertices", "core_edges", "core_lplus",
                 "h1_plus", "h1_minus", "rounds", "rho_pred", "lambda_pred",
                 "branching_ratio"});
  std::vector<double> core_frac, ess_frac, branching;
  for (std::uint32_t t = 0; t < results.size(); ++t) {
    const Trial& tr = results[t];
    csv.row({format_number(t), format_number(tr.seed), format_number(n),
             format_number(k), format_number(density.r),
             format_number(density.m), format_number(tr.essential_edges),
             format_number(static_cast<double>(tr.essential_edges) /
                           static_cast<double>(n)),
             format_number(tr.stats.vertices), format_number(tr.stats.edges),
             format_number(tr.stats.vertices_plus),
             format_number(tr.stats.h1_plus), format_number(tr.stats.h1_minus),
             format_number(tr.rounds), format_number(rho_pred),
             format_number(lambda_pred),
             format_number(tr.stats.branching_ratio)});
    core_frac.push_back(static_cast<double>(tr.stats.vertices) /
                        static_cast<double>(n));
    if (density.m > 0)
      ess_frac.push_back(static_cast<double>(tr.essential_edges) /
                         static_cast<double>(density.m));
    branching.push_back(tr.stats.branching_ratio);
  }
  if (!out_path.empty()) csv.write_file(out_path);

  json j{{"schema_version", kSchemaVersion},
         {"command", "core-scan"},
         {"config",
          {{"model", model},
           {"k", k},
           {"n", n},
           {"r", density.r},
           {"M", density.m},
           {"trials", trials},
           {"seed", seed},
           {"jobs", jobs},
           {"i_max", i_max},
           {"out", out_path}}},
         {"predictions",
          {{"xi", rep.xi},
           {"alpha", alpha_pred},
           {"rho", rho_pred},
           {"lambda", lambda_pred},
           {"gamma_margin", gamma_margin},
           {"r_f", rep.r_f},
           {"r_p", rep.r_p}}},
         {"aggregates",
          {{"core_fraction", aggregate_json(core_frac)},
           {"essential_fraction", aggregate_json(ess_frac)},
           {"branching_ratio", aggregate_json(branching)}}},
         {"timings", {{"wall_seconds", elapsed}}}};
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    Aggregate cf = aggregate(core_frac);
    Aggregate bf = aggregate(branching);
    std::cout << "core-scan " << model << " k=" << k << " n=" << n
              << " r=" << format_number(density.r) << " trials=" << trials
              << "\n"
              << "  core fraction    " << format_number(cf.mean) << " +- "
              << format_number(cf.stderr_mean) << "  (predicted "
              << format_number(rho_pred) << ")\n"
              << "  branching ratio  " << format_number(bf.mean)
              << "  (bound " << format_number(1 - gamma_margin / 2) << ")\n";
  }
  return 0;
}

int cmd_freeze_scan(const std::string& model, int k, std::uint32_t n,
                    const DensityChoice& density,
                    const std::vector<int>& ell_list, std::uint32_t trials,
                    std::uint64_t seed, int jobs, bool as_json,
                    const std::string& out_path) {
  CspModel m_model = resolve_model(model, k);
  auto start = std::chrono::steady_clock::now();
  FreezeScanResult res =
      frozen_scan(m_model, n, density.m, ell_list, trials, seed, jobs);
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  std::vector<std::string> columns{"trial", "variable", "in_core",
                                   "star_depth"};
  for (int ell : res.ell_list)
    columns.push_back("frozen_at_" + format_number(ell));
  columns.push_back("near_short_cycle");
  CsvWriter csv(columns);
  for (const FreezeScanRow& row : res.rows) {
    std::vector<std::string> cells{
        format_number(row.trial), format_number(row.variable),
        row.in_core ? "1" : "0",
        row.star_depth == kInfiniteDepth ? "inf"
                                         : format_number(row.star_depth)};
    for (std::uint8_t f : row.frozen_at) cells.push_back(f ? "1" : "0");
    cells.push_back(row.near_short_cycle ? "1" : "0");
    csv.row(cells);
  }
  if (!out_path.empty()) csv.write_file(out_path);

  // Agreement over all trials, one table per ell.
  json agreement = json::array();
  for (std::size_t j = 0; j < res.ell_list.size(); ++j) {
    std::uint64_t cf = 0, cu = 0, pf = 0, pu = 0;
    for (const FreezeTrialSummary& ts : res.trials) {
      cf += ts.agreement[j][0];
      cu += ts.agreement[j][1];
      pf += ts.agreement[j][2];
      pu += ts.agreement[j][3];
    }
    agreement.push_back({{"ell", res.ell_list[j]},
                         {"core_frozen", cf},
                         {"core_unfrozen", cu},
                         {"peeled_frozen", pf},
                         {"peeled_unfrozen", pu}});
  }
  std::uint64_t pair_checks = 0, solutions = 0;
  for (const FreezeTrialSummary& ts : res.trials) {
    pair_checks += ts.pair_checks;
    solutions += ts.solution_count;
  }
  json j{{"schema_version", kSchemaVersion},
         {"command", "freeze-scan"},
         {"config",
          {{"model", model},
           {"k", k},
           {"n", n},
           {"M", density.m},
           {"ell", ell_list},
           {"trials", trials},
           {"seed", seed},
           {"jobs", jobs},
           {"out", out_path}}},
         {"agreement", agreement},
         {"pair_checks", pair_checks},
         {"total_solutions", solutions},
         {"timings", {{"wall_seconds", elapsed}}}};
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "freeze-scan " << model << " k=" << k << " n=" << n
              << " M=" << density.m << " trials=" << trials << "\n"
              << "  flippability checks on solution pairs: " << pair_checks
              << " (all passed)\n";
    for (const auto& a : agreement)
      std::cout << "  ell=" << a["ell"] << "  core frozen/unfrozen "
                << a["core_frozen"] << "/" << a["core_unfrozen"]
                << "  peeled frozen/unfrozen " << a["peeled_frozen"] << "/"
                << a["peeled_unfrozen"] << "\n";
  }
  return 0;
}

int cmd_greedy_solve(const std::string& model, int k, std::uint32_t n,
                     const DensityChoice& density, std::uint32_t trials,
                     std::uint64_t seed, int jobs, std::uint32_t budget,
                     std::uint64_t walk_cap, bool as_json,
                     const std::string& out_path) {
  CspModel m_model = resolve_model(model, k);
  GreedyConfig cfg;
  cfg.repair_budget = budget;
  cfg.walk_cap = walk_cap;
  auto start = std::chrono::steady_clock::now();
  std::vector<GreedyResult> results =
      run_trials(trials, jobs, [&](std::uint32_t t) {
        return greedy_solve(m_model, n, density.m, derive_seed(seed, t), cfg);
      });
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  CsvWriter csv({"trial", "seed", "n", "k", "target_M", "reached_M", "success",
                 "repairs", "repair_flips", "walk_expansions"});
  std::vector<double> success, reached_frac;
  for (std::uint32_t t = 0; t < results.size(); ++t) {
    const GreedyResult& g = results[t];
    csv.row({format_number(t), format_number(g.seed), format_number(n),
             format_number(k), format_number(g.target_m),
             format_number(g.reached_m), g.success ? "1" : "0",
             format_number(g.repairs), format_number(g.repair_flips),
             format_number(g.walk_expansions)});
    success.push_back(g.success ? 1.0 : 0.0);
    reached_frac.push_back(g.target_m == 0
                               ? 1.0
                               : static_cast<double>(g.reached_m) /
                                     static_cast<double>(g.target_m));
  }
  if (!out_path.empty()) csv.write_file(out_path);

  json j{{"schema_version", kSchemaVersion},
         {"command", "greedy-solve"},
         {"config",
          {{"model", model},
           {"k", k},
           {"n", n},
           {"r", density.r},
           {"M", density.m},
           {"trials", trials},
           {"seed", seed},
           {"jobs", jobs},
           {"repair_budget", budget},
           {"walk_cap", walk_cap},
           {"out", out_path}}},
         {"aggregates",
          {{"success_rate", aggregate_json(success)},
           {"reached_fraction", aggregate_json(reached_frac)}}},
         {"timings", {{"wall_seconds", elapsed}}}};
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    Aggregate sr = aggregate(success);
    std::cout << "greedy-solve " << model << " k=" << k << " n=" << n
              << " r=" << format_number(density.r) << " trials=" << trials
              << "\n"
              << "  success rate " << format_number(sr.mean) << " +- "
              << format_number(sr.stderr_mean) << " (heuristic, no guarantee)\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"frozen-variable experiments for random boolean CSPs"};
  app.require_subcommand(1);

  // Shared slots; each subcommand registers the options it uses.
  std::string model, out_path, config_path;
  int k = 0, jobs = 1, grid_steps = 10000;
  std::uint32_t n = 0, trials = 1, budget = 30, i_max = 1u << 20;
  std::uint64_t m_count = 0, seed = 0, walk_cap = 10000;
  double r = 0;
  std::vector<double> r_list;
  std::vector<int> ell_list;
  bool as_json = false, planted = false, uniform_small = false;

  struct Opts {
    CLI::Option *model = nullptr, *k = nullptr, *n = nullptr, *r = nullptr,
                *m = nullptr, *trials = nullptr, *seed = nullptr,
                *jobs = nullptr, *out = nullptr, *json_flag = nullptr,
                *ell = nullptr, *r_list = nullptr, *grid = nullptr,
                *budget = nullptr, *walk = nullptr, *i_max = nullptr;
  };
  auto add_common = [&](CLI::App* cmd, Opts& o) {
    o.model = cmd->add_option("--model", model, "built-in name or JSON file");
    o.k = cmd->add_option("--k", k, "constraint arity");
    o.json_flag = cmd->add_flag("--json", as_json, "JSON summary on stdout");
    cmd->add_option("--config", config_path, "JSON defaults, flags override");
    o.out = cmd->add_option("--out", out_path, "output file");
  };

  CLI::App* c_thresholds = app.add_subcommand("thresholds", "threshold constants");
  Opts o_thresholds;
  add_common(c_thresholds, o_thresholds);
  o_thresholds.r_list = c_thresholds->add_option("--r", r_list, "density r; repeatable");
  o_thresholds.grid = c_thresholds->add_option("--grid-steps", grid_steps,
                                               "theta grid resolution");

  CLI::App* c_sample = app.add_subcommand("sample", "write one instance file");
  Opts o_sample;
  add_common(c_sample, o_sample);
  o_sample.n = c_sample->add_option("--n", n, "variables");
  o_sample.r = c_sample->add_option("--r", r, "constraints per variable");
  o_sample.m = c_sample->add_option("--M", m_count, "constraint count");
  o_sample.seed = c_sample->add_option("--seed", seed, "root seed");
  c_sample->add_flag("--planted", planted, "planted pair (default)");
  c_sample->add_flag("--uniform-small", uniform_small,
                     "uniform (instance, solution) pair, n <= 24");

  CLI::App* c_core = app.add_subcommand("core-scan", "peeling statistics");
  Opts o_core;
  add_common(c_core, o_core);
  o_core.n = c_core->add_option("--n", n, "variables");
  o_core.r = c_core->add_option("--r", r, "constraints per variable");
  o_core.m = c_core->add_option("--M", m_count, "constraint count");
  o_core.trials = c_core->add_option("--trials", trials, "independent trials");
  o_core.seed = c_core->add_option("--seed", seed, "root seed");
  o_core.jobs = c_core->add_option("--jobs", jobs, "worker threads");
  o_core.i_max = c_core->add_option("--i-max", i_max, "peeling round cap");

  CLI::App* c_freeze = app.add_subcommand("freeze-scan", "exact frozen sets");
  Opts o_freeze;
  add_common(c_freeze, o_freeze);
  o_freeze.n = c_freeze->add_option("--n", n, "variables (<= 24)");
  o_freeze.r = c_freeze->add_option("--r", r, "constraints per variable");
  o_freeze.m = c_freeze->add_option("--M", m_count, "constraint count");
  o_freeze.ell = c_freeze->add_option("--ell", ell_list, "move budgets")
                     ->delimiter(',');
  o_freeze.trials = c_freeze->add_option("--trials", trials, "independent trials");
  o_freeze.seed = c_freeze->add_option("--seed", seed, "root seed");
  o_freeze.jobs = c_freeze->add_option("--jobs", jobs, "worker threads");

  CLI::App* c_greedy = app.add_subcommand("greedy-solve", "incremental heuristic");
  Opts o_greedy;
  add_common(c_greedy, o_greedy);
  o_greedy.n = c_greedy->add_option("--n", n, "variables");
  o_greedy.r = c_greedy->add_option("--r", r, "constraints per variable");
  o_greedy.m = c_greedy->add_option("--M", m_count, "constraint count");
  o_greedy.trials = c_greedy->add_option("--trials", trials, "independent trials");
  o_greedy.seed = c_greedy->add_option("--seed", seed, "root seed");
  o_greedy.jobs = c_greedy->add_option("--jobs", jobs, "worker threads");
  o_greedy.budget = c_greedy->add_option("--repair-budget", budget,
                                         "max variables per repair");
  o_greedy.walk = c_greedy->add_option("--walk-cap", walk_cap,
                                       "max search nodes per repair");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    json cfg = load_config(config_path);
    if (c_thresholds->parsed()) {
      std::string mdl = require_setting(o_thresholds.model, model, cfg, "model");
      int kk = require_setting(o_thresholds.k, k, cfg, "k");
      auto rs = setting_or(o_thresholds.r_list, r_list, cfg, "r",
                           std::vector<double>{});
      int gs = setting_or(o_thresholds.grid, grid_steps, cfg, "grid_steps",
                          10000);
      bool js = as_json || cfg.value("json", false);
      std::string out = setting_or(o_thresholds.out, out_path, cfg, "out",
                                   std::string{});
      return cmd_thresholds(mdl, kk, rs, gs, js, out);
    }
    if (c_sample->parsed()) {
      std::string mdl = require_setting(o_sample.model, model, cfg, "model");
      int kk = require_setting(o_sample.k, k, cfg, "k");
      std::uint32_t nn = require_setting(o_sample.n, n, cfg, "n");
      if (nn == 0) throw ConfigError("n must be positive");
      DensityChoice d = resolve_density(o_sample.r, r, o_sample.m, m_count, cfg, nn);
      std::uint64_t sd = require_setting(o_sample.seed, seed, cfg, "seed");
      bool js = as_json || cfg.value("json", false);
      std::string out = setting_or(o_sample.out, out_path, cfg, "out",
                                   std::string{});
      bool uni = uniform_small || cfg.value("uniform_small", false);
      bool pl = planted || cfg.value("planted", false);
      return cmd_sample(mdl, kk, nn, d.m, d.r, sd, pl, uni, js, out);
    }
    auto scan_args = [&](const Opts& o) {
      struct Parsed {
        std::string mdl;
        int k;
        std::uint32_t n, trials;
        DensityChoice d;
        std::uint64_t seed;
        int jobs;
        bool js;
        std::string out;
      } p;
      p.mdl = require_setting(o.model, model, cfg, "model");
      p.k = require_setting(o.k, k, cfg, "k");
      p.n = require_setting(o.n, n, cfg, "n");
      if (p.n == 0) throw ConfigError("n must be positive");
      p.d = resolve_density(o.r, r, o.m, m_count, cfg, p.n);
      p.trials = setting_or(o.trials, trials, cfg, "trials", 1u);
      p.seed = require_setting(o.seed, seed, cfg, "seed");
      p.jobs = setting_or(o.jobs, jobs, cfg, "jobs", 1);
      if (p.jobs < 1) throw ConfigError("jobs must be positive");
      p.js = as_json || cfg.value("json", false);
      p.out = setting_or(o.out, out_path, cfg, "out", std::string{});
      return p;
    };
    if (c_core->parsed()) {
      auto p = scan_args(o_core);
      std::uint32_t im = setting_or(o_core.i_max, i_max, cfg, "i_max",
                                    1u << 20);
      return cmd_core_scan(p.mdl, p.k, p.n, p.d, p.trials, p.seed, p.jobs, im,
                           p.js, p.out);
    }
    if (c_freeze->parsed()) {
      auto p = scan_args(o_freeze);
      auto ells = setting_or(o_freeze.ell, ell_list, cfg, "ell",
                             std::vector<int>{1});
      return cmd_freeze_scan(p.mdl, p.k, p.n, p.d, ells, p.trials, p.seed,
                             p.jobs, p.js, p.out);
    }
    if (c_greedy->parsed()) {
      auto p = scan_args(o_greedy);
      std::uint32_t bd = setting_or(o_greedy.budget, budget, cfg,
                                    "repair_budget", 30u);
      std::uint64_t wc = setting_or(o_greedy.walk, walk_cap, cfg, "walk_cap",
                                    std::uint64_t{10000});
      return cmd_greedy_solve(p.mdl, p.k, p.n, p.d, p.trials, p.seed, p.jobs,
                              bd, wc, p.js, p.out);
    }
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ScaleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace starcore
