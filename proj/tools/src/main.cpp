// Command-line front end: fit / evaluate / grid / ppc / geweke /
// sweep-thresholds / synth. Exit codes: 0 success, 2 config error, 3
// data/constraint violation, 4 sampler runaway.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "truncmix/io.hpp"
#include "truncmix/synth.hpp"

using namespace truncmix;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string model, data, constraint, output_dir, variant, weight_prior, assignment_mode,
      test_selection, threshold;
  std::optional<double> alpha0, train_fraction, edge_distance, ppc_scale;
  std::optional<int> k_trunc, iters, burn_in, thin, grid_resolution, ppc_replicates;
  std::optional<long> m_norm, q_mass_draws, safety_cap, sweep_cap;
  std::optional<std::uint64_t> seed;
  bool ppc = false;
};

void add_common(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("--model", o.model, "tmog or motg");
  cmd->add_option("--data", o.data, "observations CSV");
  cmd->add_option("--constraint", o.constraint, "constraint JSON");
  cmd->add_option("--output-dir", o.output_dir, "run output directory");
  cmd->add_option("--alpha0", o.alpha0);
  cmd->add_option("--k-trunc", o.k_trunc);
  cmd->add_option("--threshold", o.threshold, "t >= 0, or 'inf'");
  cmd->add_option("--threshold-variant", o.variant,
                  "exact | geometric_count | fixed_average | capped_run");
  cmd->add_option("--weight-prior", o.weight_prior, "stick_breaking | dirichlet");
  cmd->add_option("--assignment-mode", o.assignment_mode, "conditional | crp");
  cmd->add_option("--iters", o.iters);
  cmd->add_option("--burn-in", o.burn_in);
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--thin", o.thin);
  cmd->add_option("--train-fraction", o.train_fraction);
  cmd->add_option("--test-selection", o.test_selection, "random | edge_biased");
  cmd->add_option("--edge-distance", o.edge_distance);
  cmd->add_option("--m-norm", o.m_norm);
  cmd->add_option("--q-mass-draws", o.q_mass_draws);
  cmd->add_option("--grid-resolution", o.grid_resolution);
  cmd->add_option("--safety-cap", o.safety_cap);
  cmd->add_option("--sweep-cap", o.sweep_cap);
  cmd->add_flag("--ppc", o.ppc, "run the boundary-scale posterior predictive check");
  cmd->add_option("--ppc-replicates", o.ppc_replicates);
  cmd->add_option("--ppc-scale", o.ppc_scale);
}

RunConfig build_config(const CliOverrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file: " + o.config_path);
    in >> j;
  }
  // Flag overrides are merged into the JSON before parsing so validation
  // happens in one place.
  if (!o.model.empty()) j["model"] = o.model;
  if (!o.data.empty()) j["data"] = o.data;
  if (!o.constraint.empty()) j["constraint"] = o.constraint;
  if (!o.output_dir.empty()) j["output_dir"] = o.output_dir;
  if (o.alpha0) j["alpha0"] = *o.alpha0;
  if (o.k_trunc) j["k_trunc"] = *o.k_trunc;
  if (!o.threshold.empty()) {
    if (o.threshold == "inf" || o.threshold == "infinity")
      j["threshold"] = "inf";
    else
      j["threshold"] = std::stod(o.threshold);
  }
  if (!o.variant.empty()) j["threshold_variant"] = o.variant;
  if (!o.weight_prior.empty()) j["weight_prior"] = o.weight_prior;
  if (!o.assignment_mode.empty()) j["assignment_mode"] = o.assignment_mode;
  if (o.iters) j["iters"] = *o.iters;
  if (o.burn_in) j["burn_in"] = *o.burn_in;
  if (o.seed) j["seed"] = *o.seed;
  if (o.thin) j["thin"] = *o.thin;
  if (o.train_fraction) j["train_fraction"] = *o.train_fraction;
  if (!o.test_selection.empty()) {
    if (o.edge_distance)
      j["test_selection"] = {{"type", o.test_selection}, {"distance", *o.edge_distance}};
    else
      j["test_selection"] = o.test_selection;
  }
  if (o.m_norm) j["m_norm"] = *o.m_norm;
  if (o.q_mass_draws) j["q_mass_draws"] = *o.q_mass_draws;
  if (o.grid_resolution) j["grid_resolution"] = *o.grid_resolution;
  if (o.safety_cap) j["safety_cap"] = *o.safety_cap;
  if (o.sweep_cap) j["sweep_cap"] = *o.sweep_cap;
  if (o.ppc || o.ppc_replicates || o.ppc_scale) {
    nlohmann::json p = j.value("ppc", nlohmann::json::object());
    if (o.ppc_replicates) p["replicates"] = *o.ppc_replicates;
    if (o.ppc_scale) p["scale"] = *o.ppc_scale;
    j["ppc"] = p;
  }
  // Post-fit subcommands can be pointed at a run directory alone: the
  // manifest written by `fit` already records the full config, and any flags
  // given here override it.
  if (!j.contains("data") && j.contains("output_dir")) {
    std::filesystem::path manifest_path =
        std::filesystem::path(j["output_dir"].get<std::string>()) / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
      nlohmann::json manifest;
      std::ifstream(manifest_path) >> manifest;
      nlohmann::json base = manifest["config"];
      base.merge_patch(j);
      j = std::move(base);
    }
  }

  RunConfig cfg = RunConfig::from_json(j);
  if (cfg.data_path.empty()) throw ConfigError("no data file given (--data or config)");
  if (cfg.constraint_path.empty())
    throw ConfigError("no constraint file given (--constraint or config)");
  if (cfg.output_dir.empty()) throw ConfigError("no output directory given (--output-dir)");
  return cfg;
}

int cmd_fit(const CliOverrides& o) {
  RunConfig cfg = build_config(o);
  FitResult fit = run_fit(cfg);
  std::cout << "fit: " << fit.store.samples.size() << " samples -> " << cfg.output_dir.string()
            << '\n';
  return 0;
}

int cmd_evaluate(const CliOverrides& o) {
  RunConfig cfg = build_config(o);
  FitResult fit = load_fit(cfg);
  nlohmann::json report = run_evaluate(cfg, fit);
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_grid(const CliOverrides& o) {
  RunConfig cfg = build_config(o);
  FitResult fit = load_fit(cfg);
  run_grid(cfg, fit);
  std::cout << "grid: wrote density CSVs to " << cfg.output_dir.string() << '\n';
  return 0;
}

int cmd_ppc(const CliOverrides& o_in) {
  CliOverrides o = o_in;
  o.ppc = true;
  RunConfig cfg = build_config(o);
  FitResult fit = load_fit(cfg);
  Rng rng(cfg.hp.seed ^ 0x9e3779b97f4a7c15ull);
  PpcResult ppc = ppc_boundary_scale(rng, fit.store, fit.split.train, cfg.ppc_replicates,
                                     cfg.ppc_scale, cfg.hp.safety_cap);
  nlohmann::ordered_json report;
  report["observed_fraction"] = ppc.observed_fraction;
  report["p_value"] = ppc.p_value;
  report["replicate_fractions"] = ppc.replicate_fractions;
  std::ofstream out(cfg.output_dir / "ppc.json");
  out << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_geweke(const CliOverrides& o, int n_obs, int n_draws, bool mutate) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file: " + o.config_path);
    in >> j;
  }
  if (!o.model.empty()) j["model"] = o.model;
  if (!o.constraint.empty()) j["constraint"] = o.constraint;
  if (o.seed) j["seed"] = *o.seed;
  if (o.alpha0) j["alpha0"] = *o.alpha0;
  if (o.k_trunc) j["k_trunc"] = *o.k_trunc;
  RunConfig cfg = RunConfig::from_json(j);
  if (cfg.constraint_path.empty())
    throw ConfigError("no constraint file given (--constraint or config)");

  GewekeProblem problem{load_constraint(cfg.constraint_path), cfg.hp, n_obs};
  problem.hp.niw = cfg.resolve_niw(problem.constraint);
  problem.hp.validate();

  Rng rng(cfg.hp.seed);
  SweepOptions opts;
  opts.omit_rejections_in_weight_update = mutate;
  GewekeResult res = geweke_joint_test(rng, problem, cfg.model, n_draws, opts);
  for (size_t i = 0; i < res.names.size(); ++i)
    std::cout << res.names[i] << " z = " << res.z[i] << '\n';
  std::cout << "max |z| = " << res.max_abs_z() << '\n';
  return 0;
}

int cmd_sweep_thresholds(const CliOverrides& o, const std::vector<std::string>& thresholds) {
  for (const std::string& t : thresholds) {
    CliOverrides local = o;
    local.threshold = t;
    RunConfig cfg = build_config(local);
    std::string tag = (t == "inf" || t == "infinity") ? "inf" : t;
    for (char& c : tag)
      if (c == '.') c = 'p';
    cfg.output_dir = cfg.output_dir / ("t_" + tag);
    FitResult fit = run_fit(cfg);
    nlohmann::json report = run_evaluate(cfg, fit);
    std::cout << "threshold " << t << ": test loglik/point = "
              << report["test_loglik_per_point"].get<double>() << '\n';
  }
  return 0;
}

int cmd_synth(const std::string& kind, long n, std::uint64_t seed, double scale, bool scale_is_sd,
              double beta_a, double beta_b, const std::string& out_path,
              const std::string& constraint_out) {
  Rng rng(seed);
  Eigen::MatrixXd pts;
  nlohmann::json constraint_json;
  if (kind == "edge_normal") {
    pts = synth_edge_normal(rng, n, scale, scale_is_sd);
    constraint_json = ConstraintSet::interval(0.0, 1.0).to_json();
  } else if (kind == "beta") {
    pts = synth_beta(rng, n, beta_a, beta_b);
    constraint_json = ConstraintSet::interval(0.0, 1.0).to_json();
  } else if (kind == "polygon_island") {
    pts = synth_polygon_island(rng, n);
    constraint_json = ConstraintSet::polygon_union({island_ring()}).to_json();
  } else {
    throw ConfigError("unknown generator: " + kind +
                      " (expected edge_normal | beta | polygon_island)");
  }
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write " + out_path);
  for (long i = 0; i < pts.rows(); ++i) {
    for (long j = 0; j < pts.cols(); ++j) out << (j ? "," : "") << format_double(pts(i, j));
    out << '\n';
  }
  if (!constraint_out.empty()) {
    std::ofstream cout_(constraint_out);
    if (!cout_) throw DataError("cannot write " + constraint_out);
    cout_ << constraint_json.dump(2) << '\n';
  }
  std::cout << "synth: wrote " << n << " points to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained mixture density estimation"};
  app.require_subcommand(1);

  CliOverrides o;
  auto* fit = app.add_subcommand("fit", "run the Gibbs sampler");
  add_common(fit, o);
  auto* evaluate = app.add_subcommand("evaluate", "metrics for a fitted run");
  add_common(evaluate, o);
  auto* grid = app.add_subcommand("grid", "density grid export");
  add_common(grid, o);
  auto* ppc = app.add_subcommand("ppc", "boundary-scale posterior predictive check");
  add_common(ppc, o);

  int geweke_obs = 10, geweke_draws = 4000;
  bool geweke_mutate = false;
  auto* geweke = app.add_subcommand("geweke", "joint-distribution correctness test");
  add_common(geweke, o);
  geweke->add_option("--n-obs", geweke_obs);
  geweke->add_option("--n-draws", geweke_draws);
  geweke->add_flag("--mutate", geweke_mutate, "drop rejection counts from the weight update");

  std::vector<std::string> thresholds{"0", "0.5", "1", "5", "50", "inf"};
  auto* sweep = app.add_subcommand("sweep-thresholds", "fit+evaluate across a threshold grid");
  add_common(sweep, o);
  sweep->add_option("--thresholds", thresholds, "grid values (default 0 0.5 1 5 50 inf)");

  std::string synth_kind = "edge_normal", synth_out = "data.csv", synth_constraint;
  long synth_n = 1000;
  std::uint64_t synth_seed = 0;
  double synth_scale = 0.05, beta_a = 0.1, beta_b = 0.1;
  bool synth_scale_sd = false;
  auto* synth = app.add_subcommand("synth", "built-in synthetic data generators");
  synth->add_option("--kind", synth_kind, "edge_normal | beta | polygon_island");
  synth->add_option("-n,--n", synth_n);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--scale", synth_scale, "edge_normal spread (variance by default)");
  synth->add_flag("--scale-is-sd", synth_scale_sd, "interpret --scale as a standard deviation");
  synth->add_option("--beta-a", beta_a);
  synth->add_option("--beta-b", beta_b);
  synth->add_option("-o,--out", synth_out);
  synth->add_option("--constraint-out", synth_constraint, "also write the matching constraint");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return cmd_fit(o);
    if (evaluate->parsed()) return cmd_evaluate(o);
    if (grid->parsed()) return cmd_grid(o);
    if (ppc->parsed()) return cmd_ppc(o);
    if (geweke->parsed()) return cmd_geweke(o, geweke_obs, geweke_draws, geweke_mutate);
    if (sweep->parsed()) return cmd_sweep_thresholds(o, thresholds);
    if (synth->parsed())
      return cmd_synth(synth_kind, synth_n, synth_seed, synth_scale, synth_scale_sd, beta_a,
                       beta_b, synth_out, synth_constraint);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataConstraintViolation& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const RunawayRejectionError& e) {
    std::cerr << "sampler runaway: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
