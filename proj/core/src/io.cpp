#include "truncmix/io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace truncmix {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path.string());
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Eigen::MatrixXd load_points_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool parse_ok = true;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        parse_ok = false;
        break;
      }
    }
    if (!parse_ok) {
      if (lineno == 1 && rows.empty()) continue;  // header line
      throw DataError("parse failure at " + path.string() + " row " + std::to_string(lineno) +
                      " column " + std::to_string(col));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("ragged CSV at " + path.string() + " row " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows in " + path.string());
  Eigen::MatrixXd pts(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) pts(i, j) = rows[i][j];
  return pts;
}

ConstraintSet load_constraint(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open constraint file: " + path.string());
  nlohmann::json j;
  in >> j;
  return ConstraintSet::from_json(j);
}

Dataset load_dataset(const fs::path& path, const ConstraintSet& constraint,
                     const RunConfig* config) {
  Eigen::MatrixXd pts = load_points_csv(path);
  if (config && config->rescale_target) {
    auto [tlo, thi] = *config->rescale_target;
    Eigen::VectorXd slo, shi;
    if (config->rescale_source) {
      slo = config->rescale_source->first;
      shi = config->rescale_source->second;
    } else {
      slo = pts.colwise().minCoeff().transpose();
      shi = pts.colwise().maxCoeff().transpose();
    }
    if (tlo.size() != pts.cols() || slo.size() != pts.cols())
      throw ConfigError("rescale box dimension does not match data");
    for (long j = 0; j < pts.cols(); ++j) {
      double scale = (thi[j] - tlo[j]) / (shi[j] - slo[j]);
      pts.col(j) = (pts.col(j).array() - slo[j]) * scale + tlo[j];
    }
  }
  return Dataset::make(std::move(pts), constraint);
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd to_vector(const nlohmann::json& j) {
  auto v = j.get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
}

double parse_threshold(const nlohmann::json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError("bad threshold string: " + s);
  }
  return j.get<double>();
}

template <typename T>
T parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, T>> table,
             const char* what) {
  for (const auto& [name, v] : table)
    if (s == name) return v;
  throw ConfigError(std::string("bad ") + what + ": " + s);
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("model"))
      c.model = parse_enum<Model>(j["model"], {{"tmog", Model::tmog}, {"motg", Model::motg}},
                                  "model");
    if (j.contains("data")) c.data_path = j["data"].get<std::string>();
    if (j.contains("constraint")) c.constraint_path = j["constraint"].get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    c.hp.alpha0 = j.value("alpha0", 1.0);
    c.hp.k_trunc = j.value("k_trunc", 50);
    if (j.contains("threshold")) c.hp.threshold = parse_threshold(j["threshold"]);
    if (j.contains("threshold_variant"))
      c.hp.variant = parse_enum<ThresholdVariant>(
          j["threshold_variant"],
          {{"exact", ThresholdVariant::exact},
           {"geometric_count", ThresholdVariant::geometric_count},
           {"fixed_average", ThresholdVariant::fixed_average},
           {"capped_run", ThresholdVariant::capped_run}},
          "threshold_variant");
    if (j.contains("weight_prior"))
      c.hp.weight_prior = parse_enum<WeightPrior>(
          j["weight_prior"],
          {{"stick_breaking", WeightPrior::stick_breaking}, {"dirichlet", WeightPrior::dirichlet}},
          "weight_prior");
    if (j.contains("assignment_mode"))
      c.hp.assignment_mode = parse_enum<AssignmentMode>(
          j["assignment_mode"],
          {{"conditional", AssignmentMode::conditional}, {"crp", AssignmentMode::crp}},
          "assignment_mode");
    c.hp.iters = j.value("iters", 5000);
    c.hp.burn_in = j.value("burn_in", 2000);
    c.hp.seed = j.value("seed", std::uint64_t{0});
    c.hp.safety_cap = j.value("safety_cap", long{1'000'000});
    c.hp.sweep_cap = j.value("sweep_cap", long{100'000'000});
    if (j.contains("niw")) {
      const auto& n = j["niw"];
      if (n.contains("mu0")) c.niw_mu0 = to_vector(n["mu0"]);
      c.niw_lambda = n.value("lambda", 1.0);
      c.niw_phi_scale = n.value("phi_scale", 0.01);
      if (n.contains("nu")) c.niw_nu = n["nu"].get<double>();
      if (n.contains("phi")) {
        auto rows = n["phi"].get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd phi(rows.size(), rows.size());
        for (size_t r = 0; r < rows.size(); ++r)
          for (size_t cc = 0; cc < rows.size(); ++cc) phi(r, cc) = rows[r][cc];
        c.niw_phi = phi;
      }
    }
    c.train_fraction = j.value("train_fraction", 0.8);
    if (c.train_fraction <= 0.0 || c.train_fraction >= 1.0)
      throw ConfigError("train_fraction must lie in (0,1)");
    if (j.contains("test_selection")) {
      const auto& t = j["test_selection"];
      if (t.is_string()) {
        c.test_selection = parse_enum<TestSelection>(
            t, {{"random", TestSelection::random}, {"edge_biased", TestSelection::edge_biased}},
            "test_selection");
      } else {
        c.test_selection = parse_enum<TestSelection>(
            t.at("type"),
            {{"random", TestSelection::random}, {"edge_biased", TestSelection::edge_biased}},
            "test_selection");
        c.edge_distance = t.value("distance", 0.05);
      }
    }
    c.thin = j.value("thin", 1);
    c.m_norm = j.value("m_norm", long{100'000});
    c.q_mass_draws = j.value("q_mass_draws", long{20'000});
    c.grid_resolution = j.value("grid_resolution", 200);
    if (j.contains("ppc")) {
      c.run_ppc = true;
      c.ppc_replicates = j["ppc"].value("replicates", 200);
      c.ppc_scale = j["ppc"].value("scale", 1.2);
    }
    if (j.contains("rescale")) {
      const auto& r = j["rescale"];
      c.rescale_target = {to_vector(r.at("target_lo")), to_vector(r.at("target_hi"))};
      if (r.contains("source_lo"))
        c.rescale_source = {to_vector(r["source_lo"]), to_vector(r["source_hi"])};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["model"] = model == Model::tmog ? "tmog" : "motg";
  j["data"] = data_path.string();
  j["constraint"] = constraint_path.string();
  j["output_dir"] = output_dir.string();
  j["alpha0"] = hp.alpha0;
  j["k_trunc"] = hp.k_trunc;
  j["threshold"] = std::isinf(hp.threshold) ? nlohmann::json("inf") : nlohmann::json(hp.threshold);
  switch (hp.variant) {
    case ThresholdVariant::exact: j["threshold_variant"] = "exact"; break;
    case ThresholdVariant::geometric_count: j["threshold_variant"] = "geometric_count"; break;
    case ThresholdVariant::fixed_average: j["threshold_variant"] = "fixed_average"; break;
    case ThresholdVariant::capped_run: j["threshold_variant"] = "capped_run"; break;
  }
  j["weight_prior"] =
      hp.weight_prior == WeightPrior::stick_breaking ? "stick_breaking" : "dirichlet";
  j["assignment_mode"] = hp.assignment_mode == AssignmentMode::conditional ? "conditional" : "crp";
  j["iters"] = hp.iters;
  j["burn_in"] = hp.burn_in;
  j["seed"] = hp.seed;
  j["safety_cap"] = hp.safety_cap;
  j["sweep_cap"] = hp.sweep_cap;
  nlohmann::json n;
  if (niw_mu0) n["mu0"] = std::vector<double>(niw_mu0->data(), niw_mu0->data() + niw_mu0->size());
  n["lambda"] = niw_lambda;
  n["phi_scale"] = niw_phi_scale;
  if (niw_nu) n["nu"] = *niw_nu;
  j["niw"] = n;
  j["train_fraction"] = train_fraction;
  j["test_selection"] =
      test_selection == TestSelection::random
          ? nlohmann::json("random")
          : nlohmann::json{{"type", "edge_biased"}, {"distance", edge_distance}};
  j["thin"] = thin;
  j["m_norm"] = m_norm;
  j["q_mass_draws"] = q_mass_draws;
  j["grid_resolution"] = grid_resolution;
  if (run_ppc) j["ppc"] = {{"replicates", ppc_replicates}, {"scale", ppc_scale}};
  return j;
}

NiwParams RunConfig::resolve_niw(const ConstraintSet& constraint) const {
  const int d = constraint.dim();
  NiwParams p;
  if (niw_mu0) {
    p.mu0 = *niw_mu0;
  } else if (constraint.is_full_space()) {
    p.mu0 = Eigen::VectorXd::Zero(d);
  } else {
    auto [lo, hi] = constraint.bounding_box();
    p.mu0 = 0.5 * (lo + hi);
  }
  if (p.mu0.size() != d) throw ConfigError("niw.mu0 dimension does not match constraint");
  p.lambda = niw_lambda;
  p.phi = niw_phi ? *niw_phi : Eigen::MatrixXd(niw_phi_scale * Eigen::MatrixXd::Identity(d, d));
  p.nu = niw_nu ? *niw_nu : d + 3.0;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Split
// ---------------------------------------------------------------------------

SplitDataset split_dataset(Rng& rng, const Dataset& data, const RunConfig& config) {
  const long n = data.n();
  std::vector<int> flags(n, 0);
  if (config.test_selection == TestSelection::edge_biased) {
    for (long i = 0; i < n; ++i) {
      if (data.constraint.boundary_distance(data.points.row(i).transpose()) <
          config.edge_distance)
        flags[i] = 1;
    }
  } else {
    long n_test = std::lround(n * (1.0 - config.train_fraction));
    std::vector<long> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (long i = n - 1; i > 0; --i) {  // Fisher-Yates on the explicit stream
      long j = static_cast<long>(rng.uniform() * (i + 1));
      std::swap(idx[i], idx[std::min(j, i)]);
    }
    for (long i = 0; i < n_test; ++i) flags[idx[i]] = 1;
  }
  long n_test = std::count(flags.begin(), flags.end(), 1);
  if (n_test == 0 || n_test == n) throw DataError("degenerate train/test split");
  Eigen::MatrixXd train(n - n_test, data.dim()), test(n_test, data.dim());
  long ti = 0, si = 0;
  for (long i = 0; i < n; ++i) {
    if (flags[i])
      test.row(si++) = data.points.row(i);
    else
      train.row(ti++) = data.points.row(i);
  }
  return SplitDataset{Dataset::make(std::move(train), data.constraint),
                      Dataset::make(std::move(test), data.constraint), std::move(flags)};
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void persist_store(const SampleStore& store, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "samples.csv");
    for (size_t s = 0; s < store.samples.size(); ++s) {
      const MixtureParams& p = store.samples[s];
      out << s;
      for (int k = 0; k < p.k(); ++k) out << ',' << format_double(p.weights[k]);
      for (int k = 0; k < p.k(); ++k) {
        const ComponentParams& c = p.components[k];
        for (int j = 0; j < c.dim(); ++j) out << ',' << format_double(c.mu[j]);
        for (int r = 0; r < c.dim(); ++r)
          for (int cc = 0; cc <= r; ++cc) out << ',' << format_double(c.chol_lower(r, cc));
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "trace.csv");
    out << "iteration,rejections,log_joint,seconds\n";
    for (const TraceRecord& t : store.traces) {
      out << t.iteration << ',' << t.rejections << ',' << format_double(t.log_joint) << ','
          << format_double(t.seconds) << '\n';
    }
  }
  {
    // Dimensions needed to reload samples.csv unambiguously.
    nlohmann::ordered_json meta;
    meta["n_samples"] = store.samples.size();
    meta["k"] = store.samples.empty() ? 0 : store.samples.front().k();
    meta["dim"] = store.samples.empty() ? 0 : store.samples.front().dim();
    std::ofstream out(dir / "store_meta.json");
    out << meta.dump(2) << '\n';
  }
}

SampleStore load_store(const fs::path& dir) {
  nlohmann::json meta;
  {
    std::ifstream in(dir / "store_meta.json");
    if (!in) throw DataError("missing store_meta.json in " + dir.string());
    in >> meta;
  }
  const int k = meta.at("k").get<int>();
  const int d = meta.at("dim").get<int>();
  SampleStore store;
  {
    std::ifstream in(dir / "samples.csv");
    if (!in) throw DataError("missing samples.csv in " + dir.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> vals;
      while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
      size_t pos = 1;  // skip sample index
      Eigen::VectorXd w(k);
      for (int j = 0; j < k; ++j) w[j] = vals[pos++];
      MixtureParams p;
      p.weights = WeightVector(w / w.sum());
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXd mu(d);
        for (int i = 0; i < d; ++i) mu[i] = vals[pos++];
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
        for (int r = 0; r < d; ++r)
          for (int cc = 0; cc <= r; ++cc) l(r, cc) = vals[pos++];
        p.components.push_back(ComponentParams::make(std::move(mu), l * l.transpose()));
      }
      store.samples.push_back(std::move(p));
    }
  }
  {
    std::ifstream in(dir / "trace.csv");
    if (in) {
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        TraceRecord t;
        std::getline(ss, cell, ',');
        t.iteration = std::stoi(cell);
        std::getline(ss, cell, ',');
        t.rejections = std::stol(cell);
        std::getline(ss, cell, ',');
        t.log_joint = std::stod(cell);
        std::getline(ss, cell, ',');
        t.seconds = std::stod(cell);
        store.traces.push_back(std::move(t));
      }
    }
  }
  return store;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

FitResult run_fit(const RunConfig& config_in) {
  auto wall0 = std::chrono::steady_clock::now();
  RunConfig config = config_in;
  ConstraintSet constraint = load_constraint(config.constraint_path);
  config.hp.niw = config.resolve_niw(constraint);
  config.hp.validate();
  Dataset data = load_dataset(config.data_path, constraint, &config);

  Rng rng(config.hp.seed);
  SplitDataset split = split_dataset(rng, data, config);

  MixtureState state = init_state(rng, split.train, config.hp);
  SampleStore store;
  fs::create_directories(config.output_dir);

  for (int it = 0; it < config.hp.iters; ++it) {
    TraceRecord rec;
    try {
      rec = config.model == Model::tmog ? tmog_sweep(rng, state, split.train, config.hp)
                                        : motg_sweep(rng, state, split.train, config.hp);
    } catch (const RunawayRejectionError&) {
      // Flush the partial trace so the aborted run is inspectable.
      persist_store(store, config.output_dir);
      std::ofstream flag(config.output_dir / "ABORTED");
      flag << "sweep " << it << '\n';
      throw;
    }
    rec.iteration = it;
    store.traces.push_back(rec);
    if (it >= config.hp.burn_in && (it - config.hp.burn_in) % config.thin == 0)
      store.samples.push_back(state.params);
  }

  persist_store(store, config.output_dir);
  {
    std::ofstream out(config.output_dir / "split.csv");
    out << "index,is_test\n";
    for (size_t i = 0; i < split.test_flags.size(); ++i)
      out << i << ',' << split.test_flags[i] << '\n';
  }
  {
    nlohmann::ordered_json manifest;
    manifest["config"] = config.to_json();
    manifest["seed"] = config.hp.seed;
    manifest["input_hashes"] = {{"data", hash_file(config.data_path)},
                                {"constraint", hash_file(config.constraint_path)}};
    manifest["n_train"] = split.train.n();
    manifest["n_test"] = split.test.n();
    manifest["n_samples"] = store.samples.size();
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    std::ofstream out(config.output_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  return FitResult{std::move(store), std::move(split), config.output_dir};
}

FitResult load_fit(const RunConfig& config_in) {
  RunConfig config = config_in;
  ConstraintSet constraint = load_constraint(config.constraint_path);
  Dataset data = load_dataset(config.data_path, constraint, &config);
  SampleStore store = load_store(config.output_dir);

  std::ifstream in(config.output_dir / "split.csv");
  if (!in) throw DataError("missing split.csv in " + config.output_dir.string());
  std::string line;
  std::getline(in, line);
  std::vector<int> flags;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    flags.push_back(std::stoi(line.substr(comma + 1)));
  }
  if (static_cast<long>(flags.size()) != data.n())
    throw DataError("split.csv does not match the dataset");
  long n_test = std::count(flags.begin(), flags.end(), 1);
  Eigen::MatrixXd train(data.n() - n_test, data.dim()), test(n_test, data.dim());
  long ti = 0, si = 0;
  for (long i = 0; i < data.n(); ++i) {
    if (flags[i])
      test.row(si++) = data.points.row(i);
    else
      train.row(ti++) = data.points.row(i);
  }
  SplitDataset split{Dataset::make(std::move(train), constraint),
                     Dataset::make(std::move(test), constraint), std::move(flags)};
  return FitResult{std::move(store), std::move(split), config.output_dir};
}

nlohmann::json run_evaluate(const RunConfig& config, const FitResult& fit) {
  if (fit.store.samples.empty()) throw DataError("run_evaluate: no stored samples");
  Rng rng(config.hp.seed ^ 0x9e3779b97f4a7c15ull);  // evaluation stream
  TestLogLik tll =
      test_loglikelihood(rng, fit.store, fit.split.test, config.model, config.m_norm);

  std::vector<double> q_traj;
  for (const MixtureParams& p : fit.store.samples)
    q_traj.push_back(estimate_q_mass(rng, p, fit.split.test.constraint, config.q_mass_draws));
  double q_mean = std::accumulate(q_traj.begin(), q_traj.end(), 0.0) / q_traj.size();

  TraceSummary ts = trace_summary(fit.store);

  nlohmann::ordered_json report;
  report["test_loglik_total"] = tll.total;
  report["test_loglik_per_point"] = tll.total / static_cast<double>(fit.split.test.n());
  report["test_loglik_points"] = tll.per_point;
  report["q_mass_mean"] = q_mean;
  report["q_mass_trajectory"] = q_traj;
  report["timing"] = {{"total_seconds", ts.total_seconds},
                      {"rejections_q25", ts.rejection_quantiles[0]},
                      {"rejections_median", ts.rejection_quantiles[1]},
                      {"rejections_q75", ts.rejection_quantiles[2]},
                      {"logjoint_ess", ts.logjoint_ess}};
  if (config.run_ppc) {
    PpcResult ppc = ppc_boundary_scale(rng, fit.store, fit.split.train, config.ppc_replicates,
                                       config.ppc_scale, config.hp.safety_cap);
    report["ppc"] = {{"observed_fraction", ppc.observed_fraction},
                     {"p_value", ppc.p_value},
                     {"replicate_fractions", ppc.replicate_fractions}};
  }
  std::ofstream out(config.output_dir / "metrics.json");
  out << report.dump(2) << '\n';
  return report;
}

void write_grid_csv(const DensityGrid& grid, const fs::path& path) {
  std::ofstream out(path);
  const int d = static_cast<int>(grid.axes.size());
  for (int j = 0; j < d; ++j) out << 'x' << grid.plane[j] << ',';
  out << "density,inside\n";
  const int res = static_cast<int>(grid.axes[0].size());
  for (size_t c = 0; c < grid.values.size(); ++c) {
    size_t rem = c;
    std::vector<double> coords(d);
    for (int j = d - 1; j >= 0; --j) {
      coords[j] = grid.axes[j][rem % res];
      rem /= res;
    }
    for (int j = 0; j < d; ++j) out << format_double(coords[j]) << ',';
    out << format_double(grid.values[c]) << ',' << int(grid.inside[c]) << '\n';
  }
}

void run_grid(const RunConfig& config, const FitResult& fit) {
  Rng rng(config.hp.seed ^ 0xda942042e4dd58b5ull);  // grid stream
  const ConstraintSet& constraint = fit.split.train.constraint;
  std::vector<fs::path> files;
  if (constraint.dim() <= 2) {
    DensityGrid grid = posterior_mean_grid(rng, fit.store, constraint, config.grid_resolution,
                                           config.model, config.m_norm);
    fs::path p = config.output_dir / "grid.csv";
    write_grid_csv(grid, p);
    files.push_back(p);
  } else {
    auto grids = pairwise_marginal_grids(rng, fit.store, constraint, config.grid_resolution,
                                         config.q_mass_draws, config.hp.safety_cap);
    for (const DensityGrid& g : grids) {
      fs::path p = config.output_dir /
                   ("grid_" + std::to_string(g.plane[0]) + "_" + std::to_string(g.plane[1]) +
                    ".csv");
      write_grid_csv(g, p);
      files.push_back(p);
    }
  }
  std::ofstream gp(config.output_dir / "contour.gp");
  gp << "set datafile separator ','\n";
  for (const fs::path& f : files) {
    gp << "set title '" << f.filename().string() << "'\n";
    if (constraint.dim() == 1)
      gp << "plot '" << f.filename().string() << "' using 1:2 with lines\npause -1\n";
    else
      gp << "set view map\nsplot '" << f.filename().string()
         << "' using 1:2:3 with pm3d\npause -1\n";
  }
}

}  // namespace truncmix
