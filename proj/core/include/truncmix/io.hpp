#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "truncmix/evaluation.hpp"

namespace truncmix {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what) : std::runtime_error(what) {}
};

enum class TestSelection { random, edge_biased };

struct RunConfig {
  Model model = Model::tmog;
  std::filesystem::path data_path;
  std::filesystem::path constraint_path;
  std::filesystem::path output_dir;
  Hyperparams hp;
  // NIW spec as given in the config; resolved against the data dimension at
  // run start (mu0 defaults to the bounding-box center, Phi to phi_scale * I,
  // nu to d + 3).
  std::optional<Eigen::VectorXd> niw_mu0;
  double niw_lambda = 1.0;
  std::optional<Eigen::MatrixXd> niw_phi;
  double niw_phi_scale = 0.01;
  std::optional<double> niw_nu;
  double train_fraction = 0.8;
  TestSelection test_selection = TestSelection::random;
  double edge_distance = 0.05;
  int thin = 1;
  long m_norm = 100'000;  // Monte Carlo draws per stored sample for normalizers
  long q_mass_draws = 20'000;
  int grid_resolution = 200;
  bool run_ppc = false;
  int ppc_replicates = 200;
  double ppc_scale = 1.2;
  // Optional affine rescaling of the raw data onto a target box; the source
  // box defaults to the data's coordinate-wise min/max.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> rescale_target;
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> rescale_source;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  NiwParams resolve_niw(const ConstraintSet& constraint) const;
};

// CSV with one observation per row; an optional non-numeric header line is
// skipped. Rescaling (when configured) is applied before the constraint check.
Eigen::MatrixXd load_points_csv(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, const ConstraintSet& constraint,
                     const RunConfig* config = nullptr);

ConstraintSet load_constraint(const std::filesystem::path& path);

struct SplitDataset {
  Dataset train;
  Dataset test;
  std::vector<int> test_flags;  // per original row
};

SplitDataset split_dataset(Rng& rng, const Dataset& data, const RunConfig& config);

struct FitResult {
  SampleStore store;
  SplitDataset split;
  std::filesystem::path output_dir;
};

// Executes the configured sampler, persisting samples.csv, trace.csv,
// split.csv and manifest.json under output_dir.
FitResult run_fit(const RunConfig& config);

// Reloads a previously persisted fit (store + split) from config.output_dir.
FitResult load_fit(const RunConfig& config);

// Metrics report (test log-likelihood, q(S) trajectory, timing, optional PPC)
// written as metrics.json; returns the report.
nlohmann::json run_evaluate(const RunConfig& config, const FitResult& fit);

// Density grid CSVs (pairwise planes for d > 2) plus a generic gnuplot script.
void run_grid(const RunConfig& config, const FitResult& fit);

// Persistence: weights plus per-component mean and lower-triangular Cholesky
// factor per row, full precision.
void persist_store(const SampleStore& store, const std::filesystem::path& dir);
SampleStore load_store(const std::filesystem::path& dir);

void write_grid_csv(const DensityGrid& grid, const std::filesystem::path& path);

std::string hash_file(const std::filesystem::path& path);  // FNV-1a 64, hex
std::string format_double(double v);                       // shortest round-trip

}  // namespace truncmix
