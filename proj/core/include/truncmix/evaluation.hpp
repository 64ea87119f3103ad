#pragma once

#include <array>
#include <string>

#include "truncmix/motg.hpp"
#include "truncmix/tmog.hpp"

namespace truncmix {

struct SampleStore {
  std::vector<MixtureParams> samples;  // post burn-in, optionally thinned
  std::vector<TraceRecord> traces;     // one per iteration
};

class DegenerateNormalizerError : public std::runtime_error {
 public:
  DegenerateNormalizerError(const std::string& what) : std::runtime_error(what) {}
};

// Monte Carlo q(S): fraction of m draws from q(.|theta) landing inside.
double estimate_q_mass(Rng& rng, const MixtureParams& params, const ConstraintSet& constraint,
                       long m);

// Per-component normalizers Z_k = P(N(mu_k, Sigma_k) in S), Monte Carlo.
Eigen::VectorXd estimate_component_masses(Rng& rng, const MixtureParams& params,
                                          const ConstraintSet& constraint, long m);

// log p(x|theta) for the single-normalizer model: -inf outside S, otherwise
// proposal_logpdf - log q(S).
double constrained_logdensity_tmog(const MixtureParams& params, const ConstraintSet& constraint,
                                   const Eigen::VectorXd& x, double qS_estimate);

// log p(x|theta) for the per-component-normalizer model.
double constrained_logdensity_motg(const MixtureParams& params, const ConstraintSet& constraint,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& per_component_Z);

struct TestLogLik {
  double total = 0.0;
  std::vector<double> per_point;
};

// Posterior-mean predictive: per point, log((1/S) sum_s p(x|theta_s)), with
// normalizers estimated once per stored sample (m_norm draws) and shared
// across test points.
TestLogLik test_loglikelihood(Rng& rng, const SampleStore& store, const Dataset& test,
                              Model model, long m_norm);

// Same evaluation with externally supplied normalizers (e.g. from quadrature):
// normalizers[s] is q(S) for tmog, or the K-vector of Z_k for motg.
TestLogLik test_loglikelihood_with_normalizers(const SampleStore& store, const Dataset& test,
                                               Model model,
                                               const std::vector<Eigen::VectorXd>& normalizers);

struct DensityGrid {
  std::vector<std::vector<double>> axes;  // cell centers per plotted dimension
  std::vector<double> values;             // row-major; 0 outside S
  std::vector<std::uint8_t> inside;
  std::array<int, 2> plane{{0, 1}};  // coordinate plane for pairwise exports
};

// Posterior-mean constrained density on a grid spanning the bounding box
// inflated by 20%. d <= 2 only; higher dimensions go through
// pairwise_marginal_grids.
DensityGrid posterior_mean_grid(Rng& rng, const SampleStore& store,
                                const ConstraintSet& constraint, int resolution, Model model,
                                long m_norm);

// 2-D marginal density estimates for every coordinate pair, via Monte Carlo
// draws from the constrained model binned on the plane grid.
std::vector<DensityGrid> pairwise_marginal_grids(Rng& rng, const SampleStore& store,
                                                 const ConstraintSet& constraint, int resolution,
                                                 long m_draws, long safety_cap);

struct PpcResult {
  std::vector<double> replicate_fractions;
  double observed_fraction = 0.0;
  double p_value = 1.0;  // fraction of replicates >= observed
};

// For each replicate: generate a same-size dataset from the constrained model,
// scale it about its centroid, record the fraction pushed outside S. The
// observed statistic is computed the same way on the data.
PpcResult ppc_boundary_scale(Rng& rng, const SampleStore& store, const Dataset& observed,
                             int n_rep, double scale_factor, long safety_cap = 1'000'000);

struct GewekeProblem {
  ConstraintSet constraint;
  Hyperparams hp;
  int n_obs = 10;
};

struct GewekeResult {
  std::vector<std::string> names;
  std::vector<double> z;
  double max_abs_z() const;
};

// Joint-distribution test: marginal-conditional simulation (prior draws plus
// model data) against successive-conditional simulation (Gibbs sweep
// alternated with data re-simulation). Exact imputation only.
GewekeResult geweke_joint_test(Rng& rng, const GewekeProblem& problem, Model model, int n_draws,
                               const SweepOptions& opts = {});

struct TraceSummary {
  bool degenerate = false;               // constant log-joint trace
  std::vector<double> logjoint_autocorr; // lags 1..50
  double logjoint_ess = 0.0;
  std::array<double, 3> rejection_quantiles{{0, 0, 0}};  // 25 / 50 / 75
  double total_seconds = 0.0;
};

TraceSummary trace_summary(const SampleStore& store);

// Sample autocorrelation at lags 1..max_lag.
std::vector<double> autocorrelation(std::span<const double> x, int max_lag);
double effective_sample_size(std::span<const double> x);

}  // namespace truncmix
