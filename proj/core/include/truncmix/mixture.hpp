#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "truncmix/constraint.hpp"
#include "truncmix/kernels.hpp"
#include "truncmix/rng.hpp"

namespace truncmix {

enum class WeightPrior { stick_breaking, dirichlet };
enum class AssignmentMode { conditional, crp };
enum class ThresholdVariant { exact, geometric_count, fixed_average, capped_run };
enum class Model { tmog, motg };

// Weights plus component parameters: everything a recorded posterior draw
// needs to evaluate densities.
struct MixtureParams {
  WeightVector weights;
  std::vector<ComponentParams> components;

  int k() const { return static_cast<int>(components.size()); }
  int dim() const { return components.empty() ? 0 : components.front().dim(); }
};

// Full chain state: parameters plus cluster assignments of the observations.
struct MixtureState {
  MixtureParams params;
  std::vector<int> assignments;  // values in [0, K)
};

struct Dataset {
  Eigen::MatrixXd points;  // n x d
  ConstraintSet constraint;

  // Throws DataConstraintViolation naming the first offending row.
  static Dataset make(Eigen::MatrixXd points, ConstraintSet constraint);

  long n() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

struct RejectedPoint {
  Eigen::VectorXd point;
  int label;  // component the proposal came from
};

// Imputed rejected proposals. Pooled (TMoG): flat list with per-proposal
// labels. Per-observation (MoTG): one group per observation, all sharing the
// owner's component label.
struct AugmentedRejections {
  enum class Mode { pooled, per_observation };

  Mode mode = Mode::pooled;
  std::vector<RejectedPoint> pooled;
  std::vector<std::vector<Eigen::VectorXd>> groups;

  static AugmentedRejections empty_pooled();
  static AugmentedRejections empty_per_observation(long n);

  long total() const;
  // Labels of rejections per component (m_k), given current assignments for
  // per-observation mode.
  Eigen::VectorXd rejection_counts(int k, const std::vector<int>& assignments) const;
};

struct Hyperparams {
  double alpha0 = 1.0;
  NiwParams niw;
  int k_trunc = 50;
  // t = (1-rho)/rho; 0 disables augmentation, infinity means exact imputation.
  double threshold = 1.0;
  ThresholdVariant variant = ThresholdVariant::capped_run;
  WeightPrior weight_prior = WeightPrior::stick_breaking;
  AssignmentMode assignment_mode = AssignmentMode::conditional;
  int iters = 5000;
  int burn_in = 2000;
  std::uint64_t seed = 0;
  long safety_cap = 1'000'000;
  long sweep_cap = 100'000'000;

  double rho() const { return 1.0 / (1.0 + threshold); }
  void validate() const;
};

class RunawayRejectionError : public std::runtime_error {
 public:
  RunawayRejectionError(long count, int component);
  long count;
  int component;  // -1 in pooled mode
};

class DataConstraintViolation : public std::runtime_error {
 public:
  DataConstraintViolation(long row);
  long row;
};

// log q(x | theta) = log sum_k pi_k N(x | mu_k, Sigma_k), via log-sum-exp.
double proposal_logpdf(const MixtureParams& params, const Eigen::VectorXd& x);

struct RejectionDraw {
  Eigen::VectorXd accepted;
  int accepted_label;
  std::vector<RejectedPoint> rejected;
};

// Propose until acceptance. Without `component` a fresh label is drawn from pi
// for every proposal (TMoG generative process); with it, all proposals come
// from that single component (MoTG). Throws RunawayRejectionError past the cap.
RejectionDraw rejection_sample_observation(Rng& rng, const MixtureParams& params,
                                           const ConstraintSet& constraint,
                                           std::optional<int> component, long safety_cap);

double log_joint_tmog(const MixtureState& state, const Dataset& data,
                      const AugmentedRejections& aug, const Hyperparams& hp);
double log_joint_motg(const MixtureState& state, const Dataset& data,
                      const AugmentedRejections& aug, const Hyperparams& hp);

// Weight-prior log density under the configured prior.
double weight_prior_logpdf(const WeightVector& w, const Hyperparams& hp);

Eigen::VectorXd observation_counts(const std::vector<int>& assignments, int k);

}  // namespace truncmix
