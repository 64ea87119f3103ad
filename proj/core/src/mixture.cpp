#include "truncmix/mixture.hpp"

#include <cmath>

namespace truncmix {

RunawayRejectionError::RunawayRejectionError(long count, int component)
    : std::runtime_error("rejection sampling exceeded the safety cap (" + std::to_string(count) +
                         " rejections" +
                         (component >= 0 ? ", component " + std::to_string(component) : "") +
                         "); a component has negligible mass on S"),
      count(count),
      component(component) {}

DataConstraintViolation::DataConstraintViolation(long row)
    : std::runtime_error("data row " + std::to_string(row) + " violates the constraint set"),
      row(row) {}

Dataset Dataset::make(Eigen::MatrixXd points, ConstraintSet constraint) {
  if (points.cols() != constraint.dim())
    throw std::invalid_argument("Dataset: point dimension does not match constraint");
  for (long i = 0; i < points.rows(); ++i) {
    if (!constraint.contains(points.row(i).transpose())) throw DataConstraintViolation(i);
  }
  return Dataset{std::move(points), std::move(constraint)};
}

AugmentedRejections AugmentedRejections::empty_pooled() {
  AugmentedRejections a;
  a.mode = Mode::pooled;
  return a;
}

AugmentedRejections AugmentedRejections::empty_per_observation(long n) {
  AugmentedRejections a;
  a.mode = Mode::per_observation;
  a.groups.resize(n);
  return a;
}

long AugmentedRejections::total() const {
  if (mode == Mode::pooled) return static_cast<long>(pooled.size());
  long t = 0;
  for (const auto& g : groups) t += static_cast<long>(g.size());
  return t;
}

Eigen::VectorXd AugmentedRejections::rejection_counts(int k,
                                                      const std::vector<int>& assignments) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(k);
  if (mode == Mode::pooled) {
    for (const RejectedPoint& r : pooled) m[r.label] += 1.0;
  } else {
    for (size_t i = 0; i < groups.size(); ++i) m[assignments[i]] += static_cast<double>(groups[i].size());
  }
  return m;
}

void Hyperparams::validate() const {
  niw.validate();
  if (!(alpha0 > 0.0)) throw std::invalid_argument("Hyperparams: alpha0 must be positive");
  if (k_trunc < 1) throw std::invalid_argument("Hyperparams: k_trunc must be positive");
  if (threshold < 0.0) throw std::invalid_argument("Hyperparams: threshold must be >= 0");
  if (iters < 1) throw std::invalid_argument("Hyperparams: iters must be positive");
  if (burn_in < 0 || burn_in >= iters)
    throw std::invalid_argument("Hyperparams: burn_in must be < iters");
}

double proposal_logpdf(const MixtureParams& params, const Eigen::VectorXd& x) {
  const int k = params.k();
  std::vector<double> terms;
  terms.reserve(k);
  for (int j = 0; j < k; ++j) {
    double w = params.weights[j];
    if (w <= 0.0) continue;
    terms.push_back(std::log(w) + mvn_logpdf(x, params.components[j]));
  }
  return logsumexp(terms);
}

RejectionDraw rejection_sample_observation(Rng& rng, const MixtureParams& params,
                                           const ConstraintSet& constraint,
                                           std::optional<int> component, long safety_cap) {
  RejectionDraw out;
  const Eigen::VectorXd& w = params.weights.vec();
  std::span<const double> wspan(w.data(), static_cast<size_t>(w.size()));
  long rejections = 0;
  for (;;) {
    int label = component ? *component : rng.categorical(wspan);
    Eigen::VectorXd x = sample_mvn(rng, params.components[label]);
    if (constraint.contains(x)) {
      out.accepted = std::move(x);
      out.accepted_label = label;
      return out;
    }
    out.rejected.push_back({std::move(x), label});
    if (++rejections > safety_cap)
      throw RunawayRejectionError(rejections, component ? *component : -1);
  }
}

double weight_prior_logpdf(const WeightVector& w, const Hyperparams& hp) {
  return hp.weight_prior == WeightPrior::dirichlet ? symmetric_dirichlet_logpdf(w, hp.alpha0)
                                                   : stick_breaking_logpdf(w, hp.alpha0);
}

Eigen::VectorXd observation_counts(const std::vector<int>& assignments, int k) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(k);
  for (int c : assignments) n[c] += 1.0;
  return n;
}

namespace {

double log_joint_common(const MixtureState& state, const Dataset& data, const Hyperparams& hp) {
  double lp = weight_prior_logpdf(state.params.weights, hp);
  for (const ComponentParams& c : state.params.components) lp += niw_logpdf(c, hp.niw);
  for (long i = 0; i < data.n(); ++i) {
    int c = state.assignments[i];
    lp += std::log(std::max(state.params.weights[c], 1e-300)) +
          mvn_logpdf(data.points.row(i).transpose(), state.params.components[c]);
  }
  return lp;
}

}  // namespace

double log_joint_tmog(const MixtureState& state, const Dataset& data,
                      const AugmentedRejections& aug, const Hyperparams& hp) {
  if (aug.mode != AugmentedRejections::Mode::pooled)
    throw std::invalid_argument("log_joint_tmog: augmentation must be pooled");
  double lp = log_joint_common(state, data, hp);
  for (const RejectedPoint& r : aug.pooled) {
    lp += std::log(std::max(state.params.weights[r.label], 1e-300)) +
          mvn_logpdf(r.point, state.params.components[r.label]);
  }
  return lp;
}

double log_joint_motg(const MixtureState& state, const Dataset& data,
                      const AugmentedRejections& aug, const Hyperparams& hp) {
  if (aug.mode != AugmentedRejections::Mode::per_observation)
    throw std::invalid_argument("log_joint_motg: augmentation must be per-observation");
  double lp = log_joint_common(state, data, hp);
  for (size_t i = 0; i < aug.groups.size(); ++i) {
    const ComponentParams& c = state.params.components[state.assignments[i]];
    for (const Eigen::VectorXd& y : aug.groups[i]) lp += mvn_logpdf(y, c);
  }
  return lp;
}

}  // namespace truncmix
