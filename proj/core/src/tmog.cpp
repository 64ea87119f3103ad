#include "truncmix/tmog.hpp"

#include <chrono>

#include "truncmix/threshold.hpp"

namespace truncmix {

namespace {

std::vector<int> occupancy_of(const std::vector<int>& assignments, int k) {
  std::vector<int> occ(k, 0);
  for (int c : assignments) ++occ[c];
  return occ;
}

}  // namespace

AugmentedRejections impute_pooled(Rng& rng, const MixtureState& state, const Dataset& data,
                                  long safety_cap, long sweep_cap) {
  AugmentedRejections aug = AugmentedRejections::empty_pooled();
  for (long i = 0; i < data.n(); ++i) {
    RejectionDraw draw =
        rejection_sample_observation(rng, state.params, data.constraint, std::nullopt, safety_cap);
    for (RejectedPoint& r : draw.rejected) aug.pooled.push_back(std::move(r));
    if (aug.total() > sweep_cap)
      throw RunawayRejectionError(aug.total(), -1);
  }
  return aug;
}

WeightVector update_weights_tmog(Rng& rng, const Eigen::VectorXd& counts_obs,
                                 const Eigen::VectorXd& counts_rej, const Hyperparams& hp) {
  Eigen::VectorXd counts = counts_obs + counts_rej;
  if (hp.weight_prior == WeightPrior::dirichlet)
    return sample_dirichlet(rng, counts.array() + hp.alpha0);
  return stick_breaking_posterior(rng, counts, hp.alpha0);
}

std::vector<int> update_assignments_tmog(Rng& rng, MixtureState& state, const Dataset& data,
                                         const AugmentedRejections& aug, const Hyperparams& hp) {
  const int k = state.params.k();
  const long n = data.n();
  std::vector<int> out(n);

  if (hp.assignment_mode == AssignmentMode::conditional) {
    std::vector<double> logits(k);
    for (long i = 0; i < n; ++i) {
      Eigen::VectorXd x = data.points.row(i).transpose();
      for (int j = 0; j < k; ++j) {
        double w = state.params.weights[j];
        logits[j] = w > 0.0 ? std::log(w) + mvn_logpdf(x, state.params.components[j])
                            : -std::numeric_limits<double>::infinity();
      }
      out[i] = rng.categorical_logits(logits);
    }
    return out;
  }

  // CRP sweep on observation-plus-rejection counts, one auxiliary
  // prior-parameter draw for the new-cluster option when an empty slot exists.
  Eigen::VectorXd n_k = observation_counts(state.assignments, k);
  Eigen::VectorXd m_k = aug.rejection_counts(k, state.assignments);
  out = state.assignments;
  std::vector<double> logits;
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd x = data.points.row(i).transpose();
    n_k[out[i]] -= 1.0;
    int empty_slot = -1;
    for (int j = 0; j < k; ++j) {
      if (n_k[j] + m_k[j] == 0.0) {
        empty_slot = j;
        break;
      }
    }
    if (empty_slot >= 0)
      state.params.components[empty_slot] = sample_niw(rng, hp.niw);
    logits.assign(k, -std::numeric_limits<double>::infinity());
    for (int j = 0; j < k; ++j) {
      double cnt = n_k[j] + m_k[j];
      if (j == empty_slot)
        logits[j] = std::log(hp.alpha0) + mvn_logpdf(x, state.params.components[j]);
      else if (cnt > 0.0)
        logits[j] = std::log(cnt) + mvn_logpdf(x, state.params.components[j]);
    }
    out[i] = rng.categorical_logits(logits);
    n_k[out[i]] += 1.0;
  }
  return out;
}

void update_components_tmog(Rng& rng, MixtureState& state, const Dataset& data,
                            const AugmentedRejections& aug, const Hyperparams& hp) {
  if (aug.mode != AugmentedRejections::Mode::pooled)
    throw std::invalid_argument("update_components_tmog: augmentation must be pooled");
  const int k = state.params.k();
  std::vector<std::vector<Eigen::VectorXd>> members(k);
  for (long i = 0; i < data.n(); ++i)
    members[state.assignments[i]].push_back(data.points.row(i).transpose());
  for (const RejectedPoint& r : aug.pooled) members[r.label].push_back(r.point);
  for (int j = 0; j < k; ++j)
    state.params.components[j] = sample_niw(rng, niw_posterior(hp.niw, members[j]));
}

MixtureState init_state(Rng& rng, const Dataset& data, const Hyperparams& hp) {
  hp.validate();
  MixtureState state;
  state.params.components.reserve(hp.k_trunc);
  for (int j = 0; j < hp.k_trunc; ++j) state.params.components.push_back(sample_niw(rng, hp.niw));
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(hp.k_trunc);
  state.params.weights = hp.weight_prior == WeightPrior::dirichlet
                             ? sample_dirichlet(rng, zeros.array() + hp.alpha0)
                             : stick_breaking_posterior(rng, zeros, hp.alpha0);
  state.assignments.assign(data.n(), 0);
  AugmentedRejections none = AugmentedRejections::empty_pooled();
  Hyperparams cond = hp;
  cond.assignment_mode = AssignmentMode::conditional;
  state.assignments = update_assignments_tmog(rng, state, data, none, cond);
  return state;
}

TraceRecord tmog_sweep(Rng& rng, MixtureState& state, const Dataset& data, const Hyperparams& hp,
                       const SweepOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  AugmentedRejections aug =
      impute_augmentation(rng, state, data, hp, AugmentedRejections::Mode::pooled);
  const int k = state.params.k();
  Eigen::VectorXd n_k = observation_counts(state.assignments, k);
  Eigen::VectorXd m_k = aug.rejection_counts(k, state.assignments);
  if (opts.omit_rejections_in_weight_update) m_k.setZero();
  state.params.weights = update_weights_tmog(rng, n_k, m_k, hp);
  state.assignments = update_assignments_tmog(rng, state, data, aug, hp);
  update_components_tmog(rng, state, data, aug, hp);

  TraceRecord rec;
  rec.rejections = aug.total();
  rec.log_joint = log_joint_tmog(state, data, aug, hp);
  rec.occupancy = occupancy_of(state.assignments, k);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;  // aug goes out of scope here: rejections are discarded
}

}  // namespace truncmix
