#include "truncmix/motg.hpp"

#include <chrono>

#include "truncmix/threshold.hpp"

namespace truncmix {

AugmentedRejections impute_per_observation(Rng& rng, const MixtureState& state,
                                           const Dataset& data, long safety_cap, long sweep_cap) {
  AugmentedRejections aug = AugmentedRejections::empty_per_observation(data.n());
  long total = 0;
  for (long i = 0; i < data.n(); ++i) {
    RejectionDraw draw = rejection_sample_observation(rng, state.params, data.constraint,
                                                      state.assignments[i], safety_cap);
    auto& group = aug.groups[i];
    group.reserve(draw.rejected.size());
    for (RejectedPoint& r : draw.rejected) group.push_back(std::move(r.point));
    total += static_cast<long>(group.size());
    if (total > sweep_cap) throw RunawayRejectionError(total, state.assignments[i]);
  }
  return aug;
}

WeightVector update_weights_motg(Rng& rng, const Eigen::VectorXd& counts_obs,
                                 const Hyperparams& hp) {
  if (hp.weight_prior == WeightPrior::dirichlet)
    return sample_dirichlet(rng, counts_obs.array() + hp.alpha0);
  return stick_breaking_posterior(rng, counts_obs, hp.alpha0);
}

std::vector<int> update_assignments_motg(Rng& rng, MixtureState& state, const Dataset& data,
                                         const AugmentedRejections& aug, const Hyperparams& hp) {
  if (aug.mode != AugmentedRejections::Mode::per_observation)
    throw std::invalid_argument("update_assignments_motg: augmentation must be per-observation");
  const int k = state.params.k();
  const long n = data.n();
  std::vector<int> out(n);
  std::vector<double> logits(k);

  auto group_loglik = [&](long i, int j) {
    double lp = mvn_logpdf(data.points.row(i).transpose(), state.params.components[j]);
    for (const Eigen::VectorXd& y : aug.groups[i]) lp += mvn_logpdf(y, state.params.components[j]);
    return lp;
  };

  if (hp.assignment_mode == AssignmentMode::conditional) {
    for (long i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        double w = state.params.weights[j];
        logits[j] = w > 0.0 ? std::log(w) + group_loglik(i, j)
                            : -std::numeric_limits<double>::infinity();
      }
      out[i] = rng.categorical_logits(logits);
    }
    return out;
  }

  // CRP: observation counts only (rejections move with their observation and
  // never enter the urn), fresh prior parameters for one empty slot.
  Eigen::VectorXd n_k = observation_counts(state.assignments, k);
  out = state.assignments;
  for (long i = 0; i < n; ++i) {
    n_k[out[i]] -= 1.0;
    int empty_slot = -1;
    for (int j = 0; j < k; ++j) {
      if (n_k[j] == 0.0) {
        empty_slot = j;
        break;
      }
    }
    if (empty_slot >= 0) state.params.components[empty_slot] = sample_niw(rng, hp.niw);
    logits.assign(k, -std::numeric_limits<double>::infinity());
    for (int j = 0; j < k; ++j) {
      if (j == empty_slot)
        logits[j] = std::log(hp.alpha0) + group_loglik(i, j);
      else if (n_k[j] > 0.0)
        logits[j] = std::log(n_k[j]) + group_loglik(i, j);
    }
    out[i] = rng.categorical_logits(logits);
    n_k[out[i]] += 1.0;
  }
  return out;
}

void update_components_motg(Rng& rng, MixtureState& state, const Dataset& data,
                            const AugmentedRejections& aug, const Hyperparams& hp) {
  if (aug.mode != AugmentedRejections::Mode::per_observation)
    throw std::invalid_argument("update_components_motg: augmentation must be per-observation");
  const int k = state.params.k();
  std::vector<std::vector<Eigen::VectorXd>> members(k);
  for (long i = 0; i < data.n(); ++i) {
    int c = state.assignments[i];
    members[c].push_back(data.points.row(i).transpose());
    for (const Eigen::VectorXd& y : aug.groups[i]) members[c].push_back(y);
  }
  for (int j = 0; j < k; ++j)
    state.params.components[j] = sample_niw(rng, niw_posterior(hp.niw, members[j]));
}

TraceRecord motg_sweep(Rng& rng, MixtureState& state, const Dataset& data, const Hyperparams& hp,
                       const SweepOptions& opts) {
  (void)opts;  // the weight-update mutation knob is TMoG-specific
  auto t0 = std::chrono::steady_clock::now();
  AugmentedRejections aug =
      impute_augmentation(rng, state, data, hp, AugmentedRejections::Mode::per_observation);
  const int k = state.params.k();
  Eigen::VectorXd n_k = observation_counts(state.assignments, k);
  state.params.weights = update_weights_motg(rng, n_k, hp);
  state.assignments = update_assignments_motg(rng, state, data, aug, hp);
  update_components_motg(rng, state, data, aug, hp);

  TraceRecord rec;
  rec.rejections = aug.total();
  rec.log_joint = log_joint_motg(state, data, aug, hp);
  rec.occupancy.assign(k, 0);
  for (int c : state.assignments) ++rec.occupancy[c];
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace truncmix
