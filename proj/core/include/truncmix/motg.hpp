#pragma once

#include "truncmix/tmog.hpp"

namespace truncmix {

// Per-observation imputation: repeatedly propose from component c_i until
// acceptance; the rejections stay grouped with observation i.
AugmentedRejections impute_per_observation(Rng& rng, const MixtureState& state,
                                           const Dataset& data, long safety_cap,
                                           long sweep_cap = 100'000'000);

// Observation counts only; rejected samples never enter this update.
WeightVector update_weights_motg(Rng& rng, const Eigen::VectorXd& counts_obs,
                                 const Hyperparams& hp);

// Categorical weight log pi_k + log N(x_i|k) + sum_r log N(y_ir|k); the whole
// group Y_i moves with the observation on reassignment (label rewrite only).
std::vector<int> update_assignments_motg(Rng& rng, MixtureState& state, const Dataset& data,
                                         const AugmentedRejections& aug, const Hyperparams& hp);

void update_components_motg(Rng& rng, MixtureState& state, const Dataset& data,
                            const AugmentedRejections& aug, const Hyperparams& hp);

TraceRecord motg_sweep(Rng& rng, MixtureState& state, const Dataset& data,
                       const Hyperparams& hp, const SweepOptions& opts = {});

}  // namespace truncmix
