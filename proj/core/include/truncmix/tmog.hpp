#pragma once

#include "truncmix/mixture.hpp"

namespace truncmix {

struct TraceRecord {
  int iteration = 0;
  long rejections = 0;
  double log_joint = 0.0;
  std::vector<int> occupancy;  // observation counts per component
  double seconds = 0.0;
};

struct SweepOptions {
  // Harness knob for mutation testing: drop the rejection counts m_k from the
  // TMoG weight update.
  bool omit_rejections_in_weight_update = false;
};

// Algorithm-1 imputation: one full rejection run per observation, accepted
// points discarded, all rejections pooled with their labels.
AugmentedRejections impute_pooled(Rng& rng, const MixtureState& state, const Dataset& data,
                                  long safety_cap, long sweep_cap = 100'000'000);

WeightVector update_weights_tmog(Rng& rng, const Eigen::VectorXd& counts_obs,
                                 const Eigen::VectorXd& counts_rej, const Hyperparams& hp);

// Conditional mode resamples every c_i independently given pi; CRP mode sweeps
// sequentially on observation-plus-rejection counts, drawing fresh prior
// parameters into an empty slot for the new-cluster option. CRP may mutate
// state.params.components (the auxiliary draw).
std::vector<int> update_assignments_tmog(Rng& rng, MixtureState& state, const Dataset& data,
                                         const AugmentedRejections& aug, const Hyperparams& hp);

void update_components_tmog(Rng& rng, MixtureState& state, const Dataset& data,
                            const AugmentedRejections& aug, const Hyperparams& hp);

// One full Gibbs iteration: impute (per the threshold policy), weights,
// assignments, components; the augmentation is discarded on return.
TraceRecord tmog_sweep(Rng& rng, MixtureState& state, const Dataset& data,
                       const Hyperparams& hp, const SweepOptions& opts = {});

// Fresh state: components and weights from the prior, assignments from the
// conditional update given the data.
MixtureState init_state(Rng& rng, const Dataset& data, const Hyperparams& hp);

}  // namespace truncmix
