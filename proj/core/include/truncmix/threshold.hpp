#pragma once

#include "truncmix/mixture.hpp"

namespace truncmix {

struct ThresholdPolicy {
  ThresholdVariant variant = ThresholdVariant::capped_run;
  double threshold = 1.0;  // t = (1-rho)/rho

  double rho() const { return 1.0 / (1.0 + threshold); }
  static ThresholdPolicy from_rho(ThresholdVariant v, double rho);
};

// Draw R_i ~ Geometric-failures(rho) per observation, then simulate each
// rejected location by proposing from q until a point lands outside S.
AugmentedRejections impute_geometric_count(Rng& rng, const MixtureState& state,
                                           const Dataset& data, const ThresholdPolicy& policy,
                                           AugmentedRejections::Mode mode, long safety_cap);

// Deterministic count ceil(n*t), locations simulated outside S.
AugmentedRejections impute_fixed_average(Rng& rng, const MixtureState& state,
                                         const Dataset& data, const ThresholdPolicy& policy,
                                         AugmentedRejections::Mode mode, long safety_cap);

// Plain rejection sampler, terminated at ceil(n*t) rejections or n
// acceptances, whichever occurs first.
AugmentedRejections impute_capped_run(Rng& rng, const MixtureState& state,
                                      const Dataset& data, const ThresholdPolicy& policy,
                                      AugmentedRejections::Mode mode, long safety_cap);

// Sweep-level dispatch: FullSpace or t = 0 yields an empty augmentation,
// t = infinity (or the exact variant) the unmodified Algorithm-1 imputation,
// anything else the configured thresholded variant.
AugmentedRejections impute_augmentation(Rng& rng, const MixtureState& state, const Dataset& data,
                                        const Hyperparams& hp, AugmentedRejections::Mode mode);

}  // namespace truncmix
