#include "truncmix/threshold.hpp"

#include <cmath>

#include "truncmix/motg.hpp"
#include "truncmix/tmog.hpp"

namespace truncmix {

namespace {

using Mode = AugmentedRejections::Mode;

// One rejected location: propose from q (pooled) or from a fixed component
// until a point lands outside S.
RejectedPoint sample_outside(Rng& rng, const MixtureParams& params,
                             const ConstraintSet& constraint, std::optional<int> component,
                             long safety_cap) {
  const Eigen::VectorXd& w = params.weights.vec();
  std::span<const double> wspan(w.data(), static_cast<size_t>(w.size()));
  for (long tries = 0; tries < safety_cap; ++tries) {
    int label = component ? *component : rng.categorical(wspan);
    Eigen::VectorXd x = sample_mvn(rng, params.components[label]);
    if (!constraint.contains(x)) return {std::move(x), label};
  }
  throw RunawayRejectionError(safety_cap, component ? *component : -1);
}

long ceil_count(double x) { return static_cast<long>(std::ceil(x - 1e-9)); }

}  // namespace

ThresholdPolicy ThresholdPolicy::from_rho(ThresholdVariant v, double rho) {
  if (!(rho > 0.0) || rho > 1.0)
    throw std::invalid_argument("ThresholdPolicy: rho must be in (0,1]");
  return ThresholdPolicy{v, (1.0 - rho) / rho};
}

AugmentedRejections impute_geometric_count(Rng& rng, const MixtureState& state,
                                           const Dataset& data, const ThresholdPolicy& policy,
                                           Mode mode, long safety_cap) {
  const double rho = policy.rho();
  const long n = data.n();
  AugmentedRejections aug = mode == Mode::pooled ? AugmentedRejections::empty_pooled()
                                                 : AugmentedRejections::empty_per_observation(n);
  for (long i = 0; i < n; ++i) {
    long r_i = rng.geometric_failures(rho);
    std::optional<int> comp =
        mode == Mode::pooled ? std::nullopt : std::optional<int>(state.assignments[i]);
    for (long r = 0; r < r_i; ++r) {
      RejectedPoint p = sample_outside(rng, state.params, data.constraint, comp, safety_cap);
      if (mode == Mode::pooled)
        aug.pooled.push_back(std::move(p));
      else
        aug.groups[i].push_back(std::move(p.point));
    }
  }
  return aug;
}

AugmentedRejections impute_fixed_average(Rng& rng, const MixtureState& state, const Dataset& data,
                                         const ThresholdPolicy& policy, Mode mode,
                                         long safety_cap) {
  const long n = data.n();
  const long total = ceil_count(static_cast<double>(n) * policy.threshold);
  AugmentedRejections aug = mode == Mode::pooled ? AugmentedRejections::empty_pooled()
                                                 : AugmentedRejections::empty_per_observation(n);
  if (mode == Mode::pooled) {
    for (long r = 0; r < total; ++r)
      aug.pooled.push_back(
          sample_outside(rng, state.params, data.constraint, std::nullopt, safety_cap));
  } else {
    // Spread the fixed budget evenly across observations in sweep order.
    long base = total / n, rem = total % n;
    for (long i = 0; i < n; ++i) {
      long r_i = base + (i < rem ? 1 : 0);
      for (long r = 0; r < r_i; ++r)
        aug.groups[i].push_back(
            sample_outside(rng, state.params, data.constraint, state.assignments[i], safety_cap)
                .point);
    }
  }
  return aug;
}

AugmentedRejections impute_capped_run(Rng& rng, const MixtureState& state, const Dataset& data,
                                      const ThresholdPolicy& policy, Mode mode, long safety_cap) {
  (void)safety_cap;  // termination is guaranteed by the caps
  const long n = data.n();
  const long rej_cap = ceil_count(static_cast<double>(n) * policy.threshold);
  AugmentedRejections aug = mode == Mode::pooled ? AugmentedRejections::empty_pooled()
                                                 : AugmentedRejections::empty_per_observation(n);
  if (mode == Mode::pooled) {
    const Eigen::VectorXd& w = state.params.weights.vec();
    std::span<const double> wspan(w.data(), static_cast<size_t>(w.size()));
    long acceptances = 0, rejections = 0;
    while (acceptances < n && rejections < rej_cap) {
      int label = rng.categorical(wspan);
      Eigen::VectorXd x = sample_mvn(rng, state.params.components[label]);
      if (data.constraint.contains(x)) {
        ++acceptances;  // accepted draws are discarded
      } else {
        aug.pooled.push_back({std::move(x), label});
        ++rejections;
      }
    }
  } else {
    // Per-observation share of the cap, with the aggregate cap enforced in
    // sweep order.
    const long per_obs_cap = ceil_count(policy.threshold);
    long rejections = 0;
    for (long i = 0; i < n && rejections < rej_cap; ++i) {
      const ComponentParams& comp = state.params.components[state.assignments[i]];
      long local = 0;
      while (local < per_obs_cap && rejections < rej_cap) {
        Eigen::VectorXd x = sample_mvn(rng, comp);
        if (data.constraint.contains(x)) break;  // this observation's run is over
        aug.groups[i].push_back(std::move(x));
        ++local;
        ++rejections;
      }
    }
  }
  return aug;
}

AugmentedRejections impute_augmentation(Rng& rng, const MixtureState& state, const Dataset& data,
                                        const Hyperparams& hp, Mode mode) {
  if (data.constraint.is_full_space() || hp.threshold == 0.0) {
    return mode == Mode::pooled ? AugmentedRejections::empty_pooled()
                                : AugmentedRejections::empty_per_observation(data.n());
  }
  if (hp.variant == ThresholdVariant::exact || std::isinf(hp.threshold)) {
    return mode == Mode::pooled
               ? impute_pooled(rng, state, data, hp.safety_cap, hp.sweep_cap)
               : impute_per_observation(rng, state, data, hp.safety_cap, hp.sweep_cap);
  }
  ThresholdPolicy policy{hp.variant, hp.threshold};
  switch (hp.variant) {
    case ThresholdVariant::geometric_count:
      return impute_geometric_count(rng, state, data, policy, mode, hp.safety_cap);
    case ThresholdVariant::fixed_average:
      return impute_fixed_average(rng, state, data, policy, mode, hp.safety_cap);
    case ThresholdVariant::capped_run:
    default:
      return impute_capped_run(rng, state, data, policy, mode, hp.safety_cap);
  }
}

}  // namespace truncmix
