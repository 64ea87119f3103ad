#pragma once

#include <Eigen/Dense>

#include "truncmix/constraint.hpp"
#include "truncmix/rng.hpp"

namespace truncmix {

// N(0, scale) truncated to [0,1]; scale is a variance by default, or a
// standard deviation when scale_is_sd is set.
Eigen::MatrixXd synth_edge_normal(Rng& rng, long n, double scale, bool scale_is_sd = false);

Eigen::MatrixXd synth_beta(Rng& rng, long n, double a, double b);

// Irregular simple polygon used as the 2-D "island" benchmark domain.
Ring island_ring();

// 500-draw style dataset: equal mixture of 3 bivariate Gaussians centered on
// the island's edges, rejection-sampled into the polygon.
Eigen::MatrixXd synth_polygon_island(Rng& rng, long n, double component_sd = 0.1);

}  // namespace truncmix
