#include "truncmix/synth.hpp"

#include <cmath>

namespace truncmix {

Eigen::MatrixXd synth_edge_normal(Rng& rng, long n, double scale, bool scale_is_sd) {
  double sd = scale_is_sd ? scale : std::sqrt(scale);
  Eigen::MatrixXd pts(n, 1);
  for (long i = 0; i < n; ++i) {
    double x;
    do {
      x = sd * rng.normal();
    } while (x < 0.0 || x > 1.0);
    pts(i, 0) = x;
  }
  return pts;
}

Eigen::MatrixXd synth_beta(Rng& rng, long n, double a, double b) {
  Eigen::MatrixXd pts(n, 1);
  for (long i = 0; i < n; ++i) pts(i, 0) = rng.beta(a, b);
  return pts;
}

Ring island_ring() {
  return {{0.10, 0.30}, {0.30, 0.10}, {0.62, 0.05}, {0.90, 0.25},
          {0.95, 0.62}, {0.70, 0.90}, {0.38, 0.95}, {0.12, 0.70}};
}

Eigen::MatrixXd synth_polygon_island(Rng& rng, long n, double component_sd) {
  Ring ring = island_ring();
  // Three components centered on edge midpoints of the island.
  std::vector<Eigen::Vector2d> centers;
  for (size_t e : {size_t{0}, size_t{3}, size_t{6}})
    centers.push_back(0.5 * (ring[e] + ring[(e + 1) % ring.size()]));

  Eigen::MatrixXd pts(n, 2);
  for (long i = 0; i < n; ++i) {
    for (;;) {
      const Eigen::Vector2d& c = centers[static_cast<size_t>(rng.uniform() * 3.0) % 3];
      Eigen::Vector2d x(c.x() + component_sd * rng.normal(),
                        c.y() + component_sd * rng.normal());
      if (point_in_ring(ring, x)) {
        pts.row(i) = x.transpose();
        break;
      }
    }
  }
  return pts;
}

}  // namespace truncmix
