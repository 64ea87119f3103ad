#include "truncmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace truncmix {

int Rng::categorical(std::span<const double> w) {
  double total = 0.0;
  for (double v : w) {
    if (v < 0.0) throw std::invalid_argument("categorical: negative weight");
    total += v;
  }
  if (total <= 0.0) throw std::invalid_argument("categorical: all weights zero");
  double u = uniform() * total;
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size() - 1);
}

int Rng::categorical_logits(std::span<const double> logw) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logw) mx = std::max(mx, v);
  if (!std::isfinite(mx)) throw std::invalid_argument("categorical_logits: all weights -inf");
  std::vector<double> w(logw.size());
  for (size_t i = 0; i < logw.size(); ++i) w[i] = std::exp(logw[i] - mx);
  return categorical(w);
}

}  // namespace truncmix
