#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace truncmix {

// Seedable RNG handle. Every stochastic operation takes one of these
// explicitly; independent chains use independent streams via fork().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
    return std::gamma_distribution<double>(shape, 1.0)(gen_);
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    if (x + y == 0.0) return 0.5;  // underflow with very small shapes
    return x / (x + y);
  }

  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

  // Failures before the first success, P(R = r) = (1-rho)^r * rho.
  long geometric_failures(double rho) {
    if (rho <= 0.0 || rho > 1.0)
      throw std::invalid_argument("geometric_failures: rho must be in (0,1]");
    if (rho == 1.0) return 0;
    return std::geometric_distribution<long>(rho)(gen_);
  }

  // Index draw from nonnegative weights (need not be normalized).
  int categorical(std::span<const double> w);

  // Index draw from unnormalized log-weights (log-sum-exp normalization).
  int categorical_logits(std::span<const double> logw);

  Rng fork() { return Rng(gen_()); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace truncmix
