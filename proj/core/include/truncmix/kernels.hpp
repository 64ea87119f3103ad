#pragma once

#include <Eigen/Dense>
#include <vector>

#include "truncmix/rng.hpp"

namespace truncmix {

// Normal-Inverse-Wishart hyperparameters (mu0, lambda, Phi, nu). With d = 1
// this is the Normal-Inverse-Gamma: sigma^2 ~ IG(nu/2, Phi/2).
struct NiwParams {
  Eigen::VectorXd mu0;
  double lambda = 1.0;
  Eigen::MatrixXd phi;
  double nu = 3.0;

  int dim() const { return static_cast<int>(mu0.size()); }
  void validate() const;  // throws std::invalid_argument
};

// One Gaussian component with its Cholesky factor cached.
struct ComponentParams {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd chol_lower;  // L with L L^T = sigma
  double log_norm = 0.0;       // -(d/2) log(2 pi) - sum_i log L_ii

  static ComponentParams make(Eigen::VectorXd mu, Eigen::MatrixXd sigma);
  int dim() const { return static_cast<int>(mu.size()); }
};

// Mixture weights on the simplex; length fixed at construction.
struct WeightVector {
  WeightVector() = default;
  explicit WeightVector(Eigen::VectorXd w);  // validates sum-to-one

  const Eigen::VectorXd& vec() const { return w_; }
  double operator[](int k) const { return w_[k]; }
  int size() const { return static_cast<int>(w_.size()); }

 private:
  Eigen::VectorXd w_;
};

// Cholesky with a single jitter retry (1e-10 * trace/d on the diagonal);
// throws std::domain_error if the jittered matrix is still indefinite.
Eigen::MatrixXd chol_with_jitter(const Eigen::MatrixXd& m);

double mvn_logpdf(const Eigen::VectorXd& x, const ComponentParams& c);
Eigen::VectorXd sample_mvn(Rng& rng, const ComponentParams& c);

// Sigma ~ IW(Phi, nu) via Bartlett decomposition, mu | Sigma ~ N(mu0, Sigma/lambda).
ComponentParams sample_niw(Rng& rng, const NiwParams& p);

// Standard conjugate update; empty data returns the prior unchanged.
NiwParams niw_posterior(const NiwParams& p, const std::vector<Eigen::VectorXd>& data);

WeightVector sample_dirichlet(Rng& rng, const Eigen::VectorXd& alphas);

// Truncated stick-breaking posterior: v_k ~ Beta(1 + counts_k, alpha0 + tail),
// v_K = 1. Counts may be fractional in principle but are cluster counts here.
WeightVector stick_breaking_posterior(Rng& rng, const Eigen::VectorXd& counts, double alpha0);

long sample_geometric_failures(Rng& rng, double rho);

// Log densities used by the joint evaluations and traces.
double inverse_wishart_logpdf(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& phi, double nu);
double niw_logpdf(const ComponentParams& c, const NiwParams& p);
double symmetric_dirichlet_logpdf(const WeightVector& w, double alpha);
double stick_breaking_logpdf(const WeightVector& w, double alpha0);

double logsumexp(std::span<const double> v);

}  // namespace truncmix
