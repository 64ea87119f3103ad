#include "truncmix/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncmix {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double lgamma_multivariate(double a, int d) {
  double v = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= d; ++j) v += std::lgamma(a + 0.5 * (1 - j));
  return v;
}

}  // namespace

void NiwParams::validate() const {
  const int d = dim();
  if (d < 1) throw std::invalid_argument("NiwParams: empty mu0");
  if (!(lambda > 0.0)) throw std::invalid_argument("NiwParams: lambda must be positive");
  if (!(nu > d - 1)) throw std::invalid_argument("NiwParams: nu must exceed d - 1");
  if (phi.rows() != d || phi.cols() != d)
    throw std::invalid_argument("NiwParams: phi dimension mismatch");
  if (!phi.isApprox(phi.transpose(), 1e-10))
    throw std::invalid_argument("NiwParams: phi is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(phi);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("NiwParams: phi is not positive definite");
}

ComponentParams ComponentParams::make(Eigen::VectorXd mu, Eigen::MatrixXd sigma) {
  const int d = static_cast<int>(mu.size());
  if (sigma.rows() != d || sigma.cols() != d)
    throw std::invalid_argument("ComponentParams: sigma dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("ComponentParams: sigma is not positive definite");
  ComponentParams c;
  c.mu = std::move(mu);
  c.sigma = std::move(sigma);
  c.chol_lower = llt.matrixL();
  c.log_norm = -0.5 * d * kLog2Pi - c.chol_lower.diagonal().array().log().sum();
  return c;
}

WeightVector::WeightVector(Eigen::VectorXd w) : w_(std::move(w)) {
  if (w_.size() == 0) throw std::invalid_argument("WeightVector: empty");
  if (w_.minCoeff() < 0.0) throw std::invalid_argument("WeightVector: negative weight");
  if (std::abs(w_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("WeightVector: weights must sum to 1");
}

Eigen::MatrixXd chol_with_jitter(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const int d = static_cast<int>(m.rows());
  double jitter = 1e-10 * m.trace() / d;
  Eigen::MatrixXd jittered = m + jitter * Eigen::MatrixXd::Identity(d, d);
  Eigen::LLT<Eigen::MatrixXd> retry(jittered);
  if (retry.info() == Eigen::Success) return retry.matrixL();
  throw std::domain_error("Cholesky failed even after jitter retry");
}

double mvn_logpdf(const Eigen::VectorXd& x, const ComponentParams& c) {
  if (x.size() != c.mu.size())
    throw std::invalid_argument("mvn_logpdf: dimension mismatch");
  Eigen::VectorXd z =
      c.chol_lower.triangularView<Eigen::Lower>().solve(x - c.mu);
  return c.log_norm - 0.5 * z.squaredNorm();
}

Eigen::VectorXd sample_mvn(Rng& rng, const ComponentParams& c) {
  const int d = c.dim();
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = rng.normal();
  return c.mu + c.chol_lower * z;
}

ComponentParams sample_niw(Rng& rng, const NiwParams& p) {
  p.validate();
  const int d = p.dim();
  Eigen::MatrixXd l_phi = chol_with_jitter(p.phi);

  // Bartlett: A A^T ~ Wishart(I, nu); Sigma = L_phi (A A^T)^{-1} L_phi^T.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(p.nu - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd g =
      a.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(l_phi.transpose()));
  Eigen::MatrixXd sigma = g.transpose() * g;
  sigma = 0.5 * (sigma + sigma.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  Eigen::MatrixXd l_sigma =
      llt.info() == Eigen::Success ? Eigen::MatrixXd(llt.matrixL()) : chol_with_jitter(sigma);
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = rng.normal();
  Eigen::VectorXd mu = p.mu0 + l_sigma * z / std::sqrt(p.lambda);
  return ComponentParams::make(std::move(mu), std::move(sigma));
}

NiwParams niw_posterior(const NiwParams& p, const std::vector<Eigen::VectorXd>& data) {
  if (data.empty()) return p;
  const int d = p.dim();
  const double n = static_cast<double>(data.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& x : data) {
    if (x.size() != d) throw std::invalid_argument("niw_posterior: data dimension mismatch");
    mean += x;
  }
  mean /= n;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (const auto& x : data) {
    Eigen::VectorXd c = x - mean;
    scatter.noalias() += c * c.transpose();
  }
  NiwParams post;
  post.lambda = p.lambda + n;
  post.nu = p.nu + n;
  post.mu0 = (p.lambda * p.mu0 + n * mean) / post.lambda;
  Eigen::VectorXd dm = mean - p.mu0;
  post.phi = p.phi + scatter + (p.lambda * n / post.lambda) * dm * dm.transpose();
  return post;
}

WeightVector sample_dirichlet(Rng& rng, const Eigen::VectorXd& alphas) {
  if (alphas.size() == 0 || alphas.minCoeff() <= 0.0)
    throw std::invalid_argument("sample_dirichlet: alphas must be positive");
  Eigen::VectorXd g(alphas.size());
  for (int i = 0; i < alphas.size(); ++i) g[i] = rng.gamma(alphas[i]);
  double total = g.sum();
  if (total <= 0.0) {
    // All gammas underflowed; fall back to the largest-alpha vertex.
    int imax = 0;
    alphas.maxCoeff(&imax);
    g.setZero();
    g[imax] = 1.0;
    total = 1.0;
  }
  g /= total;
  g /= g.sum();  // tighten to the 1e-12 simplex tolerance
  return WeightVector(g);
}

WeightVector stick_breaking_posterior(Rng& rng, const Eigen::VectorXd& counts, double alpha0) {
  const int k = static_cast<int>(counts.size());
  if (k < 1) throw std::invalid_argument("stick_breaking_posterior: empty counts");
  Eigen::VectorXd w(k);
  double tail = counts.sum();
  double remaining = 1.0;
  for (int i = 0; i < k; ++i) {
    tail -= counts[i];
    double v = (i == k - 1) ? 1.0 : rng.beta(1.0 + counts[i], alpha0 + tail);
    w[i] = v * remaining;
    remaining *= (1.0 - v);
  }
  w /= w.sum();
  return WeightVector(w);
}

long sample_geometric_failures(Rng& rng, double rho) { return rng.geometric_failures(rho); }

double inverse_wishart_logpdf(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& phi,
                              double nu) {
  const int d = static_cast<int>(sigma.rows());
  Eigen::LLT<Eigen::MatrixXd> llt_sigma(sigma);
  if (llt_sigma.info() != Eigen::Success)
    throw std::domain_error("inverse_wishart_logpdf: sigma not positive definite");
  Eigen::MatrixXd l_sigma = llt_sigma.matrixL();
  Eigen::MatrixXd l_phi = chol_with_jitter(phi);
  double logdet_sigma = 2.0 * l_sigma.diagonal().array().log().sum();
  double logdet_phi = 2.0 * l_phi.diagonal().array().log().sum();
  // tr(Phi Sigma^{-1}) = || L_sigma^{-1} L_phi ||_F^2
  Eigen::MatrixXd t = l_sigma.triangularView<Eigen::Lower>().solve(l_phi);
  double trace_term = t.squaredNorm();
  return 0.5 * nu * logdet_phi - 0.5 * nu * d * std::log(2.0) - lgamma_multivariate(0.5 * nu, d) -
         0.5 * (nu + d + 1) * logdet_sigma - 0.5 * trace_term;
}

double niw_logpdf(const ComponentParams& c, const NiwParams& p) {
  ComponentParams mean_part = ComponentParams::make(p.mu0, c.sigma / p.lambda);
  return inverse_wishart_logpdf(c.sigma, p.phi, p.nu) + mvn_logpdf(c.mu, mean_part);
}

double symmetric_dirichlet_logpdf(const WeightVector& w, double alpha) {
  const int k = w.size();
  double lp = std::lgamma(k * alpha) - k * std::lgamma(alpha);
  for (int i = 0; i < k; ++i) lp += (alpha - 1.0) * std::log(std::max(w[i], 1e-300));
  return lp;
}

double stick_breaking_logpdf(const WeightVector& w, double alpha0) {
  // Change of variables to the stick lengths v_k, with the triangular
  // Jacobian of (v_1..v_{K-1}) -> (pi_1..pi_{K-1}).
  const int k = w.size();
  double lp = 0.0;
  double remaining = 1.0;
  for (int i = 0; i + 1 < k; ++i) {
    double v = std::clamp(w[i] / std::max(remaining, 1e-300), 1e-12, 1.0 - 1e-12);
    lp += std::log(alpha0) + (alpha0 - 1.0) * std::log1p(-v);  // Beta(1, alpha0)
    lp -= std::log(std::max(remaining, 1e-300));               // Jacobian
    remaining *= (1.0 - v);
  }
  return lp;
}

double logsumexp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace truncmix
