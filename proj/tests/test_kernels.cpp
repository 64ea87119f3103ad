#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "support/oracles.hpp"
#include "truncmix/kernels.hpp"

using namespace truncmix;

TEST_CASE("mvn_logpdf closed forms") {
  auto c2 = ComponentParams::make(Eigen::Vector2d(0, 0), Eigen::Matrix2d::Identity());
  CHECK(mvn_logpdf(Eigen::Vector2d(0, 0), c2) ==
        doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-12));

  auto c1 = ComponentParams::make(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  CHECK(mvn_logpdf(Eigen::VectorXd::Constant(1, 1.0), c1) ==
        doctest::Approx(-0.5 - 0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("mvn_logpdf matches the dense-inverse oracle on random SPD matrices") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = rng.normal();
    Eigen::MatrixXd sigma = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd mu(3), x(3);
    for (int i = 0; i < 3; ++i) {
      mu[i] = rng.normal();
      x[i] = rng.normal();
    }
    auto c = ComponentParams::make(mu, sigma);
    CHECK(mvn_logpdf(x, c) ==
          doctest::Approx(oracles::mvn_logpdf_dense(x, mu, sigma)).epsilon(1e-10));
  }
}

TEST_CASE("exp(mvn_logpdf) integrates to one") {
  auto c1 = ComponentParams::make(Eigen::VectorXd::Constant(1, 0.3),
                                  Eigen::MatrixXd::Constant(1, 1, 0.49));
  double mass1 = oracles::gauss_legendre(
      [&](double x) { return std::exp(mvn_logpdf(Eigen::VectorXd::Constant(1, x), c1)); },
      0.3 - 6 * 0.7, 0.3 + 6 * 0.7);
  CHECK(mass1 == doctest::Approx(1.0).epsilon(1e-4));

  Eigen::Matrix2d sigma;
  sigma << 0.5, 0.2, 0.2, 0.3;
  auto c2 = ComponentParams::make(Eigen::Vector2d(-1, 2), sigma);
  double s0 = std::sqrt(sigma(0, 0)), s1 = std::sqrt(sigma(1, 1));
  double mass2 = oracles::gauss_legendre_2d(
      [&](double x, double y) { return std::exp(mvn_logpdf(Eigen::Vector2d(x, y), c2)); },
      -1 - 6 * s0, -1 + 6 * s0, 2 - 6 * s1, 2 + 6 * s1);
  CHECK(mass2 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sample_mvn moments") {
  Rng rng(5);
  Eigen::Matrix2d sigma;
  sigma << 4.0, 0.8, 0.8, 1.0;
  auto c = ComponentParams::make(Eigen::Vector2d(0, 0), sigma);
  const int n = 100000;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  std::vector<Eigen::Vector2d> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d x = sample_mvn(rng, c);
    draws.push_back(x);
    mean += x / n;
  }
  for (const auto& x : draws) cov += (x - mean) * (x - mean).transpose() / (n - 1);
  CHECK(std::abs(mean[0]) < 0.02);
  CHECK(std::abs(mean[1]) < 0.02);
  CHECK(cov(0, 0) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(cov(1, 1) == doctest::Approx(1.0).epsilon(0.05));
  CHECK((cov - sigma).norm() / sigma.norm() < 0.05);
}

TEST_CASE("sample_niw moments") {
  Rng rng(17);
  NiwParams p;
  p.mu0 = Eigen::Vector2d(1.0, -2.0);
  p.lambda = 1.0;
  p.phi = (Eigen::Matrix2d() << 2.0, 0.3, 0.3, 1.0).finished();
  p.nu = 7.0;  // E[Sigma] = Phi / (nu - d - 1) = Phi / 4
  const int n = 100000;
  Eigen::Matrix2d sigma_mean = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mu_mean = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    ComponentParams c = sample_niw(rng, p);
    sigma_mean += c.sigma / n;
    mu_mean += c.mu / n;
  }
  Eigen::Matrix2d expect = p.phi / (p.nu - 2 - 1);
  CHECK((sigma_mean - expect).norm() / expect.norm() < 0.05);
  CHECK(std::abs(mu_mean[0] - 1.0) < 0.02);
  CHECK(std::abs(mu_mean[1] + 2.0) < 0.02);
}

TEST_CASE("sample_niw lambda scale limit") {
  NiwParams p;
  p.mu0 = Eigen::VectorXd::Zero(1);
  p.phi = Eigen::MatrixXd::Constant(1, 1, 1.0);
  p.nu = 5.0;
  auto spread = [&](double lambda, std::uint64_t seed) {
    NiwParams q = p;
    q.lambda = lambda;
    Rng rng(seed);
    double lo = 1e30, hi = -1e30;
    for (int i = 0; i < 2000; ++i) {
      double m = sample_niw(rng, q).mu[0];
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    return hi - lo;
  };
  CHECK(spread(1e6, 1) < 1e-2 * spread(1.0, 2));
}

TEST_CASE("niw_posterior hand-worked 1-D case and no-data identity") {
  NiwParams p;
  p.mu0 = Eigen::VectorXd::Zero(1);
  p.lambda = 1.0;
  p.phi = Eigen::MatrixXd::Constant(1, 1, 1.0);
  p.nu = 3.0;

  NiwParams same = niw_posterior(p, {});
  CHECK(same.mu0 == p.mu0);
  CHECK(same.lambda == p.lambda);
  CHECK(same.nu == p.nu);

  NiwParams post = niw_posterior(p, {Eigen::VectorXd::Constant(1, 2.0)});
  CHECK(post.mu0[0] == doctest::Approx(1.0));
  CHECK(post.lambda == doctest::Approx(2.0));
  CHECK(post.nu == doctest::Approx(4.0));
  CHECK(post.phi(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("niw_posterior batch consistency") {
  Rng rng(23);
  NiwParams p;
  p.mu0 = Eigen::Vector2d(0.2, -0.4);
  p.lambda = 2.5;
  p.phi = (Eigen::Matrix2d() << 1.0, 0.1, 0.1, 0.7).finished();
  p.nu = 6.0;
  std::vector<Eigen::VectorXd> a, b, all;
  for (int i = 0; i < 7; ++i) {
    Eigen::VectorXd x = Eigen::Vector2d(rng.normal(), rng.normal());
    (i < 4 ? a : b).push_back(x);
    all.push_back(x);
  }
  NiwParams two_step = niw_posterior(niw_posterior(p, a), b);
  NiwParams one_step = niw_posterior(p, all);
  CHECK(std::abs(two_step.lambda - one_step.lambda) < 1e-10);
  CHECK(std::abs(two_step.nu - one_step.nu) < 1e-10);
  CHECK((two_step.mu0 - one_step.mu0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((two_step.phi - one_step.phi).cwiseAbs().maxCoeff() < 1e-10);
}

// 1-D posterior density on a grid must equal prior x likelihood normalized by
// quadrature. Parameterized as (mu, sigma^2) with sigma^2 ~ IG(nu/2, phi/2),
// mu | sigma^2 ~ N(mu0, sigma^2/lambda).
TEST_CASE("niw_posterior matches the grid-quadrature posterior in 1-D") {
  NiwParams prior;
  prior.mu0 = Eigen::VectorXd::Constant(1, 0.1);
  prior.lambda = 1.5;
  prior.phi = Eigen::MatrixXd::Constant(1, 1, 0.8);
  prior.nu = 4.0;
  std::vector<Eigen::VectorXd> data;
  for (double v : {0.4, -0.3, 0.9, 0.2, -0.1}) data.push_back(Eigen::VectorXd::Constant(1, v));
  NiwParams post = niw_posterior(prior, data);

  auto nig_logpdf = [](const NiwParams& p, double mu, double s2) {
    double alpha = p.nu / 2.0, beta = p.phi(0, 0) / 2.0;
    double lp = alpha * std::log(beta) - std::lgamma(alpha) - (alpha + 1) * std::log(s2) -
                beta / s2;
    lp += 0.5 * std::log(p.lambda / (2.0 * std::numbers::pi * s2)) -
          0.5 * p.lambda / s2 * (mu - p.mu0[0]) * (mu - p.mu0[0]);
    return lp;
  };
  auto loglik = [&](double mu, double s2) {
    double lp = 0.0;
    for (const auto& x : data) {
      lp += -0.5 * std::log(2.0 * std::numbers::pi * s2) -
            0.5 * (x[0] - mu) * (x[0] - mu) / s2;
    }
    return lp;
  };

  // normalize prior x likelihood over the grid box
  const int res = 200;
  double mu_lo = -1.5, mu_hi = 2.0, s2_lo = 0.02, s2_hi = 3.0;
  double dmu = (mu_hi - mu_lo) / res, ds2 = (s2_hi - s2_lo) / res;
  double z = 0.0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      double mu = mu_lo + (i + 0.5) * dmu, s2 = s2_lo + (j + 0.5) * ds2;
      z += std::exp(nig_logpdf(prior, mu, s2) + loglik(mu, s2)) * dmu * ds2;
    }
  double max_rel = 0.0;
  for (int i = 0; i < res; i += 7)
    for (int j = 0; j < res; j += 7) {
      double mu = mu_lo + (i + 0.5) * dmu, s2 = s2_lo + (j + 0.5) * ds2;
      double quad = std::exp(nig_logpdf(prior, mu, s2) + loglik(mu, s2)) / z;
      double conj = std::exp(nig_logpdf(post, mu, s2));
      if (quad > 1e-4)
        max_rel = std::max(max_rel, std::abs(conj - quad) / quad);
    }
  CHECK(max_rel < 1e-3);
}

TEST_CASE("1-D NIW specialization equals the Normal-Inverse-Gamma moments") {
  // Under Phi <-> 2 beta0 the d=1 NIW marginal on sigma^2 is
  // IG(nu/2, Phi/2): E[sigma^2] = (Phi/2)/(nu/2 - 1), matching the IW mean
  // Phi/(nu - d - 1) at d=1. Pin both posterior moments via Monte Carlo.
  NiwParams p;
  p.mu0 = Eigen::VectorXd::Constant(1, 0.5);
  p.lambda = 2.0;
  p.phi = Eigen::MatrixXd::Constant(1, 1, 0.1);  // beta0 = 0.05
  p.nu = 6.0;                                    // alpha = 3 (finite IG variance)
  Rng rng(31);
  double s2_mean = 0.0, mu_mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    ComponentParams c = sample_niw(rng, p);
    s2_mean += c.sigma(0, 0) / n;
    mu_mean += c.mu[0] / n;
  }
  double alpha = p.nu / 2.0, beta = p.phi(0, 0) / 2.0;
  CHECK(s2_mean == doctest::Approx(beta / (alpha - 1.0)).epsilon(0.03));
  CHECK(mu_mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sample_dirichlet means and concentration") {
  Rng rng(41);
  const int n = 100000;
  double first = 0.0;
  for (int i = 0; i < n; ++i) first += sample_dirichlet(rng, Eigen::Vector2d(1, 1))[0] / n;
  CHECK(first == doctest::Approx(0.5).epsilon(0.02));

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i)
    mean += sample_dirichlet(rng, Eigen::Vector3d(2, 1, 1)).vec() / n;
  CHECK(mean[0] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(mean[1] == doctest::Approx(0.25).epsilon(0.04));
  CHECK(mean[2] == doctest::Approx(0.25).epsilon(0.04));

  int high = 0;
  for (int i = 0; i < 1000; ++i)
    high += sample_dirichlet(rng, Eigen::Vector2d(1e6, 1))[0] > 0.999;
  CHECK(high > 990);

  CHECK_THROWS(sample_dirichlet(rng, Eigen::Vector2d(1.0, 0.0)));
}

TEST_CASE("stick_breaking_posterior means") {
  Rng rng(43);
  const int n = 100000;
  double pi1 = 0.0;
  for (int i = 0; i < n; ++i)
    pi1 += stick_breaking_posterior(rng, Eigen::Vector2d(0, 0), 1.0)[0] / n;
  CHECK(pi1 == doctest::Approx(0.5).epsilon(0.02));

  Eigen::VectorXd counts(5);
  counts << 100, 0, 0, 0, 0;
  int concentrated = 0;
  for (int i = 0; i < 1000; ++i)
    concentrated += stick_breaking_posterior(rng, counts, 1.0)[0] > 0.9;
  CHECK(concentrated > 950);

  // analytic stick means: E[pi_k] = E[v_k] prod_{j<k} (1 - E[v_j]) with
  // v_k ~ Beta(1 + c_k, alpha0 + tail_k), independent across k.
  Eigen::Vector3d small(3, 2, 1);
  Eigen::Vector3d emp = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i)
    emp += stick_breaking_posterior(rng, small, 1.0).vec() / n;
  double alpha0 = 1.0;
  double ev1 = (1 + 3.0) / (1 + 3.0 + alpha0 + 3.0);
  double ev2 = (1 + 2.0) / (1 + 2.0 + alpha0 + 1.0);
  CHECK(emp[0] == doctest::Approx(ev1).epsilon(0.01));
  CHECK(emp[1] == doctest::Approx((1 - ev1) * ev2).epsilon(0.02));
  CHECK(emp[2] == doctest::Approx((1 - ev1) * (1 - ev2)).epsilon(0.02));
}

TEST_CASE("stick_breaking_posterior stays on the simplex") {
  Rng rng(47);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd counts(6);
    for (int k = 0; k < 6; ++k) counts[k] = static_cast<int>(10 * rng.uniform());
    WeightVector w = stick_breaking_posterior(rng, counts, 0.7);
    CHECK(w.vec().minCoeff() >= 0.0);
    CHECK(w.vec().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sample_geometric_failures") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) CHECK(sample_geometric_failures(rng, 1.0) == 0);
  const int n = 100000;
  double m_half = 0.0, m_tenth = 0.0;
  for (int i = 0; i < n; ++i) m_half += double(sample_geometric_failures(rng, 0.5)) / n;
  for (int i = 0; i < n; ++i) m_tenth += double(sample_geometric_failures(rng, 0.1)) / n;
  CHECK(m_half == doctest::Approx(1.0).epsilon(0.03));
  CHECK(m_tenth == doctest::Approx(9.0).epsilon(0.03));
  CHECK_THROWS(sample_geometric_failures(rng, 0.0));
}

TEST_CASE("weight vector validation and jitter retry") {
  CHECK_THROWS(WeightVector(Eigen::Vector2d(0.6, 0.6)));
  Eigen::Matrix2d near_sing;
  near_sing << 1.0, 1.0, 1.0, 1.0;  // rank 1, PSD but not PD
  CHECK_NOTHROW(chol_with_jitter(near_sing + 1e-8 * Eigen::Matrix2d::Identity()));
  Eigen::Matrix2d indef;
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(chol_with_jitter(indef), std::domain_error);
}
