#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "truncmix/motg.hpp"
#include "truncmix/tmog.hpp"

using namespace truncmix;

namespace {

ComponentParams comp1(double mu, double s2) {
  return ComponentParams::make(Eigen::VectorXd::Constant(1, mu),
                               Eigen::MatrixXd::Constant(1, 1, s2));
}

Hyperparams hp1d(int k = 2) {
  Hyperparams hp;
  hp.k_trunc = k;
  hp.niw.mu0 = Eigen::VectorXd::Zero(1);
  hp.niw.lambda = 1.0;
  hp.niw.phi = Eigen::MatrixXd::Constant(1, 1, 1.0);
  hp.niw.nu = 3.0;
  return hp;
}

ConstraintSet positive_half() {
  return ConstraintSet::box(Eigen::VectorXd::Constant(1, 0.0),
                            Eigen::VectorXd::Constant(1, 1e6));
}

MixtureState std_normal_state(long n) {
  MixtureState st;
  st.params.weights = WeightVector(Eigen::VectorXd::Constant(1, 1.0));
  st.params.components = {comp1(0.0, 1.0)};
  st.assignments.assign(n, 0);
  return st;
}

Dataset positive_data(Rng& rng, long n) {
  Eigen::MatrixXd pts(n, 1);
  for (long i = 0; i < n; ++i) pts(i, 0) = std::abs(rng.normal());
  return Dataset::make(pts, positive_half());
}

}  // namespace

TEST_CASE("impute_pooled: full space is empty; half-space count law") {
  Rng rng(3);
  MixtureState st = std_normal_state(50);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(50, 1);
  Dataset full = Dataset::make(pts, ConstraintSet::full_space(1));
  CHECK(impute_pooled(rng, st, full, 1000).total() == 0);

  // n = 1000 observations, acceptance probability 0.5: E[total] = 1000
  const long n = 1000;
  MixtureState st2 = std_normal_state(n);
  Dataset data = positive_data(rng, n);
  double mean = 0.0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r)
    mean += double(impute_pooled(rng, st2, data, 1000000).total()) / reps;
  CHECK(mean == doctest::Approx(1000.0).epsilon(0.10));
}

TEST_CASE("impute_pooled totals match direct negative binomial simulation (KS)") {
  Rng rng(5);
  const long n = 100;
  MixtureState st = std_normal_state(n);
  Dataset data = positive_data(rng, n);
  std::vector<double> sampler_totals, nb_totals;
  for (int r = 0; r < 2000; ++r) {
    sampler_totals.push_back(double(impute_pooled(rng, st, data, 1000000).total()));
    // NB(n, 0.5) via n independent geometric runs
    long total = 0;
    for (long i = 0; i < n; ++i)
      while (rng.uniform() >= 0.5) ++total;
    nb_totals.push_back(double(total));
  }
  double d = oracles::ks_statistic_two_sample(sampler_totals, nb_totals);
  CHECK(d < oracles::ks_critical(0.01, 2000, 2000));
}

TEST_CASE("update_weights_tmog: Dirichlet Dir(6,2) and prior draws") {
  Hyperparams hp = hp1d();
  hp.weight_prior = WeightPrior::dirichlet;
  Rng rng(7);
  const int n = 100000;
  double mean1 = 0.0;
  for (int i = 0; i < n; ++i)
    mean1 += update_weights_tmog(rng, Eigen::Vector2d(3, 1), Eigen::Vector2d(2, 0), hp)[0] / n;
  CHECK(mean1 == doctest::Approx(6.0 / 8.0).epsilon(0.01));

  // zero counts: symmetric prior draw, mean 0.5
  double mean0 = 0.0;
  for (int i = 0; i < n; ++i)
    mean0 += update_weights_tmog(rng, Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0), hp)[0] / n;
  CHECK(mean0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("update_weights_tmog: stick-breaking posterior mean with concentrated counts") {
  Hyperparams hp = hp1d(5);
  Rng rng(9);
  Eigen::VectorXd nobs(5), mrej(5);
  nobs << 60, 0, 0, 0, 0;
  mrej << 40, 0, 0, 0, 0;
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += update_weights_tmog(rng, nobs, mrej, hp)[0] / n;
  // v_1 ~ Beta(1 + 100, alpha0 + 0)
  CHECK(mean == doctest::Approx(101.0 / 102.0).epsilon(0.01));
}

TEST_CASE("update_assignments_tmog: degenerate and symmetric cases") {
  Rng rng(11);
  Hyperparams hp = hp1d(1);
  MixtureState st = std_normal_state(5);
  Eigen::MatrixXd pts(5, 1);
  pts << 0.1, 0.2, 0.3, 0.4, 0.5;
  Dataset data = Dataset::make(pts, ConstraintSet::full_space(1));
  AugmentedRejections none = AugmentedRejections::empty_pooled();
  auto assign = update_assignments_tmog(rng, st, data, none, hp);
  for (int c : assign) CHECK(c == 0);

  // two components symmetric about x: 50/50
  Hyperparams hp2 = hp1d(2);
  MixtureState st2;
  st2.params.weights = WeightVector(Eigen::Vector2d(0.5, 0.5));
  st2.params.components = {comp1(-1.0, 1.0), comp1(1.0, 1.0)};
  st2.assignments = {0};
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(1, 1);
  Dataset mid = Dataset::make(x0, ConstraintSet::full_space(1));
  int first = 0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    first += update_assignments_tmog(rng, st2, mid, none, hp2)[0] == 0;
  CHECK(double(first) / reps == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("update_assignments_tmog conditional frequencies match direct evaluation") {
  Rng rng(13);
  Hyperparams hp = hp1d(2);
  MixtureState st;
  st.params.weights = WeightVector(Eigen::Vector2d(0.7, 0.3));
  st.params.components = {comp1(-0.5, 0.4), comp1(1.0, 0.9)};
  st.assignments = {0};
  Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(1, 1, 0.2);
  Dataset data = Dataset::make(pts, ConstraintSet::full_space(1));
  AugmentedRejections none = AugmentedRejections::empty_pooled();

  double w0 = 0.7 * oracles::normal_pdf(0.2, -0.5, std::sqrt(0.4));
  double w1 = 0.3 * oracles::normal_pdf(0.2, 1.0, std::sqrt(0.9));
  double p0 = w0 / (w0 + w1);
  int count0 = 0;
  const int reps = 200000;
  for (int r = 0; r < reps; ++r)
    count0 += update_assignments_tmog(rng, st, data, none, hp)[0] == 0;
  CHECK(double(count0) / reps == doctest::Approx(p0).epsilon(0.01));
}

TEST_CASE("update_components_tmog: conjugate concentration and rejection pooling") {
  Rng rng(17);
  Hyperparams hp = hp1d(2);
  const long n = 400;
  MixtureState st;
  st.params.weights = WeightVector(Eigen::Vector2d(0.5, 0.5));
  st.params.components = {comp1(0.0, 1.0), comp1(5.0, 1.0)};
  st.assignments.assign(n, 0);
  Eigen::MatrixXd pts(n, 1);
  double data_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    pts(i, 0) = 2.0 + 0.3 * rng.normal();
    data_sum += pts(i, 0);
  }
  Dataset data = Dataset::make(pts, ConstraintSet::full_space(1));

  AugmentedRejections aug = AugmentedRejections::empty_pooled();
  double rej_sum = 0.0;
  for (int r = 0; r < 100; ++r) {
    double y = -3.0 + 0.2 * rng.normal();
    aug.pooled.push_back({Eigen::VectorXd::Constant(1, y), 0});
    rej_sum += y;
  }
  double member_mean = (data_sum + rej_sum) / (n + 100);

  update_components_tmog(rng, st, data, aug, hp);
  // posterior sd of mu is ~ sigma/sqrt(lambda + n'); allow 3 of them around
  // the member mean (prior mu0 = 0 pulls in only weakly at n' = 500)
  CHECK(std::abs(st.params.components[0].mu[0] - member_mean) < 0.5);
}

TEST_CASE("update_components_tmog 1-D draws match the grid-quadrature posterior (KS)") {
  Rng rng(23);
  Hyperparams hp = hp1d(1);
  hp.niw.mu0 = Eigen::VectorXd::Constant(1, 0.1);
  hp.niw.lambda = 1.5;
  hp.niw.phi = Eigen::MatrixXd::Constant(1, 1, 0.8);
  hp.niw.nu = 4.0;
  std::vector<double> raw = {0.4, -0.3, 0.9, 0.2, -0.1};
  Eigen::MatrixXd pts(raw.size(), 1);
  for (size_t i = 0; i < raw.size(); ++i) pts(i, 0) = raw[i];
  Dataset data = Dataset::make(pts, ConstraintSet::full_space(1));
  MixtureState st = std_normal_state(raw.size());
  AugmentedRejections none = AugmentedRejections::empty_pooled();

  const int draws = 20000;
  std::vector<double> mus;
  mus.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    update_components_tmog(rng, st, data, none, hp);
    mus.push_back(st.params.components[0].mu[0]);
  }

  // marginal CDF of mu from the joint quadrature grid
  const int res = 400;
  double mu_lo = -2.0, mu_hi = 2.5, s2_lo = 0.01, s2_hi = 4.0;
  double dmu = (mu_hi - mu_lo) / res, ds2 = (s2_hi - s2_lo) / res;
  std::vector<double> marg(res, 0.0);
  for (int i = 0; i < res; ++i) {
    double mu = mu_lo + (i + 0.5) * dmu;
    for (int j = 0; j < res; ++j) {
      double s2 = s2_lo + (j + 0.5) * ds2;
      double lp = -(hp.niw.nu / 2 + 1) * std::log(s2) - hp.niw.phi(0, 0) / (2 * s2);
      lp += -0.5 * std::log(s2) -
            0.5 * hp.niw.lambda / s2 * (mu - hp.niw.mu0[0]) * (mu - hp.niw.mu0[0]);
      for (double x : raw) lp += -0.5 * std::log(s2) - 0.5 * (x - mu) * (x - mu) / s2;
      marg[i] += std::exp(lp) * ds2;
    }
  }
  double z = 0.0;
  for (double m : marg) z += m * dmu;
  std::vector<double> cdf(res);
  double acc = 0.0;
  for (int i = 0; i < res; ++i) {
    acc += marg[i] * dmu / z;
    cdf[i] = acc;
  }
  // cdf[i] is the cumulative mass through cell i, i.e. the CDF at the cell's
  // right edge; interpolate between edges accordingly
  auto cdf_fn = [&](double x) {
    if (x <= mu_lo) return 0.0;
    if (x >= mu_hi) return 1.0;
    double pos = (x - mu_lo) / dmu;
    int i = std::clamp(static_cast<int>(pos), 0, res - 1);
    double frac = std::clamp(pos - i, 0.0, 1.0);
    double left = i == 0 ? 0.0 : cdf[i - 1];
    return left * (1 - frac) + cdf[i] * frac;
  };
  double d = oracles::ks_statistic(mus, cdf_fn);
  CHECK(d < oracles::ks_critical(0.01, draws));
}

TEST_CASE("tmog_sweep: t = 0 has empty augmentation; fixed seed is bit-identical") {
  Rng rng(23);
  Hyperparams hp = hp1d(3);
  hp.threshold = 0.0;
  Dataset data = positive_data(rng, 80);
  MixtureState st = init_state(rng, data, hp);
  for (int i = 0; i < 10; ++i) {
    TraceRecord t = tmog_sweep(rng, st, data, hp);
    CHECK(t.rejections == 0);
    for (int c : st.assignments) {
      CHECK(c >= 0);
      CHECK(c < hp.k_trunc);
    }
  }

  hp.threshold = 1.0;
  auto run = [&](std::uint64_t seed) {
    Rng r(seed);
    Dataset d2 = positive_data(r, 60);
    MixtureState s = init_state(r, d2, hp);
    std::vector<double> lj;
    for (int i = 0; i < 20; ++i) lj.push_back(tmog_sweep(r, s, d2, hp).log_joint);
    return lj;
  };
  CHECK(run(99) == run(99));
}

TEST_CASE("tmog weight-update counts include rejections (instrumented)") {
  // Construct an augmentation heavily labeled toward component 2 and check the
  // resulting weights shift accordingly, versus the omit-rejections knob.
  Rng rng_a(31), rng_b(31);
  Hyperparams hp = hp1d(2);
  Eigen::Vector2d nobs(5, 5);
  Eigen::Vector2d mrej(0, 200);
  double with_rej = 0.0, without = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    with_rej += update_weights_tmog(rng_a, nobs, mrej, hp)[1] / reps;
    without += update_weights_tmog(rng_b, nobs, Eigen::Vector2d(0, 0), hp)[1] / reps;
  }
  CHECK(with_rej > 0.9);
  CHECK(without < 0.7);
}

// ---------------------------------------------------------------------------
// MoTG
// ---------------------------------------------------------------------------

TEST_CASE("impute_per_observation: full space, and per-component geometric means") {
  Rng rng(37);
  MixtureState st = std_normal_state(20);
  Dataset full = Dataset::make(Eigen::MatrixXd::Zero(20, 1), ConstraintSet::full_space(1));
  AugmentedRejections aug = impute_per_observation(rng, st, full, 1000);
  CHECK(aug.mode == AugmentedRejections::Mode::per_observation);
  CHECK(aug.total() == 0);

  // component accepted with mass 0.5
  const long n = 2000;
  MixtureState st2 = std_normal_state(n);
  Dataset data = positive_data(rng, n);
  double mean = 0.0;
  for (int r = 0; r < 50; ++r)
    mean += double(impute_per_observation(rng, st2, data, 1000000).total()) / (50.0 * n);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.05));

  // acceptance mass 0.05: mean rejections 19 per observation
  MixtureState st3;
  st3.params.weights = WeightVector(Eigen::VectorXd::Constant(1, 1.0));
  st3.params.components = {comp1(-1.6449, 1.0)};
  st3.assignments.assign(100, 0);
  Dataset data3 = positive_data(rng, 100);
  double accept = 1.0 - oracles::normal_cdf(1.6449);
  double expect = (1.0 - accept) / accept;
  double mean3 = 0.0;
  const int reps3 = 1000;
  for (int r = 0; r < reps3; ++r)
    mean3 += double(impute_per_observation(rng, st3, data3, 1000000).total()) / (double(reps3) * 100);
  CHECK(mean3 == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("update_weights_motg: Dir(4,2) and rejection independence") {
  Hyperparams hp = hp1d();
  hp.weight_prior = WeightPrior::dirichlet;
  Rng rng(41);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i)
    mean += update_weights_motg(rng, Eigen::Vector2d(3, 1), hp)[0] / n;
  CHECK(mean == doctest::Approx(4.0 / 6.0).epsilon(0.01));

  // the update takes observation counts only: identical streams stay identical
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    WeightVector wa = update_weights_motg(a, Eigen::Vector2d(3, 1), hp);
    WeightVector wb = update_weights_motg(b, Eigen::Vector2d(3, 1), hp);
    CHECK(wa.vec() == wb.vec());
  }
}

TEST_CASE("update_assignments_motg: symmetry, group relabeling, direct evaluation") {
  Rng rng(43);
  Hyperparams hp = hp1d(2);
  MixtureState st;
  st.params.weights = WeightVector(Eigen::Vector2d(0.5, 0.5));
  st.params.components = {comp1(-1.0, 1.0), comp1(1.0, 1.0)};
  st.assignments = {0};
  Dataset mid = Dataset::make(Eigen::MatrixXd::Zero(1, 1), ConstraintSet::full_space(1));

  // group symmetric about the midpoint keeps the 50/50 split
  AugmentedRejections aug = AugmentedRejections::empty_per_observation(1);
  aug.groups[0] = {Eigen::VectorXd::Constant(1, 0.4), Eigen::VectorXd::Constant(1, -0.4)};
  int first = 0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    first += update_assignments_motg(rng, st, mid, aug, hp)[0] == 0;
  CHECK(double(first) / reps == doctest::Approx(0.5).epsilon(0.01));

  // with an asymmetric group the probabilities follow the full product
  aug.groups[0] = {Eigen::VectorXd::Constant(1, 0.8)};
  double w0 = 0.5 * oracles::normal_pdf(0.0, -1.0, 1.0) * oracles::normal_pdf(0.8, -1.0, 1.0);
  double w1 = 0.5 * oracles::normal_pdf(0.0, 1.0, 1.0) * oracles::normal_pdf(0.8, 1.0, 1.0);
  double p0 = w0 / (w0 + w1);
  int count0 = 0;
  for (int r = 0; r < reps; ++r)
    count0 += update_assignments_motg(rng, st, mid, aug, hp)[0] == 0;
  CHECK(double(count0) / reps == doctest::Approx(p0).epsilon(0.01));
}

TEST_CASE("update_components_motg equals the TMoG update after regrouping") {
  Hyperparams hp = hp1d(2);
  Eigen::MatrixXd pts(4, 1);
  pts << 0.1, 0.4, 1.9, 2.2;
  Dataset data = Dataset::make(pts, ConstraintSet::full_space(1));

  MixtureState st_t, st_m;
  st_t.params.weights = st_m.params.weights = WeightVector(Eigen::Vector2d(0.5, 0.5));
  st_t.params.components = st_m.params.components = {comp1(0.0, 1.0), comp1(2.0, 1.0)};
  st_t.assignments = st_m.assignments = {0, 0, 1, 1};

  AugmentedRejections pooled = AugmentedRejections::empty_pooled();
  pooled.pooled.push_back({Eigen::VectorXd::Constant(1, -0.7), 0});
  pooled.pooled.push_back({Eigen::VectorXd::Constant(1, 3.1), 1});
  AugmentedRejections grouped = AugmentedRejections::empty_per_observation(4);
  grouped.groups[0] = {Eigen::VectorXd::Constant(1, -0.7)};
  grouped.groups[2] = {Eigen::VectorXd::Constant(1, 3.1)};

  Rng rng_t(77), rng_m(77);
  update_components_tmog(rng_t, st_t, data, pooled, hp);
  update_components_motg(rng_m, st_m, data, grouped, hp);
  for (int k = 0; k < 2; ++k) {
    CHECK(st_t.params.components[k].mu == st_m.params.components[k].mu);
    CHECK(st_t.params.components[k].sigma == st_m.params.components[k].sigma);
  }
}

TEST_CASE("motg_sweep: t = 0 unconstrained, determinism, label consistency") {
  Rng rng(47);
  Hyperparams hp = hp1d(3);
  hp.threshold = 0.0;
  Dataset data = positive_data(rng, 60);
  MixtureState st = init_state(rng, data, hp);
  for (int i = 0; i < 10; ++i) CHECK(motg_sweep(rng, st, data, hp).rejections == 0);

  hp.threshold = std::numeric_limits<double>::infinity();
  hp.variant = ThresholdVariant::exact;
  auto run = [&](std::uint64_t seed) {
    Rng r(seed);
    Dataset d2 = positive_data(r, 40);
    MixtureState s = init_state(r, d2, hp);
    std::vector<double> lj;
    for (int i = 0; i < 15; ++i) lj.push_back(motg_sweep(r, s, d2, hp).log_joint);
    return lj;
  };
  CHECK(run(7) == run(7));
}
