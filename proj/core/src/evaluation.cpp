#include "truncmix/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "truncmix/threshold.hpp"

namespace truncmix {

namespace {

// Components with weight below this are skipped when estimating per-component
// normalizers; their predictive contribution is negligible at the tolerances
// used here.
constexpr double kWeightFloor = 1e-8;

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * (sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - lo;
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

}  // namespace

double estimate_q_mass(Rng& rng, const MixtureParams& params, const ConstraintSet& constraint,
                       long m) {
  if (m < 1) throw std::invalid_argument("estimate_q_mass: m must be >= 1");
  if (constraint.is_full_space()) return 1.0;
  const Eigen::VectorXd& w = params.weights.vec();
  std::span<const double> wspan(w.data(), static_cast<size_t>(w.size()));
  long hits = 0;
  for (long i = 0; i < m; ++i) {
    int label = rng.categorical(wspan);
    if (constraint.contains(sample_mvn(rng, params.components[label]))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

Eigen::VectorXd estimate_component_masses(Rng& rng, const MixtureParams& params,
                                          const ConstraintSet& constraint, long m) {
  const int k = params.k();
  Eigen::VectorXd z = Eigen::VectorXd::Ones(k);
  if (constraint.is_full_space()) return z;
  for (int j = 0; j < k; ++j) {
    if (params.weights[j] < kWeightFloor) {
      z[j] = 1.0;  // skipped; the term is dropped at evaluation time anyway
      continue;
    }
    long hits = 0;
    for (long i = 0; i < m; ++i)
      if (constraint.contains(sample_mvn(rng, params.components[j]))) ++hits;
    z[j] = static_cast<double>(hits) / static_cast<double>(m);
  }
  return z;
}

double constrained_logdensity_tmog(const MixtureParams& params, const ConstraintSet& constraint,
                                   const Eigen::VectorXd& x, double qS_estimate) {
  if (!(qS_estimate > 0.0) || qS_estimate > 1.0)
    throw DegenerateNormalizerError("q(S) estimate is zero or invalid");
  if (!constraint.contains(x)) return -std::numeric_limits<double>::infinity();
  return proposal_logpdf(params, x) - std::log(qS_estimate);
}

double constrained_logdensity_motg(const MixtureParams& params, const ConstraintSet& constraint,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& per_component_Z) {
  if (!constraint.contains(x)) return -std::numeric_limits<double>::infinity();
  const int k = params.k();
  if (per_component_Z.size() != k)
    throw std::invalid_argument("constrained_logdensity_motg: Z size mismatch");
  std::vector<double> terms;
  terms.reserve(k);
  for (int j = 0; j < k; ++j) {
    double w = params.weights[j];
    if (w < kWeightFloor) continue;
    if (!(per_component_Z[j] > 0.0))
      throw DegenerateNormalizerError("component " + std::to_string(j) +
                                      " has zero estimated mass on S");
    terms.push_back(std::log(w) + mvn_logpdf(x, params.components[j]) -
                    std::log(per_component_Z[j]));
  }
  return logsumexp(terms);
}

TestLogLik test_loglikelihood_with_normalizers(const SampleStore& store, const Dataset& test,
                                               Model model,
                                               const std::vector<Eigen::VectorXd>& normalizers) {
  const size_t s = store.samples.size();
  if (s == 0) throw std::invalid_argument("test_loglikelihood: empty sample store");
  if (normalizers.size() != s)
    throw std::invalid_argument("test_loglikelihood: normalizer count mismatch");
  TestLogLik out;
  out.per_point.reserve(test.n());
  std::vector<double> lp(s);
  for (long i = 0; i < test.n(); ++i) {
    Eigen::VectorXd x = test.points.row(i).transpose();
    for (size_t j = 0; j < s; ++j) {
      lp[j] = model == Model::tmog
                  ? constrained_logdensity_tmog(store.samples[j], test.constraint, x,
                                                normalizers[j][0])
                  : constrained_logdensity_motg(store.samples[j], test.constraint, x,
                                                normalizers[j]);
    }
    double v = logsumexp(lp) - std::log(static_cast<double>(s));
    out.per_point.push_back(v);
    out.total += v;
  }
  return out;
}

TestLogLik test_loglikelihood(Rng& rng, const SampleStore& store, const Dataset& test, Model model,
                              long m_norm) {
  std::vector<Eigen::VectorXd> normalizers;
  normalizers.reserve(store.samples.size());
  for (const MixtureParams& params : store.samples) {
    if (model == Model::tmog) {
      double q = estimate_q_mass(rng, params, test.constraint, m_norm);
      if (!(q > 0.0)) throw DegenerateNormalizerError("q(S) estimated as zero");
      normalizers.push_back(Eigen::VectorXd::Constant(1, q));
    } else {
      normalizers.push_back(estimate_component_masses(rng, params, test.constraint, m_norm));
    }
  }
  return test_loglikelihood_with_normalizers(store, test, model, normalizers);
}

DensityGrid posterior_mean_grid(Rng& rng, const SampleStore& store,
                                const ConstraintSet& constraint, int resolution, Model model,
                                long m_norm) {
  const int d = constraint.dim();
  if (d > 2)
    throw std::invalid_argument("posterior_mean_grid handles d <= 2; use pairwise grids");
  auto [lo, hi] = constraint.bounding_box();
  Eigen::VectorXd span = hi - lo;
  lo -= 0.1 * span;
  hi += 0.1 * span;  // 20% inflation overall

  DensityGrid grid;
  for (int j = 0; j < d; ++j) {
    std::vector<double> axis(resolution);
    double step = (hi[j] - lo[j]) / resolution;
    for (int i = 0; i < resolution; ++i) axis[i] = lo[j] + (i + 0.5) * step;
    grid.axes.push_back(std::move(axis));
  }
  long cells = 1;
  for (int j = 0; j < d; ++j) cells *= resolution;
  grid.values.assign(cells, 0.0);
  grid.inside.assign(cells, 0);

  std::vector<Eigen::VectorXd> normalizers;
  for (const MixtureParams& params : store.samples) {
    normalizers.push_back(
        model == Model::tmog
            ? Eigen::VectorXd::Constant(1, estimate_q_mass(rng, params, constraint, m_norm))
            : estimate_component_masses(rng, params, constraint, m_norm));
  }

  Eigen::VectorXd x(d);
  for (long c = 0; c < cells; ++c) {
    long rem = c;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = grid.axes[j][rem % resolution];
      rem /= resolution;
    }
    if (!constraint.contains(x)) continue;
    grid.inside[c] = 1;
    double acc = 0.0;
    for (size_t s = 0; s < store.samples.size(); ++s) {
      double ld = model == Model::tmog
                      ? constrained_logdensity_tmog(store.samples[s], constraint, x,
                                                    normalizers[s][0])
                      : constrained_logdensity_motg(store.samples[s], constraint, x,
                                                    normalizers[s]);
      acc += std::exp(ld);
    }
    grid.values[c] = acc / static_cast<double>(store.samples.size());
  }
  return grid;
}

std::vector<DensityGrid> pairwise_marginal_grids(Rng& rng, const SampleStore& store,
                                                 const ConstraintSet& constraint, int resolution,
                                                 long m_draws, long safety_cap) {
  const int d = constraint.dim();
  auto [lo, hi] = constraint.bounding_box();
  Eigen::VectorXd span = hi - lo;
  Eigen::VectorXd glo = lo - 0.1 * span, ghi = hi + 0.1 * span;

  std::vector<DensityGrid> grids;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      DensityGrid g;
      g.plane = {a, b};
      for (int j : {a, b}) {
        std::vector<double> axis(resolution);
        double step = (ghi[j] - glo[j]) / resolution;
        for (int i = 0; i < resolution; ++i) axis[i] = glo[j] + (i + 0.5) * step;
        g.axes.push_back(std::move(axis));
      }
      g.values.assign(static_cast<size_t>(resolution) * resolution, 0.0);
      g.inside.assign(g.values.size(), 1);  // marginals have no 2-D mask
      grids.push_back(std::move(g));
    }
  }

  // Monte Carlo over the remaining coordinates: draw from the constrained
  // model and histogram each coordinate pair.
  long total_draws = 0;
  for (const MixtureParams& params : store.samples) {
    for (long t = 0; t < m_draws; ++t) {
      Eigen::VectorXd x =
          rejection_sample_observation(rng, params, constraint, std::nullopt, safety_cap)
              .accepted;
      ++total_draws;
      size_t gi = 0;
      for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b, ++gi) {
          DensityGrid& g = grids[gi];
          int ia = static_cast<int>((x[a] - glo[a]) / (ghi[a] - glo[a]) * resolution);
          int ib = static_cast<int>((x[b] - glo[b]) / (ghi[b] - glo[b]) * resolution);
          if (ia < 0 || ia >= resolution || ib < 0 || ib >= resolution) continue;
          g.values[static_cast<size_t>(ia) * resolution + ib] += 1.0;
        }
      }
    }
  }
  for (size_t gi = 0, a = 0; a < static_cast<size_t>(d); ++a) {
    for (size_t b = a + 1; b < static_cast<size_t>(d); ++b, ++gi) {
      double cell_area = (ghi[a] - glo[a]) / resolution * (ghi[b] - glo[b]) / resolution;
      for (double& v : grids[gi].values) v /= total_draws * cell_area;
    }
  }
  return grids;
}

PpcResult ppc_boundary_scale(Rng& rng, const SampleStore& store, const Dataset& observed,
                             int n_rep, double scale_factor, long safety_cap) {
  if (!(scale_factor > 1.0))
    throw std::invalid_argument("ppc_boundary_scale: scale_factor must be > 1");
  if (store.samples.empty()) throw std::invalid_argument("ppc_boundary_scale: empty store");
  const long n = observed.n();

  auto outside_fraction = [&](const Eigen::MatrixXd& pts) {
    Eigen::RowVectorXd centroid = pts.colwise().mean();
    long out = 0;
    for (long i = 0; i < pts.rows(); ++i) {
      Eigen::VectorXd scaled =
          (centroid + scale_factor * (pts.row(i) - centroid)).transpose();
      if (!observed.constraint.contains(scaled)) ++out;
    }
    return static_cast<double>(out) / static_cast<double>(pts.rows());
  };

  PpcResult res;
  res.observed_fraction = outside_fraction(observed.points);
  for (int r = 0; r < n_rep; ++r) {
    const MixtureParams& params = store.samples[r % store.samples.size()];
    Eigen::MatrixXd rep(n, observed.dim());
    for (long i = 0; i < n; ++i) {
      rep.row(i) =
          rejection_sample_observation(rng, params, observed.constraint, std::nullopt, safety_cap)
              .accepted.transpose();
    }
    res.replicate_fractions.push_back(outside_fraction(rep));
  }
  long ge = std::count_if(res.replicate_fractions.begin(), res.replicate_fractions.end(),
                          [&](double f) { return f >= res.observed_fraction; });
  res.p_value = static_cast<double>(ge) / static_cast<double>(n_rep);
  return res;
}

// ---------------------------------------------------------------------------
// Geweke joint-distribution test
// ---------------------------------------------------------------------------

namespace {

MixtureParams draw_prior_params(Rng& rng, const Hyperparams& hp) {
  MixtureParams p;
  p.components.reserve(hp.k_trunc);
  for (int j = 0; j < hp.k_trunc; ++j) p.components.push_back(sample_niw(rng, hp.niw));
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(hp.k_trunc);
  p.weights = hp.weight_prior == WeightPrior::dirichlet
                  ? sample_dirichlet(rng, zeros.array() + hp.alpha0)
                  : stick_breaking_posterior(rng, zeros, hp.alpha0);
  return p;
}

// Constrained generative process: returns points and their assignments.
void simulate_data(Rng& rng, const MixtureParams& params, const ConstraintSet& constraint,
                   Model model, long safety_cap, Eigen::MatrixXd& points,
                   std::vector<int>& assignments) {
  const long n = points.rows();
  const Eigen::VectorXd& w = params.weights.vec();
  std::span<const double> wspan(w.data(), static_cast<size_t>(w.size()));
  for (long i = 0; i < n; ++i) {
    if (model == Model::tmog) {
      RejectionDraw d =
          rejection_sample_observation(rng, params, constraint, std::nullopt, safety_cap);
      points.row(i) = d.accepted.transpose();
      assignments[i] = d.accepted_label;
    } else {
      int c = rng.categorical(wspan);
      RejectionDraw d = rejection_sample_observation(rng, params, constraint, c, safety_cap);
      points.row(i) = d.accepted.transpose();
      assignments[i] = c;
    }
  }
}

std::vector<double> geweke_statistics(const MixtureState& state, const Eigen::MatrixXd& points) {
  std::vector<double> s;
  s.push_back(state.params.weights[0]);
  const int kk = std::min(state.params.k(), 2);
  for (int j = 0; j < kk; ++j) {
    s.push_back(state.params.components[j].mu[0]);
    s.push_back(std::log(state.params.components[j].sigma(0, 0)));
  }
  double m1 = points.col(0).mean();
  double m2 = points.col(0).array().square().mean();
  s.push_back(m1);
  s.push_back(m2);
  double frac0 = 0.0;
  for (int c : state.assignments) frac0 += (c == 0);
  s.push_back(frac0 / state.assignments.size());
  return s;
}

std::vector<std::string> geweke_statistic_names(int k) {
  std::vector<std::string> names = {"pi_1"};
  for (int j = 0; j < std::min(k, 2); ++j) {
    names.push_back("mu_" + std::to_string(j + 1));
    names.push_back("log_var_" + std::to_string(j + 1));
  }
  names.push_back("data_mean");
  names.push_back("data_second_moment");
  names.push_back("assign_frac_1");
  return names;
}

double batch_means_se(const std::vector<double>& x) {
  const size_t n = x.size();
  const size_t b = std::max<size_t>(10, static_cast<size_t>(std::sqrt(double(n))));
  const size_t nb = n / b;
  std::vector<double> means;
  for (size_t i = 0; i + 1 <= nb; ++i) {
    double m = 0.0;
    for (size_t j = i * b; j < (i + 1) * b; ++j) m += x[j];
    means.push_back(m / b);
  }
  double grand = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= (means.size() - 1);
  return std::sqrt(var / means.size());
}

}  // namespace

double GewekeResult::max_abs_z() const {
  double m = 0.0;
  for (double v : z) m = std::max(m, std::abs(v));
  return m;
}

GewekeResult geweke_joint_test(Rng& rng, const GewekeProblem& problem, Model model, int n_draws,
                               const SweepOptions& opts) {
  Hyperparams hp = problem.hp;
  hp.variant = ThresholdVariant::exact;
  hp.threshold = std::numeric_limits<double>::infinity();
  const long n = problem.n_obs;

  const size_t n_stats = geweke_statistic_names(hp.k_trunc).size();
  std::vector<std::vector<double>> a(n_stats), b(n_stats);

  // (a) marginal-conditional: independent draws of (theta, X) from the prior
  // and the constrained model.
  for (int t = 0; t < n_draws; ++t) {
    MixtureState state;
    state.params = draw_prior_params(rng, hp);
    Eigen::MatrixXd points(n, hp.niw.dim());
    state.assignments.assign(n, 0);
    simulate_data(rng, state.params, problem.constraint, model, hp.safety_cap, points,
                  state.assignments);
    std::vector<double> s = geweke_statistics(state, points);
    for (size_t j = 0; j < n_stats; ++j) a[j].push_back(s[j]);
  }

  // (b) successive-conditional: Gibbs sweep alternated with data re-simulation.
  MixtureState state;
  state.params = draw_prior_params(rng, hp);
  Eigen::MatrixXd points(n, hp.niw.dim());
  state.assignments.assign(n, 0);
  simulate_data(rng, state.params, problem.constraint, model, hp.safety_cap, points,
                state.assignments);
  for (int t = 0; t < n_draws; ++t) {
    Dataset data = Dataset::make(points, problem.constraint);
    if (model == Model::tmog)
      tmog_sweep(rng, state, data, hp, opts);
    else
      motg_sweep(rng, state, data, hp, opts);
    simulate_data(rng, state.params, problem.constraint, model, hp.safety_cap, points,
                  state.assignments);
    std::vector<double> s = geweke_statistics(state, points);
    for (size_t j = 0; j < n_stats; ++j) b[j].push_back(s[j]);
  }

  GewekeResult res;
  res.names = geweke_statistic_names(hp.k_trunc);
  for (size_t j = 0; j < n_stats; ++j) {
    double ma = std::accumulate(a[j].begin(), a[j].end(), 0.0) / a[j].size();
    double mb = std::accumulate(b[j].begin(), b[j].end(), 0.0) / b[j].size();
    double va = 0.0;
    for (double v : a[j]) va += (v - ma) * (v - ma);
    va /= (a[j].size() - 1);
    double se_a = std::sqrt(va / a[j].size());
    double se_b = batch_means_se(b[j]);
    res.z.push_back((ma - mb) / std::sqrt(se_a * se_a + se_b * se_b));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Trace diagnostics
// ---------------------------------------------------------------------------

std::vector<double> autocorrelation(std::span<const double> x, int max_lag) {
  const long n = static_cast<long>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  std::vector<double> rho;
  if (var == 0.0) return rho;  // degenerate
  for (int l = 1; l <= max_lag && l < n; ++l) {
    double c = 0.0;
    for (long t = 0; t + l < n; ++t) c += (x[t] - mean) * (x[t + l] - mean);
    rho.push_back(c / var);
  }
  return rho;
}

double effective_sample_size(std::span<const double> x) {
  const long n = static_cast<long>(x.size());
  if (n < 2) return static_cast<double>(n);
  std::vector<double> rho = autocorrelation(x, static_cast<int>(std::min<long>(n - 1, 1000)));
  if (rho.empty()) return static_cast<double>(n);  // constant trace
  double s = 0.0;
  for (double r : rho) {
    if (r <= 0.0) break;  // initial positive sequence truncation
    s += r;
  }
  return std::clamp(static_cast<double>(n) / (1.0 + 2.0 * s), 1.0, static_cast<double>(n));
}

TraceSummary trace_summary(const SampleStore& store) {
  if (store.traces.empty()) throw std::invalid_argument("trace_summary: empty traces");
  TraceSummary s;
  std::vector<double> lj, rej;
  for (const TraceRecord& t : store.traces) {
    lj.push_back(t.log_joint);
    rej.push_back(static_cast<double>(t.rejections));
    s.total_seconds += t.seconds;
  }
  s.logjoint_autocorr = autocorrelation(lj, 50);
  s.degenerate = s.logjoint_autocorr.empty();
  s.logjoint_ess = effective_sample_size(lj);
  std::sort(rej.begin(), rej.end());
  s.rejection_quantiles = {quantile_sorted(rej, 0.25), quantile_sorted(rej, 0.5),
                           quantile_sorted(rej, 0.75)};
  return s;
}

}  // namespace truncmix
