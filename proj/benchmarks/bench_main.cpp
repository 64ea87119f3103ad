#include <benchmark/benchmark.h>

#include "truncmix/motg.hpp"
#include "truncmix/synth.hpp"
#include "truncmix/tmog.hpp"

using namespace truncmix;

namespace {

Hyperparams desk_hp(int d) {
  Hyperparams hp;
  hp.k_trunc = 10;
  hp.niw.mu0 = Eigen::VectorXd::Constant(d, 0.5);
  hp.niw.lambda = 0.1;
  hp.niw.phi = 0.01 * Eigen::MatrixXd::Identity(d, d);
  hp.niw.nu = d + 3.0;
  return hp;
}

void bm_mvn_logpdf(benchmark::State& state) {
  Rng rng(1);
  auto c = ComponentParams::make(Eigen::Vector2d(0.2, 0.8),
                                 0.05 * Eigen::Matrix2d::Identity());
  Eigen::VectorXd x = Eigen::Vector2d(0.3, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(mvn_logpdf(x, c));
}
BENCHMARK(bm_mvn_logpdf);

void bm_polygon_contains(benchmark::State& state) {
  ConstraintSet s = ConstraintSet::polygon_union({island_ring()});
  Eigen::VectorXd x = Eigen::Vector2d(0.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(s.contains(x));
}
BENCHMARK(bm_polygon_contains);

void bm_tmog_sweep(benchmark::State& state) {
  Rng rng(7);
  Dataset data = Dataset::make(synth_polygon_island(rng, state.range(0)),
                               ConstraintSet::polygon_union({island_ring()}));
  Hyperparams hp = desk_hp(2);
  MixtureState st = init_state(rng, data, hp);
  for (auto _ : state) benchmark::DoNotOptimize(tmog_sweep(rng, st, data, hp));
}
BENCHMARK(bm_tmog_sweep)->Arg(100)->Arg(400);

void bm_motg_sweep(benchmark::State& state) {
  Rng rng(7);
  Dataset data = Dataset::make(synth_polygon_island(rng, state.range(0)),
                               ConstraintSet::polygon_union({island_ring()}));
  Hyperparams hp = desk_hp(2);
  MixtureState st = init_state(rng, data, hp);
  for (auto _ : state) benchmark::DoNotOptimize(motg_sweep(rng, st, data, hp));
}
BENCHMARK(bm_motg_sweep)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
