#include <benchmark/benchmark.h>

#include "mrz/counterexample.hpp"
#include "mrz/inequality.hpp"
#include "mrz/random_tree.hpp"
#include "mrz/riesz.hpp"
#include "mrz/rng.hpp"
#include "mrz/single_step.hpp"

namespace {

mrz::RandomVariable fixture(int depth, mrz::FiltrationTree& tree_out) {
  mrz::SplitMix64 rng(2024);
  tree_out = mrz::random_tree(rng, depth, 4);
  return mrz::random_variable(rng, tree_out, depth, 2.0);
}

void BM_Condition(benchmark::State& state) {
  mrz::FiltrationTree tree = mrz::FiltrationTree::trivial();
  const mrz::RandomVariable f = fixture(static_cast<int>(state.range(0)), tree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::condition(f, 0));
  }
}
BENCHMARK(BM_Condition)->Arg(4)->Arg(6)->Arg(8);

void BM_ConjRiesz(benchmark::State& state) {
  mrz::FiltrationTree tree = mrz::FiltrationTree::trivial();
  const mrz::RandomVariable f = fixture(static_cast<int>(state.range(0)), tree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::conj_riesz(f, 0.5, tree.depth()));
  }
}
BENCHMARK(BM_ConjRiesz)->Arg(4)->Arg(6)->Arg(8);

void BM_BmoNorm(benchmark::State& state) {
  mrz::FiltrationTree tree = mrz::FiltrationTree::trivial();
  const mrz::RandomVariable f = fixture(6, tree);
  const mrz::MartingaleProcess m = mrz::martingale_from(f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::bmo_norm(m));
  }
}
BENCHMARK(BM_BmoNorm);

void BM_Decompose(benchmark::State& state) {
  mrz::FiltrationTree tree = mrz::FiltrationTree::trivial();
  const mrz::RandomVariable f = fixture(6, tree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::decompose(f, 0.5));
  }
}
BENCHMARK(BM_Decompose);

void BM_MinConstantInstance(benchmark::State& state) {
  mrz::SplitMix64 rng(7);
  const mrz::InequalityInstance inst = mrz::random_instance(rng, 2.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::min_constant_for(inst));
  }
}
BENCHMARK(BM_MinConstantInstance);

void BM_GrowthCurve(benchmark::State& state) {
  const mrz::ChainSpec spec = mrz::ChainSpec::dyadic(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrz::growth_curve(spec, 2.0));
  }
}
BENCHMARK(BM_GrowthCurve)->Arg(30)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
