#include "supnorm/amplifier_engine.hpp"
#include "supnorm/experiments.hpp"
#include "supnorm/special_functions.hpp"

#include <benchmark/benchmark.h>

using namespace supnorm;

namespace {

void BM_RepCount(benchmark::State& state, const char* name, CountStrategy strategy) {
  QuadraticForm q = builtin_form(name);
  CountOptions opt;
  opt.strategy = strategy;
  RepresentationEngine eng(q, opt);
  IntCoords ell{state.range(0), 0};
  for (auto _ : state) benchmark::DoNotOptimize(eng.count(ell));
}

void BM_RepCountUnreduced(benchmark::State& state) {
  CountOptions opt;
  opt.reduce = false;
  opt.strategy = CountStrategy::Search;
  RepresentationEngine eng(builtin_form("eichler-2-3"), opt);
  IntCoords ell{state.range(0), 0};
  for (auto _ : state) benchmark::DoNotOptimize(eng.count(ell));
}

void BM_ConstrainedCounts(benchmark::State& state) {
  NormFormSplit split = builtin_split("lipschitz");
  ConstrainedCountQuery q;
  q.split = split;
  q.ell = {state.range(0), 0};
  q.directions = {unit_direction(split.ternary, 0, {1, 2, 3})};
  q.mode = ConstraintMode::NearTorus;
  std::vector<std::vector<long double>> etas;
  for (const auto& e : constrained_eta_grid()) etas.push_back({static_cast<long double>(to_long_double(e))});
  for (auto _ : state) benchmark::DoNotOptimize(constrained_counts(q, etas));
}

void BM_GeometricSide(benchmark::State& state) {
  GeometricQuery g;
  g.split = builtin_split("lipschitz");
  g.directions = {unit_direction(g.split.ternary, 0, {1, 2, 3})};
  g.m = {4};
  g.l = {1};
  g.L = Rational(state.range(0));
  g.mode = CoeffMode::Matrix;
  g.exclusions = {2};
  for (auto _ : state) benchmark::DoNotOptimize(geometric_side(g).B);
}

void BM_MatrixCoeff(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double acc = 0;
    for (int k = -99; k <= 99; ++k) acc += matrix_coeff(m, 1, k / 100.0);
    benchmark::DoNotOptimize(acc);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_RepCount, lipschitz, "lipschitz", CountStrategy::Auto)->Arg(99)->Arg(999)->Arg(9999);
BENCHMARK_CAPTURE(BM_RepCount, hurwitz, "hurwitz", CountStrategy::Auto)->Arg(99)->Arg(999);
BENCHMARK_CAPTURE(BM_RepCount, eichler_blocks, "eichler-2-3", CountStrategy::Blocks)->Arg(999)->Arg(9999);
BENCHMARK_CAPTURE(BM_RepCount, eichler_search, "eichler-2-3", CountStrategy::Search)->Arg(999)->Arg(9999);
BENCHMARK(BM_RepCountUnreduced)->Arg(999);
BENCHMARK(BM_ConstrainedCounts)->Arg(99)->Arg(999);
BENCHMARK(BM_GeometricSide)->Arg(2)->Arg(3);
BENCHMARK(BM_MatrixCoeff)->Arg(10)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
