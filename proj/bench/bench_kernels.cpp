// OpenMP kernels against their serial references.

#include "ake/kernels.hpp"
#include "ake/metrics.hpp"
#include "ake/parallel.hpp"
#include "ake/random.hpp"
#include "ake/reconstruction.hpp"

#include <benchmark/benchmark.h>

namespace {

ake::Matrix points(Eigen::Index n, Eigen::Index dim) {
  ake::Rng rng(42, 0);
  ake::Matrix X(n, dim);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  return X;
}

const ake::KernelSpec kRbf = ake::KernelSpec::gaussian(1.5);

void BM_GramParallel(benchmark::State& state) {
  const ake::Matrix X = points(state.range(0), 10);
  for (auto _ : state) benchmark::DoNotOptimize(ake::gram(kRbf, X));
}

void BM_GramSerial(benchmark::State& state) {
  const ake::Matrix X = points(state.range(0), 10);
  for (auto _ : state) benchmark::DoNotOptimize(ake::serial::gram(kRbf, X));
}

void BM_NeighborOrderParallel(benchmark::State& state) {
  const ake::Matrix X = points(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ake::par::neighbor_order(X));
}

void BM_NeighborOrderSerial(benchmark::State& state) {
  const ake::Matrix X = points(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ake::serial::neighbor_order(X));
}

void BM_QuadraticBlas(benchmark::State& state) {
  const ake::GramMatrix G = ake::gram(kRbf, points(state.range(0), 3));
  for (auto _ : state) benchmark::DoNotOptimize(ake::build_quadratic(G));
}

void BM_QuadraticSerial(benchmark::State& state) {
  const ake::GramMatrix G = ake::gram(kRbf, points(state.range(0), 3));
  for (auto _ : state) benchmark::DoNotOptimize(ake::serial::build_quadratic(G));
}

}  // namespace

BENCHMARK(BM_GramParallel)->Arg(200)->Arg(800);
BENCHMARK(BM_GramSerial)->Arg(200)->Arg(800);
BENCHMARK(BM_NeighborOrderParallel)->Arg(200)->Arg(800);
BENCHMARK(BM_NeighborOrderSerial)->Arg(200)->Arg(800);
BENCHMARK(BM_QuadraticBlas)->Arg(100)->Arg(200);
BENCHMARK(BM_QuadraticSerial)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
