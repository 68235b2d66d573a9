#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "latentplan/cluster.hpp"
#include "latentplan/rng.hpp"

namespace {

using latentplan::Rng;

// k well separated Gaussian blobs in 8 dimensions.
Eigen::MatrixXd blobs(int n, int k, Rng& rng) {
  Eigen::MatrixXd x(8, n);
  for (int i = 0; i < n; ++i) {
    const int c = i % k;
    for (int d = 0; d < 8; ++d) x(d, i) = 10.0 * c * (d == 0) + rng.normal();
  }
  return x;
}

void BM_Hdbscan(benchmark::State& state) {
  Rng rng(3);
  const Eigen::MatrixXd x = blobs(static_cast<int>(state.range(0)), 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latentplan::cluster::hdbscan(x));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hdbscan)->Arg(128)->Arg(256)->Arg(512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
