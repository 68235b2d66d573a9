#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "latentplan/nn.hpp"
#include "latentplan/rng.hpp"

namespace {

using latentplan::Rng;
using latentplan::nn::Activation;
using latentplan::nn::Mlp;

Mlp encoder_net(Rng& rng) {
  return Mlp({64, 64, 32, 12}, Activation::kRelu, Activation::kIdentity, rng);
}

Eigen::MatrixXd random_batch(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd x(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) x(r, c) = rng.normal();
  return x;
}

void BM_MlpForward(benchmark::State& state) {
  Rng rng(1);
  const Mlp net = encoder_net(rng);
  const Eigen::MatrixXd x =
      random_batch(64, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(x));
  }
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64)->Arg(256);

void BM_MlpForwardBackward(benchmark::State& state) {
  Rng rng(1);
  const Mlp net = encoder_net(rng);
  const Eigen::MatrixXd x =
      random_batch(64, static_cast<int>(state.range(0)), rng);
  Mlp::Gradients grads;
  grads.init_like(net);
  for (auto _ : state) {
    Mlp::Cache cache;
    const Eigen::MatrixXd y = net.forward(x, cache);
    benchmark::DoNotOptimize(net.backward(cache, y, grads));
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
