#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "latentplan/rng.hpp"

namespace latentplan::nn {

enum class Activation { kIdentity, kRelu };

// Optimiser and loop settings shared by every trainable encoder.
struct TrainConfig {
  int epochs = 500;
  int batch_size = 64;
  double lr = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

// Small fully connected network operating on column batches: layer l maps
// X to act(W_l X + b_l). The subgradient of ReLU at exactly 0 is taken as 0.
class Mlp {
 public:
  Mlp() = default;
  // dims = {in, hidden..., out}; hidden layers use `hidden`, the last layer
  // uses `output`. Weights are He-initialised, biases start at zero.
  Mlp(const std::vector<int>& dims, Activation hidden, Activation output,
      Rng& rng);

  int in_dim() const { return weights_.empty() ? 0 : static_cast<int>(weights_.front().cols()); }
  int out_dim() const { return weights_.empty() ? 0 : static_cast<int>(weights_.back().rows()); }
  std::size_t n_layers() const { return weights_.size(); }
  std::size_t n_params() const;

  const Eigen::MatrixXd& weight(std::size_t l) const { return weights_[l]; }
  Eigen::MatrixXd& weight(std::size_t l) { return weights_[l]; }
  const Eigen::VectorXd& bias(std::size_t l) const { return biases_[l]; }
  Eigen::VectorXd& bias(std::size_t l) { return biases_[l]; }
  Activation activation(std::size_t l) const { return acts_[l]; }

  // Intermediate values of one forward pass, needed by backward().
  struct Cache {
    std::vector<Eigen::MatrixXd> pre;   // pre-activations per layer
    std::vector<Eigen::MatrixXd> post;  // post[0] is the input batch
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::VectorXd> b;

    void init_like(const Mlp& net);
    void add_scaled(const Gradients& other, double scale);
  };

  // Backpropagates d_out (gradient of the loss w.r.t. the network output),
  // accumulating parameter gradients into g; returns the gradient w.r.t.
  // the input batch.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& d_out,
                           Gradients& g) const;

 private:
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  std::vector<Activation> acts_;
};

// Adam moments for one network.
struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long step = 0;

  void init_like(const Mlp& net);
};

// One Adam update with bias correction.
void adam_step(Mlp& net, const Mlp::Gradients& g, AdamState& state,
               const TrainConfig& cfg);

// Central-difference check of analytic gradients. `eval` must return the
// loss for the networks' current parameters and, when the pointer is
// non-null, fill one Gradients per network (in `nets` order). Every weight
// and bias is perturbed by +-h; returns the maximum relative error
// |fd - analytic| / max(1, |fd|, |analytic|).
double grad_check(std::span<Mlp* const> nets,
                  const std::function<double(std::vector<Mlp::Gradients>*)>& eval,
                  double h = 1e-4);

// Convenience form for a single network with a differentiable loss on its
// output: `loss` returns the scalar and, when the pointer is non-null, the
// gradient w.r.t. the output batch.
double grad_check(
    Mlp& net, const Eigen::MatrixXd& x,
    const std::function<double(const Eigen::MatrixXd&, Eigen::MatrixXd*)>& loss,
    double h = 1e-4);

}  // namespace latentplan::nn
