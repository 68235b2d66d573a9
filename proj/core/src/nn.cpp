#include "latentplan/nn.hpp"

#include <cmath>

#include "latentplan/error.hpp"

namespace latentplan::nn {

Mlp::Mlp(const std::vector<int>& dims, Activation hidden, Activation output,
         Rng& rng) {
  if (dims.size() < 2) throw ConfigError("mlp: need at least input and output dims");
  for (const int d : dims) {
    if (d < 1) throw ConfigError("mlp: non-positive layer width");
  }
  const std::size_t n = dims.size() - 1;
  weights_.reserve(n);
  biases_.reserve(n);
  acts_.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    Eigen::MatrixXd w(fan_out, fan_in);
    const double scale = std::sqrt(2.0 / fan_in);
    for (int c = 0; c < fan_in; ++c) {
      for (int r = 0; r < fan_out; ++r) w(r, c) = rng.normal(0.0, scale);
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
    acts_.push_back(l + 1 == n ? output : hidden);
  }
}

std::size_t Mlp::n_params() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Cache cache;
  return forward(x, cache);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
  if (weights_.empty()) throw NotFittedError("mlp: forward on empty network");
  if (x.rows() != in_dim()) {
    throw DimensionMismatchError("mlp: input has wrong dimensionality");
  }
  cache.pre.clear();
  cache.post.clear();
  cache.post.push_back(x);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd pre = (weights_[l] * cache.post.back()).colwise() + biases_[l];
    Eigen::MatrixXd post =
        acts_[l] == Activation::kRelu ? pre.cwiseMax(0.0).eval() : pre;
    cache.pre.push_back(std::move(pre));
    cache.post.push_back(std::move(post));
  }
  return cache.post.back();
}

void Mlp::Gradients::init_like(const Mlp& net) {
  w.clear();
  b.clear();
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    w.push_back(Eigen::MatrixXd::Zero(net.weight(l).rows(), net.weight(l).cols()));
    b.push_back(Eigen::VectorXd::Zero(net.bias(l).size()));
  }
}

void Mlp::Gradients::add_scaled(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] += scale * other.w[l];
    b[l] += scale * other.b[l];
  }
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& d_out,
                              Gradients& g) const {
  if (cache.pre.size() != weights_.size()) {
    throw DimensionMismatchError("mlp: cache does not match network");
  }
  if (g.w.size() != weights_.size()) g.init_like(*this);

  Eigen::MatrixXd delta = d_out;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    if (acts_[l] == Activation::kRelu) {
      // Subgradient 0 at the kink: strictly positive pre-activations pass.
      delta.array() *= (cache.pre[l].array() > 0.0).cast<double>();
    }
    g.w[l] += delta * cache.post[l].transpose();
    g.b[l] += delta.rowwise().sum();
    if (l > 0) delta = (weights_[l].transpose() * delta).eval();
  }
  return weights_.front().transpose() * delta;
}

void AdamState::init_like(const Mlp& net) {
  m_w.clear();
  v_w.clear();
  m_b.clear();
  v_b.clear();
  step = 0;
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    m_w.push_back(Eigen::MatrixXd::Zero(net.weight(l).rows(), net.weight(l).cols()));
    v_w.push_back(Eigen::MatrixXd::Zero(net.weight(l).rows(), net.weight(l).cols()));
    m_b.push_back(Eigen::VectorXd::Zero(net.bias(l).size()));
    v_b.push_back(Eigen::VectorXd::Zero(net.bias(l).size()));
  }
}

void adam_step(Mlp& net, const Mlp::Gradients& g, AdamState& state,
               const TrainConfig& cfg) {
  if (state.m_w.size() != net.n_layers()) state.init_like(net);
  state.step += 1;
  const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    state.m_w[l] = b1 * state.m_w[l] + (1.0 - b1) * g.w[l];
    state.v_w[l] = b2 * state.v_w[l] + (1.0 - b2) * g.w[l].cwiseProduct(g.w[l]);
    net.weight(l).array() -=
        cfg.lr * (state.m_w[l].array() / corr1) /
        ((state.v_w[l].array() / corr2).sqrt() + cfg.adam_eps);

    state.m_b[l] = b1 * state.m_b[l] + (1.0 - b1) * g.b[l];
    state.v_b[l] = b2 * state.v_b[l] + (1.0 - b2) * g.b[l].cwiseProduct(g.b[l]);
    net.bias(l).array() -=
        cfg.lr * (state.m_b[l].array() / corr1) /
        ((state.v_b[l].array() / corr2).sqrt() + cfg.adam_eps);
  }
}

namespace {

double perturbed_diff(double* p,
                      const std::function<double(std::vector<Mlp::Gradients>*)>& eval,
                      double h) {
  const double saved = *p;
  *p = saved + h;
  const double up = eval(nullptr);
  *p = saved - h;
  const double down = eval(nullptr);
  *p = saved;
  return (up - down) / (2.0 * h);
}

double rel_err(double fd, double analytic) {
  return std::abs(fd - analytic) /
         std::max({1.0, std::abs(fd), std::abs(analytic)});
}

}  // namespace

double grad_check(std::span<Mlp* const> nets,
                  const std::function<double(std::vector<Mlp::Gradients>*)>& eval,
                  double h) {
  std::vector<Mlp::Gradients> analytic;
  eval(&analytic);
  if (analytic.size() != nets.size()) {
    throw DimensionMismatchError("grad_check: eval filled wrong gradient count");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < nets.size(); ++n) {
    Mlp& net = *nets[n];
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      auto& w = net.weight(l);
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double fd = perturbed_diff(w.data() + i, eval, h);
        worst = std::max(worst, rel_err(fd, analytic[n].w[l](i)));
      }
      auto& b = net.bias(l);
      for (Eigen::Index i = 0; i < b.size(); ++i) {
        const double fd = perturbed_diff(b.data() + i, eval, h);
        worst = std::max(worst, rel_err(fd, analytic[n].b[l](i)));
      }
    }
  }
  return worst;
}

double grad_check(
    Mlp& net, const Eigen::MatrixXd& x,
    const std::function<double(const Eigen::MatrixXd&, Eigen::MatrixXd*)>& loss,
    double h) {
  Mlp* nets[] = {&net};
  return grad_check(
      nets,
      [&](std::vector<Mlp::Gradients>* g) {
        Mlp::Cache cache;
        const Eigen::MatrixXd y = net.forward(x, cache);
        if (g == nullptr) return loss(y, nullptr);
        Eigen::MatrixXd d_out(y.rows(), y.cols());
        const double value = loss(y, &d_out);
        g->resize(1);
        (*g)[0].init_like(net);
        net.backward(cache, d_out, (*g)[0]);
        return value;
      },
      h);
}

}  // namespace latentplan::nn
