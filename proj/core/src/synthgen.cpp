#include "latentplan/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "latentplan/error.hpp"

namespace latentplan::synth {

namespace {

void check_render_config(const RenderConfig& cfg) {
  if (cfg.dim < 1) throw ConfigError("render: dim must be positive");
  if (cfg.views < 1) throw ConfigError("render: need at least one viewpoint");
  if (cfg.distractors < 0) throw ConfigError("render: negative distractor count");
  if (cfg.p_distractor < 0.0 || cfg.p_distractor > 1.0) {
    throw ConfigError("render: p_distractor outside [0, 1]");
  }
  if (cfg.sigma_jitter < 0.0 || cfg.sigma_noise < 0.0) {
    throw ConfigError("render: negative noise scale");
  }
}

Eigen::MatrixXd unit_column_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = rng.normal();
    const double norm = m.col(c).norm();
    if (norm > 0.0) m.col(c) /= norm;
  }
  return m;
}

}  // namespace

RenderParams RenderParams::make(const worlds::WorldSpec& world,
                                const RenderConfig& cfg) {
  check_render_config(cfg);
  Rng rng = Rng(cfg.mix_seed).fork("mixing-matrices");
  RenderParams p;
  p.mix_view.reserve(cfg.views);
  for (int v = 0; v < cfg.views; ++v) {
    p.mix_view.push_back(unit_column_matrix(cfg.dim, world.n_slots(), rng));
  }
  p.mix_distract = unit_column_matrix(cfg.dim, cfg.distractors, rng);
  p.lighting_dir = unit_column_matrix(cfg.dim, 1, rng).col(0);
  return p;
}

NuisanceFactors sample_factors(const worlds::WorldSpec& world,
                               const RenderConfig& cfg, Rng& rng) {
  check_render_config(cfg);
  NuisanceFactors f;
  f.viewpoint = static_cast<int>(rng.uniform_int(cfg.views));
  f.jitter.resize(world.n_slots());
  const double clamp = 3.0 * cfg.sigma_jitter;
  for (int s = 0; s < world.n_slots(); ++s) {
    f.jitter[s] = std::clamp(rng.normal(0.0, cfg.sigma_jitter), -clamp, clamp);
  }
  f.distractors = 0;
  for (int k = 0; k < cfg.distractors; ++k) {
    if (rng.bernoulli(cfg.p_distractor)) f.distractors |= 1u << k;
  }
  f.lighting = rng.uniform();
  return f;
}

Eigen::VectorXd render(const worlds::WorldSpec& world, worlds::WorldState state,
                       const NuisanceFactors& factors,
                       const RenderParams& params, const RenderConfig& cfg,
                       Rng& rng) {
  check_render_config(cfg);
  if (!world.is_valid(state)) {
    throw InvalidStateError("render: invalid world state");
  }
  if (factors.viewpoint < 0 || factors.viewpoint >= cfg.views) {
    throw ConfigError("render: viewpoint out of range");
  }
  if (factors.jitter.size() != world.n_slots()) {
    throw DimensionMismatchError("render: jitter size != slot count");
  }
  if (params.mix_view.size() != static_cast<std::size_t>(cfg.views) ||
      params.mix_view[factors.viewpoint].rows() != cfg.dim ||
      params.mix_view[factors.viewpoint].cols() != world.n_slots()) {
    throw DimensionMismatchError("render: mixing matrices do not match config");
  }

  // Occupancy with per-object jitter; empty slots contribute exactly zero.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(world.n_slots());
  for (int s = 0; s < world.n_slots(); ++s) {
    if ((state.mask >> s) & 1u) x[s] = 1.0 + factors.jitter[s];
  }

  Eigen::VectorXd o = params.mix_view[factors.viewpoint] * x;
  for (int k = 0; k < cfg.distractors; ++k) {
    if ((factors.distractors >> k) & 1u) o += params.mix_distract.col(k);
  }
  o += factors.lighting * params.lighting_dir;
  for (int d = 0; d < cfg.dim; ++d) o[d] += rng.normal(0.0, cfg.sigma_noise);
  return o;
}

Dataset::Dataset(std::string world, RenderConfig render,
                 std::vector<DataTuple> tuples, std::vector<TupleInfo> info)
    : world_(std::move(world)),
      render_(render),
      tuples_(std::move(tuples)),
      info_(std::move(info)) {
  if (tuples_.size() != info_.size()) {
    throw DimensionMismatchError("dataset: tuple/sidecar length mismatch");
  }
}

const std::vector<TupleInfo>& Dataset::sidecar() const {
  ++sidecar_reads_;
  return info_;
}

Dataset generate_dataset(const worlds::WorldSpec& world,
                         const GenerateConfig& cfg, Rng& rng) {
  check_render_config(cfg.render);
  if (cfg.n_tuples < 1) throw EmptyInputError("generate: n_tuples must be >= 1");
  if (cfg.frac_action < 0.0 || cfg.frac_action > 1.0) {
    throw ConfigError("generate: frac_action outside [0, 1]");
  }

  const auto params = RenderParams::make(world, cfg.render);
  const auto states = world.enumerate_states();

  std::vector<DataTuple> tuples;
  std::vector<TupleInfo> info;
  tuples.reserve(cfg.n_tuples);
  info.reserve(cfg.n_tuples);

  for (int t = 0; t < cfg.n_tuples; ++t) {
    const auto s_i = states[rng.uniform_int(states.size())];
    DataTuple tup;
    TupleInfo ti;
    ti.state_i = s_i;
    if (rng.bernoulli(cfg.frac_action)) {
      const auto actions = world.legal_actions(s_i);
      const auto a = actions[rng.uniform_int(actions.size())];
      ti.state_j = world.apply_action(s_i, a);
      tup.similar = false;
    } else {
      ti.state_j = s_i;
      tup.similar = true;
    }
    ti.factors_i = sample_factors(world, cfg.render, rng);
    ti.factors_j = sample_factors(world, cfg.render, rng);
    tup.o_i = render(world, ti.state_i, ti.factors_i, params, cfg.render, rng);
    tup.o_j = render(world, ti.state_j, ti.factors_j, params, cfg.render, rng);
    tuples.push_back(std::move(tup));
    info.push_back(std::move(ti));
  }
  return Dataset(std::string(world.name()), cfg.render, std::move(tuples),
                 std::move(info));
}

Dataset augment(const Dataset& ds, int n, Rng& rng) {
  if (n < 0) throw ConfigError("augment: n must be >= 0");
  if (ds.size() == 0) throw EmptyInputError("augment: empty dataset");

  std::vector<DataTuple> tuples = ds.tuples();
  std::vector<TupleInfo> info = ds.sidecar();
  const std::size_t base = ds.size();

  for (std::size_t t = 0; t < base; ++t) {
    if (!tuples[t].similar || tuples[t].augmented) continue;
    for (int r = 0; r < n; ++r) {
      // Uniform draw over all 2 * base observations of the input dataset.
      const std::uint64_t q = rng.uniform_int(2 * base);
      const std::size_t src = q / 2;
      const bool side_j = (q % 2) == 1;
      DataTuple tup;
      tup.o_i = tuples[t].o_i;
      tup.o_j = side_j ? tuples[src].o_j : tuples[src].o_i;
      tup.similar = false;
      tup.augmented = true;
      TupleInfo ti;
      ti.state_i = info[t].state_i;
      ti.factors_i = info[t].factors_i;
      ti.state_j = side_j ? info[src].state_j : info[src].state_i;
      ti.factors_j = side_j ? info[src].factors_j : info[src].factors_i;
      tuples.push_back(std::move(tup));
      info.push_back(std::move(ti));
    }
  }
  return Dataset(ds.world(), ds.render_config(), std::move(tuples),
                 std::move(info));
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double frac,
                                          Rng& rng) {
  const std::size_t n = ds.size();
  if (n == 0) throw EmptyInputError("split: empty dataset");
  if (frac <= 0.0 || frac >= 1.0) {
    throw ConfigError("split: frac must lie strictly between 0 and 1");
  }
  const auto n_hold =
      static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  if (n_hold == 0 || n_hold == n) {
    throw ConfigError("split: fraction leaves one side empty");
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::vector<std::size_t> hold_idx(perm.begin(), perm.begin() + n_hold);
  std::vector<std::size_t> train_idx(perm.begin() + n_hold, perm.end());
  // Selection is random; within each side keep the original tuple order.
  std::sort(hold_idx.begin(), hold_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  const auto& tuples = ds.tuples();
  const auto& info = ds.sidecar();
  const auto take = [&](const std::vector<std::size_t>& idx) {
    std::vector<DataTuple> t;
    std::vector<TupleInfo> i;
    t.reserve(idx.size());
    i.reserve(idx.size());
    for (const auto k : idx) {
      t.push_back(tuples[k]);
      i.push_back(info[k]);
    }
    return Dataset(ds.world(), ds.render_config(), std::move(t), std::move(i));
  };
  return {take(train_idx), take(hold_idx)};
}

}  // namespace latentplan::synth
