#include "latentplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "latentplan/error.hpp"

namespace latentplan::metrics {
namespace {

// Sum over a contingency map of -(n/total) * log(n/denom(key)).
template <typename Map, typename Denom>
double entropy_sum(const Map& counts, double total, Denom denom) {
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    if (n <= 0) continue;
    const double p = static_cast<double>(n) / total;
    h -= p * std::log(static_cast<double>(n) / denom(key));
  }
  return h;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

HcScores homogeneity_completeness(const std::vector<int>& truth,
                                  const std::vector<int>& pred) {
  if (truth.size() != pred.size())
    throw DimensionMismatchError("label vectors differ in length");
  if (truth.empty()) throw EmptyInputError("no labelled samples");

  std::map<int, int> n_class, n_cluster;
  std::map<std::pair<int, int>, int> n_joint;  // (class, cluster)
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++n_class[truth[i]];
    ++n_cluster[pred[i]];
    ++n_joint[{truth[i], pred[i]}];
  }
  const double n = static_cast<double>(truth.size());

  const double h_class =
      entropy_sum(n_class, n, [&](int) { return n; });
  const double h_cluster =
      entropy_sum(n_cluster, n, [&](int) { return n; });
  // H(class | cluster) and H(cluster | class) from the same joint counts.
  const double h_class_given = entropy_sum(
      n_joint, n,
      [&](const std::pair<int, int>& k) { return double(n_cluster[k.second]); });
  const double h_cluster_given = entropy_sum(
      n_joint, n,
      [&](const std::pair<int, int>& k) { return double(n_class[k.first]); });

  HcScores s;
  s.homogeneity = h_class <= 0.0 ? 1.0 : clamp01(1.0 - h_class_given / h_class);
  s.completeness =
      h_cluster <= 0.0 ? 1.0 : clamp01(1.0 - h_cluster_given / h_cluster);
  return s;
}

Eigen::VectorXd silhouette_samples(const Eigen::MatrixXd& x,
                                   const std::vector<int>& labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw EmptyInputError("no samples");
  if (static_cast<std::size_t>(x.cols()) != n)
    throw DimensionMismatchError("one label per column expected");

  int n_clusters = 0;
  for (const int l : labels) {
    if (l < 0) throw ConfigError("labels must be non-negative (drop noise first)");
    n_clusters = std::max(n_clusters, l + 1);
  }
  std::vector<int> count(n_clusters, 0);
  for (const int l : labels) ++count[l];
  for (int k = 0; k < n_clusters; ++k)
    if (count[k] == 0) throw ConfigError("cluster ids must be contiguous from 0");
  if (n_clusters < 2)
    throw DegenerateDataError("silhouette needs at least two clusters");

  Eigen::VectorXd s(n);
  std::vector<double> dist_sum(n_clusters);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dist_sum[labels[j]] += (x.col(i) - x.col(j)).norm();

    const int own = labels[i];
    if (count[own] == 1) {  // singleton clusters score 0 by convention
      s[i] = 0.0;
      continue;
    }
    const double a = dist_sum[own] / (count[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_clusters; ++k)
      if (k != own) b = std::min(b, dist_sum[k] / count[k]);
    const double denom = std::max(a, b);
    s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return s;
}

double silhouette_mean(const Eigen::MatrixXd& x,
                       const std::vector<int>& labels) {
  return silhouette_samples(x, labels).mean();
}

std::vector<worlds::WorldState> majority_states(const lsr::Roadmap& rm,
                                                const synth::Dataset& ds) {
  const auto& info = ds.sidecar();
  std::vector<worlds::WorldState> out;
  out.reserve(rm.nodes.size());
  for (const auto& node : rm.nodes) {
    if (node.members.empty()) throw ConfigError("roadmap node without members");
    std::map<std::uint32_t, int> votes;  // ascending mask = enumeration order
    for (const std::size_t q : node.members) {
      const std::size_t t = q / 2;
      if (t >= info.size()) throw ConfigError("member observation out of range");
      const worlds::WorldState st =
          (q % 2 == 0) ? info[t].state_i : info[t].state_j;
      ++votes[st.mask];
    }
    std::uint32_t best = votes.begin()->first;
    int best_n = votes.begin()->second;
    for (const auto& [mask, cnt] : votes)
      if (cnt > best_n) best = mask, best_n = cnt;  // ties keep the lowest mask
    out.push_back(worlds::WorldState{best});
  }
  return out;
}

double edge_correctness(const lsr::Roadmap& rm,
                        const std::vector<worlds::WorldState>& majority,
                        const worlds::WorldSpec& world) {
  if (majority.size() != rm.nodes.size())
    throw DimensionMismatchError("one majority state per node expected");
  if (rm.edges.empty()) return 0.0;
  int legal = 0;
  for (const auto& e : rm.edges)
    if (world.is_legal_transition(majority[e.a], majority[e.b])) ++legal;
  return static_cast<double>(legal) / static_cast<double>(rm.edges.size());
}

bool path_is_correct(const worlds::WorldSpec& world,
                     const std::vector<worlds::WorldState>& majority,
                     const std::vector<int>& path, worlds::WorldState s_start,
                     worlds::WorldState s_goal) {
  if (path.empty()) return false;
  for (const int v : path)
    if (v < 0 || static_cast<std::size_t>(v) >= majority.size())
      throw ConfigError("path refers to an unknown node");
  if (majority[path.front()] != s_start) return false;
  if (majority[path.back()] != s_goal) return false;
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!world.is_legal_transition(majority[path[i - 1]], majority[path[i]]))
      return false;
  return true;
}

TrialStats path_trials(const worlds::WorldSpec& world, const lsr::Roadmap& rm,
                       const std::vector<worlds::WorldState>& majority,
                       const synth::Dataset& holdout,
                       const encoders::PipelineEncoder& encoder, int n_trials,
                       int max_paths, Rng& rng) {
  if (n_trials < 1) throw ConfigError("n_trials must be positive");
  if (max_paths < 1) throw ConfigError("max_paths must be positive");
  if (holdout.size() == 0) throw EmptyInputError("empty holdout set");
  if (majority.size() != rm.nodes.size())
    throw DimensionMismatchError("one majority state per node expected");

  const auto& tuples = holdout.tuples();
  const auto& info = holdout.sidecar();
  const std::uint64_t n_obs = 2 * holdout.size();
  const auto pick = [&](std::size_t q, const Eigen::VectorXd*& obs,
                        worlds::WorldState& st) {
    const std::size_t t = q / 2;
    obs = (q % 2 == 0) ? &tuples[t].o_i : &tuples[t].o_j;
    st = (q % 2 == 0) ? info[t].state_i : info[t].state_j;
  };

  int n_any = 0, n_all = 0;
  for (int trial = 0; trial < n_trials; ++trial) {
    const Eigen::VectorXd* obs_s = nullptr;
    const Eigen::VectorXd* obs_g = nullptr;
    worlds::WorldState st_s, st_g;
    pick(rng.uniform_int(n_obs), obs_s, st_s);
    pick(rng.uniform_int(n_obs), obs_g, st_g);

    const Eigen::VectorXd z_s = encoder.encode_obs(*obs_s, st_s, rng);
    const Eigen::VectorXd z_g = encoder.encode_obs(*obs_g, st_g, rng);
    const lsr::PlanResult pr = lsr::plan(rm, z_s, z_g, max_paths);

    bool any = false, all = !pr.paths.empty();
    for (const auto& path : pr.paths) {
      const bool ok = path_is_correct(world, majority, path, st_s, st_g);
      any = any || ok;
      all = all && ok;
    }
    if (any) ++n_any;
    if (all) ++n_all;
  }
  TrialStats out;
  out.pct_any = 100.0 * n_any / n_trials;
  out.pct_all = 100.0 * n_all / n_trials;
  return out;
}

EvalReport evaluate(const worlds::WorldSpec& world,
                    const synth::Dataset& train_ds,
                    const synth::Dataset& holdout_ds,
                    const encoders::PipelineEncoder& encoder,
                    const EvalConfig& cfg, Rng rng) {
  if (train_ds.world() != world.name() || holdout_ds.world() != world.name())
    throw ConfigError("dataset world does not match the given world");
  if (cfg.n_trials < 1) throw ConfigError("n_trials must be positive");

  EvalReport rep;
  rep.world = train_ds.world();

  // Encode both sides of every non-augmented tuple; augmented copies carry
  // no new observations and stay out of the graph.
  std::vector<std::size_t> na;
  const auto& tuples = train_ds.tuples();
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (!tuples[t].augmented) na.push_back(t);
  if (na.empty()) throw EmptyInputError("no non-augmented tuples to cluster");

  const auto& info = train_ds.sidecar();
  const int z_dim = encoder.z_dim();
  const std::size_t m = 2 * na.size();
  Eigen::MatrixXd latents(z_dim, m);
  std::vector<std::size_t> obs_ids(m);
  std::vector<worlds::WorldState> states(m);
  Rng enc_rng = rng.fork("eval-encode");
  for (std::size_t k = 0; k < na.size(); ++k) {
    const std::size_t t = na[k];
    const Eigen::VectorXd z_i =
        encoder.encode_obs(tuples[t].o_i, info[t].state_i, enc_rng);
    const Eigen::VectorXd z_j =
        encoder.encode_obs(tuples[t].o_j, info[t].state_j, enc_rng);
    if (z_i.size() != z_dim || z_j.size() != z_dim)
      throw DimensionMismatchError("encoder returned an unexpected code size");
    latents.col(2 * k) = z_i;
    latents.col(2 * k + 1) = z_j;
    obs_ids[2 * k] = 2 * t;
    obs_ids[2 * k + 1] = 2 * t + 1;
    states[2 * k] = info[t].state_i;
    states[2 * k + 1] = info[t].state_j;
  }

  const cluster::HdbscanResult hc = cluster::hdbscan(latents, cfg.cluster);
  std::size_t n_noise = 0;
  for (const int l : hc.labels)
    if (l == cluster::kNoise) ++n_noise;
  rep.noise_frac = static_cast<double>(n_noise) / static_cast<double>(m);
  if (hc.n_clusters == 0) return rep;  // nothing to score

  const lsr::Roadmap rm =
      lsr::build_roadmap(latents, hc.labels, obs_ids, tuples);
  rep.n_nodes = static_cast<int>(rm.nodes.size());
  rep.n_edges = static_cast<int>(rm.edges.size());

  // Clustering scores over the points that received a cluster.
  std::vector<int> truth, pred;
  Eigen::MatrixXd kept(z_dim, m - n_noise);
  std::size_t w = 0;
  for (std::size_t q = 0; q < m; ++q) {
    if (hc.labels[q] == cluster::kNoise) continue;
    truth.push_back(world.state_index(states[q]));
    pred.push_back(hc.labels[q]);
    kept.col(w++) = latents.col(q);
  }
  const HcScores hcs = homogeneity_completeness(truth, pred);
  rep.h_c = hcs.homogeneity;
  rep.c_c = hcs.completeness;
  try {
    rep.s_c = silhouette_mean(kept, pred);
    rep.s_c_defined = true;
  } catch (const DegenerateDataError&) {
    rep.s_c = 0.0;  // a single cluster has no silhouette
    rep.s_c_defined = false;
  }

  const std::vector<worlds::WorldState> majority = majority_states(rm, train_ds);
  rep.c_e = edge_correctness(rm, majority, world);

  Rng trial_rng = rng.fork("eval-trials");
  const TrialStats ts = path_trials(world, rm, majority, holdout_ds, encoder,
                                    cfg.n_trials, cfg.max_paths, trial_rng);
  rep.pct_all = ts.pct_all;
  rep.pct_any = ts.pct_any;
  return rep;
}

}  // namespace latentplan::metrics
