#include "latentplan/lsr.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "latentplan/cluster.hpp"
#include "latentplan/error.hpp"

namespace latentplan::lsr {

Roadmap build_roadmap(const Eigen::MatrixXd& latents,
                      const std::vector<int>& labels,
                      const std::vector<std::size_t>& obs_ids,
                      const std::vector<synth::DataTuple>& tuples) {
  const auto m = static_cast<std::size_t>(latents.cols());
  if (m == 0) throw EmptyInputError("roadmap: no latent codes");
  if (labels.size() != m || obs_ids.size() != m) {
    throw DimensionMismatchError("roadmap: labels/obs_ids do not match codes");
  }

  int n_clusters = 0;
  for (const int l : labels) {
    if (l < cluster::kNoise) throw ConfigError("roadmap: bad cluster label");
    n_clusters = std::max(n_clusters, l + 1);
  }
  if (n_clusters == 0) throw NoClustersError("roadmap: every code is noise");

  Roadmap rm;
  rm.nodes.resize(static_cast<std::size_t>(n_clusters));
  for (auto& node : rm.nodes) {
    node.centroid = Eigen::VectorXd::Zero(latents.rows());
  }
  // Column of each global observation id, for edge extraction below.
  std::vector<std::ptrdiff_t> col_of(2 * tuples.size(), -1);
  for (std::size_t c = 0; c < m; ++c) {
    if (obs_ids[c] >= col_of.size()) {
      throw ConfigError("roadmap: observation id out of range");
    }
    if (col_of[obs_ids[c]] != -1) {
      throw ConfigError("roadmap: duplicate observation id");
    }
    col_of[obs_ids[c]] = static_cast<std::ptrdiff_t>(c);
    const int l = labels[c];
    if (l == cluster::kNoise) continue;
    auto& node = rm.nodes[static_cast<std::size_t>(l)];
    node.centroid += latents.col(static_cast<Eigen::Index>(c));
    node.members.push_back(obs_ids[c]);
  }
  for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
    if (rm.nodes[i].members.empty()) {
      throw ConfigError("roadmap: cluster ids must be contiguous");
    }
    rm.nodes[i].centroid /= static_cast<double>(rm.nodes[i].members.size());
  }

  // Edges: one per cluster pair linked by at least one non-augmented action
  // pair whose two observations both landed in clusters.
  std::map<std::pair<int, int>, int> support;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& tup = tuples[t];
    if (tup.similar || tup.augmented) continue;
    const std::ptrdiff_t ci = col_of[2 * t];
    const std::ptrdiff_t cj = col_of[2 * t + 1];
    if (ci < 0 || cj < 0) continue;  // side not clustered
    const int li = labels[static_cast<std::size_t>(ci)];
    const int lj = labels[static_cast<std::size_t>(cj)];
    if (li == cluster::kNoise || lj == cluster::kNoise || li == lj) continue;
    ++support[{std::min(li, lj), std::max(li, lj)}];
  }
  rm.neighbours.resize(rm.nodes.size());
  for (const auto& [key, count] : support) {
    rm.edges.push_back({key.first, key.second, count});
    rm.neighbours[static_cast<std::size_t>(key.first)].push_back(key.second);
    rm.neighbours[static_cast<std::size_t>(key.second)].push_back(key.first);
  }
  for (auto& adj : rm.neighbours) std::sort(adj.begin(), adj.end());
  return rm;
}

int nearest_node(const Roadmap& rm, const Eigen::VectorXd& z) {
  if (rm.nodes.empty()) throw EmptyRoadmapError("nearest_node: no nodes");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
    if (rm.nodes[i].centroid.size() != z.size()) {
      throw DimensionMismatchError("nearest_node: latent dim mismatch");
    }
    const double d = (rm.nodes[i].centroid - z).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<std::vector<int>> shortest_paths(const Roadmap& rm, int from,
                                             int to, int max_paths) {
  const int n = static_cast<int>(rm.nodes.size());
  if (n == 0) throw EmptyRoadmapError("shortest_paths: no nodes");
  if (from < 0 || from >= n || to < 0 || to >= n) {
    throw ConfigError("shortest_paths: node id out of range");
  }
  if (max_paths < 1) throw ConfigError("shortest_paths: max_paths < 1");

  // Breadth-first distances from the start.
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const int v : rm.neighbours[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] == -1) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  std::vector<std::vector<int>> paths;
  if (dist[static_cast<std::size_t>(to)] == -1) return paths;

  // Walk the BFS DAG; sorted adjacency makes the enumeration lexicographic.
  std::vector<int> cur{from};
  const std::function<void(int)> walk = [&](int u) {
    if (static_cast<int>(paths.size()) >= max_paths) return;
    if (u == to) {
      paths.push_back(cur);
      return;
    }
    for (const int v : rm.neighbours[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] !=
          dist[static_cast<std::size_t>(u)] + 1) {
        continue;
      }
      if (dist[static_cast<std::size_t>(v)] >
          dist[static_cast<std::size_t>(to)]) {
        continue;
      }
      cur.push_back(v);
      walk(v);
      cur.pop_back();
      if (static_cast<int>(paths.size()) >= max_paths) return;
    }
  };
  walk(from);
  return paths;
}

PlanResult plan(const Roadmap& rm, const Eigen::VectorXd& z_start,
                const Eigen::VectorXd& z_goal, int max_paths) {
  PlanResult res;
  res.start_node = nearest_node(rm, z_start);
  res.goal_node = nearest_node(rm, z_goal);
  res.paths = shortest_paths(rm, res.start_node, res.goal_node, max_paths);
  return res;
}

PlanResult plan(const Roadmap& rm, const encoders::EncoderModel& model,
                const Eigen::VectorXd& obs_start,
                const Eigen::VectorXd& obs_goal, int max_paths) {
  return plan(rm, encoders::encode(model, obs_start),
              encoders::encode(model, obs_goal), max_paths);
}

}  // namespace latentplan::lsr
