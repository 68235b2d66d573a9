#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "latentplan/encoders.hpp"
#include "latentplan/synthgen.hpp"

namespace latentplan::lsr {

// One roadmap node: a latent region found by clustering, represented by the
// centroid of its member codes. Members are global observation ids
// (tuple t, side s -> 2t + s).
struct RoadmapNode {
  Eigen::VectorXd centroid;
  std::vector<std::size_t> members;
};

// Undirected edge with the number of action pairs that support it.
struct RoadmapEdge {
  int a = 0, b = 0;  // a < b
  int support = 0;
};

struct Roadmap {
  std::vector<RoadmapNode> nodes;
  std::vector<RoadmapEdge> edges;             // sorted by (a, b)
  std::vector<std::vector<int>> neighbours;   // per node, ascending
};

// Builds the roadmap from clustered latent codes. `latents` holds one
// column per clustered observation, `labels` its cluster id (kNoise drops
// the observation), `obs_ids` its global observation id. Edges come from
// the non-augmented action pairs of `tuples` whose two sides both landed in
// (distinct) clusters. Cluster ids must be contiguous from 0.
Roadmap build_roadmap(const Eigen::MatrixXd& latents,
                      const std::vector<int>& labels,
                      const std::vector<std::size_t>& obs_ids,
                      const std::vector<synth::DataTuple>& tuples);

// Node whose centroid is closest (Euclidean) to z; ties pick the lowest id.
int nearest_node(const Roadmap& rm, const Eigen::VectorXd& z);

// Every shortest path from `from` to `to` (as node sequences, both ends
// included), in lexicographic node order, capped at max_paths. Empty when
// unreachable; {{from}} when from == to.
std::vector<std::vector<int>> shortest_paths(const Roadmap& rm, int from,
                                             int to, int max_paths = 100);

struct PlanResult {
  int start_node = -1, goal_node = -1;
  std::vector<std::vector<int>> paths;
};

// Maps both latent codes to their nearest nodes and enumerates the shortest
// node paths between them.
PlanResult plan(const Roadmap& rm, const Eigen::VectorXd& z_start,
                const Eigen::VectorXd& z_goal, int max_paths = 100);

// Convenience overload: encodes two raw observations with a fitted model.
PlanResult plan(const Roadmap& rm, const encoders::EncoderModel& model,
                const Eigen::VectorXd& obs_start,
                const Eigen::VectorXd& obs_goal, int max_paths = 100);

}  // namespace latentplan::lsr
