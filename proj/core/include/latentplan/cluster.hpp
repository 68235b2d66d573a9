#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace latentplan::cluster {

// Label of points that belong to no cluster.
inline constexpr int kNoise = -1;

// Cap applied to the density level 1/w so that zero-weight merges (duplicate
// points) stay finite in the stability arithmetic.
inline constexpr double kLambdaCap = 1e300;

struct HdbscanConfig {
  // Smallest subtree that survives condensation as a cluster; must be >= 2.
  int min_cluster_size = 5;
  // k of the core-distance kNN, clamped to n - 1; 0 means "use
  // min_cluster_size".
  int min_samples = 0;
};

// One mutual-reachability MST edge, canonicalised to a < b.
struct MstEdge {
  int a = 0, b = 0;
  double w = 0.0;
};

// A node of the condensed cluster tree. Nodes have exactly zero or two
// children; points leaving the node between its birth and its split are
// stored with the density level at which they left.
struct CondensedNode {
  int parent = -1;  // -1 for the root
  double lambda_birth = 0.0;
  int size = 0;  // points in the subtree
  double stability = 0.0;
  bool selected = false;
  std::vector<int> children;
  std::vector<std::pair<int, double>> points;  // (point id, fall-out lambda)
};

struct HdbscanResult {
  std::vector<int> labels;  // per point; kNoise or [0, n_clusters)
  int n_clusters = 0;
  std::vector<double> core_distances;
  std::vector<MstEdge> mst;          // sorted by (w, a, b)
  std::vector<CondensedNode> tree;   // [0] is the root; children after parents
};

// Density-based hierarchical clustering of the columns of `points`:
// core distances from the kNN, a minimum spanning tree of the mutual
// reachability graph, single-linkage condensation, and stability-based
// cluster extraction. Fewer than min_cluster_size points is all noise; a
// hierarchy that never splits into two viable subtrees is one cluster.
// Deterministic: ties are broken by index order everywhere.
HdbscanResult hdbscan(const Eigen::MatrixXd& points,
                      const HdbscanConfig& cfg = {});

}  // namespace latentplan::cluster
