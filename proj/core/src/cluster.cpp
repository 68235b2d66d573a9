#include "latentplan/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "latentplan/error.hpp"

namespace latentplan::cluster {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_of(double w) {
  if (w <= 0.0) return kLambdaCap;
  return std::min(1.0 / w, kLambdaCap);
}

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// One merge of the single-linkage dendrogram; node ids are 0..n-1 for the
// points and n+j for the j-th merge.
struct Merge {
  int left, right;
  double w;
  int size;
};

}  // namespace

HdbscanResult hdbscan(const Eigen::MatrixXd& points,
                      const HdbscanConfig& cfg) {
  const int n = static_cast<int>(points.cols());
  if (n == 0) throw EmptyInputError("hdbscan: no points");
  if (cfg.min_cluster_size < 2) {
    throw ConfigError("hdbscan: min_cluster_size must be >= 2");
  }
  if (cfg.min_samples < 0) throw ConfigError("hdbscan: negative min_samples");
  const int m = cfg.min_cluster_size;
  const int k = std::min(cfg.min_samples == 0 ? m : cfg.min_samples, n - 1);

  HdbscanResult res;
  res.labels.assign(static_cast<std::size_t>(n), kNoise);
  res.core_distances.assign(static_cast<std::size_t>(n), 0.0);

  // Core distance: distance to the k-th nearest other point.
  std::vector<double> dists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (k == 0) break;  // n == 1
    std::size_t w = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) dists[w++] = (points.col(i) - points.col(j)).norm();
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1),
                     dists.begin() + static_cast<std::ptrdiff_t>(w));
    res.core_distances[static_cast<std::size_t>(i)] = dists[k - 1];
  }

  if (n < m) return res;  // too few points for any cluster

  // Minimum spanning tree of the mutual reachability graph
  // (max(core_a, core_b, d(a, b))) without materialising the n x n matrix.
  if (n > 1) {
    std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
    std::vector<double> best(static_cast<std::size_t>(n), kInf);
    std::vector<int> best_from(static_cast<std::size_t>(n), 0);
    in_tree[0] = 1;
    auto reach = [&](int a, int b) {
      return std::max({res.core_distances[static_cast<std::size_t>(a)],
                       res.core_distances[static_cast<std::size_t>(b)],
                       (points.col(a) - points.col(b)).norm()});
    };
    for (int j = 1; j < n; ++j) best[j] = reach(0, j);
    for (int step = 1; step < n; ++step) {
      int pick = -1;
      for (int j = 0; j < n; ++j) {
        if (!in_tree[j] && (pick < 0 || best[j] < best[pick])) pick = j;
      }
      const int a = std::min(pick, best_from[pick]);
      const int b = std::max(pick, best_from[pick]);
      res.mst.push_back({a, b, best[pick]});
      in_tree[pick] = 1;
      for (int j = 0; j < n; ++j) {
        if (in_tree[j]) continue;
        const double w = reach(pick, j);
        if (w < best[j]) {
          best[j] = w;
          best_from[j] = pick;
        }
      }
    }
    std::sort(res.mst.begin(), res.mst.end(),
              [](const MstEdge& x, const MstEdge& y) {
                if (x.w != y.w) return x.w < y.w;
                if (x.a != y.a) return x.a < y.a;
                return x.b < y.b;
              });
  }

  // Single-linkage dendrogram: replay the sorted MST edges through a
  // union-find, recording each merge.
  std::vector<Merge> merges;
  merges.reserve(res.mst.size());
  {
    UnionFind uf(n);
    std::vector<int> node_of_root(static_cast<std::size_t>(n));
    std::iota(node_of_root.begin(), node_of_root.end(), 0);
    auto size_of = [&](int node) {
      return node < n ? 1 : merges[static_cast<std::size_t>(node - n)].size;
    };
    for (const auto& e : res.mst) {
      const int ra = uf.find(e.a), rb = uf.find(e.b);
      const int na = node_of_root[static_cast<std::size_t>(ra)];
      const int nb = node_of_root[static_cast<std::size_t>(rb)];
      merges.push_back({na, nb, e.w, size_of(na) + size_of(nb)});
      uf.unite(ra, rb);
      node_of_root[static_cast<std::size_t>(uf.find(ra))] =
          n + static_cast<int>(merges.size()) - 1;
    }
  }
  const auto subtree_size = [&](int node) {
    return node < n ? 1 : merges[static_cast<std::size_t>(node - n)].size;
  };
  const auto collect_points = [&](int node, std::vector<int>* out) {
    std::vector<int> stack{node};
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      if (cur < n) {
        out->push_back(cur);
      } else {
        const auto& mg = merges[static_cast<std::size_t>(cur - n)];
        stack.push_back(mg.left);
        stack.push_back(mg.right);
      }
    }
  };

  // Condense: walk the dendrogram from the top; a split survives only when
  // both sides hold at least m points, otherwise the small side's points
  // fall out of the current condensed node at the split's density level.
  res.tree.push_back(CondensedNode{});
  res.tree[0].size = n;
  std::vector<std::pair<int, int>> work;  // (dendrogram node, condensed id)
  work.emplace_back(n + static_cast<int>(merges.size()) - 1, 0);
  std::vector<int> dropped;
  while (!work.empty()) {
    const auto [node, cid] = work.back();
    work.pop_back();
    const auto& mg = merges[static_cast<std::size_t>(node - n)];
    const double lambda = level_of(mg.w);
    const int sl = subtree_size(mg.left);
    const int sr = subtree_size(mg.right);
    if (sl >= m && sr >= m) {
      for (const int child : {mg.left, mg.right}) {
        CondensedNode cn;
        cn.parent = cid;
        cn.lambda_birth = lambda;
        cn.size = subtree_size(child);
        res.tree.push_back(std::move(cn));
        const int new_id = static_cast<int>(res.tree.size()) - 1;
        res.tree[static_cast<std::size_t>(cid)].children.push_back(new_id);
        if (child >= n) {
          work.emplace_back(child, new_id);
        }  // a leaf child would mean m <= 1, excluded by the config check
      }
    } else {
      for (const int child : {mg.left, mg.right}) {
        if (subtree_size(child) < m) {
          dropped.clear();
          collect_points(child, &dropped);
          auto& pts = res.tree[static_cast<std::size_t>(cid)].points;
          for (const int p : dropped) pts.emplace_back(p, lambda);
        } else if (child >= n) {
          work.emplace_back(child, cid);
        }
      }
    }
  }

  // Stability: what every point (and, at the final split, every surviving
  // child) contributes above the node's birth level.
  for (auto& node : res.tree) {
    double s = 0.0;
    for (const auto& [p, lambda] : node.points) s += lambda - node.lambda_birth;
    for (const int c : node.children) {
      const auto& child = res.tree[static_cast<std::size_t>(c)];
      s += child.size * (child.lambda_birth - node.lambda_birth);
    }
    node.stability = s;
  }

  // Excess-of-mass selection, children before parents (ids are in creation
  // order, so a reverse scan is bottom-up). A parent replaces its children
  // only when strictly more stable; the root wins only when it never split.
  const auto n_nodes = res.tree.size();
  std::vector<double> propagated(n_nodes, 0.0);
  for (std::size_t i = n_nodes; i-- > 1;) {
    auto& node = res.tree[i];
    if (node.children.empty()) {
      node.selected = true;
      propagated[i] = node.stability;
    } else {
      double child_sum = 0.0;
      for (const int c : node.children) {
        child_sum += propagated[static_cast<std::size_t>(c)];
      }
      if (node.stability > child_sum) {
        node.selected = true;
        propagated[i] = node.stability;
      } else {
        propagated[i] = child_sum;
      }
    }
  }
  res.tree[0].selected = res.tree[0].children.empty();
  std::vector<char> covered(n_nodes, 0);
  for (std::size_t i = 1; i < n_nodes; ++i) {
    const auto parent = static_cast<std::size_t>(res.tree[i].parent);
    covered[i] =
        covered[parent] || (res.tree[parent].selected ? 1 : 0);
    if (covered[i]) res.tree[i].selected = false;
  }

  // Labels: a point belongs to the first selected node on the upward path
  // from where it fell out; cluster ids follow node creation order.
  std::vector<int> cluster_of(n_nodes, kNoise);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (res.tree[i].selected) cluster_of[i] = res.n_clusters++;
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    int at = static_cast<int>(i);
    while (at != -1 && !res.tree[static_cast<std::size_t>(at)].selected) {
      at = res.tree[static_cast<std::size_t>(at)].parent;
    }
    if (at == -1) continue;
    const int label = cluster_of[static_cast<std::size_t>(at)];
    for (const auto& [p, lambda] : res.tree[i].points) {
      res.labels[static_cast<std::size_t>(p)] = label;
    }
  }
  return res;
}

}  // namespace latentplan::cluster
