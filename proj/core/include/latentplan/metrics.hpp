#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "latentplan/cluster.hpp"
#include "latentplan/encoders.hpp"
#include "latentplan/lsr.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan::metrics {

// Entropy-based clustering scores against ground-truth classes.
// homogeneity is 1 when every cluster holds a single class, completeness is
// 1 when every class lands in a single cluster. Both are defined as 1 on
// the degenerate side (zero class / cluster entropy).
struct HcScores {
  double homogeneity = 0.0;
  double completeness = 0.0;
};
HcScores homogeneity_completeness(const std::vector<int>& truth,
                                  const std::vector<int>& pred);

// Per-sample silhouette coefficient (b - a) / max(a, b) over Euclidean
// distances, where a is the mean distance to the own cluster and b the
// smallest mean distance to another cluster. x holds one column per sample;
// labels must be contiguous cluster ids from 0 (filter noise first).
// Members of singleton clusters score 0. Throws DegenerateDataError with
// fewer than two clusters.
Eigen::VectorXd silhouette_samples(const Eigen::MatrixXd& x,
                                   const std::vector<int>& labels);
double silhouette_mean(const Eigen::MatrixXd& x,
                       const std::vector<int>& labels);

// Most frequent ground-truth state among each node's member observations
// (ties pick the smallest state mask, i.e. the earliest in enumeration
// order). Observation id q refers to tuple q / 2, side q % 2 of ds.
std::vector<worlds::WorldState> majority_states(const lsr::Roadmap& rm,
                                                const synth::Dataset& ds);

// Fraction of roadmap edges whose endpoint majority states are one legal
// action apart; 0 when the roadmap has no edges.
double edge_correctness(const lsr::Roadmap& rm,
                        const std::vector<worlds::WorldState>& majority,
                        const worlds::WorldSpec& world);

// A node path counts as correct for a (start, goal) query when its first
// and last nodes represent the true start and goal states and every hop is
// a legal action. A single-node path is correct iff start == goal == the
// node's state.
bool path_is_correct(const worlds::WorldSpec& world,
                     const std::vector<worlds::WorldState>& majority,
                     const std::vector<int>& path, worlds::WorldState s_start,
                     worlds::WorldState s_goal);

// Repeated random planning queries: each trial draws a start and a goal
// observation from the holdout set, encodes both, plans between the nearest
// roadmap nodes and grades every returned path. pct_all counts trials where
// at least one path came back and all of them were correct, pct_any trials
// where at least one path was correct; both are percentages of n_trials.
struct TrialStats {
  double pct_all = 0.0;
  double pct_any = 0.0;
};
TrialStats path_trials(const worlds::WorldSpec& world, const lsr::Roadmap& rm,
                       const std::vector<worlds::WorldState>& majority,
                       const synth::Dataset& holdout,
                       const encoders::PipelineEncoder& encoder, int n_trials,
                       int max_paths, Rng& rng);

struct EvalConfig {
  cluster::HdbscanConfig cluster;
  int n_trials = 1000;
  int max_paths = 100;
};

// One row of the final comparison table. model / variant / seed are
// bookkeeping for the caller; everything else is measured.
struct EvalReport {
  std::string model;
  std::string variant;
  std::string world;
  std::uint64_t seed = 0;

  int n_nodes = 0;
  int n_edges = 0;
  double h_c = 0.0;       // cluster homogeneity
  double c_c = 0.0;       // cluster completeness
  double s_c = 0.0;       // mean silhouette (0 when undefined)
  bool s_c_defined = false;
  double c_e = 0.0;       // edge correctness
  double pct_all = 0.0;   // trials where every shortest path was correct
  double pct_any = 0.0;   // trials where some shortest path was correct
  double noise_frac = 0.0;
};

// Full evaluation of one encoder: encodes the non-augmented observations of
// train_ds (the oracle reads the ground-truth state, fitted models the raw
// observation), clusters the codes, builds the roadmap and scores it, then
// runs planning trials against holdout_ds. When clustering labels everything
// as noise the report is all zeros with noise_frac 1. The rng is taken by
// value; encoding and trials use independent forks of it.
EvalReport evaluate(const worlds::WorldSpec& world,
                    const synth::Dataset& train_ds,
                    const synth::Dataset& holdout_ds,
                    const encoders::PipelineEncoder& encoder,
                    const EvalConfig& cfg, Rng rng);

}  // namespace latentplan::metrics
