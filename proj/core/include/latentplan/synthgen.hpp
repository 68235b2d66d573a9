#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "latentplan/rng.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan::synth {

// Knobs of the observation model. An observation is a D-dimensional vector
//
//   o = M_view[v] * x + M_distract * d + lighting * w + eps
//
// where x is the slot occupancy perturbed by per-object jitter, v a discrete
// viewpoint choosing one of several random mixing matrices, d a random
// on/off pattern over distractor channels, and eps i.i.d. sensor noise.
// All mixing matrices are derived deterministically from mix_seed, so two
// datasets with the same config share the same "cameras".
struct RenderConfig {
  int dim = 64;             // observation dimensionality D
  int views = 2;            // number of viewpoint mixing matrices
  int distractors = 5;      // number of distractor channels
  double p_distractor = 0.8;  // probability each channel is present
  double sigma_jitter = 0.17;  // per-object positional jitter (clamped at 3 sigma)
  double sigma_noise = 0.05;   // additive i.i.d. observation noise
  std::uint64_t mix_seed = 0;  // seed for the mixing matrices

  friend bool operator==(const RenderConfig&, const RenderConfig&) = default;
};

// One concrete draw of everything that varies between two renders of the
// same world state.
struct NuisanceFactors {
  int viewpoint = 0;
  std::uint32_t distractors = 0;  // bitmask over distractor channels
  double lighting = 0.0;          // uniform [0, 1] intensity
  Eigen::VectorXd jitter;         // one entry per slot, used on occupied slots
};

// The deterministic part of the renderer: mixing matrices with unit-norm
// columns so that every slot / distractor / lighting direction contributes
// at comparable scale.
struct RenderParams {
  std::vector<Eigen::MatrixXd> mix_view;  // views matrices, dim x n_slots
  Eigen::MatrixXd mix_distract;           // dim x distractors
  Eigen::VectorXd lighting_dir;           // dim

  static RenderParams make(const worlds::WorldSpec& world,
                           const RenderConfig& cfg);
};

NuisanceFactors sample_factors(const worlds::WorldSpec& world,
                               const RenderConfig& cfg, Rng& rng);

// Renders one observation; rng supplies only the additive noise draw.
Eigen::VectorXd render(const worlds::WorldSpec& world, worlds::WorldState state,
                       const NuisanceFactors& factors,
                       const RenderParams& params, const RenderConfig& cfg,
                       Rng& rng);

// A training example: two observations plus the similarity flag. similar
// means both show the same world state; otherwise the pair is either one
// action apart (generation) or a random negative (augmentation).
struct DataTuple {
  Eigen::VectorXd o_i, o_j;
  bool similar = false;
  bool augmented = false;
};

// Ground truth for one tuple. Kept in a sidecar, separate from the tuples,
// because no training code may look at it; reads are counted so a pipeline
// can assert that training left the sidecar untouched.
struct TupleInfo {
  worlds::WorldState state_i, state_j;
  NuisanceFactors factors_i, factors_j;
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string world, RenderConfig render, std::vector<DataTuple> tuples,
          std::vector<TupleInfo> info);

  const std::string& world() const { return world_; }
  const RenderConfig& render_config() const { return render_; }
  std::size_t size() const { return tuples_.size(); }
  const std::vector<DataTuple>& tuples() const { return tuples_; }

  // Ground-truth access; every call is counted (see sidecar_reads).
  const std::vector<TupleInfo>& sidecar() const;
  std::uint64_t sidecar_reads() const { return sidecar_reads_; }

 private:
  std::string world_;
  RenderConfig render_;
  std::vector<DataTuple> tuples_;
  std::vector<TupleInfo> info_;
  mutable std::uint64_t sidecar_reads_ = 0;
};

struct GenerateConfig {
  RenderConfig render;
  int n_tuples = 2500;
  // Probability that a tuple is an action pair (one move apart, s=0)
  // instead of a similar pair (same state re-rendered, s=1).
  double frac_action = 0.5;
};

Dataset generate_dataset(const worlds::WorldSpec& world,
                         const GenerateConfig& cfg, Rng& rng);

// For every non-augmented similar pair, appends n extra dissimilar tuples
// (o_i, o_k, s=0) with o_k drawn uniformly from all observations of ds.
// The copies are flagged augmented so graph construction can skip them.
Dataset augment(const Dataset& ds, int n, Rng& rng);

// Random split into (train, holdout); the holdout gets round(frac * size)
// tuples. Both halves keep their sidecars aligned.
std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double frac,
                                          Rng& rng);

// Binary round trip. The data file holds only what a model may see; the
// sidecar file holds the ground truth.
void save_dataset(const Dataset& ds, const std::string& data_path,
                  const std::string& sidecar_path);
Dataset load_dataset(const std::string& data_path,
                     const std::string& sidecar_path);

// Flat CSV with one row per tuple (flags then both observations).
void export_dataset_csv(const Dataset& ds, const std::string& path);

}  // namespace latentplan::synth
