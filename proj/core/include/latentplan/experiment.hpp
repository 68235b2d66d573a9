#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "latentplan/encoders.hpp"
#include "latentplan/metrics.hpp"
#include "latentplan/nn.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan::experiment {

// Everything one comparison run needs. The INI sections map onto the field
// groups below; every key is optional and falls back to these defaults.
struct ExperimentConfig {
  // [experiment]
  std::string world = "box_stacking";
  std::uint64_t seed = 0;
  // Encoder line-up: any of raw, pca, ae, bvae, pcae, pcvae, pcsia, cesia,
  // plus "oracle" for the ground-truth reference encoder.
  std::vector<std::string> models = {"raw",  "pca",   "ae",    "bvae",
                                     "pcae", "pcvae", "pcsia", "cesia"};
  // Random negatives appended per similar pair; each level is a variant
  // ("base" for 0, "augN" otherwise) trained and evaluated separately.
  std::vector<int> augment = {0};
  double holdout_frac = 0.2;
  double oracle_noise = 0.01;

  // [render]
  synth::RenderConfig render;

  // [data]
  int n_tuples = 2500;
  double frac_action = 0.5;

  // [train]
  nn::TrainConfig train;     // epochs applies to the reconstruction kinds
  int siamese_epochs = 100;  // pcsia / cesia converge much faster

  // [hyper]
  encoders::Hyper hyper;

  // [eval]
  metrics::EvalConfig eval;
};

// Strict INI reader: unknown sections or keys, malformed numbers, unknown
// model names or out-of-range values all throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
  std::vector<metrics::EvalReport> reports;  // one per model x variant
  // Fitted models aligned with reports; the oracle rows carry an unfitted
  // placeholder.
  std::vector<encoders::EncoderModel> models;
};

// The full pipeline: generate data, split a holdout, then for every
// augmentation level and model train (the sidecar must stay unread — this
// is asserted), evaluate on the roadmap pipeline and collect one report.
// Every stage draws from its own fork of the seed, so a config maps to
// exactly one result set. `log` (when given) receives one progress line per
// finished variant.
RunResult run_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(std::string_view)>& log = {});

// Results table as CSV (fixed column order, stable number formatting, one
// row per report).
std::string results_csv(const std::vector<metrics::EvalReport>& reports);
std::vector<metrics::EvalReport> parse_results_csv(const std::string& text);

// Markdown comparison table. The best entry per metric column is bolded:
// highest for the scores, closest to the world's true state / transition
// count for the node and edge columns.
std::string report_markdown(const std::vector<metrics::EvalReport>& reports);

// 2-D principal-component projection of the codes the encoder assigns to
// the non-augmented observations of ds, one CSV row per observation with
// its ground-truth state index. Codes with fewer than two dimensions keep
// their single coordinate and a zero second column.
std::string projection_csv(const encoders::PipelineEncoder& encoder,
                           const synth::Dataset& ds, Rng rng);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace latentplan::experiment
