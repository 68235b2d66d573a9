// Command-line front end for the whole pipeline: synthesise datasets, fit
// encoders, build latent roadmaps, evaluate them and emit comparison tables.

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latentplan/cluster.hpp"
#include "latentplan/encoders.hpp"
#include "latentplan/error.hpp"
#include "latentplan/experiment.hpp"
#include "latentplan/lsr.hpp"
#include "latentplan/metrics.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace lp = latentplan;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::int64_t seed_override = -1;  // < 0 keeps the config's seed
};

lp::experiment::ExperimentConfig load_cfg(const CommonArgs& c) {
  lp::experiment::ExperimentConfig cfg =
      lp::experiment::load_config(c.config);
  if (c.seed_override >= 0)
    cfg.seed = static_cast<std::uint64_t>(c.seed_override);
  return cfg;
}

// The encoder an evaluation-style command works with: either a fitted model
// loaded from disk or the ground-truth oracle.
struct EncoderChoice {
  std::string model_path;
  bool oracle = false;

  void add_to(CLI::App& cmd) {
    auto* m = cmd.add_option("--model", model_path,
                             "fitted encoder file (from 'train')");
    auto* o = cmd.add_flag("--oracle", oracle,
                           "use the ground-truth reference encoder instead");
    m->excludes(o);
  }

  // `holder` keeps the loaded model alive for the encoder's lifetime.
  std::unique_ptr<lp::encoders::PipelineEncoder> make(
      const lp::experiment::ExperimentConfig& cfg,
      const lp::worlds::WorldSpec& world,
      lp::encoders::EncoderModel& holder) const {
    if (oracle) {
      return std::make_unique<lp::encoders::OracleBackedEncoder>(
          lp::encoders::OracleEncoder(world, cfg.hyper.z_dim,
                                      cfg.oracle_noise));
    }
    if (model_path.empty())
      throw lp::ConfigError("pass --model FILE or --oracle");
    holder = lp::encoders::load_model(model_path);
    return std::make_unique<lp::encoders::ModelEncoder>(holder);
  }

  std::string name(const lp::encoders::EncoderModel& holder) const {
    return oracle ? "oracle"
                  : std::string(lp::encoders::kind_name(holder.kind));
  }
};

// Codes for the non-augmented observations of ds, plus their global ids.
struct EncodedObservations {
  Eigen::MatrixXd latents;
  std::vector<std::size_t> obs_ids;
};

EncodedObservations encode_observations(
    const lp::synth::Dataset& ds, const lp::encoders::PipelineEncoder& enc,
    lp::Rng& rng) {
  const auto& tuples = ds.tuples();
  const auto& info = ds.sidecar();
  std::vector<std::size_t> na;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (!tuples[t].augmented) na.push_back(t);
  if (na.empty()) throw lp::EmptyInputError("dataset has no observations");

  EncodedObservations out;
  out.latents.resize(enc.z_dim(), 2 * na.size());
  out.obs_ids.resize(2 * na.size());
  for (std::size_t k = 0; k < na.size(); ++k) {
    const std::size_t t = na[k];
    out.latents.col(2 * k) = enc.encode_obs(tuples[t].o_i, info[t].state_i, rng);
    out.latents.col(2 * k + 1) =
        enc.encode_obs(tuples[t].o_j, info[t].state_j, rng);
    out.obs_ids[2 * k] = 2 * t;
    out.obs_ids[2 * k + 1] = 2 * t + 1;
  }
  return out;
}

int run_generate(const CommonArgs& common, const std::string& out,
                 const std::string& sidecar, const std::string& csv) {
  const auto cfg = load_cfg(common);
  const auto world = lp::worlds::WorldSpec::from_name(cfg.world);
  lp::synth::GenerateConfig gen;
  gen.render = cfg.render;
  gen.n_tuples = cfg.n_tuples;
  gen.frac_action = cfg.frac_action;
  lp::Rng rng = lp::Rng(cfg.seed).fork("generate");
  const lp::synth::Dataset ds = lp::synth::generate_dataset(world, gen, rng);
  lp::synth::save_dataset(ds, out, sidecar);
  if (!csv.empty()) lp::synth::export_dataset_csv(ds, csv);
  std::cout << "wrote " << out << " and " << sidecar << " (" << ds.size()
            << " tuples, dim " << cfg.render.dim << ", world " << cfg.world
            << ")\n";
  return 0;
}

int run_train(const CommonArgs& common, const std::string& data,
              const std::string& sidecar, const std::string& model_name,
              int aug_level, const std::string& out) {
  const auto cfg = load_cfg(common);
  const lp::encoders::ModelKind kind = lp::encoders::kind_from_name(model_name);
  lp::synth::Dataset ds = lp::synth::load_dataset(data, sidecar);
  const std::string variant =
      aug_level == 0 ? "base" : "aug" + std::to_string(aug_level);
  if (aug_level > 0) {
    lp::Rng arng = lp::Rng(cfg.seed).fork("augment-" + variant);
    ds = lp::synth::augment(ds, aug_level, arng);
  }

  lp::nn::TrainConfig tc = cfg.train;
  if (kind == lp::encoders::ModelKind::kPcSiamese ||
      kind == lp::encoders::ModelKind::kCeSiamese)
    tc.epochs = cfg.siamese_epochs;

  const std::uint64_t reads_before = ds.sidecar_reads();
  const lp::encoders::TrainResult tr = lp::encoders::train(
      kind, ds, tc, cfg.hyper,
      lp::Rng(cfg.seed).fork("train-" + model_name + "-" + variant));
  if (ds.sidecar_reads() != reads_before)
    throw lp::Error("training read the ground-truth sidecar");

  lp::encoders::save_model(tr.model, out);
  std::cout << "trained " << model_name << "/" << variant << " on "
            << ds.size() << " tuples";
  if (!tr.epoch_loss.empty())
    std::cout << "; final epoch loss " << tr.epoch_loss.back();
  if (tr.d_m_used > 0.0) std::cout << "; margin " << tr.d_m_used;
  std::cout << "; wrote " << out << "\n";
  return 0;
}

int run_build_lsr(const CommonArgs& common, const std::string& data,
                  const std::string& sidecar, const EncoderChoice& choice,
                  const std::string& out) {
  const auto cfg = load_cfg(common);
  const lp::synth::Dataset ds = lp::synth::load_dataset(data, sidecar);
  const auto world = lp::worlds::WorldSpec::from_name(ds.world());

  lp::encoders::EncoderModel holder;
  const auto enc = choice.make(cfg, world, holder);
  lp::Rng rng = lp::Rng(cfg.seed).fork("encode");
  const EncodedObservations eo = encode_observations(ds, *enc, rng);

  const lp::cluster::HdbscanResult hc =
      lp::cluster::hdbscan(eo.latents, cfg.eval.cluster);
  std::size_t noise = 0;
  for (const int l : hc.labels)
    if (l == lp::cluster::kNoise) ++noise;
  const double noise_frac =
      static_cast<double>(noise) / static_cast<double>(hc.labels.size());
  const lp::lsr::Roadmap rm =
      lp::lsr::build_roadmap(eo.latents, hc.labels, eo.obs_ids, ds.tuples());

  nlohmann::json j;
  j["world"] = ds.world();
  j["z_dim"] = enc->z_dim();
  j["noise_frac"] = noise_frac;
  j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
    nlohmann::json n;
    n["id"] = i;
    n["centroid"] = std::vector<double>(
        rm.nodes[i].centroid.data(),
        rm.nodes[i].centroid.data() + rm.nodes[i].centroid.size());
    n["members"] = rm.nodes[i].members;
    j["nodes"].push_back(std::move(n));
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : rm.edges)
    j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"support", e.support}});
  lp::experiment::write_text_file(out, j.dump(2) + "\n");

  std::cout << "roadmap: " << rm.nodes.size() << " nodes, " << rm.edges.size()
            << " edges, noise " << 100.0 * noise_frac << "%; wrote " << out
            << "\n";
  return 0;
}

int run_eval(const CommonArgs& common, const std::string& data,
             const std::string& sidecar, const std::string& holdout_data,
             const std::string& holdout_sidecar, const EncoderChoice& choice,
             int trials_override, const std::string& variant,
             const std::string& out) {
  auto cfg = load_cfg(common);
  if (trials_override > 0) cfg.eval.n_trials = trials_override;
  const lp::synth::Dataset train_ds = lp::synth::load_dataset(data, sidecar);
  const lp::synth::Dataset holdout_ds =
      lp::synth::load_dataset(holdout_data, holdout_sidecar);
  const auto world = lp::worlds::WorldSpec::from_name(train_ds.world());

  lp::encoders::EncoderModel holder;
  const auto enc = choice.make(cfg, world, holder);
  const std::string name = choice.name(holder);
  lp::metrics::EvalReport rep = lp::metrics::evaluate(
      world, train_ds, holdout_ds, *enc, cfg.eval,
      lp::Rng(cfg.seed).fork("eval-" + name + "-" + variant));
  rep.model = name;
  rep.variant = variant;
  rep.seed = cfg.seed;

  const std::string csv = lp::experiment::results_csv({rep});
  if (out.empty()) {
    std::cout << csv;
  } else {
    lp::experiment::write_text_file(out, csv);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_report(const std::string& in, const std::string& out) {
  std::ifstream src(in);
  if (!src) throw lp::IoError("cannot open results: " + in);
  std::stringstream buf;
  buf << src.rdbuf();
  const auto reports = lp::experiment::parse_results_csv(buf.str());
  lp::experiment::write_text_file(out,
                                  lp::experiment::report_markdown(reports));
  std::cout << "wrote " << out << " (" << reports.size() << " rows)\n";
  return 0;
}

int run_project(const CommonArgs& common, const std::string& data,
                const std::string& sidecar, const EncoderChoice& choice,
                const std::string& out) {
  const auto cfg = load_cfg(common);
  const lp::synth::Dataset ds = lp::synth::load_dataset(data, sidecar);
  const auto world = lp::worlds::WorldSpec::from_name(ds.world());
  lp::encoders::EncoderModel holder;
  const auto enc = choice.make(cfg, world, holder);
  const std::string csv = lp::experiment::projection_csv(
      *enc, ds, lp::Rng(cfg.seed).fork("project"));
  lp::experiment::write_text_file(out, csv);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_world_graph(const std::string& world_name, const std::string& out) {
  const auto world = lp::worlds::WorldSpec::from_name(world_name);
  std::ostringstream csv;
  csv << "a,b,a_mask,b_mask\n";
  const auto transitions = world.legal_transitions();
  for (const auto& t : transitions)
    csv << world.state_index(t.a) << ',' << world.state_index(t.b) << ','
        << t.a.mask << ',' << t.b.mask << "\n";
  lp::experiment::write_text_file(out, csv.str());
  std::cout << "wrote " << out << " (" << world.enumerate_states().size()
            << " states, " << transitions.size() << " transitions)\n";
  return 0;
}

int run_all(const CommonArgs& common, const std::string& out_dir,
            const std::string& models_override, int trials_override,
            bool save_models) {
  auto cfg = load_cfg(common);
  if (!models_override.empty()) {
    cfg.models.clear();
    std::istringstream in(models_override);
    std::string item;
    while (std::getline(in, item, ',')) {
      while (!item.empty() && item.front() == ' ') item.erase(item.begin());
      while (!item.empty() && item.back() == ' ') item.pop_back();
      if (!item.empty()) cfg.models.push_back(item);
    }
    if (cfg.models.empty()) throw lp::ConfigError("empty --models override");
  }
  if (trials_override > 0) cfg.eval.n_trials = trials_override;

  fs::create_directories(out_dir);
  const lp::experiment::RunResult res = lp::experiment::run_experiment(
      cfg, [](std::string_view s) { std::cout << s << "\n"; });

  const fs::path dir(out_dir);
  lp::experiment::write_text_file((dir / "results.csv").string(),
                                  lp::experiment::results_csv(res.reports));
  lp::experiment::write_text_file(
      (dir / "report.md").string(),
      lp::experiment::report_markdown(res.reports));
  if (save_models) {
    fs::create_directories(dir / "models");
    for (std::size_t i = 0; i < res.models.size(); ++i) {
      if (!res.models[i].fitted) continue;  // the oracle has no weights
      const std::string file = res.reports[i].model + "-" +
                               res.reports[i].variant + ".bin";
      lp::encoders::save_model(res.models[i],
                               (dir / "models" / file).string());
    }
  }
  std::cout << "wrote " << (dir / "results.csv").string() << " and "
            << (dir / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent space roadmap pipeline"};
  app.require_subcommand(1);

  CommonArgs common;
  int rc = 0;

  // generate
  auto* g = app.add_subcommand("generate", "synthesise a dataset");
  std::string g_out, g_sidecar, g_csv;
  g->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  g->add_option("--seed", common.seed_override, "override [experiment] seed");
  g->add_option("--out", g_out, "dataset file to write")->required();
  g->add_option("--sidecar", g_sidecar, "ground-truth file to write")
      ->required();
  g->add_option("--csv", g_csv, "optional flat CSV dump");
  g->callback([&] { rc = run_generate(common, g_out, g_sidecar, g_csv); });

  // train
  auto* t = app.add_subcommand("train", "fit one encoder on a dataset");
  std::string t_data, t_sidecar, t_model, t_out;
  int t_aug = 0;
  t->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  t->add_option("--seed", common.seed_override, "override [experiment] seed");
  t->add_option("--data", t_data, "dataset file")->required();
  t->add_option("--sidecar", t_sidecar, "ground-truth file")->required();
  t->add_option("--model", t_model,
                "encoder kind: raw|pca|ae|bvae|pcae|pcvae|pcsia|cesia")
      ->required();
  t->add_option("--augment", t_aug,
                "random negatives per similar pair before training");
  t->add_option("--out", t_out, "model file to write")->required();
  t->callback(
      [&] { rc = run_train(common, t_data, t_sidecar, t_model, t_aug, t_out); });

  // build-lsr
  auto* b = app.add_subcommand("build-lsr",
                               "cluster codes and export the roadmap");
  std::string b_data, b_sidecar, b_out;
  EncoderChoice b_enc;
  b->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  b->add_option("--seed", common.seed_override, "override [experiment] seed");
  b->add_option("--data", b_data, "dataset file")->required();
  b->add_option("--sidecar", b_sidecar, "ground-truth file")->required();
  b_enc.add_to(*b);
  b->add_option("--out", b_out, "roadmap JSON to write")->required();
  b->callback(
      [&] { rc = run_build_lsr(common, b_data, b_sidecar, b_enc, b_out); });

  // eval
  auto* e = app.add_subcommand("eval", "score one encoder end to end");
  std::string e_data, e_sidecar, e_hdata, e_hsidecar, e_variant = "base",
              e_out;
  EncoderChoice e_enc;
  int e_trials = 0;
  e->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  e->add_option("--seed", common.seed_override, "override [experiment] seed");
  e->add_option("--data", e_data, "training dataset file")->required();
  e->add_option("--sidecar", e_sidecar, "training ground-truth file")
      ->required();
  e->add_option("--holdout-data", e_hdata, "holdout dataset file")
      ->required();
  e->add_option("--holdout-sidecar", e_hsidecar, "holdout ground-truth file")
      ->required();
  e_enc.add_to(*e);
  e->add_option("--trials", e_trials, "override [eval] n_trials");
  e->add_option("--variant", e_variant, "variant label for the result row");
  e->add_option("--out", e_out, "write the CSV here instead of stdout");
  e->callback([&] {
    rc = run_eval(common, e_data, e_sidecar, e_hdata, e_hsidecar, e_enc,
                  e_trials, e_variant, e_out);
  });

  // report
  auto* r = app.add_subcommand("report", "render results.csv as markdown");
  std::string r_in, r_out;
  r->add_option("--in", r_in, "results CSV")->required();
  r->add_option("--out", r_out, "markdown file to write")->required();
  r->callback([&] { rc = run_report(r_in, r_out); });

  // project
  auto* p = app.add_subcommand("project",
                               "2-D projection of an encoder's codes");
  std::string p_data, p_sidecar, p_out;
  EncoderChoice p_enc;
  p->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  p->add_option("--seed", common.seed_override, "override [experiment] seed");
  p->add_option("--data", p_data, "dataset file")->required();
  p->add_option("--sidecar", p_sidecar, "ground-truth file")->required();
  p_enc.add_to(*p);
  p->add_option("--out", p_out, "CSV file to write")->required();
  p->callback(
      [&] { rc = run_project(common, p_data, p_sidecar, p_enc, p_out); });

  // world-graph
  auto* w = app.add_subcommand("world-graph",
                               "export a world's true transition graph");
  std::string w_world, w_out;
  w->add_option("--world", w_world,
                "box_manipulation|shelf_arrangement|box_stacking")
      ->required();
  w->add_option("--out", w_out, "CSV file to write")->required();
  w->callback([&] { rc = run_world_graph(w_world, w_out); });

  // all
  auto* a = app.add_subcommand("all", "run the whole comparison experiment");
  std::string a_dir, a_models;
  int a_trials = 0;
  bool a_save = false;
  a->add_option("--config", common.config, "experiment config (INI)")
      ->required();
  a->add_option("--seed", common.seed_override, "override [experiment] seed");
  a->add_option("--out-dir", a_dir, "directory for results.csv / report.md")
      ->required();
  a->add_option("--models", a_models, "override the model list (comma list)");
  a->add_option("--trials", a_trials, "override [eval] n_trials");
  a->add_flag("--save-models", a_save, "also write fitted models");
  a->callback(
      [&] { rc = run_all(common, a_dir, a_models, a_trials, a_save); });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return rc;
}
