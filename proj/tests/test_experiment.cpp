#include "latentplan/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "latentplan/encoders.hpp"
#include "latentplan/error.hpp"
#include "latentplan/metrics.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan {
namespace {

// Small enough to run instantly: only the training-free encoders.
constexpr char kTinyConfig[] = R"(
[experiment]
world = box_stacking
seed = 11
models = oracle, raw, pca
augment = 0, 1
holdout_frac = 0.2

[render]
dim = 12
views = 1
distractors = 2
p_distractor = 0.5
sigma_jitter = 0.1
sigma_noise = 0.02
mix_seed = 3

[data]
n_tuples = 120
frac_action = 0.5

[eval]
n_trials = 50
)";

TEST(Experiment, ParserReadsEverySectionAndKeepsDefaultsElsewhere) {
  const std::string text = R"(
[experiment]
world = shelf_arrangement
seed = 99
models = cesia, pcsia
augment = 0, 2
holdout_frac = 0.25
oracle_noise = 0.02

[render]
dim = 48
views = 3
distractors = 4
p_distractor = 0.6
sigma_jitter = 0.2
sigma_noise = 0.01
mix_seed = 5

[data]
n_tuples = 321
frac_action = 0.4

[train]
epochs = 7
siamese_epochs = 3
batch_size = 16
lr = 0.01

[hyper]
z_dim = 6
hidden = 24, 8
alpha = 10
gamma = 20
beta = 0.5
d_m = 1.25
d_m_auto = false
tau = 0.7
pc_norm = l2
ramp_frac = 0.5

[eval]
min_cluster_size = 4
min_samples = 3
n_trials = 77
max_paths = 9
)";
  const experiment::ExperimentConfig cfg = experiment::parse_config(text);
  EXPECT_EQ(cfg.world, "shelf_arrangement");
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.models, (std::vector<std::string>{"cesia", "pcsia"}));
  EXPECT_EQ(cfg.augment, (std::vector<int>{0, 2}));
  EXPECT_DOUBLE_EQ(cfg.holdout_frac, 0.25);
  EXPECT_DOUBLE_EQ(cfg.oracle_noise, 0.02);
  EXPECT_EQ(cfg.render.dim, 48);
  EXPECT_EQ(cfg.render.views, 3);
  EXPECT_EQ(cfg.render.distractors, 4);
  EXPECT_DOUBLE_EQ(cfg.render.p_distractor, 0.6);
  EXPECT_DOUBLE_EQ(cfg.render.sigma_jitter, 0.2);
  EXPECT_DOUBLE_EQ(cfg.render.sigma_noise, 0.01);
  EXPECT_EQ(cfg.render.mix_seed, 5u);
  EXPECT_EQ(cfg.n_tuples, 321);
  EXPECT_DOUBLE_EQ(cfg.frac_action, 0.4);
  EXPECT_EQ(cfg.train.epochs, 7);
  EXPECT_EQ(cfg.siamese_epochs, 3);
  EXPECT_EQ(cfg.train.batch_size, 16);
  EXPECT_DOUBLE_EQ(cfg.train.lr, 0.01);
  EXPECT_EQ(cfg.hyper.z_dim, 6);
  EXPECT_EQ(cfg.hyper.hidden, (std::vector<int>{24, 8}));
  EXPECT_DOUBLE_EQ(cfg.hyper.alpha, 10.0);
  EXPECT_DOUBLE_EQ(cfg.hyper.gamma, 20.0);
  EXPECT_DOUBLE_EQ(cfg.hyper.beta, 0.5);
  EXPECT_DOUBLE_EQ(cfg.hyper.d_m, 1.25);
  EXPECT_FALSE(cfg.hyper.d_m_auto);
  EXPECT_DOUBLE_EQ(cfg.hyper.tau, 0.7);
  EXPECT_EQ(cfg.hyper.pc_norm, encoders::PcNorm::kL2);
  EXPECT_DOUBLE_EQ(cfg.hyper.ramp_frac, 0.5);
  EXPECT_EQ(cfg.eval.cluster.min_cluster_size, 4);
  EXPECT_EQ(cfg.eval.cluster.min_samples, 3);
  EXPECT_EQ(cfg.eval.n_trials, 77);
  EXPECT_EQ(cfg.eval.max_paths, 9);

  // Untouched keys keep their defaults.
  const experiment::ExperimentConfig dflt =
      experiment::parse_config("[experiment]\nseed = 1\n");
  EXPECT_EQ(dflt.world, "box_stacking");
  EXPECT_EQ(dflt.models.size(), 8u);
  EXPECT_EQ(dflt.n_tuples, 2500);
  EXPECT_EQ(dflt.train.epochs, 500);
  EXPECT_EQ(dflt.hyper.z_dim, 12);
  EXPECT_EQ(dflt.eval.n_trials, 1000);
}

TEST(Experiment, ParserIgnoresCommentsAndBlankLines) {
  const experiment::ExperimentConfig cfg = experiment::parse_config(
      "# leading comment\n"
      "[experiment]  ; trailing section comment\n"
      "\n"
      "seed = 4  # the seed\n"
      "world = shelf_arrangement ; another\n");
  EXPECT_EQ(cfg.seed, 4u);
  EXPECT_EQ(cfg.world, "shelf_arrangement");
}

TEST(Experiment, ParserRejectsMalformedInput) {
  using experiment::parse_config;
  EXPECT_THROW(parse_config("[nope]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nseed = twelve\n"), ConfigError);
  EXPECT_THROW(parse_config("[hyper]\nd_m_auto = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\n"), ConfigError);  // outside a section
  EXPECT_THROW(parse_config("[experiment\nseed = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\njust a line\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nmodels = warp\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nworld = mars\n"),
               UnknownWorldError);
  EXPECT_THROW(parse_config("[hyper]\npc_norm = l3\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nholdout_frac = 1.5\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[experiment]\naugment = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nmodels =\n"), ConfigError);
}

TEST(Experiment, RunProducesOneReportPerModelAndVariant) {
  const experiment::ExperimentConfig cfg =
      experiment::parse_config(kTinyConfig);
  std::vector<std::string> lines;
  const experiment::RunResult res = experiment::run_experiment(
      cfg, [&](std::string_view s) { lines.emplace_back(s); });

  ASSERT_EQ(res.reports.size(), 6u);
  ASSERT_EQ(res.models.size(), 6u);
  EXPECT_EQ(lines.size(), 6u);

  EXPECT_EQ(res.reports[0].model, "oracle");
  EXPECT_EQ(res.reports[0].variant, "base");
  EXPECT_EQ(res.reports[1].model, "raw");
  EXPECT_EQ(res.reports[2].model, "pca");
  EXPECT_EQ(res.reports[3].variant, "aug1");
  for (const auto& r : res.reports) {
    EXPECT_EQ(r.world, "box_stacking");
    EXPECT_EQ(r.seed, 11u);
  }

  // The oracle sees the true state, so it reconstructs the world exactly.
  EXPECT_EQ(res.reports[0].n_nodes, 12);
  EXPECT_DOUBLE_EQ(res.reports[0].h_c, 1.0);
  EXPECT_DOUBLE_EQ(res.reports[0].pct_any, 100.0);

  // Oracle rows carry no fitted model; raw and pca do.
  EXPECT_FALSE(res.models[0].fitted);
  EXPECT_TRUE(res.models[1].fitted);
  EXPECT_EQ(res.models[1].kind, encoders::ModelKind::kRaw);
  EXPECT_EQ(res.models[2].kind, encoders::ModelKind::kPca);
}

TEST(Experiment, IdenticalConfigsProduceByteIdenticalResults) {
  const experiment::ExperimentConfig cfg =
      experiment::parse_config(kTinyConfig);
  const std::string a = experiment::results_csv(
      experiment::run_experiment(cfg).reports);
  const std::string b = experiment::results_csv(
      experiment::run_experiment(cfg).reports);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("oracle,base,box_stacking,11,"), std::string::npos);
}

TEST(Experiment, ResultsCsvRoundTripsThroughTheParser) {
  metrics::EvalReport r1;
  r1.model = "cesia";
  r1.variant = "aug1";
  r1.world = "box_stacking";
  r1.seed = 3;
  r1.n_nodes = 12;
  r1.n_edges = 24;
  r1.h_c = 0.987654321;
  r1.c_c = 1.0;
  r1.s_c = 0.5;
  r1.s_c_defined = true;
  r1.c_e = 0.75;
  r1.pct_all = 62.5;
  r1.pct_any = 87.5;
  metrics::EvalReport r2 = r1;
  r2.model = "raw";
  r2.variant = "base";
  r2.n_nodes = 3;

  const std::string csv = experiment::results_csv({r1, r2});
  EXPECT_EQ(csv.substr(0, 6), "model,");
  const auto back = experiment::parse_results_csv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].model, "cesia");
  EXPECT_EQ(back[0].variant, "aug1");
  EXPECT_EQ(back[0].seed, 3u);
  EXPECT_EQ(back[0].n_nodes, 12);
  EXPECT_EQ(back[0].n_edges, 24);
  EXPECT_NEAR(back[0].h_c, r1.h_c, 1e-9);
  EXPECT_DOUBLE_EQ(back[0].pct_any, 87.5);
  EXPECT_EQ(back[1].model, "raw");
  EXPECT_EQ(back[1].n_nodes, 3);

  EXPECT_THROW(experiment::parse_results_csv("nope\n"), ConfigError);
  EXPECT_THROW(experiment::parse_results_csv(
                   std::string(csv) + "a,b,c\n"),
               ConfigError);
}

TEST(Experiment, MarkdownReportBoldsTheBestCellPerColumn) {
  metrics::EvalReport good;
  good.model = "cesia";
  good.variant = "base";
  good.world = "box_stacking";
  good.seed = 1;
  good.n_nodes = 12;   // truth for box stacking
  good.n_edges = 24;   // truth as well
  good.h_c = 1.0;
  good.c_c = 0.4;      // deliberately worse than the other row
  good.s_c = 0.9;
  good.c_e = 1.0;
  good.pct_all = 80.0;
  good.pct_any = 90.0;
  metrics::EvalReport poor = good;
  poor.model = "raw";
  poor.n_nodes = 30;
  poor.n_edges = 90;
  poor.h_c = 0.3;
  poor.c_c = 0.8;  // best completeness lives on the otherwise poor row
  poor.s_c = 0.1;
  poor.c_e = 0.2;
  poor.pct_all = 5.0;
  poor.pct_any = 10.0;

  const std::string md = experiment::report_markdown({good, poor});
  EXPECT_NE(md.find("Ground truth: 12 states, 24 transitions."),
            std::string::npos);
  EXPECT_NE(md.find("**12**"), std::string::npos);
  EXPECT_NE(md.find("**24**"), std::string::npos);
  EXPECT_EQ(md.find("**30**"), std::string::npos);
  EXPECT_NE(md.find("**1.000**"), std::string::npos);
  EXPECT_NE(md.find("**0.800**"), std::string::npos);  // c_c winner
  EXPECT_NE(md.find("**90.0**"), std::string::npos);
  EXPECT_EQ(md.find("**0.300**"), std::string::npos);

  EXPECT_THROW(experiment::report_markdown({}), EmptyInputError);
  metrics::EvalReport other = poor;
  other.world = "shelf_arrangement";
  EXPECT_THROW(experiment::report_markdown({good, other}), ConfigError);
}

TEST(Experiment, ProjectionCsvListsEveryObservationWithItsState) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  synth::GenerateConfig gen;
  gen.render.dim = 10;
  gen.render.views = 1;
  gen.render.distractors = 2;
  gen.render.mix_seed = 3;
  gen.n_tuples = 40;
  Rng rng(8);
  const synth::Dataset ds = synth::generate_dataset(world, gen, rng);

  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));
  const std::string csv = experiment::projection_csv(enc, ds, Rng(2));

  std::size_t rows = 0;
  for (const char c : csv) rows += (c == '\n');
  EXPECT_EQ(rows, 1u + 80u);  // header + one row per observation
  EXPECT_EQ(csv.substr(0, 14), "obs,state,x,y\n");
}

TEST(Experiment, TextFilesRoundTripAndReportMissingDirectories) {
  const std::string path = ::testing::TempDir() + "exp_note.txt";
  experiment::write_text_file(path, "alpha\nbeta\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), "alpha\nbeta\n");
  std::remove(path.c_str());

  EXPECT_THROW(
      experiment::write_text_file("/no/such/dir/file.txt", "x"),
      IoError);
}

}  // namespace
}  // namespace latentplan
