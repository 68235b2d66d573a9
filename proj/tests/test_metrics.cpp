#include "latentplan/metrics.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "latentplan/cluster.hpp"
#include "latentplan/encoders.hpp"
#include "latentplan/error.hpp"
#include "latentplan/lsr.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan {
namespace {

using metrics::HcScores;

Eigen::MatrixXd from_rows(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(rows.empty() ? 0 : rows[0].size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t d = 0; d < rows[i].size(); ++d) m(d, i) = rows[i][d];
  return m;
}

// Second silhouette implementation, structured differently: full distance
// matrix first, then per-cluster means.
Eigen::VectorXd brute_silhouette(const Eigen::MatrixXd& x,
                                 const std::vector<int>& labels) {
  const int n = static_cast<int>(x.cols());
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = (x.col(i) - x.col(j)).norm();
  std::vector<int> count(k, 0);
  for (const int l : labels) ++count[l];

  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    if (count[labels[i]] == 1) {
      s[i] = 0.0;
      continue;
    }
    std::vector<double> sum(k, 0.0);
    for (int j = 0; j < n; ++j)
      if (j != i) sum[labels[j]] += d(i, j);
    const double a = sum[labels[i]] / (count[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c)
      if (c != labels[i]) b = std::min(b, sum[c] / count[c]);
    s[i] = std::max(a, b) > 0.0 ? (b - a) / std::max(a, b) : 0.0;
  }
  return s;
}

TEST(Metrics, PerfectClusteringScoresOneOnBothAxes) {
  const HcScores s = metrics::homogeneity_completeness({0, 0, 1, 1, 2},
                                                       {7, 7, 3, 3, 5});
  EXPECT_DOUBLE_EQ(s.homogeneity, 1.0);
  EXPECT_DOUBLE_EQ(s.completeness, 1.0);
}

TEST(Metrics, PureClustersThatSplitAClassLoseCompletenessOnly) {
  // Clusters {0}, {1}, {2,2} are each pure: homogeneity 1. Class 0 is split
  // across two clusters: completeness 1 - (ln 2 / 2) / (3 ln 2 / 2) = 2/3.
  const HcScores s = metrics::homogeneity_completeness({0, 0, 1, 1},
                                                       {0, 1, 2, 2});
  EXPECT_DOUBLE_EQ(s.homogeneity, 1.0);
  EXPECT_NEAR(s.completeness, 2.0 / 3.0, 1e-12);

  // The mirrored assignment trades the two scores.
  const HcScores m = metrics::homogeneity_completeness({0, 1, 2, 2},
                                                       {0, 0, 1, 1});
  EXPECT_NEAR(m.homogeneity, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.completeness, 1.0);
}

TEST(Metrics, DegenerateLabelDistributionsHitTheExtremes) {
  // One class scattered over three clusters: homogeneity degenerates to 1,
  // completeness collapses to 0.
  const HcScores one_class = metrics::homogeneity_completeness({0, 0, 0},
                                                               {0, 1, 2});
  EXPECT_DOUBLE_EQ(one_class.homogeneity, 1.0);
  EXPECT_DOUBLE_EQ(one_class.completeness, 0.0);

  // Three classes lumped into one cluster: the mirror image.
  const HcScores one_cluster = metrics::homogeneity_completeness({0, 1, 2},
                                                                 {0, 0, 0});
  EXPECT_DOUBLE_EQ(one_cluster.homogeneity, 0.0);
  EXPECT_DOUBLE_EQ(one_cluster.completeness, 1.0);
}

TEST(Metrics, HomogeneityAndCompletenessAreDualAndRelabelInvariant) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> truth(40), pred(40);
    for (int i = 0; i < 40; ++i) {
      truth[i] = static_cast<int>(rng.uniform_int(4));
      pred[i] = static_cast<int>(rng.uniform_int(5));
    }
    const HcScores s = metrics::homogeneity_completeness(truth, pred);
    EXPECT_GE(s.homogeneity, 0.0);
    EXPECT_LE(s.homogeneity, 1.0);
    EXPECT_GE(s.completeness, 0.0);
    EXPECT_LE(s.completeness, 1.0);

    // Swapping the roles of truth and prediction swaps the two scores
    // (up to summation order in the entropies).
    const HcScores sw = metrics::homogeneity_completeness(pred, truth);
    EXPECT_NEAR(sw.homogeneity, s.completeness, 1e-12);
    EXPECT_NEAR(sw.completeness, s.homogeneity, 1e-12);

    // Renaming cluster ids changes nothing.
    std::vector<int> renamed(pred.size());
    const int shuffle[5] = {3, 0, 4, 1, 2};
    for (std::size_t i = 0; i < pred.size(); ++i)
      renamed[i] = shuffle[pred[i]];
    const HcScores r = metrics::homogeneity_completeness(truth, renamed);
    EXPECT_NEAR(r.homogeneity, s.homogeneity, 1e-12);
    EXPECT_NEAR(r.completeness, s.completeness, 1e-12);
  }
}

TEST(Metrics, ClusteringScoreInputValidation) {
  EXPECT_THROW(metrics::homogeneity_completeness({0, 1}, {0}),
               DimensionMismatchError);
  EXPECT_THROW(metrics::homogeneity_completeness({}, {}), EmptyInputError);
}

TEST(Metrics, SilhouetteMatchesTheHandWorkedExample) {
  // Two tight pairs on a line. For the outermost point a = 0.1 and
  // b = (10 + 10.1) / 2, giving s = 9.95 / 10.05; its inner neighbour gets
  // s = 9.85 / 9.95.
  const Eigen::MatrixXd x = from_rows({{0.0}, {0.1}, {10.0}, {10.1}});
  const std::vector<int> labels = {0, 0, 1, 1};
  const Eigen::VectorXd s = metrics::silhouette_samples(x, labels);

  const double outer = 9.95 / 10.05;
  const double inner = 9.85 / 9.95;
  ASSERT_EQ(s.size(), 4);
  EXPECT_NEAR(s[0], outer, 1e-12);
  EXPECT_NEAR(s[1], inner, 1e-12);
  EXPECT_NEAR(s[2], inner, 1e-12);
  EXPECT_NEAR(s[3], outer, 1e-12);
  EXPECT_NEAR(s.maxCoeff(), 0.9900497512437811, 1e-12);
  EXPECT_NEAR(metrics::silhouette_mean(x, labels), (outer + inner) / 2.0,
              1e-12);
  EXPECT_NEAR(metrics::silhouette_mean(x, labels), 0.98999975, 1e-6);
}

TEST(Metrics, SingletonClustersScoreZero) {
  const Eigen::MatrixXd x = from_rows({{0.0}, {5.0}, {5.1}});
  const Eigen::VectorXd s = metrics::silhouette_samples(x, {0, 1, 1});
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], (5.0 - 0.1) / 5.0, 1e-12);
  EXPECT_NEAR(s[2], (5.1 - 0.1) / 5.1, 1e-12);
}

TEST(Metrics, CoincidentPointsScoreZeroInsteadOfDividingByZero) {
  const Eigen::MatrixXd x = from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  const Eigen::VectorXd s = metrics::silhouette_samples(x, {0, 0, 1, 1});
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s[i], 0.0);
}

TEST(Metrics, SilhouetteMatchesBruteForceOnRandomBlobs) {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 2 + trial % 2;
    const int per = 8;
    Eigen::MatrixXd x(3, k * per);
    std::vector<int> labels;
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < per; ++i) {
        for (int d = 0; d < 3; ++d)
          x(d, c * per + i) = 6.0 * c + rng.normal(0.0, 1.0);
        labels.push_back(c);
      }
    }
    const Eigen::VectorXd got = metrics::silhouette_samples(x, labels);
    const Eigen::VectorXd want = brute_silhouette(x, labels);
    for (int i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(Metrics, SilhouetteInputValidation) {
  const Eigen::MatrixXd x = from_rows({{0.0}, {1.0}, {2.0}});
  EXPECT_THROW(metrics::silhouette_samples(x, {0, 1}), DimensionMismatchError);
  EXPECT_THROW(metrics::silhouette_samples(x, {0, -1, 1}), ConfigError);
  EXPECT_THROW(metrics::silhouette_samples(x, {0, 0, 2}), ConfigError);
  EXPECT_THROW(metrics::silhouette_samples(x, {0, 0, 0}), DegenerateDataError);
  EXPECT_THROW(metrics::silhouette_samples(Eigen::MatrixXd(1, 0), {}),
               EmptyInputError);
}

// --- roadmap grading -------------------------------------------------------

// A dataset whose tuple t shows state seq[t] on both sides; observations are
// placeholders because the graders only read the sidecar.
synth::Dataset states_dataset(const worlds::WorldSpec& world,
                              const std::vector<worlds::WorldState>& seq) {
  std::vector<synth::DataTuple> tuples(seq.size());
  std::vector<synth::TupleInfo> info(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    tuples[t].o_i = Eigen::VectorXd::Zero(2);
    tuples[t].o_j = Eigen::VectorXd::Zero(2);
    tuples[t].similar = true;
    info[t].state_i = seq[t];
    info[t].state_j = seq[t];
  }
  return synth::Dataset(std::string(world.name()), synth::RenderConfig{},
                        std::move(tuples), std::move(info));
}

TEST(Metrics, MajorityStatesCountVotesAndBreakTiesDownwards) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  const auto states = world.enumerate_states();
  ASSERT_GE(states.size(), 4u);

  // Tuple t carries states[t] on both sides; observation 2t and 2t+1 both
  // show states[t].
  const synth::Dataset ds =
      states_dataset(world, {states[0], states[1], states[2], states[3]});

  lsr::Roadmap rm;
  rm.nodes.resize(2);
  // Two votes for states[1], one for states[0].
  rm.nodes[0].members = {1, 2, 3};  // obs 1 -> t0, obs 2 and 3 -> t1
  // A 1:1 tie between states[2] and states[3]: the smaller mask must win.
  rm.nodes[1].members = {4, 6};  // t2 and t3
  for (auto& n : rm.nodes) n.centroid = Eigen::VectorXd::Zero(1);

  const auto maj = metrics::majority_states(rm, ds);
  ASSERT_EQ(maj.size(), 2u);
  EXPECT_EQ(maj[0], states[1]);
  EXPECT_EQ(maj[1], std::min(states[2], states[3]));

  lsr::Roadmap bad = rm;
  bad.nodes[0].members = {99};
  EXPECT_THROW(metrics::majority_states(bad, ds), ConfigError);
  bad.nodes[0].members = {};
  EXPECT_THROW(metrics::majority_states(bad, ds), ConfigError);
}

TEST(Metrics, EdgeCorrectnessIsTheLegalHopFraction) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  const auto trans = world.legal_transitions();
  ASSERT_FALSE(trans.empty());
  const worlds::WorldState a = trans[0].a, b = trans[0].b;

  lsr::Roadmap rm;
  rm.nodes.resize(3);
  for (auto& n : rm.nodes) {
    n.centroid = Eigen::VectorXd::Zero(1);
    n.members = {0};
  }
  rm.edges = {{0, 1, 1}, {1, 2, 1}};

  // Majority states: 0 -> a, 1 -> b (legal hop), 2 -> a again. The 1-2 hop
  // retraces b-a, which is legal, so both edges count.
  EXPECT_DOUBLE_EQ(metrics::edge_correctness(rm, {a, b, a}, world), 1.0);
  // A node that repeats its neighbour's state breaks its edge: a-a is not a
  // transition.
  EXPECT_DOUBLE_EQ(metrics::edge_correctness(rm, {a, a, b}, world), 0.5);
  EXPECT_DOUBLE_EQ(metrics::edge_correctness(rm, {a, a, a}, world), 0.0);

  lsr::Roadmap no_edges = rm;
  no_edges.edges.clear();
  EXPECT_DOUBLE_EQ(metrics::edge_correctness(no_edges, {a, b, a}, world), 0.0);

  EXPECT_THROW(metrics::edge_correctness(rm, {a, b}, world),
               DimensionMismatchError);
}

TEST(Metrics, PathGradingChecksEndpointsAndEveryHop) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  const auto states = world.enumerate_states();

  // Build a genuine two-hop chain s0 - s1 - s2.
  const worlds::WorldState s0 = states[0];
  const worlds::WorldState s1 = world.apply_action(s0, world.legal_actions(s0)[0]);
  worlds::WorldState s2{};
  bool found = false;
  for (const auto& act : world.legal_actions(s1)) {
    const worlds::WorldState cand = world.apply_action(s1, act);
    if (cand != s0) {
      s2 = cand;
      found = true;
      break;
    }
  }
  ASSERT_TRUE(found);
  const std::vector<worlds::WorldState> maj = {s0, s1, s2};

  EXPECT_TRUE(metrics::path_is_correct(world, maj, {0, 1, 2}, s0, s2));
  EXPECT_TRUE(metrics::path_is_correct(world, maj, {0, 1}, s0, s1));
  // Wrong claimed endpoints.
  EXPECT_FALSE(metrics::path_is_correct(world, maj, {0, 1, 2}, s1, s2));
  EXPECT_FALSE(metrics::path_is_correct(world, maj, {0, 1, 2}, s0, s1));
  // A single node answers only the trivial query on its own state.
  EXPECT_TRUE(metrics::path_is_correct(world, maj, {1}, s1, s1));
  EXPECT_FALSE(metrics::path_is_correct(world, maj, {1}, s1, s2));
  EXPECT_FALSE(metrics::path_is_correct(world, maj, {}, s0, s0));
  EXPECT_THROW(metrics::path_is_correct(world, maj, {0, 5}, s0, s2),
               ConfigError);

  // A hop that skips s1 is illegal iff s0 and s2 are not adjacent; when they
  // are, pick the grading of the reversed pair instead. Either way the
  // grader must agree with the world's transition test.
  EXPECT_EQ(metrics::path_is_correct(world, maj, {0, 2}, s0, s2),
            world.is_legal_transition(s0, s2));
}

// One roadmap node per world state, centred on the noise-free oracle code,
// with one supporting observation each and edges for every legal transition.
struct OracleRoadmap {
  lsr::Roadmap rm;
  std::vector<worlds::WorldState> majority;
  synth::Dataset ds;  // one tuple per state, sidecar aligned with members
};

OracleRoadmap oracle_roadmap(const worlds::WorldSpec& world) {
  const auto states = world.enumerate_states();
  const encoders::OracleEncoder clean(world, 12, 0.0);
  Rng scratch(1);

  OracleRoadmap out{lsr::Roadmap{}, {},
                    synth::Dataset("x", synth::RenderConfig{}, {}, {})};
  out.ds = states_dataset(world, states);
  out.rm.nodes.resize(states.size());
  out.rm.neighbours.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.rm.nodes[k].centroid = clean.encode(states[k], scratch);
    out.rm.nodes[k].members = {2 * k};
    out.majority.push_back(states[k]);
  }
  for (const auto& tr : world.legal_transitions()) {
    const int a = world.state_index(tr.a), b = world.state_index(tr.b);
    out.rm.edges.push_back({a, b, 1});
    out.rm.neighbours[a].push_back(b);
    out.rm.neighbours[b].push_back(a);
  }
  for (auto& nb : out.rm.neighbours) std::sort(nb.begin(), nb.end());
  return out;
}

TEST(Metrics, TrialsOnAFaithfulRoadmapAllSucceed) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  OracleRoadmap orm = oracle_roadmap(world);
  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));

  Rng rng(9);
  const metrics::TrialStats ts = metrics::path_trials(
      world, orm.rm, orm.majority, orm.ds, enc, 200, 100, rng);
  EXPECT_DOUBLE_EQ(ts.pct_any, 100.0);
  EXPECT_DOUBLE_EQ(ts.pct_all, 100.0);
}

TEST(Metrics, TrialsWithoutEdgesOnlyAnswerTrivialQueries) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  OracleRoadmap orm = oracle_roadmap(world);
  orm.rm.edges.clear();
  for (auto& nb : orm.rm.neighbours) nb.clear();
  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));

  // Start and goal are uniform over 12 states, so only same-state draws can
  // produce a (single-node) path; everything else is unreachable.
  Rng rng(9);
  const metrics::TrialStats ts = metrics::path_trials(
      world, orm.rm, orm.majority, orm.ds, enc, 400, 100, rng);
  EXPECT_DOUBLE_EQ(ts.pct_any, ts.pct_all);
  EXPECT_GT(ts.pct_any, 0.0);
  EXPECT_LT(ts.pct_any, 40.0);
}

TEST(Metrics, MisassignedNodeStatesAreCaughtByTheGrader) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  OracleRoadmap orm = oracle_roadmap(world);
  // Cyclically shift the claimed states: every node now advertises a state
  // its latent region does not show, so endpoint checks fail in every trial.
  std::rotate(orm.majority.begin(), orm.majority.begin() + 1,
              orm.majority.end());
  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));

  Rng rng(9);
  const metrics::TrialStats ts = metrics::path_trials(
      world, orm.rm, orm.majority, orm.ds, enc, 200, 100, rng);
  EXPECT_DOUBLE_EQ(ts.pct_any, 0.0);
  EXPECT_DOUBLE_EQ(ts.pct_all, 0.0);
}

TEST(Metrics, TrialInputValidation) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  OracleRoadmap orm = oracle_roadmap(world);
  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));
  Rng rng(9);

  EXPECT_THROW(metrics::path_trials(world, orm.rm, orm.majority, orm.ds, enc,
                                    0, 100, rng),
               ConfigError);
  EXPECT_THROW(metrics::path_trials(world, orm.rm, orm.majority, orm.ds, enc,
                                    10, 0, rng),
               ConfigError);
  const synth::Dataset empty("box_stacking", synth::RenderConfig{}, {}, {});
  EXPECT_THROW(metrics::path_trials(world, orm.rm, orm.majority, empty, enc,
                                    10, 100, rng),
               EmptyInputError);
  orm.majority.pop_back();
  EXPECT_THROW(metrics::path_trials(world, orm.rm, orm.majority, orm.ds, enc,
                                    10, 100, rng),
               DimensionMismatchError);
}

// --- end-to-end evaluation ---------------------------------------------------

synth::GenerateConfig small_gen() {
  synth::GenerateConfig cfg;
  cfg.render.dim = 16;
  cfg.render.views = 1;
  cfg.render.distractors = 2;
  cfg.render.p_distractor = 0.5;
  cfg.render.sigma_jitter = 0.1;
  cfg.render.sigma_noise = 0.02;
  cfg.render.mix_seed = 7;
  cfg.n_tuples = 500;
  cfg.frac_action = 0.5;
  return cfg;
}

TEST(Metrics, OracleDrivenEvaluationRecoversTheWholeWorld) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  Rng rng(5);
  const synth::Dataset ds = synth::generate_dataset(world, small_gen(), rng);
  const auto [train, holdout] = synth::split_holdout(ds, 0.2, rng);

  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));
  metrics::EvalConfig cfg;
  cfg.cluster.min_cluster_size = 5;
  cfg.n_trials = 300;

  const metrics::EvalReport rep =
      metrics::evaluate(world, train, holdout, enc, cfg, Rng(13));

  EXPECT_EQ(rep.world, "box_stacking");
  EXPECT_EQ(rep.n_nodes, 12);  // one latent region per state
  EXPECT_GT(rep.n_edges, 0);
  EXPECT_LE(rep.n_edges, 24);
  EXPECT_DOUBLE_EQ(rep.h_c, 1.0);
  EXPECT_DOUBLE_EQ(rep.c_c, 1.0);
  EXPECT_TRUE(rep.s_c_defined);
  EXPECT_GT(rep.s_c, 0.9);
  EXPECT_DOUBLE_EQ(rep.c_e, 1.0);
  EXPECT_DOUBLE_EQ(rep.pct_any, 100.0);
  EXPECT_DOUBLE_EQ(rep.pct_all, 100.0);
  EXPECT_LT(rep.noise_frac, 0.05);
}

TEST(Metrics, EvaluationIsDeterministicInTheSeed) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  Rng rng(5);
  synth::GenerateConfig gen = small_gen();
  gen.n_tuples = 200;
  const synth::Dataset ds = synth::generate_dataset(world, gen, rng);
  const auto [train, holdout] = synth::split_holdout(ds, 0.2, rng);

  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));
  metrics::EvalConfig cfg;
  cfg.n_trials = 100;

  const metrics::EvalReport a =
      metrics::evaluate(world, train, holdout, enc, cfg, Rng(21));
  const metrics::EvalReport b =
      metrics::evaluate(world, train, holdout, enc, cfg, Rng(21));
  EXPECT_EQ(a.n_nodes, b.n_nodes);
  EXPECT_EQ(a.n_edges, b.n_edges);
  EXPECT_EQ(a.h_c, b.h_c);
  EXPECT_EQ(a.c_c, b.c_c);
  EXPECT_EQ(a.s_c, b.s_c);
  EXPECT_EQ(a.c_e, b.c_e);
  EXPECT_EQ(a.pct_all, b.pct_all);
  EXPECT_EQ(a.pct_any, b.pct_any);
  EXPECT_EQ(a.noise_frac, b.noise_frac);
}

TEST(Metrics, TooLittleDataComesBackAsAllNoiseNotAnError) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  Rng rng(5);
  synth::GenerateConfig gen = small_gen();
  gen.n_tuples = 2;  // 4 observations < min_cluster_size
  const synth::Dataset ds = synth::generate_dataset(world, gen, rng);

  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));
  const metrics::EvalReport rep =
      metrics::evaluate(world, ds, ds, enc, metrics::EvalConfig{}, Rng(3));

  EXPECT_EQ(rep.n_nodes, 0);
  EXPECT_EQ(rep.n_edges, 0);
  EXPECT_DOUBLE_EQ(rep.noise_frac, 1.0);
  EXPECT_FALSE(rep.s_c_defined);
  EXPECT_DOUBLE_EQ(rep.pct_any, 0.0);
}

TEST(Metrics, EvaluationValidatesWorldAndConfig) {
  const auto world = worlds::WorldSpec::make(worlds::WorldKind::kBoxStacking);
  const auto other =
      worlds::WorldSpec::make(worlds::WorldKind::kShelfArrangement);
  Rng rng(5);
  synth::GenerateConfig gen = small_gen();
  gen.n_tuples = 20;
  const synth::Dataset ds = synth::generate_dataset(world, gen, rng);
  const encoders::OracleBackedEncoder enc(
      encoders::OracleEncoder(world, 12, 0.01));

  EXPECT_THROW(
      metrics::evaluate(other, ds, ds, enc, metrics::EvalConfig{}, Rng(3)),
      ConfigError);
  metrics::EvalConfig bad;
  bad.n_trials = 0;
  EXPECT_THROW(metrics::evaluate(world, ds, ds, enc, bad, Rng(3)), ConfigError);
}

}  // namespace
}  // namespace latentplan
