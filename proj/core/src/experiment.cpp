#include "latentplan/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latentplan/error.hpp"
#include "latentplan/lsr.hpp"

namespace latentplan::experiment {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + where + ": '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < INT_MIN || v > INT_MAX)
      throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + where + ": '" + s + "'");
  }
}

std::uint64_t to_u64(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + where + ": '" + s + "'");
  }
}

bool to_bool(const std::string& s, const std::string& where) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError("bad boolean for " + where + ": '" + s + "'");
}

void apply_key(ExperimentConfig& cfg, const std::string& sec,
               const std::string& key, const std::string& val) {
  const std::string where = sec + "." + key;
  if (sec == "experiment") {
    if (key == "world") cfg.world = val;
    else if (key == "seed") cfg.seed = to_u64(val, where);
    else if (key == "models") cfg.models = split_list(val);
    else if (key == "augment") {
      cfg.augment.clear();
      for (const auto& a : split_list(val))
        cfg.augment.push_back(to_int(a, where));
    } else if (key == "holdout_frac") cfg.holdout_frac = to_double(val, where);
    else if (key == "oracle_noise") cfg.oracle_noise = to_double(val, where);
    else throw ConfigError("unknown key " + where);
  } else if (sec == "render") {
    if (key == "dim") cfg.render.dim = to_int(val, where);
    else if (key == "views") cfg.render.views = to_int(val, where);
    else if (key == "distractors") cfg.render.distractors = to_int(val, where);
    else if (key == "p_distractor") cfg.render.p_distractor = to_double(val, where);
    else if (key == "sigma_jitter") cfg.render.sigma_jitter = to_double(val, where);
    else if (key == "sigma_noise") cfg.render.sigma_noise = to_double(val, where);
    else if (key == "mix_seed") cfg.render.mix_seed = to_u64(val, where);
    else throw ConfigError("unknown key " + where);
  } else if (sec == "data") {
    if (key == "n_tuples") cfg.n_tuples = to_int(val, where);
    else if (key == "frac_action") cfg.frac_action = to_double(val, where);
    else throw ConfigError("unknown key " + where);
  } else if (sec == "train") {
    if (key == "epochs") cfg.train.epochs = to_int(val, where);
    else if (key == "siamese_epochs") cfg.siamese_epochs = to_int(val, where);
    else if (key == "batch_size") cfg.train.batch_size = to_int(val, where);
    else if (key == "lr") cfg.train.lr = to_double(val, where);
    else throw ConfigError("unknown key " + where);
  } else if (sec == "hyper") {
    if (key == "z_dim") cfg.hyper.z_dim = to_int(val, where);
    else if (key == "hidden") {
      cfg.hyper.hidden.clear();
      for (const auto& h : split_list(val))
        cfg.hyper.hidden.push_back(to_int(h, where));
    } else if (key == "alpha") cfg.hyper.alpha = to_double(val, where);
    else if (key == "gamma") cfg.hyper.gamma = to_double(val, where);
    else if (key == "beta") cfg.hyper.beta = to_double(val, where);
    else if (key == "d_m") cfg.hyper.d_m = to_double(val, where);
    else if (key == "d_m_auto") cfg.hyper.d_m_auto = to_bool(val, where);
    else if (key == "tau") cfg.hyper.tau = to_double(val, where);
    else if (key == "pc_norm") {
      if (val == "l1") cfg.hyper.pc_norm = encoders::PcNorm::kL1;
      else if (val == "l2") cfg.hyper.pc_norm = encoders::PcNorm::kL2;
      else throw ConfigError("bad pc_norm: '" + val + "'");
    } else if (key == "ramp_frac") cfg.hyper.ramp_frac = to_double(val, where);
    else throw ConfigError("unknown key " + where);
  } else if (sec == "eval") {
    if (key == "min_cluster_size")
      cfg.eval.cluster.min_cluster_size = to_int(val, where);
    else if (key == "min_samples")
      cfg.eval.cluster.min_samples = to_int(val, where);
    else if (key == "n_trials") cfg.eval.n_trials = to_int(val, where);
    else if (key == "max_paths") cfg.eval.max_paths = to_int(val, where);
    else throw ConfigError("unknown key " + where);
  } else {
    throw ConfigError("unknown section [" + sec + "]");
  }
}

void validate(const ExperimentConfig& cfg) {
  worlds::WorldSpec::from_name(cfg.world);  // throws on unknown names
  if (cfg.models.empty()) throw ConfigError("no models requested");
  for (const auto& m : cfg.models)
    if (m != "oracle") encoders::kind_from_name(m);  // throws on unknown names
  if (cfg.augment.empty()) throw ConfigError("no augmentation levels");
  for (const int a : cfg.augment)
    if (a < 0) throw ConfigError("negative augmentation level");
  if (!(cfg.holdout_frac > 0.0 && cfg.holdout_frac < 1.0))
    throw ConfigError("holdout_frac must lie in (0, 1)");
  if (cfg.oracle_noise < 0.0) throw ConfigError("oracle_noise must be >= 0");
  if (cfg.n_tuples < 1) throw ConfigError("n_tuples must be positive");
  if (!(cfg.frac_action >= 0.0 && cfg.frac_action <= 1.0))
    throw ConfigError("frac_action must lie in [0, 1]");
  if (cfg.siamese_epochs < 0) throw ConfigError("siamese_epochs must be >= 0");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr char kCsvHeader[] =
    "model,variant,world,seed,n_nodes,h_c,c_e,s_c,n_edges,c_c,pct_all,"
    "pct_any";

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any section");
    apply_key(cfg, section, key, val);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::function<void(std::string_view)>& log) {
  validate(cfg);
  const worlds::WorldSpec world = worlds::WorldSpec::from_name(cfg.world);
  const Rng root(cfg.seed);

  synth::GenerateConfig gen;
  gen.render = cfg.render;
  gen.n_tuples = cfg.n_tuples;
  gen.frac_action = cfg.frac_action;
  Rng gen_rng = root.fork("generate");
  const synth::Dataset full = synth::generate_dataset(world, gen, gen_rng);
  Rng split_rng = root.fork("split");
  const auto [train_ds, holdout_ds] =
      synth::split_holdout(full, cfg.holdout_frac, split_rng);

  RunResult out;
  for (const int level : cfg.augment) {
    const std::string variant =
        level == 0 ? "base" : "aug" + std::to_string(level);
    Rng aug_rng = root.fork("augment-" + variant);
    const synth::Dataset ds =
        level == 0 ? train_ds : synth::augment(train_ds, level, aug_rng);

    for (const auto& name : cfg.models) {
      const std::string tag = name + "-" + variant;
      std::unique_ptr<encoders::PipelineEncoder> encoder;
      encoders::EncoderModel model;  // stays unfitted for the oracle
      if (name == "oracle") {
        encoder = std::make_unique<encoders::OracleBackedEncoder>(
            encoders::OracleEncoder(world, cfg.hyper.z_dim, cfg.oracle_noise));
      } else {
        const encoders::ModelKind kind = encoders::kind_from_name(name);
        nn::TrainConfig tc = cfg.train;
        if (kind == encoders::ModelKind::kPcSiamese ||
            kind == encoders::ModelKind::kCeSiamese)
          tc.epochs = cfg.siamese_epochs;
        const std::uint64_t reads_before = ds.sidecar_reads();
        encoders::TrainResult tr =
            encoders::train(kind, ds, tc, cfg.hyper, root.fork("train-" + tag));
        if (ds.sidecar_reads() != reads_before)
          throw Error("training read the ground-truth sidecar");
        model = std::move(tr.model);
        encoder = std::make_unique<encoders::ModelEncoder>(model);
      }

      metrics::EvalReport rep =
          metrics::evaluate(world, ds, holdout_ds, *encoder, cfg.eval,
                            root.fork("eval-" + tag));
      rep.model = name;
      rep.variant = variant;
      rep.seed = cfg.seed;
      if (log) {
        log(rep.world + " " + name + "/" + variant +
            ": nodes=" + std::to_string(rep.n_nodes) +
            " edges=" + std::to_string(rep.n_edges) +
            " h_c=" + fmt("%.3f", rep.h_c) + " c_e=" + fmt("%.3f", rep.c_e) +
            " any=" + fmt("%.1f", rep.pct_any) + "%");
      }
      out.reports.push_back(std::move(rep));
      out.models.push_back(std::move(model));
    }
  }
  return out;
}

std::string results_csv(const std::vector<metrics::EvalReport>& reports) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : reports) {
    out << r.model << ',' << r.variant << ',' << r.world << ',' << r.seed
        << ',' << r.n_nodes << ',' << fmt("%.10g", r.h_c) << ','
        << fmt("%.10g", r.c_e) << ',' << fmt("%.10g", r.s_c) << ','
        << r.n_edges << ',' << fmt("%.10g", r.c_c) << ','
        << fmt("%.10g", r.pct_all) << ',' << fmt("%.10g", r.pct_any) << "\n";
  }
  return out.str();
}

std::vector<metrics::EvalReport> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader)
    throw ConfigError("results csv: unexpected header");
  std::vector<metrics::EvalReport> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) f.push_back(trim(cell));
    if (f.size() != 12)
      throw ConfigError("results csv line " + std::to_string(line_no) +
                        ": expected 12 fields");
    const std::string where = "line " + std::to_string(line_no);
    metrics::EvalReport r;
    r.model = f[0];
    r.variant = f[1];
    r.world = f[2];
    r.seed = to_u64(f[3], where);
    r.n_nodes = to_int(f[4], where);
    r.h_c = to_double(f[5], where);
    r.c_e = to_double(f[6], where);
    r.s_c = to_double(f[7], where);
    r.s_c_defined = true;
    r.n_edges = to_int(f[8], where);
    r.c_c = to_double(f[9], where);
    r.pct_all = to_double(f[10], where);
    r.pct_any = to_double(f[11], where);
    out.push_back(std::move(r));
  }
  return out;
}

std::string report_markdown(const std::vector<metrics::EvalReport>& reports) {
  if (reports.empty()) throw EmptyInputError("no reports to tabulate");
  for (const auto& r : reports)
    if (r.world != reports.front().world)
      throw ConfigError("reports mix different worlds");
  const worlds::WorldSpec world =
      worlds::WorldSpec::from_name(reports.front().world);
  const int true_v = static_cast<int>(world.enumerate_states().size());
  const int true_e = static_cast<int>(world.legal_transitions().size());

  // Best entries: scores by maximum, graph sizes by distance to the truth.
  const auto best_score = [&](auto get) {
    double best = get(reports.front());
    for (const auto& r : reports) best = std::max(best, get(r));
    return best;
  };
  const auto best_count = [&](auto get, int truth) {
    int best = get(reports.front());
    for (const auto& r : reports)
      if (std::abs(get(r) - truth) < std::abs(best - truth)) best = get(r);
    return best;
  };
  const double b_hc = best_score([](const auto& r) { return r.h_c; });
  const double b_cc = best_score([](const auto& r) { return r.c_c; });
  const double b_sc = best_score([](const auto& r) { return r.s_c; });
  const double b_ce = best_score([](const auto& r) { return r.c_e; });
  const double b_all = best_score([](const auto& r) { return r.pct_all; });
  const double b_any = best_score([](const auto& r) { return r.pct_any; });
  const int b_v = best_count([](const auto& r) { return r.n_nodes; }, true_v);
  const int b_e = best_count([](const auto& r) { return r.n_edges; }, true_e);

  const auto cell = [](std::string s, bool bold) {
    return bold ? "**" + s + "**" : s;
  };
  std::ostringstream out;
  out << "# Roadmap comparison: " << reports.front().world << "\n\n";
  out << "Seed " << reports.front().seed << ". Ground truth: " << true_v
      << " states, " << true_e << " transitions.\n\n";
  out << "| model | variant | nodes | edges | h_c | c_c | s_c | c_e | % all "
         "| % any |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    out << "| " << r.model << " | " << r.variant << " | "
        << cell(std::to_string(r.n_nodes),
                std::abs(r.n_nodes - true_v) == std::abs(b_v - true_v))
        << " | "
        << cell(std::to_string(r.n_edges),
                std::abs(r.n_edges - true_e) == std::abs(b_e - true_e))
        << " | " << cell(fmt("%.3f", r.h_c), r.h_c == b_hc) << " | "
        << cell(fmt("%.3f", r.c_c), r.c_c == b_cc) << " | "
        << cell(fmt("%.3f", r.s_c), r.s_c == b_sc) << " | "
        << cell(fmt("%.3f", r.c_e), r.c_e == b_ce) << " | "
        << cell(fmt("%.1f", r.pct_all), r.pct_all == b_all) << " | "
        << cell(fmt("%.1f", r.pct_any), r.pct_any == b_any) << " |\n";
  }
  return out.str();
}

std::string projection_csv(const encoders::PipelineEncoder& encoder,
                           const synth::Dataset& ds, Rng rng) {
  const worlds::WorldSpec world = worlds::WorldSpec::from_name(ds.world());
  const auto& tuples = ds.tuples();
  const auto& info = ds.sidecar();

  std::vector<std::size_t> na;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (!tuples[t].augmented) na.push_back(t);
  if (na.empty()) throw EmptyInputError("no observations to project");

  const int z = encoder.z_dim();
  Eigen::MatrixXd latents(z, 2 * na.size());
  std::vector<std::size_t> obs_ids(2 * na.size());
  std::vector<int> states(2 * na.size());
  for (std::size_t k = 0; k < na.size(); ++k) {
    const std::size_t t = na[k];
    latents.col(2 * k) = encoder.encode_obs(tuples[t].o_i, info[t].state_i, rng);
    latents.col(2 * k + 1) =
        encoder.encode_obs(tuples[t].o_j, info[t].state_j, rng);
    obs_ids[2 * k] = 2 * t;
    obs_ids[2 * k + 1] = 2 * t + 1;
    states[2 * k] = world.state_index(info[t].state_i);
    states[2 * k + 1] = world.state_index(info[t].state_j);
  }

  Eigen::MatrixXd xy(2, latents.cols());
  if (z >= 2) {
    const encoders::EncoderModel pca = encoders::fit_pca(latents, 2);
    xy = encoders::encode_batch(pca, latents);
  } else {
    xy.row(0) = latents.row(0);
    xy.row(1).setZero();
  }

  std::ostringstream out;
  out << "obs,state,x,y\n";
  for (Eigen::Index c = 0; c < xy.cols(); ++c)
    out << obs_ids[c] << ',' << states[c] << ',' << fmt("%.8g", xy(0, c))
        << ',' << fmt("%.8g", xy(1, c)) << "\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace latentplan::experiment
