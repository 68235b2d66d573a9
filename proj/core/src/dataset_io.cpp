#include <bit>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "latentplan/error.hpp"
#include "latentplan/synthgen.hpp"

// Raw little-endian doubles on disk; this library only targets such hosts.
static_assert(std::endian::native == std::endian::little);

namespace latentplan::synth {

namespace {

using nlohmann::json;

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n,
                const std::string& what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw IoError("truncated read of " + what);
}

json read_header(std::ifstream& in, const std::string& path,
                 const std::string& expected_format) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("cannot read header of " + path);
  json h;
  try {
    h = json::parse(line);
  } catch (const json::parse_error&) {
    throw IoError("malformed header in " + path);
  }
  if (h.value("format", "") != expected_format || h.value("version", 0) != 1) {
    throw IoError("unexpected format/version in " + path);
  }
  return h;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& data_path,
                  const std::string& sidecar_path) {
  const auto& cfg = ds.render_config();
  {
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + data_path);
    json h = {{"format", "latentplan.dataset"},
              {"version", 1},
              {"world", ds.world()},
              {"dim", cfg.dim},
              {"views", cfg.views},
              {"distractors", cfg.distractors},
              {"p_distractor", cfg.p_distractor},
              {"sigma_jitter", cfg.sigma_jitter},
              {"sigma_noise", cfg.sigma_noise},
              {"mix_seed", cfg.mix_seed},
              {"n_tuples", ds.size()}};
    out << h.dump() << '\n';
    for (const auto& t : ds.tuples()) {
      if (t.o_i.size() != cfg.dim || t.o_j.size() != cfg.dim) {
        throw DimensionMismatchError("save: observation size != header dim");
      }
      write_bytes(out, t.o_i.data(), sizeof(double) * cfg.dim);
      write_bytes(out, t.o_j.data(), sizeof(double) * cfg.dim);
      const std::uint8_t s = t.similar ? 1 : 0, a = t.augmented ? 1 : 0;
      write_bytes(out, &s, 1);
      write_bytes(out, &a, 1);
    }
    if (!out) throw IoError("write failed for " + data_path);
  }
  {
    std::ofstream out(sidecar_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + sidecar_path);
    const auto& info = ds.sidecar();
    const int n_slots =
        info.empty() ? 0 : static_cast<int>(info.front().factors_i.jitter.size());
    json h = {{"format", "latentplan.sidecar"},
              {"version", 1},
              {"world", ds.world()},
              {"n_tuples", ds.size()},
              {"n_slots", n_slots}};
    out << h.dump() << '\n';
    const auto put_factors = [&](const NuisanceFactors& f) {
      const std::int32_t v = f.viewpoint;
      write_bytes(out, &v, 4);
      write_bytes(out, &f.distractors, 4);
      write_bytes(out, &f.lighting, 8);
      write_bytes(out, f.jitter.data(), sizeof(double) * f.jitter.size());
    };
    for (const auto& i : info) {
      write_bytes(out, &i.state_i.mask, 4);
      write_bytes(out, &i.state_j.mask, 4);
      put_factors(i.factors_i);
      put_factors(i.factors_j);
    }
    if (!out) throw IoError("write failed for " + sidecar_path);
  }
}

Dataset load_dataset(const std::string& data_path,
                     const std::string& sidecar_path) {
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + data_path);
  const json h = read_header(in, data_path, "latentplan.dataset");

  RenderConfig cfg;
  cfg.dim = h.at("dim").get<int>();
  cfg.views = h.at("views").get<int>();
  cfg.distractors = h.at("distractors").get<int>();
  cfg.p_distractor = h.at("p_distractor").get<double>();
  cfg.sigma_jitter = h.at("sigma_jitter").get<double>();
  cfg.sigma_noise = h.at("sigma_noise").get<double>();
  cfg.mix_seed = h.at("mix_seed").get<std::uint64_t>();
  const auto n = h.at("n_tuples").get<std::size_t>();
  const std::string world = h.at("world").get<std::string>();

  std::vector<DataTuple> tuples(n);
  for (auto& t : tuples) {
    t.o_i.resize(cfg.dim);
    t.o_j.resize(cfg.dim);
    read_bytes(in, t.o_i.data(), sizeof(double) * cfg.dim, data_path);
    read_bytes(in, t.o_j.data(), sizeof(double) * cfg.dim, data_path);
    std::uint8_t s = 0, a = 0;
    read_bytes(in, &s, 1, data_path);
    read_bytes(in, &a, 1, data_path);
    t.similar = s != 0;
    t.augmented = a != 0;
  }

  std::ifstream sin(sidecar_path, std::ios::binary);
  if (!sin) throw IoError("cannot open " + sidecar_path);
  const json sh = read_header(sin, sidecar_path, "latentplan.sidecar");
  if (sh.at("n_tuples").get<std::size_t>() != n) {
    throw IoError("sidecar tuple count does not match dataset");
  }
  const auto n_slots = sh.at("n_slots").get<int>();

  std::vector<TupleInfo> info(n);
  const auto get_factors = [&](NuisanceFactors& f) {
    std::int32_t v = 0;
    read_bytes(sin, &v, 4, sidecar_path);
    f.viewpoint = v;
    read_bytes(sin, &f.distractors, 4, sidecar_path);
    read_bytes(sin, &f.lighting, 8, sidecar_path);
    f.jitter.resize(n_slots);
    read_bytes(sin, f.jitter.data(), sizeof(double) * n_slots, sidecar_path);
  };
  for (auto& i : info) {
    read_bytes(sin, &i.state_i.mask, 4, sidecar_path);
    read_bytes(sin, &i.state_j.mask, 4, sidecar_path);
    get_factors(i.factors_i);
    get_factors(i.factors_j);
  }
  return Dataset(world, cfg, std::move(tuples), std::move(info));
}

void export_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path);
  const int dim = ds.render_config().dim;
  out << "s,augmented";
  for (int d = 0; d < dim; ++d) out << ",oi_" << d;
  for (int d = 0; d < dim; ++d) out << ",oj_" << d;
  out << '\n';
  char buf[32];
  for (const auto& t : ds.tuples()) {
    out << (t.similar ? 1 : 0) << ',' << (t.augmented ? 1 : 0);
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof buf, ",%.17g", t.o_i[d]);
      out << buf;
    }
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof buf, ",%.17g", t.o_j[d]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace latentplan::synth
