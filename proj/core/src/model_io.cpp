#include <bit>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "latentplan/encoders.hpp"
#include "latentplan/error.hpp"

// Raw little-endian doubles on disk; this library only targets such hosts.
static_assert(std::endian::native == std::endian::little);

namespace latentplan::encoders {

namespace {

using nlohmann::json;

void write_doubles(std::ofstream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* p, std::size_t n,
                  const std::string& what) {
  in.read(reinterpret_cast<char*>(p),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError("truncated read of " + what);
}

json hyper_to_json(const Hyper& h) {
  return json{{"z_dim", h.z_dim},
              {"hidden", h.hidden},
              {"alpha", h.alpha},
              {"gamma", h.gamma},
              {"beta", h.beta},
              {"d_m", h.d_m},
              {"d_m_auto", h.d_m_auto},
              {"tau", h.tau},
              {"pc_norm", h.pc_norm == PcNorm::kL1 ? "l1" : "l2"},
              {"ramp_frac", h.ramp_frac}};
}

Hyper hyper_from_json(const json& j) {
  Hyper h;
  h.z_dim = j.at("z_dim").get<int>();
  h.hidden = j.at("hidden").get<std::vector<int>>();
  h.alpha = j.at("alpha").get<double>();
  h.gamma = j.at("gamma").get<double>();
  h.beta = j.at("beta").get<double>();
  h.d_m = j.at("d_m").get<double>();
  h.d_m_auto = j.at("d_m_auto").get<bool>();
  h.tau = j.at("tau").get<double>();
  const auto norm = j.at("pc_norm").get<std::string>();
  if (norm == "l1") {
    h.pc_norm = PcNorm::kL1;
  } else if (norm == "l2") {
    h.pc_norm = PcNorm::kL2;
  } else {
    throw IoError("unknown pc_norm value: " + norm);
  }
  h.ramp_frac = j.at("ramp_frac").get<double>();
  return h;
}

// Layer dims of a network built by train(): {in, hidden..., out}.
std::vector<int> net_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

void write_net(std::ofstream& out, const nn::Mlp& net, std::size_t layers) {
  for (std::size_t l = 0; l < layers; ++l) {
    write_doubles(out, net.weight(l).data(),
                  static_cast<std::size_t>(net.weight(l).size()));
    write_doubles(out, net.bias(l).data(),
                  static_cast<std::size_t>(net.bias(l).size()));
  }
}

void read_net(std::ifstream& in, nn::Mlp& net, std::size_t layers,
              const std::string& what) {
  for (std::size_t l = 0; l < layers; ++l) {
    read_doubles(in, net.weight(l).data(),
                 static_cast<std::size_t>(net.weight(l).size()), what);
    read_doubles(in, net.bias(l).data(),
                 static_cast<std::size_t>(net.bias(l).size()), what);
  }
}

}  // namespace

void save_model(const EncoderModel& model, const std::string& path) {
  if (!model.fitted) throw NotFittedError("save_model: model is not fitted");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);

  json h = {{"format", "latentplan.model"},
            {"version", 1},
            {"kind", std::string(kind_name(model.kind))},
            {"input_dim", model.input_dim},
            {"z_dim", model.z_dim},
            {"hyper", hyper_to_json(model.hyper)}};
  out << h.dump() << '\n';

  if (model.kind == ModelKind::kPca) {
    write_doubles(out, model.pca_mean.data(),
                  static_cast<std::size_t>(model.pca_mean.size()));
    write_doubles(out, model.pca_components.data(),
                  static_cast<std::size_t>(model.pca_components.size()));
    write_doubles(out, model.pca_eigenvalues.data(),
                  static_cast<std::size_t>(model.pca_eigenvalues.size()));
  } else if (is_trainable(model.kind)) {
    write_net(out, model.enc, model.hyper.hidden.size() + 1);
    if (has_decoder(model.kind)) {
      write_net(out, model.dec, model.hyper.hidden.size() + 1);
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

EncoderModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("cannot read header of " + path);
  json h;
  try {
    h = json::parse(line);
  } catch (const json::parse_error&) {
    throw IoError("malformed header in " + path);
  }
  if (h.value("format", "") != "latentplan.model" ||
      h.value("version", 0) != 1) {
    throw IoError("unexpected format/version in " + path);
  }

  EncoderModel m;
  m.kind = kind_from_name(h.at("kind").get<std::string>());
  m.input_dim = h.at("input_dim").get<int>();
  m.z_dim = h.at("z_dim").get<int>();
  m.hyper = hyper_from_json(h.at("hyper"));
  if (m.input_dim < 1 || m.z_dim < 1) throw IoError("bad dims in " + path);

  if (m.kind == ModelKind::kPca) {
    m.pca_mean.resize(m.input_dim);
    m.pca_components.resize(m.z_dim, m.input_dim);
    m.pca_eigenvalues.resize(m.z_dim);
    read_doubles(in, m.pca_mean.data(),
                 static_cast<std::size_t>(m.pca_mean.size()), "pca mean");
    read_doubles(in, m.pca_components.data(),
                 static_cast<std::size_t>(m.pca_components.size()),
                 "pca components");
    read_doubles(in, m.pca_eigenvalues.data(),
                 static_cast<std::size_t>(m.pca_eigenvalues.size()),
                 "pca eigenvalues");
  } else if (is_trainable(m.kind)) {
    Rng scratch(0);  // parameters are overwritten below
    const int enc_out = is_variational(m.kind) ? 2 * m.z_dim : m.z_dim;
    m.enc = nn::Mlp(net_dims(m.input_dim, m.hyper.hidden, enc_out),
                    nn::Activation::kRelu, nn::Activation::kIdentity, scratch);
    read_net(in, m.enc, m.hyper.hidden.size() + 1, "encoder weights");
    if (has_decoder(m.kind)) {
      std::vector<int> rev(m.hyper.hidden.rbegin(), m.hyper.hidden.rend());
      m.dec = nn::Mlp(net_dims(m.z_dim, rev, m.input_dim),
                      nn::Activation::kRelu, nn::Activation::kIdentity,
                      scratch);
      read_net(in, m.dec, m.hyper.hidden.size() + 1, "decoder weights");
    }
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw IoError("trailing bytes in " + path);
  }
  m.fitted = true;
  return m;
}

}  // namespace latentplan::encoders
