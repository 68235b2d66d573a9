#include "latentplan/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latentplan/error.hpp"

namespace latentplan::encoders {

namespace {

struct KindInfo {
  ModelKind kind;
  std::string_view name;
  bool trainable, decoder, variational;
};

constexpr KindInfo kKinds[] = {
    {ModelKind::kRaw, "raw", false, false, false},
    {ModelKind::kPca, "pca", false, false, false},
    {ModelKind::kAe, "ae", true, true, false},
    {ModelKind::kBetaVae, "bvae", true, true, true},
    {ModelKind::kPcAe, "pcae", true, true, false},
    {ModelKind::kPcVae, "pcvae", true, true, true},
    {ModelKind::kPcSiamese, "pcsia", true, false, false},
    {ModelKind::kCeSiamese, "cesia", true, false, false},
};

const KindInfo& info_of(ModelKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw ConfigError("unknown model kind");
}

void check_hyper(const Hyper& h) {
  if (h.z_dim < 1) throw ConfigError("hyper: z_dim must be >= 1");
  if (h.tau <= 0.0) throw ConfigError("hyper: tau must be positive");
  if (h.d_m < 0.0) throw ConfigError("hyper: d_m must be >= 0");
  if (h.alpha < 0.0 || h.gamma < 0.0 || h.beta < 0.0) {
    throw ConfigError("hyper: loss weights must be >= 0");
  }
  if (h.ramp_frac < 0.0 || h.ramp_frac > 1.0) {
    throw ConfigError("hyper: ramp_frac outside [0, 1]");
  }
  for (const int w : h.hidden) {
    if (w < 1) throw ConfigError("hyper: non-positive hidden width");
  }
}

}  // namespace

ModelKind kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  throw ConfigError("unknown model name: " + std::string(name));
}

std::string_view kind_name(ModelKind kind) { return info_of(kind).name; }
bool is_trainable(ModelKind kind) { return info_of(kind).trainable; }
bool has_decoder(ModelKind kind) { return info_of(kind).decoder; }
bool is_variational(ModelKind kind) { return info_of(kind).variational; }

Eigen::MatrixXd encode_batch(const EncoderModel& model,
                             const Eigen::MatrixXd& obs) {
  if (!model.fitted) throw NotFittedError("encode: model is not fitted");
  if (obs.rows() != model.input_dim) {
    throw DimensionMismatchError("encode: observation dim != model input dim");
  }
  switch (model.kind) {
    case ModelKind::kRaw:
      return obs;
    case ModelKind::kPca:
      return model.pca_components * (obs.colwise() - model.pca_mean);
    default: {
      const Eigen::MatrixXd out = model.enc.forward(obs);
      // Variational encoders expose the posterior mean at inference time.
      return is_variational(model.kind) ? out.topRows(model.z_dim).eval() : out;
    }
  }
}

Eigen::VectorXd encode(const EncoderModel& model, const Eigen::VectorXd& obs) {
  return encode_batch(model, obs).col(0);
}

EncoderModel fit_pca(const Eigen::MatrixXd& x, int z_dim) {
  const auto dim = x.rows();
  const auto n = x.cols();
  if (n < 2) throw DegenerateDataError("pca: need at least two samples");
  if (z_dim < 1 || z_dim > dim) {
    throw ConfigError("pca: z_dim must lie in [1, dim]");
  }

  EncoderModel m;
  m.kind = ModelKind::kPca;
  m.input_dim = static_cast<int>(dim);
  m.z_dim = z_dim;
  m.pca_mean = x.rowwise().mean();
  const Eigen::MatrixXd xc = x.colwise() - m.pca_mean;
  const Eigen::MatrixXd cov = xc * xc.transpose() / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw DegenerateDataError("pca: eigendecomposition failed");
  }
  m.pca_components.resize(z_dim, dim);
  m.pca_eigenvalues.resize(z_dim);
  for (int k = 0; k < z_dim; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(dim - 1 - k);  // descending
    // Unique orientation: make the largest-magnitude entry positive,
    // breaking magnitude ties towards the lowest index.
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    }
    if (v[imax] < 0.0) v = -v;
    m.pca_components.row(k) = v.transpose();
    m.pca_eigenvalues[k] = std::max(0.0, es.eigenvalues()[dim - 1 - k]);
  }
  m.fitted = true;
  return m;
}

double loss_recon(const Eigen::MatrixXd& x, const Eigen::MatrixXd& x_hat,
                  Eigen::MatrixXd* d_x_hat) {
  if (x.rows() != x_hat.rows() || x.cols() != x_hat.cols()) {
    throw DimensionMismatchError("recon: shape mismatch");
  }
  if (x.cols() == 0) throw EmptyInputError("recon: empty batch");
  const double scale = 1.0 / static_cast<double>(x.size());
  const Eigen::MatrixXd diff = x_hat - x;
  if (d_x_hat != nullptr) *d_x_hat = 2.0 * scale * diff;
  return scale * diff.squaredNorm();
}

double loss_kl(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar,
               Eigen::MatrixXd* d_mu, Eigen::MatrixXd* d_logvar) {
  if (mu.rows() != logvar.rows() || mu.cols() != logvar.cols()) {
    throw DimensionMismatchError("kl: shape mismatch");
  }
  if (mu.cols() == 0) throw EmptyInputError("kl: empty batch");
  const double inv_b = 1.0 / static_cast<double>(mu.cols());
  const Eigen::ArrayXXd ev = logvar.array().exp();
  const double value =
      0.5 * inv_b *
      (mu.array().square() + ev - 1.0 - logvar.array()).sum();
  if (d_mu != nullptr) *d_mu = inv_b * mu;
  if (d_logvar != nullptr) *d_logvar = 0.5 * inv_b * (ev - 1.0).matrix();
  return value;
}

double loss_pc(const Eigen::MatrixXd& z_i, const Eigen::MatrixXd& z_j,
               const std::vector<std::uint8_t>& similar, double d_m,
               PcNorm norm, Eigen::MatrixXd* d_z_i, Eigen::MatrixXd* d_z_j) {
  if (z_i.rows() != z_j.rows() || z_i.cols() != z_j.cols()) {
    throw DimensionMismatchError("pc: shape mismatch");
  }
  const auto b = z_i.cols();
  if (b == 0) throw EmptyInputError("pc: empty batch");
  if (similar.size() != static_cast<std::size_t>(b)) {
    throw DimensionMismatchError("pc: similarity flags do not match batch");
  }
  if (d_m < 0.0) throw ConfigError("pc: negative margin");

  const double inv_b = 1.0 / static_cast<double>(b);
  if (d_z_i != nullptr) d_z_i->setZero(z_i.rows(), b);
  if (d_z_j != nullptr) d_z_j->setZero(z_i.rows(), b);

  double total = 0.0;
  for (Eigen::Index t = 0; t < b; ++t) {
    const Eigen::VectorXd diff = z_i.col(t) - z_j.col(t);
    Eigen::VectorXd d_diff = Eigen::VectorXd::Zero(diff.size());
    double sq = 0.0;
    if (norm == PcNorm::kL1) {
      const double l1 = diff.cwiseAbs().sum();
      sq = l1 * l1;
      // d(l1^2)/d(diff) = 2 * l1 * sign(diff); sign(0) taken as 0.
      d_diff = 2.0 * l1 * diff.unaryExpr([](double v) {
        return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      });
    } else {
      sq = diff.squaredNorm();
      d_diff = 2.0 * diff;
    }
    if (similar[t] != 0) {
      total += sq;
    } else if (d_m - sq > 0.0) {
      total += d_m - sq;
      d_diff = -d_diff;
    } else {
      d_diff.setZero();
    }
    if (d_z_i != nullptr) {
      d_z_i->col(t) = inv_b * d_diff;
      d_z_j->col(t) = -inv_b * d_diff;
    }
  }
  return inv_b * total;
}

double loss_ntxent(const Eigen::MatrixXd& z_i, const Eigen::MatrixXd& z_j,
                   double tau, Eigen::MatrixXd* d_z_i, Eigen::MatrixXd* d_z_j) {
  if (z_i.rows() != z_j.rows() || z_i.cols() != z_j.cols()) {
    throw DimensionMismatchError("ntxent: shape mismatch");
  }
  if (tau <= 0.0) throw ConfigError("ntxent: tau must be positive");
  const auto n = z_i.cols();
  if (n == 0) throw EmptyInputError("ntxent: empty batch");
  const auto z = z_i.rows();
  const auto m2 = 2 * n;

  // Interleave so that the positive partner of anchor k is k ^ 1.
  Eigen::MatrixXd u(z, m2);
  for (Eigen::Index t = 0; t < n; ++t) {
    u.col(2 * t) = z_i.col(t);
    u.col(2 * t + 1) = z_j.col(t);
  }
  Eigen::VectorXd norms(m2);
  for (Eigen::Index k = 0; k < m2; ++k) {
    norms[k] = u.col(k).norm();
    if (norms[k] == 0.0) {
      throw ZeroVectorError("ntxent: zero embedding has no cosine similarity");
    }
  }
  Eigen::MatrixXd cos = u.transpose() * u;
  for (Eigen::Index a = 0; a < m2; ++a) {
    for (Eigen::Index c = 0; c < m2; ++c) cos(a, c) /= norms[a] * norms[c];
  }
  const Eigen::MatrixXd s = cos / tau;

  const double inv_anchors = 1.0 / static_cast<double>(m2);
  Eigen::MatrixXd du = Eigen::MatrixXd::Zero(z, m2);
  double total = 0.0;
  for (Eigen::Index k = 0; k < m2; ++k) {
    const Eigen::Index p = k ^ 1;
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < m2; ++m) {
      if (m != k) mx = std::max(mx, s(k, m));
    }
    double denom = 0.0;
    for (Eigen::Index m = 0; m < m2; ++m) {
      if (m != k) denom += std::exp(s(k, m) - mx);
    }
    total += -s(k, p) + mx + std::log(denom);

    if (d_z_i != nullptr) {
      for (Eigen::Index m = 0; m < m2; ++m) {
        if (m == k) continue;
        const double softmax = std::exp(s(k, m) - mx) / denom;
        const double coef =
            (softmax - (m == p ? 1.0 : 0.0)) * inv_anchors / tau;
        if (coef == 0.0) continue;
        // d cos(u_k, u_m) w.r.t. both endpoints.
        du.col(k) += coef * (u.col(m) / (norms[k] * norms[m]) -
                             cos(k, m) * u.col(k) / (norms[k] * norms[k]));
        du.col(m) += coef * (u.col(k) / (norms[k] * norms[m]) -
                             cos(k, m) * u.col(m) / (norms[m] * norms[m]));
      }
    }
  }
  if (d_z_i != nullptr) {
    d_z_i->resize(z, n);
    d_z_j->resize(z, n);
    for (Eigen::Index t = 0; t < n; ++t) {
      d_z_i->col(t) = du.col(2 * t);
      d_z_j->col(t) = du.col(2 * t + 1);
    }
  }
  return inv_anchors * total;
}

LossParts composite_loss(const EncoderModel& model,
                         const std::vector<synth::DataTuple>& tuples,
                         std::span<const std::size_t> idx, const Hyper& eff,
                         nn::Mlp::Gradients* enc_g, nn::Mlp::Gradients* dec_g,
                         Rng* rng, const NoiseDraws* noise) {
  if (!is_trainable(model.kind)) {
    throw ConfigError("composite_loss: model kind has no training objective");
  }
  const auto b = static_cast<Eigen::Index>(idx.size());
  if (b == 0) throw EmptyInputError("composite_loss: empty batch");
  const bool grads = enc_g != nullptr;
  if (grads && has_decoder(model.kind) && dec_g == nullptr) {
    throw ConfigError("composite_loss: decoder gradients missing");
  }

  const int d = model.input_dim;
  const int z = model.z_dim;
  Eigen::MatrixXd o_i(d, b), o_j(d, b);
  std::vector<std::uint8_t> similar(b);
  for (Eigen::Index t = 0; t < b; ++t) {
    const auto& tup = tuples.at(idx[t]);
    if (tup.o_i.size() != d || tup.o_j.size() != d) {
      throw DimensionMismatchError("composite_loss: tuple dim != model dim");
    }
    o_i.col(t) = tup.o_i;
    o_j.col(t) = tup.o_j;
    similar[t] = tup.similar ? 1 : 0;
  }

  // One concatenated pass: columns [0, b) are o_i, [b, 2b) are o_j. Batch
  // means over the 2b columns equal the half-sum of the per-side losses.
  Eigen::MatrixXd x(d, 2 * b);
  x.leftCols(b) = o_i;
  x.rightCols(b) = o_j;

  LossParts parts;
  nn::Mlp::Cache ec;

  switch (model.kind) {
    case ModelKind::kPcSiamese:
    case ModelKind::kCeSiamese: {
      const Eigen::MatrixXd zc = model.enc.forward(x, ec);
      const Eigen::MatrixXd zi = zc.leftCols(b), zj = zc.rightCols(b);
      Eigen::MatrixXd dzi, dzj;
      if (model.kind == ModelKind::kPcSiamese) {
        parts.pc = loss_pc(zi, zj, similar, eff.d_m, eff.pc_norm,
                           grads ? &dzi : nullptr, grads ? &dzj : nullptr);
        parts.total = parts.pc;
      } else {
        if (std::find(similar.begin(), similar.end(), 0) != similar.end()) {
          throw NoSimilarPairsError(
              "composite_loss: contrastive batches take similar pairs only");
        }
        parts.ntxent = loss_ntxent(zi, zj, eff.tau, grads ? &dzi : nullptr,
                                   grads ? &dzj : nullptr);
        parts.total = parts.ntxent;
      }
      if (grads) {
        Eigen::MatrixXd dz(z, 2 * b);
        dz.leftCols(b) = dzi;
        dz.rightCols(b) = dzj;
        model.enc.backward(ec, dz, *enc_g);
      }
      break;
    }
    case ModelKind::kAe:
    case ModelKind::kPcAe: {
      const Eigen::MatrixXd zc = model.enc.forward(x, ec);
      nn::Mlp::Cache dc;
      const Eigen::MatrixXd x_hat = model.dec.forward(zc, dc);
      Eigen::MatrixXd d_x_hat;
      parts.recon = loss_recon(x, x_hat, grads ? &d_x_hat : nullptr);
      parts.total = parts.recon;
      Eigen::MatrixXd dz;
      if (grads) dz = model.dec.backward(dc, d_x_hat, *dec_g);
      if (model.kind == ModelKind::kPcAe) {
        Eigen::MatrixXd dzi, dzj;
        parts.pc = loss_pc(zc.leftCols(b), zc.rightCols(b), similar, eff.d_m,
                           eff.pc_norm, grads ? &dzi : nullptr,
                           grads ? &dzj : nullptr);
        parts.total += eff.alpha * parts.pc;
        if (grads) {
          dz.leftCols(b) += eff.alpha * dzi;
          dz.rightCols(b) += eff.alpha * dzj;
        }
      }
      if (grads) model.enc.backward(ec, dz, *enc_g);
      break;
    }
    case ModelKind::kBetaVae:
    case ModelKind::kPcVae: {
      const Eigen::MatrixXd enc_out = model.enc.forward(x, ec);
      const Eigen::MatrixXd mu = enc_out.topRows(z);
      const Eigen::MatrixXd logvar = enc_out.bottomRows(z);

      Eigen::MatrixXd eps(z, 2 * b);
      if (noise != nullptr) {
        if (noise->eps_i.rows() != z || noise->eps_i.cols() != b ||
            noise->eps_j.rows() != z || noise->eps_j.cols() != b) {
          throw DimensionMismatchError("composite_loss: noise draw shape");
        }
        eps.leftCols(b) = noise->eps_i;
        eps.rightCols(b) = noise->eps_j;
      } else if (rng != nullptr) {
        for (Eigen::Index c = 0; c < eps.cols(); ++c) {
          for (Eigen::Index r = 0; r < z; ++r) eps(r, c) = rng->normal();
        }
      } else {
        throw ConfigError("composite_loss: variational kinds need rng or noise");
      }

      const Eigen::MatrixXd sigma = (0.5 * logvar).array().exp().matrix();
      const Eigen::MatrixXd z_s = mu + sigma.cwiseProduct(eps);
      nn::Mlp::Cache dc;
      const Eigen::MatrixXd x_hat = model.dec.forward(z_s, dc);

      Eigen::MatrixXd d_x_hat, d_mu_kl, d_lv_kl;
      parts.recon = loss_recon(x, x_hat, grads ? &d_x_hat : nullptr);
      parts.kl = loss_kl(mu, logvar, grads ? &d_mu_kl : nullptr,
                         grads ? &d_lv_kl : nullptr);
      parts.total = parts.recon + eff.beta * parts.kl;

      Eigen::MatrixXd dz;
      if (grads) dz = model.dec.backward(dc, d_x_hat, *dec_g);
      if (model.kind == ModelKind::kPcVae) {
        // The consistency term acts on the sampled latents.
        Eigen::MatrixXd dzi, dzj;
        parts.pc = loss_pc(z_s.leftCols(b), z_s.rightCols(b), similar, eff.d_m,
                           eff.pc_norm, grads ? &dzi : nullptr,
                           grads ? &dzj : nullptr);
        parts.total += eff.gamma * parts.pc;
        if (grads) {
          dz.leftCols(b) += eff.gamma * dzi;
          dz.rightCols(b) += eff.gamma * dzj;
        }
      }
      if (grads) {
        Eigen::MatrixXd d_enc(2 * z, 2 * b);
        d_enc.topRows(z) = dz + eff.beta * d_mu_kl;
        d_enc.bottomRows(z) =
            dz.cwiseProduct(eps).cwiseProduct(sigma) * 0.5 +
            eff.beta * d_lv_kl;
        model.enc.backward(ec, d_enc, *enc_g);
      }
      break;
    }
    default:
      throw ConfigError("composite_loss: unhandled kind");
  }
  return parts;
}

namespace {

// Mean squared pair distance of the non-augmented action pairs under a
// fitted model; used to auto-calibrate the hinge margin.
double mean_action_pair_distance(const EncoderModel& model,
                                 const synth::Dataset& ds, PcNorm norm) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : ds.tuples()) {
    if (t.similar || t.augmented) continue;
    const Eigen::VectorXd diff =
        encode(model, t.o_i) - encode(model, t.o_j);
    const double dist =
        norm == PcNorm::kL1 ? diff.cwiseAbs().sum() : diff.norm();
    sum += dist * dist;
    ++count;
  }
  return count == 0 ? -1.0 : sum / static_cast<double>(count);
}

}  // namespace

TrainResult train(ModelKind kind, const synth::Dataset& ds,
                  const nn::TrainConfig& cfg, const Hyper& hyper, Rng rng) {
  check_hyper(hyper);
  if (ds.size() == 0) throw EmptyInputError("train: empty dataset");
  if (cfg.epochs < 0 || cfg.batch_size < 1 || cfg.lr <= 0.0) {
    throw ConfigError("train: bad epochs/batch_size/lr");
  }
  const int d = static_cast<int>(ds.tuples().front().o_i.size());

  TrainResult out;
  if (kind == ModelKind::kRaw) {
    out.model.kind = ModelKind::kRaw;
    out.model.input_dim = d;
    out.model.z_dim = d;
    out.model.hyper = hyper;
    out.model.fitted = true;
    return out;
  }
  if (kind == ModelKind::kPca) {
    Eigen::MatrixXd x(d, 2 * ds.size());
    for (std::size_t t = 0; t < ds.size(); ++t) {
      x.col(2 * t) = ds.tuples()[t].o_i;
      x.col(2 * t + 1) = ds.tuples()[t].o_j;
    }
    out.model = fit_pca(x, hyper.z_dim);
    out.model.hyper = hyper;
    return out;
  }

  // Resolve the hinge margin before any training.
  Hyper eff_base = hyper;
  if ((kind == ModelKind::kPcAe || kind == ModelKind::kPcVae) &&
      hyper.d_m_auto) {
    const ModelKind pre_kind =
        kind == ModelKind::kPcAe ? ModelKind::kAe : ModelKind::kBetaVae;
    const auto pre = train(pre_kind, ds, cfg, hyper, rng.fork("pretrain-margin"));
    const double measured =
        mean_action_pair_distance(pre.model, ds, hyper.pc_norm);
    // A dataset without action pairs gives the hinge nothing to push on;
    // keep the configured margin in that case.
    if (measured >= 0.0) eff_base.d_m = measured;
  }
  if (kind == ModelKind::kPcAe || kind == ModelKind::kPcVae ||
      kind == ModelKind::kPcSiamese) {
    out.d_m_used = eff_base.d_m;
  }

  // Assemble the untrained model.
  out.model.kind = kind;
  out.model.input_dim = d;
  out.model.z_dim = hyper.z_dim;
  out.model.hyper = eff_base;
  std::vector<int> enc_dims{d};
  enc_dims.insert(enc_dims.end(), hyper.hidden.begin(), hyper.hidden.end());
  enc_dims.push_back(is_variational(kind) ? 2 * hyper.z_dim : hyper.z_dim);
  out.model.enc = nn::Mlp(enc_dims, nn::Activation::kRelu,
                          nn::Activation::kIdentity, rng);
  if (has_decoder(kind)) {
    std::vector<int> dec_dims{hyper.z_dim};
    dec_dims.insert(dec_dims.end(), hyper.hidden.rbegin(), hyper.hidden.rend());
    dec_dims.push_back(d);
    out.model.dec = nn::Mlp(dec_dims, nn::Activation::kRelu,
                            nn::Activation::kIdentity, rng);
  }

  // Tuples the objective consumes: the contrastive loss sees only similar
  // pairs (augmented tuples are dissimilar by construction), everything
  // else trains on the full set.
  std::vector<std::size_t> order;
  for (std::size_t t = 0; t < ds.size(); ++t) {
    if (kind == ModelKind::kCeSiamese && !ds.tuples()[t].similar) continue;
    order.push_back(t);
  }
  if (order.empty()) {
    throw NoSimilarPairsError("train: contrastive model without similar pairs");
  }
  const std::size_t batch =
      kind == ModelKind::kCeSiamese
          ? std::max<std::size_t>(1, cfg.batch_size / 2)
          : static_cast<std::size_t>(cfg.batch_size);

  nn::AdamState enc_state, dec_state;
  enc_state.init_like(out.model.enc);
  if (has_decoder(kind)) dec_state.init_like(out.model.dec);

  const double ramp_epochs =
      std::max(1.0, std::round(hyper.ramp_frac * cfg.epochs));
  out.epoch_loss.reserve(cfg.epochs);
  for (int e = 0; e < cfg.epochs; ++e) {
    Hyper eff = eff_base;
    const double ramp = std::min(1.0, (e + 1) / ramp_epochs);
    eff.alpha = hyper.alpha * ramp;
    eff.gamma = hyper.gamma * ramp;
    eff.beta = cfg.epochs <= 1 ? hyper.beta
                               : hyper.beta * e / (cfg.epochs - 1.0);

    rng.shuffle(order);
    double epoch_total = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      nn::Mlp::Gradients eg, dg;
      eg.init_like(out.model.enc);
      if (has_decoder(kind)) dg.init_like(out.model.dec);
      const auto parts = composite_loss(
          out.model, ds.tuples(), {order.data() + start, len}, eff, &eg,
          has_decoder(kind) ? &dg : nullptr, &rng, nullptr);
      if (!std::isfinite(parts.total)) {
        throw DivergedError("train: non-finite loss at epoch " +
                            std::to_string(e));
      }
      nn::adam_step(out.model.enc, eg, enc_state, cfg);
      if (has_decoder(kind)) nn::adam_step(out.model.dec, dg, dec_state, cfg);
      epoch_total += parts.total;
      ++n_batches;
    }
    out.epoch_loss.push_back(epoch_total / static_cast<double>(n_batches));
  }
  out.model.fitted = true;
  return out;
}

OracleEncoder::OracleEncoder(const worlds::WorldSpec& world, int z_dim,
                             double noise_scale)
    : world_(world), z_dim_(z_dim), noise_(noise_scale) {
  if (z_dim < 1) throw ConfigError("oracle: z_dim must be >= 1");
  if (noise_scale < 0.0) throw ConfigError("oracle: negative noise scale");
  const auto n_states = world.enumerate_states().size();
  if (z_dim < 63 && n_states > (1ull << z_dim)) {
    throw ConfigError("oracle: z_dim too small to give states distinct codes");
  }
}

Eigen::VectorXd OracleEncoder::encode(worlds::WorldState s, Rng& rng) const {
  const auto idx = static_cast<std::uint64_t>(world_.state_index(s));
  Eigen::VectorXd z(z_dim_);
  for (int b = 0; b < z_dim_; ++b) {
    z[b] = static_cast<double>((idx >> b) & 1ull) + noise_ * rng.normal();
  }
  return z;
}

}  // namespace latentplan::encoders
