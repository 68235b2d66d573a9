#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "latentplan/nn.hpp"
#include "latentplan/rng.hpp"
#include "latentplan/synthgen.hpp"
#include "latentplan/worlds.hpp"

namespace latentplan::encoders {

// The encoder families under comparison. "pc" marks the action-consistency
// hinge on pair distances, "ce" the normalised-temperature contrastive loss.
enum class ModelKind {
  kRaw,        // identity features
  kPca,        // principal-component projection
  kAe,         // plain autoencoder
  kBetaVae,    // variational autoencoder with weighted KL
  kPcAe,       // autoencoder + action-consistency term
  kPcVae,      // beta-VAE + action-consistency term
  kPcSiamese,  // encoder trained on the action-consistency loss alone
  kCeSiamese,  // encoder trained on the contrastive loss over similar pairs
};

ModelKind kind_from_name(std::string_view name);
std::string_view kind_name(ModelKind kind);
bool is_trainable(ModelKind kind);   // everything but raw / pca
bool has_decoder(ModelKind kind);    // ae, bvae, pcae, pcvae
bool is_variational(ModelKind kind);  // bvae, pcvae

// Distance used inside the action-consistency loss; both are squared.
enum class PcNorm { kL1, kL2 };

struct Hyper {
  int z_dim = 12;
  std::vector<int> hidden = {64, 32};  // encoder widths; decoder mirrors them
  double alpha = 100.0;   // action-consistency weight in the pc-ae composite
  double gamma = 2500.0;  // action-consistency weight in the pc-vae composite
  double beta = 1.5;      // KL weight reached at the end of its ramp
  double d_m = 0.5;       // hinge margin for dissimilar pairs
  // For pc-ae / pc-vae: replace d_m by the mean action-pair distance under a
  // plain ae / beta-vae pretrained on the same data.
  bool d_m_auto = true;
  double tau = 0.5;  // contrastive temperature
  PcNorm pc_norm = PcNorm::kL1;
  // alpha/gamma ramp linearly from 0 to their value over this fraction of
  // the epochs; beta ramps over the whole run.
  double ramp_frac = 0.25;
};

// A fitted encoder of any kind. Only the fields of the active kind are
// meaningful (pca_* for kPca, enc/dec for the trainable kinds).
struct EncoderModel {
  ModelKind kind = ModelKind::kRaw;
  int input_dim = 0;
  int z_dim = 0;
  Hyper hyper;
  bool fitted = false;

  Eigen::VectorXd pca_mean;
  Eigen::MatrixXd pca_components;   // z_dim x input_dim, rows orthonormal
  Eigen::VectorXd pca_eigenvalues;  // descending

  nn::Mlp enc, dec;
};

// Deterministic inference map. Variational kinds encode to the posterior
// mean. Throws NotFittedError / DimensionMismatchError.
Eigen::VectorXd encode(const EncoderModel& model, const Eigen::VectorXd& obs);
Eigen::MatrixXd encode_batch(const EncoderModel& model,
                             const Eigen::MatrixXd& obs);  // D x N -> z x N

// Principal components of x (columns are samples) with a sign convention
// that makes the result unique: each component's largest-magnitude entry is
// positive. Needs at least two samples and z_dim <= dim.
EncoderModel fit_pca(const Eigen::MatrixXd& x, int z_dim);

// --- losses -------------------------------------------------------------
// All losses are means over the batch; gradients are written to the
// optional output matrices (sized like their inputs).

// Mean over samples of the per-coordinate mean squared error.
double loss_recon(const Eigen::MatrixXd& x, const Eigen::MatrixXd& x_hat,
                  Eigen::MatrixXd* d_x_hat = nullptr);

// KL divergence of diag-Gaussian posteriors from the standard normal:
// mean over samples of 0.5 * sum(mu^2 + e^logvar - 1 - logvar).
double loss_kl(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar,
               Eigen::MatrixXd* d_mu = nullptr,
               Eigen::MatrixXd* d_logvar = nullptr);

// Action-consistency loss on paired encodings: similar pairs pull together
// through the squared distance, dissimilar pairs push apart through the
// hinge max(0, d_m - dist^2). dist is the L1 or L2 norm per pc_norm.
double loss_pc(const Eigen::MatrixXd& z_i, const Eigen::MatrixXd& z_j,
               const std::vector<std::uint8_t>& similar, double d_m,
               PcNorm norm, Eigen::MatrixXd* d_z_i = nullptr,
               Eigen::MatrixXd* d_z_j = nullptr);

// Normalised-temperature cross entropy over N positive pairs (2N anchors,
// cosine similarity, every other embedding in the batch is a negative).
double loss_ntxent(const Eigen::MatrixXd& z_i, const Eigen::MatrixXd& z_j,
                   double tau, Eigen::MatrixXd* d_z_i = nullptr,
                   Eigen::MatrixXd* d_z_j = nullptr);

// --- composite objectives -------------------------------------------------

// Fixed reparameterisation draws, used to make variational losses
// deterministic functions of the parameters (gradient checking).
struct NoiseDraws {
  Eigen::MatrixXd eps_i, eps_j;  // z_dim x batch standard normals
};

struct LossParts {
  double total = 0, recon = 0, kl = 0, pc = 0, ntxent = 0;
};

// Loss (and, when enc_g/dec_g are given, parameter gradients) of the
// model's training objective on the tuples selected by idx. `eff` carries
// the effective (already ramped) weights. Variational kinds need either
// rng or fixed noise draws.
LossParts composite_loss(const EncoderModel& model,
                         const std::vector<synth::DataTuple>& tuples,
                         std::span<const std::size_t> idx, const Hyper& eff,
                         nn::Mlp::Gradients* enc_g, nn::Mlp::Gradients* dec_g,
                         Rng* rng, const NoiseDraws* noise = nullptr);

struct TrainResult {
  EncoderModel model;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
  double d_m_used = 0.0;           // margin actually applied (0 if unused)
};

// Fits a model of the given kind on the dataset. kRaw and kPca "train"
// instantly; the others run minibatch Adam for cfg.epochs epochs. The rng
// is taken by value: training owns an independent stream.
TrainResult train(ModelKind kind, const synth::Dataset& ds,
                  const nn::TrainConfig& cfg, const Hyper& hyper, Rng rng);

// --- ground-truth reference encoder ---------------------------------------

// Maps a world state to the binary code of its enumeration index (distinct
// states at least unit distance apart) plus isotropic Gaussian noise. Used
// to drive the downstream pipeline with a perfect representation.
class OracleEncoder {
 public:
  OracleEncoder(const worlds::WorldSpec& world, int z_dim = 12,
                double noise_scale = 0.01);
  int z_dim() const { return z_dim_; }
  Eigen::VectorXd encode(worlds::WorldState s, Rng& rng) const;

 private:
  worlds::WorldSpec world_;
  int z_dim_;
  double noise_;
};

// Uniform interface for "whatever produces latent codes" in evaluation:
// fitted models ignore the ground-truth state, the oracle ignores the
// observation.
class PipelineEncoder {
 public:
  virtual ~PipelineEncoder() = default;
  virtual int z_dim() const = 0;
  virtual Eigen::VectorXd encode_obs(const Eigen::VectorXd& obs,
                                     worlds::WorldState truth,
                                     Rng& rng) const = 0;
};

class ModelEncoder final : public PipelineEncoder {
 public:
  explicit ModelEncoder(const EncoderModel& model) : model_(&model) {}
  int z_dim() const override { return model_->z_dim; }
  Eigen::VectorXd encode_obs(const Eigen::VectorXd& obs, worlds::WorldState,
                             Rng&) const override {
    return encode(*model_, obs);
  }

 private:
  const EncoderModel* model_;
};

class OracleBackedEncoder final : public PipelineEncoder {
 public:
  explicit OracleBackedEncoder(OracleEncoder oracle) : oracle_(std::move(oracle)) {}
  int z_dim() const override { return oracle_.z_dim(); }
  Eigen::VectorXd encode_obs(const Eigen::VectorXd&, worlds::WorldState truth,
                             Rng& rng) const override {
    return oracle_.encode(truth, rng);
  }

 private:
  OracleEncoder oracle_;
};

// Binary round trip for fitted models.
void save_model(const EncoderModel& model, const std::string& path);
EncoderModel load_model(const std::string& path);

}  // namespace latentplan::encoders
