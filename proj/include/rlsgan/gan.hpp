#ifndef RLSGAN_GAN_HPP
#define RLSGAN_GAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rlsgan/featmap.hpp"
#include "rlsgan/linalg.hpp"
#include "rlsgan/nn.hpp"
#include "rlsgan/rls.hpp"
#include "rlsgan/synthdata.hpp"

namespace rlsgan::gan {

using linalg::Matrix;

enum class SamplerKind { uniform, fixed_probs, two_stage_discriminator };

struct TrainConfig {
  long iterations = 30000;
  std::size_t batch_size = 64;
  SamplerKind sampler = SamplerKind::uniform;
  std::vector<double> fixed_probs;  // used by SamplerKind::fixed_probs
  double gamma = 1e-3;
  int sketch_dim = 0;
  std::size_t multiplier = 20;
  double bures_weight = 0.0;  // lambda; 0 disables the Bures term
  double bures_eps = 1e-12;
  std::uint64_t seed = 1;
  std::size_t latent_dim = 25;
  double lr = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  long eval_every = 1000;
  std::size_t eval_samples = 10000;
  bool trace_eval = true;  // fill modes/hq in the trace when a spec is known

  void validate() const;
};

struct TraceRow {
  long iter = 0;
  double disc_loss = 0.0;
  double gen_loss = 0.0;
  double bures_sq = 0.0;
  int modes_covered = -1;    // -1 when no spec available
  double hq_fraction = -1.0;
};

struct TrainResult {
  nn::Mlp generator;
  nn::Mlp discriminator;
  std::vector<TraceRow> trace;
};

// Centers rows by the batch mean, then L2-normalizes each row (zero rows
// stay zero). Norms are kept for the backward pass.
struct CenteredNormalized {
  Matrix rows;                // b x m, the phi-bar values
  std::vector<double> norms;  // pre-normalization row norms
};

CenteredNormalized center_normalize(const Matrix& features);

// Backward through normalization and centering: given dLoss/d(phi-bar),
// returns dLoss/d(features).
Matrix center_normalize_backward(const CenteredNormalized& cn,
                                 const Matrix& d_rows);

// C = (1/b) sum phi-bar phi-bar^T of the centered, row-normalized batch.
Matrix batch_covariance(const featmap::FeatureBatch& features);

// Squared Bures distance Tr(C_d) + Tr(C_g) - 2 sum sqrt(lambda_i), with
// lambda_i the eigenvalues of (C_d + eps I)^1/2 C_g (C_d + eps I)^1/2;
// clamped at zero.
double bures_sq(const Matrix& c_d, const Matrix& c_g, double eps);

// Gradient of bures_sq w.r.t. c_g: I - A M^-1/2 A with
// A = (C_d + eps I)^1/2 and M = A C_g A + eps I.
Matrix bures_sq_grad(const Matrix& c_d, const Matrix& c_g, double eps);

// Bures value and gradient computed directly from the two centered,
// normalized batches. Equals the dense route on the batch covariances
// but costs eigendecompositions of batch-sized matrices only.
struct BuresBatchResult {
  double value = 0.0;
  Matrix d_phi_bar_g;  // dValue/d(phi-bar of the generated batch), b x m
};

BuresBatchResult bures_from_batches(const CenteredNormalized& real,
                                    const CenteredNormalized& fake,
                                    double eps);

// One generator-loss evaluation with gradients: cross-entropy term plus
// lambda * B^2 between the real and fake discriminator-feature
// covariances. Deterministic in its inputs, which makes it directly
// checkable by finite differences.
struct GeneratorStep {
  double total_loss = 0.0;
  double gan_loss = 0.0;
  double bures_value = 0.0;
  nn::Grads grads;
};

GeneratorStep generator_step(const nn::Mlp& gen, const nn::Mlp& disc,
                             const Matrix& latent, const Matrix& x_real,
                             double lambda, double eps);

struct DiscriminatorStep {
  double loss = 0.0;
  nn::Grads grads;
};

DiscriminatorStep discriminator_step(const nn::Mlp& disc, const Matrix& x_real,
                                     const Matrix& x_fake);

// Alternating training: one discriminator step then one generator step
// per iteration. Real batches come from the configured sampler; fake
// batches are fresh latent draws.
TrainResult train(const synth::Dataset& data, const TrainConfig& config);

// train with the Bures term disabled.
TrainResult train_vanilla(const synth::Dataset& data, TrainConfig config);

// train with the configured bures_weight (lambda = 0 reduces to
// train_vanilla exactly).
TrainResult train_bures(const synth::Dataset& data, const TrainConfig& config);

// Generator samples through the latent prior. A fresh rng stream is
// derived from `seed`, leaving any training stream untouched.
Matrix sample_generator(const nn::Mlp& gen, std::size_t count,
                        std::size_t latent_dim, std::uint64_t seed);

void save_trace_csv(const std::vector<TraceRow>& trace,
                    const std::string& path);

}  // namespace rlsgan::gan

#endif  // RLSGAN_GAN_HPP
