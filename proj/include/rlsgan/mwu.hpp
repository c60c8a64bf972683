#ifndef RLSGAN_MWU_HPP
#define RLSGAN_MWU_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rlsgan/gan.hpp"
#include "rlsgan/linalg.hpp"
#include "rlsgan/nn.hpp"
#include "rlsgan/synthdata.hpp"

namespace rlsgan::mwu {

using linalg::Matrix;

struct MwuState {
  std::vector<double> weights;       // strictly positive
  std::vector<nn::Mlp> generators;   // one per completed round
  std::size_t latent_dim = 25;

  std::size_t n() const { return weights.size(); }
  // Current sampling distribution weights / sum(weights).
  std::vector<double> distribution() const;
};

struct MwuConfig {
  int rounds = 15;
  double delta = 0.25;
  double kde_bandwidth = 0.05;
  std::size_t kde_samples = 10000;
};

// Uniform initial weights.
MwuState mwu_init(std::size_t n);
// Weights initialized from a normalized leverage-score distribution.
MwuState mwu_init(const std::vector<double>& init_probs);

// Gaussian kernel density estimate of `samples` evaluated at
// `query_points`: (1/m) sum_j (2 pi h^2)^(-d/2) exp(-||x - s_j||^2 / (2 h^2)).
std::vector<double> estimate_density(const Matrix& samples,
                                     const Matrix& query_points,
                                     double bandwidth);

// One multiplicative-weight round: trains a generator on batches drawn
// from the current distribution, estimates its density at every training
// point, and doubles the weight wherever p_g < delta * p.
void mwu_round(MwuState& state, const synth::Dataset& data,
               const gan::TrainConfig& train_config, const MwuConfig& config,
               std::uint64_t round_seed);

// Full run: `rounds` sequential mwu_round calls with per-round seeds
// derived from train_config.seed.
MwuState run(const synth::Dataset& data, const gan::TrainConfig& train_config,
             const MwuConfig& config,
             const std::vector<double>* init_probs = nullptr);

// Each sample picks a generator uniformly at random, then pushes one
// latent draw through it.
Matrix mixture_sample(const MwuState& state, std::size_t count,
                      std::uint64_t seed);

// Mixture checkpoint: a manifest plus one nn checkpoint per component
// and the weight vector CSV, all under the manifest's directory.
void save_mixture(const MwuState& state, const std::string& manifest_path);
MwuState load_mixture(const std::string& manifest_path);

}  // namespace rlsgan::mwu

#endif  // RLSGAN_MWU_HPP
