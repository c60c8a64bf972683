#ifndef RLSGAN_RLS_HPP
#define RLSGAN_RLS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rlsgan/featmap.hpp"
#include "rlsgan/linalg.hpp"
#include "rlsgan/nn.hpp"
#include "rlsgan/rng.hpp"

namespace rlsgan::rls {

using linalg::Matrix;

// Per-point gamma-ridge leverage scores; each score lies in (0, 1) and
// the sum equals the effective dimension trace(K (K + n*gamma*I)^-1).
struct LeverageScores {
  double gamma = 0.0;
  std::vector<double> scores;

  std::size_t n() const { return scores.size(); }
  double sum() const;
};

struct SamplingDistribution {
  std::vector<double> probs;  // nonnegative, sums to 1

  std::size_t n() const { return probs.size(); }
};

// Gaussian sketch S = A / sqrt(k) with A i.i.d. standard normal.
struct SketchMatrix {
  Matrix entries;  // m x k

  std::size_t source_dim() const { return entries.rows; }
  std::size_t target_dim() const { return entries.cols; }
};

// Dual form: l_i = (K (K + n*gamma*I)^-1)_ii.
LeverageScores dual_scores(const Matrix& kernel, double gamma);

// Primal form: l_i = phi_i^T (C + n*gamma*I)^-1 phi_i with C = Phi^T Phi.
LeverageScores primal_scores(const featmap::FeatureBatch& features,
                             double gamma);

// Primal when n > feature dim, dual on the Gram matrix otherwise.
LeverageScores auto_scores(const featmap::FeatureBatch& features,
                           double gamma);

SamplingDistribution normalize(const LeverageScores& scores);

// Smallest sketch dimension guaranteeing distortion eps for b points:
// ceil(4 (eps^2/2 - eps^3/3)^-1 ln b).
std::size_t jl_min_dim(double eps, std::size_t b);

SketchMatrix draw_sketch(std::size_t source_dim, std::size_t target_dim,
                         Rng& rng);

// Row-wise projection: output row i = S^T phi_i.
featmap::FeatureBatch sketch_features(const featmap::FeatureBatch& features,
                                      const SketchMatrix& sketch);

// i.i.d. draws with replacement.
std::vector<std::size_t> sample_batch(const SamplingDistribution& dist,
                                      std::size_t size, Rng& rng);
std::vector<std::size_t> sample_batch(const SamplingDistribution& dist,
                                      std::size_t size, std::uint64_t seed);

struct TwoStageOptions {
  std::size_t batch_size = 64;
  std::size_t multiplier = 20;
  double gamma = 1e-3;
  int sketch_dim = 0;  // 0 = no sketch
};

// Stage 1 draws multiplier*batch_size indices uniformly without
// replacement; stage 2 samples the final batch from the leverage-score
// distribution of the pool's discriminator features. Returns indices
// into `points`.
std::vector<std::size_t> two_stage_sample(const Matrix& points,
                                          const nn::Mlp& disc,
                                          const TwoStageOptions& options,
                                          Rng& rng);

// scores CSV with header "index,score,prob".
void save_scores_csv(const LeverageScores& scores,
                     const SamplingDistribution& dist,
                     const std::string& path);
void load_scores_csv(const std::string& path, LeverageScores& scores,
                     SamplingDistribution& dist);

}  // namespace rlsgan::rls

#endif  // RLSGAN_RLS_HPP
