#include "rlsgan/rls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::rls {

double LeverageScores::sum() const {
  double s = 0.0;
  for (double v : scores) s += v;
  return s;
}

namespace {

void validate_scores(std::vector<double>& scores) {
  for (double& v : scores) {
    if (!std::isfinite(v))
      fail(ErrorCode::numeric, "leverage score is not finite");
    if (v < -1e-9 || v > 1.0 + 1e-9)
      fail(ErrorCode::numeric, "leverage score outside (0, 1)");
    v = std::clamp(v, 1e-300, 1.0 - 1e-16);
  }
}

}  // namespace

LeverageScores dual_scores(const Matrix& kernel, double gamma) {
  if (!(gamma > 0.0)) fail(ErrorCode::invalid_argument, "rls: gamma must be > 0");
  linalg::require_symmetric(kernel, 1e-9);
  const std::size_t n = kernel.rows;

  Matrix shifted = kernel;
  const double ridge = static_cast<double>(n) * gamma;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += ridge;

  // K and K + n*gamma*I commute, so the diagonal of the solve is the
  // diagonal of K (K + n*gamma*I)^-1.
  Matrix x = linalg::solve_spd(shifted, kernel);

  LeverageScores out;
  out.gamma = gamma;
  out.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.scores[i] = x(i, i);
  validate_scores(out.scores);
  return out;
}

LeverageScores primal_scores(const featmap::FeatureBatch& features,
                             double gamma) {
  if (!(gamma > 0.0)) fail(ErrorCode::invalid_argument, "rls: gamma must be > 0");
  const std::size_t n = features.n();
  const std::size_t m = features.dim();

  Matrix c = linalg::gram_tn(features.vectors);
  const double ridge = static_cast<double>(n) * gamma;
  for (std::size_t j = 0; j < m; ++j) c(j, j) += ridge;

  LeverageScores out;
  out.gamma = gamma;
  out.scores.assign(n, 0.0);

  // l_i = || L^-1 phi_i ||^2 with L L^T = C + n*gamma*I.
  Matrix lower;
  if (linalg::cholesky(c, lower)) {
    Matrix z = linalg::forward_substitute(lower, linalg::transpose(features.vectors));
    for (std::size_t k = 0; k < z.rows; ++k) {
      const double* row = z.row(k);
      for (std::size_t i = 0; i < n; ++i) out.scores[i] += row[i] * row[i];
    }
  } else {
    Matrix y = linalg::solve_spd(c, linalg::transpose(features.vectors));
    for (std::size_t i = 0; i < n; ++i) {
      const double* phi = features.vectors.row(i);
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += phi[k] * y(k, i);
      out.scores[i] = s;
    }
  }
  validate_scores(out.scores);
  return out;
}

LeverageScores auto_scores(const featmap::FeatureBatch& features,
                           double gamma) {
  if (features.n() > features.dim()) return primal_scores(features, gamma);
  Matrix gram = linalg::matmul_nt(features.vectors, features.vectors);
  return dual_scores(gram, gamma);
}

SamplingDistribution normalize(const LeverageScores& scores) {
  if (scores.n() == 0)
    fail(ErrorCode::invalid_argument, "normalize: empty score vector");
  double total = 0.0;
  for (double v : scores.scores) {
    if (!std::isfinite(v)) fail(ErrorCode::numeric, "normalize: non-finite score");
    if (!(v > 0.0)) fail(ErrorCode::numeric, "normalize: scores must be positive");
    total += v;
  }
  SamplingDistribution dist;
  dist.probs.resize(scores.n());
  for (std::size_t i = 0; i < scores.n(); ++i)
    dist.probs[i] = scores.scores[i] / total;
  return dist;
}

std::size_t jl_min_dim(double eps, std::size_t b) {
  if (!(eps > 0.0 && eps < 1.0))
    fail(ErrorCode::invalid_argument, "jl_min_dim: eps must be in (0, 1)");
  if (b < 2) fail(ErrorCode::invalid_argument, "jl_min_dim: need at least 2 points");
  const double denom = eps * eps / 2.0 - eps * eps * eps / 3.0;
  return static_cast<std::size_t>(
      std::ceil(4.0 / denom * std::log(static_cast<double>(b))));
}

SketchMatrix draw_sketch(std::size_t source_dim, std::size_t target_dim,
                         Rng& rng) {
  if (target_dim < 1)
    fail(ErrorCode::invalid_argument, "draw_sketch: target dimension must be >= 1");
  SketchMatrix s;
  s.entries = Matrix(source_dim, target_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
  for (double& v : s.entries.data) v = rng.normal() * scale;
  return s;
}

featmap::FeatureBatch sketch_features(const featmap::FeatureBatch& features,
                                      const SketchMatrix& sketch) {
  if (features.dim() != sketch.source_dim())
    fail(ErrorCode::dimension_mismatch, "sketch_features: dimensions disagree");
  return featmap::FeatureBatch{linalg::matmul(features.vectors, sketch.entries)};
}

std::vector<std::size_t> sample_batch(const SamplingDistribution& dist,
                                      std::size_t size, Rng& rng) {
  if (dist.n() == 0) fail(ErrorCode::invalid_argument, "sample_batch: empty distribution");
  if (size < 1) fail(ErrorCode::invalid_argument, "sample_batch: size must be >= 1");

  std::vector<double> cum(dist.n());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.n(); ++i) {
    acc += dist.probs[i];
    cum[i] = acc;
  }
  cum.back() = std::max(cum.back(), 1.0);

  std::vector<std::size_t> picks(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double u = rng.uniform01();
    picks[i] = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (picks[i] >= dist.n()) picks[i] = dist.n() - 1;
  }
  return picks;
}

std::vector<std::size_t> sample_batch(const SamplingDistribution& dist,
                                      std::size_t size, std::uint64_t seed) {
  Rng rng(seed);
  return sample_batch(dist, size, rng);
}

std::vector<std::size_t> two_stage_sample(const Matrix& points,
                                          const nn::Mlp& disc,
                                          const TwoStageOptions& options,
                                          Rng& rng) {
  if (options.multiplier < 1)
    fail(ErrorCode::invalid_argument, "two_stage_sample: multiplier must be >= 1");
  const std::size_t n = points.rows;
  const std::size_t pool_size =
      std::min(n, options.batch_size * options.multiplier);
  if (pool_size < options.batch_size)
    fail(ErrorCode::invalid_argument,
         "two_stage_sample: dataset smaller than the requested batch");

  const std::vector<std::size_t> pool_idx =
      sample_without_replacement(n, pool_size, rng);

  Matrix pool(pool_size, points.cols);
  for (std::size_t i = 0; i < pool_size; ++i) {
    const double* src = points.row(pool_idx[i]);
    double* dst = pool.row(i);
    for (std::size_t d = 0; d < points.cols; ++d) dst[d] = src[d];
  }

  featmap::FeatureBatch features =
      featmap::extract_discriminator_features(disc, pool);
  if (options.sketch_dim > 0 &&
      static_cast<std::size_t>(options.sketch_dim) < features.dim()) {
    const SketchMatrix sketch = draw_sketch(
        features.dim(), static_cast<std::size_t>(options.sketch_dim), rng);
    features = sketch_features(features, sketch);
  }

  const LeverageScores scores = auto_scores(features, options.gamma);
  const SamplingDistribution dist = normalize(scores);
  const std::vector<std::size_t> picks =
      sample_batch(dist, options.batch_size, rng);

  std::vector<std::size_t> global(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) global[i] = pool_idx[picks[i]];
  return global;
}

void save_scores_csv(const LeverageScores& scores,
                     const SamplingDistribution& dist,
                     const std::string& path) {
  if (scores.n() != dist.n())
    fail(ErrorCode::dimension_mismatch, "save_scores_csv: lengths disagree");
  std::ostringstream out;
  out << "index,score,prob\n";
  for (std::size_t i = 0; i < scores.n(); ++i)
    out << i << "," << io::format_double(scores.scores[i]) << ","
        << io::format_double(dist.probs[i]) << "\n";
  io::write_file_atomic(path, out.str());
}

void load_scores_csv(const std::string& path, LeverageScores& scores,
                     SamplingDistribution& dist) {
  const std::vector<std::string> lines = io::split_lines(io::read_file(path));
  scores.scores.clear();
  dist.probs.clear();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = io::split_csv_row(lines[li]);
    if (fields.size() != 3)
      fail(ErrorCode::parse, "line " + std::to_string(li + 1) + ": expected 3 fields");
    scores.scores.push_back(io::parse_double(fields[1], li + 1));
    dist.probs.push_back(io::parse_double(fields[2], li + 1));
  }
}

}  // namespace rlsgan::rls
