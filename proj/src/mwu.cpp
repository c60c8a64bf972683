#include "rlsgan/mwu.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"
#include "rlsgan/rls.hpp"
#include "rlsgan/rng.hpp"

namespace rlsgan::mwu {

std::vector<double> MwuState::distribution() const {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights[i] / total;
  return p;
}

MwuState mwu_init(std::size_t n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "mwu_init: n must be >= 1");
  MwuState state;
  state.weights.assign(n, 1.0 / static_cast<double>(n));
  return state;
}

MwuState mwu_init(const std::vector<double>& init_probs) {
  if (init_probs.empty())
    fail(ErrorCode::invalid_argument, "mwu_init: empty initial distribution");
  for (double p : init_probs)
    if (!(p > 0.0) || !std::isfinite(p))
      fail(ErrorCode::invalid_argument, "mwu_init: initial weights must be positive");
  MwuState state;
  state.weights = init_probs;
  return state;
}

std::vector<double> estimate_density(const Matrix& samples,
                                     const Matrix& query_points,
                                     double bandwidth) {
  if (samples.rows < 1)
    fail(ErrorCode::invalid_argument, "estimate_density: need at least one sample");
  if (!(bandwidth > 0.0))
    fail(ErrorCode::invalid_argument, "estimate_density: bandwidth must be > 0");
  if (samples.cols != query_points.cols)
    fail(ErrorCode::dimension_mismatch, "estimate_density: dimensions disagree");

  const std::size_t d = samples.cols;
  const double h2 = bandwidth * bandwidth;
  const double norm = std::pow(2.0 * std::numbers::pi * h2,
                               -0.5 * static_cast<double>(d)) /
                      static_cast<double>(samples.rows);
  // exp underflows to exactly zero past this squared distance.
  const double cutoff = 1490.0 * h2;

  std::vector<double> density(query_points.rows, 0.0);
  for (std::size_t q = 0; q < query_points.rows; ++q) {
    const double* x = query_points.row(q);
    double acc = 0.0;
    for (std::size_t s = 0; s < samples.rows; ++s) {
      const double* y = samples.row(s);
      double dist2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = x[k] - y[k];
        dist2 += diff * diff;
      }
      if (dist2 > cutoff) continue;
      acc += std::exp(-dist2 / (2.0 * h2));
    }
    density[q] = norm * acc;
  }
  return density;
}

void mwu_round(MwuState& state, const synth::Dataset& data,
               const gan::TrainConfig& train_config, const MwuConfig& config,
               std::uint64_t round_seed) {
  if (state.n() != data.size())
    fail(ErrorCode::dimension_mismatch, "mwu_round: state size disagrees with dataset");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    fail(ErrorCode::invalid_argument, "mwu_round: delta must be in (0, 1)");

  const std::vector<double> p = state.distribution();

  gan::TrainConfig cfg = train_config;
  cfg.sampler = gan::SamplerKind::fixed_probs;
  cfg.fixed_probs = p;
  cfg.seed = round_seed;
  cfg.trace_eval = false;
  gan::TrainResult trained = gan::train(data, cfg);

  const Matrix generated =
      gan::sample_generator(trained.generator, config.kde_samples,
                            cfg.latent_dim, mix_seed(round_seed, 0x4b6465));
  const std::vector<double> density =
      estimate_density(generated, data.points, config.kde_bandwidth);

  for (std::size_t i = 0; i < state.weights.size(); ++i)
    if (density[i] < config.delta * p[i]) state.weights[i] *= 2.0;

  state.latent_dim = cfg.latent_dim;
  state.generators.push_back(std::move(trained.generator));
}

MwuState run(const synth::Dataset& data, const gan::TrainConfig& train_config,
             const MwuConfig& config, const std::vector<double>* init_probs) {
  if (config.rounds < 1)
    fail(ErrorCode::invalid_argument, "mwu run: rounds must be >= 1");
  MwuState state =
      init_probs ? mwu_init(*init_probs) : mwu_init(data.size());
  for (int r = 0; r < config.rounds; ++r)
    mwu_round(state, data, train_config, config,
              mix_seed(train_config.seed, static_cast<std::uint64_t>(r)));
  return state;
}

Matrix mixture_sample(const MwuState& state, std::size_t count,
                      std::uint64_t seed) {
  if (state.generators.empty())
    fail(ErrorCode::invalid_argument, "mixture_sample: no trained generators");
  Rng rng(seed);
  const std::size_t out_dim = state.generators.front().output_dim();
  Matrix out(count, out_dim);
  Matrix z(1, state.latent_dim);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t g = rng.index(state.generators.size());
    for (double& v : z.data) v = rng.normal();
    const Matrix y = nn::forward_plain(state.generators[g], z);
    double* dst = out.row(i);
    for (std::size_t d = 0; d < out_dim; ++d) dst[d] = y(0, d);
  }
  return out;
}

namespace {

std::string directory_of(const std::string& path) {
  const std::size_t pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

void save_mixture(const MwuState& state, const std::string& manifest_path) {
  const std::string dir = directory_of(manifest_path);
  std::ostringstream manifest;
  manifest << "rlsgan-mixture 1\n";
  manifest << state.generators.size() << " " << state.latent_dim << "\n";
  for (std::size_t g = 0; g < state.generators.size(); ++g) {
    std::ostringstream name;
    name << "generator_" << g << ".txt";
    nn::save_checkpoint(state.generators[g], dir + "/" + name.str());
    manifest << name.str() << "\n";
  }
  manifest << "weights.csv\n";
  std::ostringstream weights;
  weights << "index,weight,prob\n";
  const std::vector<double> p = state.distribution();
  for (std::size_t i = 0; i < state.weights.size(); ++i)
    weights << i << "," << io::format_double(state.weights[i]) << ","
            << io::format_double(p[i]) << "\n";
  io::write_file_atomic(dir + "/weights.csv", weights.str());
  io::write_file_atomic(manifest_path, manifest.str());
}

MwuState load_mixture(const std::string& manifest_path) {
  const std::string dir = directory_of(manifest_path);
  std::istringstream in(io::read_file(manifest_path));
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "rlsgan-mixture" || version != 1)
    fail(ErrorCode::parse, "not a recognized mixture manifest: " + manifest_path);
  std::size_t count = 0;
  MwuState state;
  in >> count >> state.latent_dim;
  std::string name;
  for (std::size_t g = 0; g < count; ++g) {
    in >> name;
    if (!in) fail(ErrorCode::parse, "truncated mixture manifest: " + manifest_path);
    state.generators.push_back(nn::load_checkpoint(dir + "/" + name));
  }
  in >> name;  // weights file
  rls::LeverageScores scores;
  rls::SamplingDistribution dist;
  rls::load_scores_csv(dir + "/" + name, scores, dist);
  state.weights = scores.scores;
  return state;
}

}  // namespace rlsgan::mwu
