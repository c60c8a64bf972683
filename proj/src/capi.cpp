#include "rlsgan.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "rlsgan/error.hpp"
#include "rlsgan/eval.hpp"
#include "rlsgan/io.hpp"
#include "rlsgan/featmap.hpp"
#include "rlsgan/gan.hpp"
#include "rlsgan/mwu.hpp"
#include "rlsgan/rls.hpp"
#include "rlsgan/svg.hpp"
#include "rlsgan/synthdata.hpp"

using namespace rlsgan;

struct rg_dataset {
  synth::Dataset data;
};

struct rg_scores {
  rls::LeverageScores scores;
  rls::SamplingDistribution dist;
};

struct rg_model {
  nn::Mlp generator;
  nn::Mlp discriminator;
  std::size_t latent_dim = 25;
};

struct rg_mixture {
  mwu::MwuState state;
};

namespace {

thread_local std::string g_last_error;

rg_status status_from_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return RG_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return RG_ERR_DIMENSION;
    case ErrorCode::numeric: return RG_ERR_NUMERIC;
    case ErrorCode::io: return RG_ERR_IO;
    case ErrorCode::parse: return RG_ERR_PARSE;
    case ErrorCode::divergence: return RG_ERR_DIVERGENCE;
  }
  return RG_ERR_UNKNOWN;
}

template <typename Fn>
rg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RG_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return RG_ERR_UNKNOWN;
  }
}

rg_status invalid(const char* message) {
  g_last_error = message;
  return RG_ERR_INVALID_ARGUMENT;
}

featmap::FeatureMapSpec to_core_spec(const rg_feature_spec& spec) {
  featmap::FeatureMapSpec core;
  switch (spec.kind) {
    case RG_FEATURES_GAUSSIAN_KERNEL:
      core.kind = featmap::FeatureKind::implicit_gaussian;
      break;
    case RG_FEATURES_EXTERNAL_FILE:
      core.kind = featmap::FeatureKind::external_features;
      break;
    case RG_FEATURES_DISCRIMINATOR:
      core.kind = featmap::FeatureKind::discriminator_layer;
      break;
    default:
      fail(ErrorCode::invalid_argument, "unknown feature kind");
  }
  core.sigma = spec.sigma;
  if (spec.features_path) core.path = spec.features_path;
  core.file_has_header = spec.file_has_header != 0;
  core.sketch_dim = spec.sketch_dim;
  return core;
}

// Leverage scores of a dataset under a fixed feature map; the
// discriminator kind reads a checkpoint and uses its hidden layer.
rls::LeverageScores fixed_map_scores(const synth::Dataset& data,
                                     const rg_feature_spec& spec,
                                     double gamma) {
  const featmap::FeatureMapSpec core = to_core_spec(spec);
  core.validate();
  switch (core.kind) {
    case featmap::FeatureKind::implicit_gaussian: {
      const linalg::Matrix kernel =
          featmap::gaussian_kernel_matrix(data.points, core.sigma);
      return rls::dual_scores(kernel, gamma);
    }
    case featmap::FeatureKind::external_features: {
      featmap::FeatureBatch batch =
          featmap::load_external_features(core.path, core.file_has_header);
      if (batch.n() != data.size())
        fail(ErrorCode::dimension_mismatch,
             "feature file row count disagrees with dataset size");
      if (core.sketch_dim > 0) batch = featmap::pca_reduce(batch, core.sketch_dim);
      return rls::auto_scores(batch, gamma);
    }
    case featmap::FeatureKind::discriminator_layer: {
      if (!spec.checkpoint_path)
        fail(ErrorCode::invalid_argument,
             "discriminator feature map needs a checkpoint path");
      const nn::Mlp disc = nn::load_checkpoint(spec.checkpoint_path);
      const featmap::FeatureBatch batch =
          featmap::extract_discriminator_features(disc, data.points);
      return rls::auto_scores(batch, gamma);
    }
  }
  fail(ErrorCode::invalid_argument, "unknown feature kind");
}

gan::TrainConfig to_core_config(const synth::Dataset& data,
                                const rg_train_config& config) {
  gan::TrainConfig core;
  core.iterations = config.iterations;
  core.batch_size = static_cast<std::size_t>(config.batch_size);
  core.gamma = config.gamma;
  core.sketch_dim = config.sketch_dim;
  core.multiplier = static_cast<std::size_t>(config.multiplier);
  core.bures_weight = config.bures_weight;
  core.seed = config.seed;
  core.latent_dim = static_cast<std::size_t>(config.latent_dim);
  core.lr = config.lr;
  core.beta1 = config.beta1;
  core.beta2 = config.beta2;
  core.eval_every = config.eval_every;
  core.eval_samples = static_cast<std::size_t>(config.eval_samples);
  switch (config.sampler) {
    case RG_SAMPLER_UNIFORM:
      core.sampler = gan::SamplerKind::uniform;
      break;
    case RG_SAMPLER_RLS_FIXED: {
      core.sampler = gan::SamplerKind::fixed_probs;
      const rls::LeverageScores scores =
          fixed_map_scores(data, config.fixed_features, config.gamma);
      core.fixed_probs = rls::normalize(scores).probs;
      break;
    }
    case RG_SAMPLER_RLS_DISCRIMINATOR:
      core.sampler = gan::SamplerKind::two_stage_discriminator;
      break;
    default:
      fail(ErrorCode::invalid_argument, "unknown sampler kind");
  }
  return core;
}

}  // namespace

extern "C" {

const char* rg_version(void) { return "1.0.0"; }

const char* rg_last_error(void) { return g_last_error.c_str(); }

const char* rg_status_name(rg_status status) {
  switch (status) {
    case RG_OK: return "ok";
    case RG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RG_ERR_DIMENSION: return "dimension mismatch";
    case RG_ERR_NUMERIC: return "numeric error";
    case RG_ERR_IO: return "io error";
    case RG_ERR_PARSE: return "parse error";
    case RG_ERR_DIVERGENCE: return "training divergence";
    case RG_ERR_UNKNOWN: return "unknown error";
  }
  return "unknown error";
}

rg_status rg_dataset_generate(const char* kind, int64_t n, uint64_t seed,
                              rg_dataset** out) {
  if (!kind || !out) return invalid("rg_dataset_generate: null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_dataset>();
    handle->data = synth::make_by_name(kind, static_cast<std::size_t>(n), seed);
    *out = handle.release();
  });
}

rg_status rg_dataset_load_csv(const char* path, rg_dataset** out) {
  if (!path || !out) return invalid("rg_dataset_load_csv: null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_dataset>();
    handle->data = synth::load_csv(path);
    *out = handle.release();
  });
}

rg_status rg_dataset_save_csv(const rg_dataset* data, const char* path) {
  if (!data || !path) return invalid("rg_dataset_save_csv: null argument");
  return guarded([&] { synth::save_csv(data->data, path); });
}

int64_t rg_dataset_size(const rg_dataset* data) {
  return data ? static_cast<int64_t>(data->data.size()) : 0;
}

int32_t rg_dataset_dim(const rg_dataset* data) {
  return data ? static_cast<int32_t>(data->data.dim()) : 0;
}

int32_t rg_dataset_n_modes(const rg_dataset* data) {
  if (!data || !data->data.has_spec) return 0;
  return static_cast<int32_t>(data->data.spec.n_modes());
}

rg_status rg_dataset_copy_points(const rg_dataset* data, double* buffer,
                                 int64_t buffer_len) {
  if (!data || !buffer) return invalid("rg_dataset_copy_points: null argument");
  return guarded([&] {
    const std::size_t need = data->data.points.data.size();
    if (static_cast<std::size_t>(buffer_len) < need)
      fail(ErrorCode::invalid_argument, "rg_dataset_copy_points: buffer too small");
    std::memcpy(buffer, data->data.points.data.data(), need * sizeof(double));
  });
}

void rg_dataset_free(rg_dataset* data) { delete data; }

void rg_feature_spec_defaults(rg_feature_spec* spec) {
  if (!spec) return;
  spec->kind = RG_FEATURES_GAUSSIAN_KERNEL;
  spec->sigma = 0.15;
  spec->features_path = nullptr;
  spec->file_has_header = 0;
  spec->checkpoint_path = nullptr;
  spec->sketch_dim = 0;
}

rg_status rg_rls_compute(const rg_dataset* data,
                         const rg_feature_spec* features, double gamma,
                         rg_scores** out) {
  if (!data || !features || !out) return invalid("rg_rls_compute: null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_scores>();
    handle->scores = fixed_map_scores(data->data, *features, gamma);
    handle->dist = rls::normalize(handle->scores);
    *out = handle.release();
  });
}

int64_t rg_scores_size(const rg_scores* scores) {
  return scores ? static_cast<int64_t>(scores->scores.n()) : 0;
}

rg_status rg_scores_copy(const rg_scores* scores, double* score_buffer,
                         double* prob_buffer) {
  if (!scores) return invalid("rg_scores_copy: null scores");
  return guarded([&] {
    const std::size_t n = scores->scores.n();
    if (score_buffer)
      std::memcpy(score_buffer, scores->scores.scores.data(), n * sizeof(double));
    if (prob_buffer)
      std::memcpy(prob_buffer, scores->dist.probs.data(), n * sizeof(double));
  });
}

rg_status rg_scores_save_csv(const rg_scores* scores, const char* path) {
  if (!scores || !path) return invalid("rg_scores_save_csv: null argument");
  return guarded([&] { rls::save_scores_csv(scores->scores, scores->dist, path); });
}

void rg_scores_free(rg_scores* scores) { delete scores; }

void rg_train_config_defaults(rg_train_config* config) {
  if (!config) return;
  config->iterations = 30000;
  config->batch_size = 64;
  config->sampler = RG_SAMPLER_UNIFORM;
  rg_feature_spec_defaults(&config->fixed_features);
  config->gamma = 1e-3;
  config->sketch_dim = 0;
  config->multiplier = 20;
  config->bures_weight = 0.0;
  config->bures_eps = 1e-12;
  config->seed = 1;
  config->latent_dim = 25;
  config->lr = 1e-3;
  config->beta1 = 0.5;
  config->beta2 = 0.999;
  config->eval_every = 1000;
  config->eval_samples = 10000;
}

rg_status rg_train(const rg_dataset* data, const rg_train_config* config,
                   const char* metrics_csv_path, rg_model** out) {
  if (!data || !config || !out) return invalid("rg_train: null argument");
  return guarded([&] {
    gan::TrainConfig core = to_core_config(data->data, *config);
    core.bures_eps = config->bures_eps;
    gan::TrainResult result = gan::train(data->data, core);
    if (metrics_csv_path) gan::save_trace_csv(result.trace, metrics_csv_path);
    auto handle = std::make_unique<rg_model>();
    handle->generator = std::move(result.generator);
    handle->discriminator = std::move(result.discriminator);
    handle->latent_dim = core.latent_dim;
    *out = handle.release();
  });
}

rg_status rg_model_sample(const rg_model* model, int64_t count, uint64_t seed,
                          double* buffer, int64_t buffer_len) {
  if (!model || !buffer) return invalid("rg_model_sample: null argument");
  return guarded([&] {
    const linalg::Matrix samples = gan::sample_generator(
        model->generator, static_cast<std::size_t>(count), model->latent_dim,
        seed);
    if (static_cast<std::size_t>(buffer_len) < samples.data.size())
      fail(ErrorCode::invalid_argument, "rg_model_sample: buffer too small");
    std::memcpy(buffer, samples.data.data(), samples.data.size() * sizeof(double));
  });
}

rg_status rg_model_save(const rg_model* model, const char* generator_path,
                        const char* discriminator_path) {
  if (!model || !generator_path || !discriminator_path)
    return invalid("rg_model_save: null argument");
  return guarded([&] {
    nn::save_checkpoint(model->generator, generator_path);
    nn::save_checkpoint(model->discriminator, discriminator_path);
  });
}

rg_status rg_model_load(const char* generator_path,
                        const char* discriminator_path, int32_t latent_dim,
                        rg_model** out) {
  if (!generator_path || !discriminator_path || !out)
    return invalid("rg_model_load: null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_model>();
    handle->generator = nn::load_checkpoint(generator_path);
    handle->discriminator = nn::load_checkpoint(discriminator_path);
    handle->latent_dim = latent_dim > 0
                             ? static_cast<std::size_t>(latent_dim)
                             : handle->generator.input_dim();
    *out = handle.release();
  });
}

void rg_model_free(rg_model* model) { delete model; }

void rg_mwu_config_defaults(rg_mwu_config* config) {
  if (!config) return;
  config->rounds = 15;
  config->delta = 0.25;
  config->kde_bandwidth = 0.05;
  config->kde_samples = 10000;
  config->rls_init = 0;
  rg_feature_spec_defaults(&config->mwu_features);
  config->mwu_gamma = 1e-3;
}

rg_status rg_mwu_train(const rg_dataset* data,
                       const rg_train_config* train_config,
                       const rg_mwu_config* mwu_config, rg_mixture** out) {
  if (!data || !train_config || !mwu_config || !out)
    return invalid("rg_mwu_train: null argument");
  return guarded([&] {
    gan::TrainConfig core = to_core_config(data->data, *train_config);
    core.bures_eps = train_config->bures_eps;
    mwu::MwuConfig mc;
    mc.rounds = mwu_config->rounds;
    mc.delta = mwu_config->delta;
    mc.kde_bandwidth = mwu_config->kde_bandwidth;
    mc.kde_samples = static_cast<std::size_t>(mwu_config->kde_samples);

    std::vector<double> init_probs;
    const std::vector<double>* init = nullptr;
    if (mwu_config->rls_init) {
      const rls::LeverageScores scores = fixed_map_scores(
          data->data, mwu_config->mwu_features, mwu_config->mwu_gamma);
      init_probs = rls::normalize(scores).probs;
      init = &init_probs;
    }

    auto handle = std::make_unique<rg_mixture>();
    handle->state = mwu::run(data->data, core, mc, init);
    *out = handle.release();
  });
}

rg_status rg_mixture_sample(const rg_mixture* mixture, int64_t count,
                            uint64_t seed, double* buffer,
                            int64_t buffer_len) {
  if (!mixture || !buffer) return invalid("rg_mixture_sample: null argument");
  return guarded([&] {
    const linalg::Matrix samples =
        mwu::mixture_sample(mixture->state, static_cast<std::size_t>(count), seed);
    if (static_cast<std::size_t>(buffer_len) < samples.data.size())
      fail(ErrorCode::invalid_argument, "rg_mixture_sample: buffer too small");
    std::memcpy(buffer, samples.data.data(), samples.data.size() * sizeof(double));
  });
}

rg_status rg_mixture_save(const rg_mixture* mixture,
                          const char* manifest_path) {
  if (!mixture || !manifest_path) return invalid("rg_mixture_save: null argument");
  return guarded([&] { mwu::save_mixture(mixture->state, manifest_path); });
}

rg_status rg_mixture_load(const char* manifest_path, rg_mixture** out) {
  if (!manifest_path || !out) return invalid("rg_mixture_load: null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_mixture>();
    handle->state = mwu::load_mixture(manifest_path);
    *out = handle.release();
  });
}

void rg_mixture_free(rg_mixture* mixture) { delete mixture; }

rg_status rg_evaluate(const char* dataset_kind, const double* samples,
                      int64_t n, rg_eval_report* out) {
  if (!dataset_kind || !samples || !out) return invalid("rg_evaluate: null argument");
  return guarded([&] {
    const synth::MixtureSpec spec = synth::spec_by_name(dataset_kind);
    if (spec.n_modes() > RG_MAX_MODES)
      fail(ErrorCode::invalid_argument, "rg_evaluate: too many modes for report");
    linalg::Matrix m(static_cast<std::size_t>(n), spec.dim());
    std::memcpy(m.data.data(), samples, m.data.size() * sizeof(double));
    const eval::EvalReport report = eval::evaluate(m, spec);
    out->n_samples = static_cast<int64_t>(report.n_samples);
    out->n_modes = static_cast<int32_t>(report.per_mode_counts.size());
    out->modes_covered = report.modes_covered;
    out->hq_fraction = report.hq_fraction;
    out->kl_to_uniform = report.kl_to_uniform;
    for (int32_t i = 0; i < RG_MAX_MODES; ++i)
      out->per_mode_counts[i] =
          i < out->n_modes ? report.per_mode_counts[i] : 0;
  });
}

rg_status rg_eval_report_save_csv(const rg_eval_report* report,
                                  const char* path) {
  if (!report || !path) return invalid("rg_eval_report_save_csv: null argument");
  return guarded([&] {
    eval::EvalReport core;
    core.n_samples = static_cast<std::size_t>(report->n_samples);
    core.modes_covered = report->modes_covered;
    core.hq_fraction = report->hq_fraction;
    core.kl_to_uniform = report->kl_to_uniform;
    core.per_mode_counts.assign(report->per_mode_counts,
                                report->per_mode_counts + report->n_modes);
    io::write_file_atomic(path, core.csv_header() + "\n" + core.csv_row() + "\n");
  });
}

rg_status rg_plot_scatter_svg(const char* path, const double* a_xy,
                              int64_t a_n, const char* a_color,
                              const double* b_xy, int64_t b_n,
                              const char* b_color, int32_t dim) {
  if (!path || dim < 1 || dim > 2) return invalid("rg_plot_scatter_svg: bad arguments");
  return guarded([&] {
    std::vector<svg::Series> series;
    auto push = [&](const double* xy, int64_t n, const char* color,
                    const char* fallback) {
      svg::Series s;
      s.points = linalg::Matrix(static_cast<std::size_t>(n), dim);
      if (n > 0 && xy)
        std::memcpy(s.points.data.data(), xy, s.points.data.size() * sizeof(double));
      s.color = color ? color : fallback;
      series.push_back(std::move(s));
    };
    push(a_xy, a_n, a_color, "#2ca02c");
    push(b_xy, b_n, b_color, "#1f77b4");
    svg::write_scatter(path, series);
  });
}

rg_status rg_plot_scores_svg(const char* path, const double* points_xy,
                             const double* scores, int64_t n, int32_t dim) {
  if (!path || !points_xy || !scores || dim < 1 || dim > 2)
    return invalid("rg_plot_scores_svg: bad arguments");
  return guarded([&] {
    linalg::Matrix pts(static_cast<std::size_t>(n), dim);
    std::memcpy(pts.data.data(), points_xy, pts.data.size() * sizeof(double));
    std::vector<double> sc(scores, scores + n);
    svg::write_score_scatter(path, pts, sc);
  });
}

}  // extern "C"
