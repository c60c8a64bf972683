/* C API for the rlsgan library: leverage-score biased sampling, GAN and
 * BuresGAN training, the MwuGAN mixture baseline, and the 2D mixture
 * evaluation protocol.
 *
 * All functions return RG_OK (0) on success or a nonzero rg_status;
 * rg_last_error() describes the most recent failure on the calling
 * thread. Objects returned through out-parameters are owned by the
 * caller and released with the matching *_free function.
 */
#ifndef RLSGAN_H
#define RLSGAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RG_API __declspec(dllexport)
#else
#define RG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_INVALID_ARGUMENT = 1,
  RG_ERR_DIMENSION = 2,
  RG_ERR_NUMERIC = 3,
  RG_ERR_IO = 4,
  RG_ERR_PARSE = 5,
  RG_ERR_DIVERGENCE = 6,
  RG_ERR_UNKNOWN = 7
} rg_status;

typedef struct rg_dataset rg_dataset;
typedef struct rg_scores rg_scores;
typedef struct rg_model rg_model;     /* trained generator + discriminator */
typedef struct rg_mixture rg_mixture; /* MwuGAN mixture of generators */

RG_API const char* rg_version(void);
/* Message for the most recent error on this thread; empty on success. */
RG_API const char* rg_last_error(void);
RG_API const char* rg_status_name(rg_status status);

/* ---- datasets -------------------------------------------------------- */

/* kind: "ring", "grid" or "1d-motivating". */
RG_API rg_status rg_dataset_generate(const char* kind, int64_t n,
                                     uint64_t seed, rg_dataset** out);
RG_API rg_status rg_dataset_load_csv(const char* path, rg_dataset** out);
RG_API rg_status rg_dataset_save_csv(const rg_dataset* data, const char* path);
RG_API int64_t rg_dataset_size(const rg_dataset* data);
RG_API int32_t rg_dataset_dim(const rg_dataset* data);
RG_API int32_t rg_dataset_n_modes(const rg_dataset* data);
/* Copies n*dim row-major coordinates; buffer_len is in doubles. */
RG_API rg_status rg_dataset_copy_points(const rg_dataset* data, double* buffer,
                                        int64_t buffer_len);
RG_API void rg_dataset_free(rg_dataset* data);

/* ---- leverage scores -------------------------------------------------- */

typedef enum rg_feature_kind {
  RG_FEATURES_GAUSSIAN_KERNEL = 0,
  RG_FEATURES_EXTERNAL_FILE = 1,
  RG_FEATURES_DISCRIMINATOR = 2
} rg_feature_kind;

typedef struct rg_feature_spec {
  rg_feature_kind kind;
  double sigma;              /* Gaussian kernel bandwidth */
  const char* features_path; /* external feature CSV */
  int32_t file_has_header;
  const char* checkpoint_path; /* discriminator checkpoint */
  int32_t sketch_dim;          /* 0 = none; explicit kinds only */
} rg_feature_spec;

RG_API void rg_feature_spec_defaults(rg_feature_spec* spec);

RG_API rg_status rg_rls_compute(const rg_dataset* data,
                                const rg_feature_spec* features, double gamma,
                                rg_scores** out);
RG_API int64_t rg_scores_size(const rg_scores* scores);
/* Either output pointer may be NULL; buffers hold rg_scores_size doubles. */
RG_API rg_status rg_scores_copy(const rg_scores* scores, double* score_buffer,
                                double* prob_buffer);
RG_API rg_status rg_scores_save_csv(const rg_scores* scores, const char* path);
RG_API void rg_scores_free(rg_scores* scores);

/* ---- training --------------------------------------------------------- */

typedef enum rg_sampler_kind {
  RG_SAMPLER_UNIFORM = 0,
  RG_SAMPLER_RLS_FIXED = 1,        /* scores fixed before training */
  RG_SAMPLER_RLS_DISCRIMINATOR = 2 /* two-stage, recomputed each step */
} rg_sampler_kind;

typedef struct rg_train_config {
  int64_t iterations;
  int32_t batch_size;
  rg_sampler_kind sampler;
  /* feature map for RG_SAMPLER_RLS_FIXED */
  rg_feature_spec fixed_features;
  double gamma;
  int32_t sketch_dim; /* two-stage sampler sketch; 0 = none */
  int32_t multiplier; /* two-stage pool factor */
  double bures_weight;
  double bures_eps;
  uint64_t seed;
  int32_t latent_dim;
  double lr;
  double beta1;
  double beta2;
  int64_t eval_every;
  int64_t eval_samples;
} rg_train_config;

RG_API void rg_train_config_defaults(rg_train_config* config);

/* Trains on the dataset; when metrics_csv_path is non-NULL the per-
 * interval trace (iter, losses, bures, modes, hq) is written there. */
RG_API rg_status rg_train(const rg_dataset* data,
                          const rg_train_config* config,
                          const char* metrics_csv_path, rg_model** out);

RG_API rg_status rg_model_sample(const rg_model* model, int64_t count,
                                 uint64_t seed, double* buffer,
                                 int64_t buffer_len);
RG_API rg_status rg_model_save(const rg_model* model,
                               const char* generator_path,
                               const char* discriminator_path);
RG_API rg_status rg_model_load(const char* generator_path,
                               const char* discriminator_path,
                               int32_t latent_dim, rg_model** out);
RG_API void rg_model_free(rg_model* model);

/* ---- MwuGAN ----------------------------------------------------------- */

typedef struct rg_mwu_config {
  int32_t rounds;
  double delta;
  double kde_bandwidth;
  int64_t kde_samples;
  /* 0: uniform initial weights; 1: normalized leverage scores from
   * mwu_features/mwu_gamma. */
  int32_t rls_init;
  rg_feature_spec mwu_features;
  double mwu_gamma;
} rg_mwu_config;

RG_API void rg_mwu_config_defaults(rg_mwu_config* config);

RG_API rg_status rg_mwu_train(const rg_dataset* data,
                              const rg_train_config* train_config,
                              const rg_mwu_config* mwu_config,
                              rg_mixture** out);
RG_API rg_status rg_mixture_sample(const rg_mixture* mixture, int64_t count,
                                   uint64_t seed, double* buffer,
                                   int64_t buffer_len);
RG_API rg_status rg_mixture_save(const rg_mixture* mixture,
                                 const char* manifest_path);
RG_API rg_status rg_mixture_load(const char* manifest_path, rg_mixture** out);
RG_API void rg_mixture_free(rg_mixture* mixture);

/* ---- evaluation ------------------------------------------------------- */

#define RG_MAX_MODES 32

typedef struct rg_eval_report {
  int64_t n_samples;
  int32_t n_modes;
  int32_t modes_covered;
  double hq_fraction;
  double kl_to_uniform;
  int64_t per_mode_counts[RG_MAX_MODES];
} rg_eval_report;

/* samples: n row-major points of the dataset kind's dimension. */
RG_API rg_status rg_evaluate(const char* dataset_kind, const double* samples,
                             int64_t n, rg_eval_report* out);
RG_API rg_status rg_eval_report_save_csv(const rg_eval_report* report,
                                         const char* path);

/* ---- plotting --------------------------------------------------------- */

/* Two-series scatter (either series may be empty); byte-stable for
 * identical inputs. */
RG_API rg_status rg_plot_scatter_svg(const char* path, const double* a_xy,
                                     int64_t a_n, const char* a_color,
                                     const double* b_xy, int64_t b_n,
                                     const char* b_color, int32_t dim);
RG_API rg_status rg_plot_scores_svg(const char* path, const double* points_xy,
                                    const double* scores, int64_t n,
                                    int32_t dim);

#ifdef __cplusplus
}
#endif

#endif /* RLSGAN_H */
