// Exercises the shared-library surface only: opaque handles, error codes,
// and the thread-local error message.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "rlsgan.h"

TEST_CASE("version and status names") {
  CHECK(std::string(rg_version()) == "1.0.0");
  CHECK(std::string(rg_status_name(RG_OK)) == "ok");
  CHECK(std::string(rg_status_name(RG_ERR_PARSE)) == "parse error");
}

TEST_CASE("dataset lifecycle through the C surface") {
  rg_dataset* data = nullptr;
  REQUIRE(rg_dataset_generate("ring", 500, 7, &data) == RG_OK);
  CHECK(rg_dataset_size(data) == 500);
  CHECK(rg_dataset_dim(data) == 2);
  CHECK(rg_dataset_n_modes(data) == 8);

  std::vector<double> buffer(1000);
  CHECK(rg_dataset_copy_points(data, buffer.data(), 1000) == RG_OK);
  CHECK(rg_dataset_copy_points(data, buffer.data(), 10) ==
        RG_ERR_INVALID_ARGUMENT);

  const char* path = "/tmp/rlsgan_capi_ring.csv";
  CHECK(rg_dataset_save_csv(data, path) == RG_OK);
  rg_dataset* loaded = nullptr;
  CHECK(rg_dataset_load_csv(path, &loaded) == RG_OK);
  CHECK(rg_dataset_size(loaded) == 500);
  rg_dataset_free(loaded);
  rg_dataset_free(data);
  std::remove(path);
}

TEST_CASE("error codes and messages surface through the boundary") {
  rg_dataset* data = nullptr;
  CHECK(rg_dataset_generate("nonsense", 10, 1, &data) ==
        RG_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rg_last_error()).find("nonsense") != std::string::npos);
  CHECK(rg_dataset_load_csv("/definitely/not/here.csv", &data) == RG_ERR_IO);
  CHECK(rg_dataset_generate(nullptr, 10, 1, &data) == RG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("leverage scores through the C surface") {
  rg_dataset* data = nullptr;
  REQUIRE(rg_dataset_generate("ring", 400, 3, &data) == RG_OK);

  rg_feature_spec spec;
  rg_feature_spec_defaults(&spec);
  CHECK(spec.kind == RG_FEATURES_GAUSSIAN_KERNEL);
  CHECK(spec.sigma == 0.15);

  rg_scores* scores = nullptr;
  REQUIRE(rg_rls_compute(data, &spec, 1e-3, &scores) == RG_OK);
  REQUIRE(rg_scores_size(scores) == 400);

  std::vector<double> s(400), p(400);
  CHECK(rg_scores_copy(scores, s.data(), p.data()) == RG_OK);
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  for (double v : s) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }

  // Invalid gamma comes back as a typed error.
  rg_scores* bad = nullptr;
  CHECK(rg_rls_compute(data, &spec, 0.0, &bad) == RG_ERR_INVALID_ARGUMENT);

  rg_scores_free(scores);
  rg_dataset_free(data);
}

TEST_CASE("training, sampling, checkpoints, and evaluation") {
  rg_dataset* data = nullptr;
  REQUIRE(rg_dataset_generate("ring", 1000, 11, &data) == RG_OK);

  rg_train_config cfg;
  rg_train_config_defaults(&cfg);
  CHECK(cfg.iterations == 30000);
  CHECK(cfg.batch_size == 64);
  CHECK(cfg.beta1 == 0.5);
  cfg.iterations = 50;
  cfg.batch_size = 16;
  cfg.eval_samples = 500;
  cfg.eval_every = 25;

  const char* metrics = "/tmp/rlsgan_capi_metrics.csv";
  rg_model* model = nullptr;
  REQUIRE(rg_train(data, &cfg, metrics, &model) == RG_OK);

  std::vector<double> samples(500 * 2);
  REQUIRE(rg_model_sample(model, 500, 17, samples.data(),
                          (int64_t)samples.size()) == RG_OK);

  rg_eval_report report;
  REQUIRE(rg_evaluate("ring", samples.data(), 500, &report) == RG_OK);
  CHECK(report.n_samples == 500);
  CHECK(report.n_modes == 8);
  CHECK(report.modes_covered >= 0);
  CHECK(report.modes_covered <= 8);

  const char* gen_path = "/tmp/rlsgan_capi_gen.txt";
  const char* disc_path = "/tmp/rlsgan_capi_disc.txt";
  REQUIRE(rg_model_save(model, gen_path, disc_path) == RG_OK);
  rg_model* reloaded = nullptr;
  REQUIRE(rg_model_load(gen_path, disc_path, cfg.latent_dim, &reloaded) == RG_OK);

  std::vector<double> samples2(500 * 2);
  REQUIRE(rg_model_sample(reloaded, 500, 17, samples2.data(),
                          (int64_t)samples2.size()) == RG_OK);
  CHECK(std::memcmp(samples.data(), samples2.data(),
                    samples.size() * sizeof(double)) == 0);

  rg_model_free(reloaded);
  rg_model_free(model);
  rg_dataset_free(data);
  std::remove(metrics);
  std::remove(gen_path);
  std::remove(disc_path);
}

TEST_CASE("two-stage sampler and bures weight through the C surface") {
  rg_dataset* data = nullptr;
  REQUIRE(rg_dataset_generate("ring", 800, 5, &data) == RG_OK);
  rg_train_config cfg;
  rg_train_config_defaults(&cfg);
  cfg.iterations = 20;
  cfg.batch_size = 16;
  cfg.multiplier = 4;
  cfg.sampler = RG_SAMPLER_RLS_DISCRIMINATOR;
  cfg.bures_weight = 1.0;
  cfg.eval_samples = 0;
  rg_model* model = nullptr;
  REQUIRE(rg_train(data, &cfg, nullptr, &model) == RG_OK);
  rg_model_free(model);
  rg_dataset_free(data);
}

TEST_CASE("mwu mixture through the C surface") {
  rg_dataset* data = nullptr;
  REQUIRE(rg_dataset_generate("ring", 200, 9, &data) == RG_OK);

  rg_train_config cfg;
  rg_train_config_defaults(&cfg);
  cfg.iterations = 20;
  cfg.batch_size = 8;
  cfg.eval_samples = 0;

  rg_mwu_config mc;
  rg_mwu_config_defaults(&mc);
  CHECK(mc.delta == 0.25);
  CHECK(mc.rounds == 15);
  mc.rounds = 2;
  mc.kde_samples = 300;
  mc.rls_init = 1;
  mc.mwu_features.kind = RG_FEATURES_GAUSSIAN_KERNEL;
  mc.mwu_features.sigma = 0.15;
  mc.mwu_gamma = 1e-3;

  rg_mixture* mixture = nullptr;
  REQUIRE(rg_mwu_train(data, &cfg, &mc, &mixture) == RG_OK);

  std::vector<double> samples(100 * 2);
  REQUIRE(rg_mixture_sample(mixture, 100, 13, samples.data(),
                            (int64_t)samples.size()) == RG_OK);

  const char* manifest = "/tmp/rlsgan_capi_mixture/mixture.txt";
  std::remove(manifest);
  system("mkdir -p /tmp/rlsgan_capi_mixture");
  REQUIRE(rg_mixture_save(mixture, manifest) == RG_OK);
  rg_mixture* loaded = nullptr;
  REQUIRE(rg_mixture_load(manifest, &loaded) == RG_OK);
  std::vector<double> samples2(100 * 2);
  REQUIRE(rg_mixture_sample(loaded, 100, 13, samples2.data(),
                            (int64_t)samples2.size()) == RG_OK);
  CHECK(std::memcmp(samples.data(), samples2.data(),
                    samples.size() * sizeof(double)) == 0);

  rg_mixture_free(loaded);
  rg_mixture_free(mixture);
  rg_dataset_free(data);
  system("rm -rf /tmp/rlsgan_capi_mixture");
}

TEST_CASE("plots are byte-stable") {
  std::vector<double> a = {0.0, 0.0, 1.0, 1.0, -1.0, 0.5};
  std::vector<double> b = {0.5, 0.5, -0.5, -0.25};
  const char* p1 = "/tmp/rlsgan_capi_plot1.svg";
  const char* p2 = "/tmp/rlsgan_capi_plot2.svg";
  REQUIRE(rg_plot_scatter_svg(p1, a.data(), 3, "#2ca02c", b.data(), 2,
                              "#1f77b4", 2) == RG_OK);
  REQUIRE(rg_plot_scatter_svg(p2, a.data(), 3, "#2ca02c", b.data(), 2,
                              "#1f77b4", 2) == RG_OK);

  auto slurp = [](const char* path) {
    FILE* f = std::fopen(path, "rb");
    REQUIRE(f != nullptr);
    std::string content;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0)
      content.append(buf, got);
    std::fclose(f);
    return content;
  };
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1).find("<svg") != std::string::npos);
  std::remove(p1);
  std::remove(p2);
}
