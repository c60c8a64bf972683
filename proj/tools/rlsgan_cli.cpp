// Experiment driver for the rlsgan shared library. Subcommands: gen-data,
// rls, train, ablate, plot, eval. Everything numerical happens behind the
// C API in rlsgan.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rlsgan.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(rg_status status, const std::string& what) {
  if (status != RG_OK)
    throw RuntimeError(what + ": " + rg_status_name(status) + " (" +
                       rg_last_error() + ")");
}

// ---- experiment configuration ------------------------------------------

struct ExperimentConfig {
  std::string dataset = "ring";
  long n = 50000;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string model = "gan";       // gan | bures-gan | mwu-gan
  std::string sampler = "uniform"; // uniform | rls-fixed-gaussian |
                                   // rls-fixed-features | rls-discriminator
  double gamma = 1e-3;
  double sigma = 0.15;
  int sketch_dim = 0;
  int multiplier = 20;
  double lambda = 1.0;
  double bures_eps = 1e-12;
  long iterations = 30000;
  int batch_size = 64;
  int latent_dim = 25;
  double lr = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.999;
  long eval_every = 1000;
  long eval_samples = 10000;
  std::string features_file;
  bool features_header = false;
  std::string out = "runs";
  int mwu_rounds = 15;
  double delta = 0.25;
  double kde_bandwidth = 0.05;
  long kde_samples = 10000;
  long plot_samples = 2500;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(std::strtoull(item.c_str(), nullptr, 10));
  }
  if (seeds.empty()) throw UsageError("seed list is empty");
  return seeds;
}

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
  auto d = [&] { return std::strtod(value.c_str(), nullptr); };
  auto l = [&] { return std::strtol(value.c_str(), nullptr, 10); };
  if (key == "dataset") cfg.dataset = value;
  else if (key == "n") cfg.n = l();
  else if (key == "seeds") cfg.seeds = parse_seed_list(value);
  else if (key == "model") cfg.model = value;
  else if (key == "sampler") cfg.sampler = value;
  else if (key == "gamma") cfg.gamma = d();
  else if (key == "sigma") cfg.sigma = d();
  else if (key == "sketch_dim") cfg.sketch_dim = static_cast<int>(l());
  else if (key == "multiplier") cfg.multiplier = static_cast<int>(l());
  else if (key == "lambda") cfg.lambda = d();
  else if (key == "bures_eps") cfg.bures_eps = d();
  else if (key == "iterations") cfg.iterations = l();
  else if (key == "batch_size") cfg.batch_size = static_cast<int>(l());
  else if (key == "latent_dim") cfg.latent_dim = static_cast<int>(l());
  else if (key == "lr") cfg.lr = d();
  else if (key == "beta1") cfg.beta1 = d();
  else if (key == "beta2") cfg.beta2 = d();
  else if (key == "eval_every") cfg.eval_every = l();
  else if (key == "eval_samples") cfg.eval_samples = l();
  else if (key == "features_file") cfg.features_file = value;
  else if (key == "features_header") cfg.features_header = l() != 0;
  else if (key == "out") cfg.out = value;
  else if (key == "mwu_rounds") cfg.mwu_rounds = static_cast<int>(l());
  else if (key == "delta") cfg.delta = d();
  else if (key == "kde_bandwidth") cfg.kde_bandwidth = d();
  else if (key == "kde_samples") cfg.kde_samples = l();
  else if (key == "plot_samples") cfg.plot_samples = l();
  else throw UsageError("unknown config key: " + key);
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const std::size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": expected key=value");
    auto trim = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const std::size_t e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_absolute()) return out;
  const char* root = std::getenv("RLSGAN_OUTPUT_ROOT");
  if (root && *root) return (std::filesystem::path(root) / p).string();
  return out;
}

// ---- small CSV helpers (tool-side file exchange) -------------------------

std::vector<double> load_xy_csv(const std::string& path, int& dim_out) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open samples file: " + path);
  std::vector<double> values;
  std::string line;
  int dim = 0;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (first) {
      char* end = nullptr;
      std::strtod(fields[0].c_str(), &end);
      first = false;
      if (end == fields[0].c_str()) {
        // Header row; column count still decides the dimension below.
        dim = fields.size() >= 2 ? 2 : 1;
        continue;
      }
    }
    if (dim == 0) dim = fields.size() >= 2 ? 2 : 1;
    for (int d = 0; d < dim; ++d) {
      char* end = nullptr;
      const double v = std::strtod(fields[d].c_str(), &end);
      if (end == fields[d].c_str())
        throw RuntimeError(path + ":" + std::to_string(line_no) +
                           ": cannot parse number");
      values.push_back(v);
    }
  }
  dim_out = dim;
  return values;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw RuntimeError("cannot write: " + tmp);
    f << content;
    if (!f) throw RuntimeError("write failed: " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw RuntimeError("rename failed: " + path);
}

void save_xy_csv(const std::string& path, const std::vector<double>& xy,
                 int dim) {
  std::ostringstream out;
  out << (dim == 1 ? "x" : "x,y") << "\n";
  char buf[40];
  for (std::size_t i = 0; i + dim <= xy.size(); i += dim) {
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", xy[i + d]);
      out << buf << (d + 1 == dim ? "\n" : ",");
    }
  }
  write_atomic(path, out.str());
}

// ---- train ----------------------------------------------------------------

struct SeedResult {
  std::uint64_t seed = 0;
  rg_eval_report report{};
  bool failed = false;
  std::string message;
};

rg_feature_spec fixed_feature_spec(const ExperimentConfig& cfg) {
  rg_feature_spec spec;
  rg_feature_spec_defaults(&spec);
  if (cfg.sampler == "rls-fixed-gaussian") {
    spec.kind = RG_FEATURES_GAUSSIAN_KERNEL;
    spec.sigma = cfg.sigma;
  } else if (cfg.sampler == "rls-fixed-features") {
    spec.kind = RG_FEATURES_EXTERNAL_FILE;
    spec.features_path = cfg.features_file.c_str();
    spec.file_has_header = cfg.features_header ? 1 : 0;
    spec.sketch_dim = cfg.sketch_dim;
  }
  return spec;
}

rg_train_config train_config_for(const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  rg_train_config tc;
  rg_train_config_defaults(&tc);
  tc.iterations = cfg.iterations;
  tc.batch_size = cfg.batch_size;
  tc.gamma = cfg.gamma;
  tc.sketch_dim = cfg.sketch_dim;
  tc.multiplier = cfg.multiplier;
  tc.bures_weight = cfg.model == "bures-gan" ? cfg.lambda : 0.0;
  tc.bures_eps = cfg.bures_eps;
  tc.seed = seed;
  tc.latent_dim = cfg.latent_dim;
  tc.lr = cfg.lr;
  tc.beta1 = cfg.beta1;
  tc.beta2 = cfg.beta2;
  tc.eval_every = cfg.eval_every;
  tc.eval_samples = cfg.eval_samples;
  if (cfg.sampler == "uniform") {
    tc.sampler = RG_SAMPLER_UNIFORM;
  } else if (cfg.sampler == "rls-discriminator") {
    tc.sampler = RG_SAMPLER_RLS_DISCRIMINATOR;
  } else if (cfg.sampler == "rls-fixed-gaussian" ||
             cfg.sampler == "rls-fixed-features") {
    tc.sampler = RG_SAMPLER_RLS_FIXED;
    tc.fixed_features = fixed_feature_spec(cfg);
  } else {
    throw UsageError("unknown sampler: " + cfg.sampler);
  }
  return tc;
}

SeedResult run_one_seed(const ExperimentConfig& cfg, const rg_dataset* data,
                        std::uint64_t seed, const std::string& out_dir) {
  SeedResult result;
  result.seed = seed;
  try {
    const std::string tag = "_seed" + std::to_string(seed);
    const int dim = rg_dataset_dim(data);
    std::vector<double> samples(
        static_cast<std::size_t>(cfg.eval_samples) * dim);

    if (cfg.model == "mwu-gan") {
      rg_train_config tc = train_config_for(cfg, seed);
      rg_mwu_config mc;
      rg_mwu_config_defaults(&mc);
      mc.rounds = cfg.mwu_rounds;
      mc.delta = cfg.delta;
      mc.kde_bandwidth = cfg.kde_bandwidth;
      mc.kde_samples = cfg.kde_samples;
      if (cfg.sampler == "rls-fixed-gaussian" ||
          cfg.sampler == "rls-fixed-features") {
        // RLS initialization of the mixture weights; rounds themselves
        // sample from the evolving weight distribution.
        mc.rls_init = 1;
        mc.mwu_features = fixed_feature_spec(cfg);
        mc.mwu_gamma = cfg.gamma;
        tc.sampler = RG_SAMPLER_UNIFORM;
      }
      rg_mixture* mixture = nullptr;
      check(rg_mwu_train(data, &tc, &mc, &mixture), "mwu training");
      const std::string mixdir = out_dir + "/mixture" + tag;
      std::filesystem::create_directories(mixdir);
      check(rg_mixture_save(mixture, (mixdir + "/mixture.txt").c_str()),
            "mixture save");
      check(rg_mixture_sample(mixture, cfg.eval_samples, seed ^ 0x5eedULL,
                              samples.data(),
                              static_cast<int64_t>(samples.size())),
            "mixture sampling");
      rg_mixture_free(mixture);
    } else {
      rg_train_config tc = train_config_for(cfg, seed);
      rg_model* model = nullptr;
      const std::string metrics = out_dir + "/metrics" + tag + ".csv";
      check(rg_train(data, &tc, metrics.c_str(), &model), "training");
      check(rg_model_save(model, (out_dir + "/generator" + tag + ".txt").c_str(),
                          (out_dir + "/discriminator" + tag + ".txt").c_str()),
            "checkpoint save");
      check(rg_model_sample(model, cfg.eval_samples, seed ^ 0x5eedULL,
                            samples.data(),
                            static_cast<int64_t>(samples.size())),
            "generator sampling");
      rg_model_free(model);
    }

    check(rg_evaluate(cfg.dataset.c_str(), samples.data(), cfg.eval_samples,
                      &result.report),
          "evaluation");
    check(rg_eval_report_save_csv(&result.report,
                                  (out_dir + "/eval" + tag + ".csv").c_str()),
          "report save");

    const std::size_t keep = std::min<std::size_t>(
        cfg.plot_samples, static_cast<std::size_t>(cfg.eval_samples));
    samples.resize(keep * dim);
    save_xy_csv(out_dir + "/samples" + tag + ".csv", samples, dim);
  } catch (const std::exception& e) {
    result.failed = true;
    result.message = e.what();
  }
  return result;
}

struct Aggregate {
  double mean = 0.0;
  double stdev = 0.0;
};

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  for (double v : values) a.mean += v;
  a.mean /= values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stdev = std::sqrt(ss / (values.size() - 1));
  }
  return a;
}

std::string fmt_pair(const Aggregate& a, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f(%.*f)", decimals, a.mean, decimals,
                a.stdev);
  return buf;
}

struct TrainSummary {
  Aggregate modes, hq, kl;
  std::vector<SeedResult> results;
};

TrainSummary run_experiment(const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  if (cfg.model != "gan" && cfg.model != "bures-gan" && cfg.model != "mwu-gan")
    throw UsageError("unknown model: " + cfg.model);
  if (cfg.sampler != "uniform" && cfg.sampler != "rls-fixed-gaussian" &&
      cfg.sampler != "rls-fixed-features" && cfg.sampler != "rls-discriminator")
    throw UsageError("unknown sampler: " + cfg.sampler);
  std::filesystem::create_directories(out_dir);

  rg_dataset* data = nullptr;
  check(rg_dataset_generate(cfg.dataset.c_str(), cfg.n, cfg.seeds.front(),
                            &data),
        "dataset generation");

  std::vector<SeedResult> results(cfg.seeds.size());
  std::vector<std::thread> workers;
  workers.reserve(cfg.seeds.size());
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    workers.emplace_back([&, i] {
      results[i] = run_one_seed(cfg, data, cfg.seeds[i], out_dir);
    });
  }
  for (std::thread& t : workers) t.join();
  rg_dataset_free(data);

  for (const SeedResult& r : results)
    if (r.failed)
      throw RuntimeError("seed " + std::to_string(r.seed) + " failed: " +
                         r.message);

  TrainSummary summary;
  std::vector<double> modes, hq, kl;
  for (const SeedResult& r : results) {
    modes.push_back(r.report.modes_covered);
    hq.push_back(r.report.hq_fraction);
    kl.push_back(r.report.kl_to_uniform);
  }
  summary.modes = aggregate(modes);
  summary.hq = aggregate(hq);
  summary.kl = aggregate(kl);
  summary.results = std::move(results);
  return summary;
}

void write_summary_csv(const ExperimentConfig& cfg, const TrainSummary& s,
                       const std::string& path) {
  std::ostringstream out;
  out << "dataset,model,sampler,seeds,modes_mean,modes_std,hq_mean,hq_std,"
         "kl_mean,kl_std,modes,hq\n";
  out << cfg.dataset << "," << cfg.model << "," << cfg.sampler << ",\"";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    out << cfg.seeds[i] << (i + 1 < cfg.seeds.size() ? "," : "");
  out << "\"," << s.modes.mean << "," << s.modes.stdev << "," << s.hq.mean
      << "," << s.hq.stdev << "," << s.kl.mean << "," << s.kl.stdev << ","
      << fmt_pair(s.modes, 1) << "," << fmt_pair(s.hq, 2) << "\n";
  write_atomic(path, out.str());
}

int cmd_train(const ExperimentConfig& cfg) {
  const std::string out_dir = resolve_out(cfg.out);
  const TrainSummary s = run_experiment(cfg, out_dir);
  write_summary_csv(cfg, s, out_dir + "/summary.csv");
  std::cout << cfg.dataset << " " << cfg.model << " " << cfg.sampler
            << ": modes " << fmt_pair(s.modes, 1) << ", in-3sigma "
            << fmt_pair(s.hq, 2) << ", KL " << fmt_pair(s.kl, 3) << "\n";
  return kExitOk;
}

int cmd_ablate(ExperimentConfig cfg, const std::string& gammas_text,
               const std::string& sketch_dims_text) {
  std::vector<double> gammas;
  {
    std::stringstream ss(gammas_text);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) gammas.push_back(std::strtod(item.c_str(), nullptr));
  }
  std::vector<int> sketch_dims;
  {
    std::stringstream ss(sketch_dims_text);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty())
        sketch_dims.push_back(static_cast<int>(std::strtol(item.c_str(), nullptr, 10)));
  }
  if (sketch_dims.empty()) sketch_dims.push_back(cfg.sketch_dim);
  if (gammas.empty()) throw UsageError("ablate: empty gamma grid");

  const std::string out_dir = resolve_out(cfg.out);
  std::filesystem::create_directories(out_dir);
  std::ostringstream table;
  table << "gamma,sketch_dim,modes_mean,modes_std,hq_mean,hq_std,modes,hq\n";
  for (double gamma : gammas) {
    for (int k : sketch_dims) {
      ExperimentConfig cell = cfg;
      cell.gamma = gamma;
      cell.sketch_dim = k;
      char cell_name[64];
      std::snprintf(cell_name, sizeof(cell_name), "gamma%g_k%d", gamma, k);
      const std::string cell_dir = out_dir + "/" + cell_name;
      const TrainSummary s = run_experiment(cell, cell_dir);
      write_summary_csv(cell, s, cell_dir + "/summary.csv");
      table << gamma << "," << k << "," << s.modes.mean << "," << s.modes.stdev
            << "," << s.hq.mean << "," << s.hq.stdev << ","
            << fmt_pair(s.modes, 1) << "," << fmt_pair(s.hq, 2) << "\n";
      std::cout << "gamma=" << gamma << " k=" << k << ": modes "
                << fmt_pair(s.modes, 1) << ", in-3sigma " << fmt_pair(s.hq, 2)
                << "\n";
    }
  }
  write_atomic(out_dir + "/ablation.csv", table.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leverage-score biased GAN training experiments"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset CSV");
  std::string g_dataset = "ring", g_out = "data.csv", g_svg;
  long g_n = 50000;
  std::uint64_t g_seed = 1;
  gen->add_option("--dataset", g_dataset, "ring | grid | 1d-motivating");
  gen->add_option("--n", g_n, "number of samples");
  gen->add_option("--seed", g_seed, "rng seed");
  gen->add_option("--out", g_out, "output CSV path")->required();
  gen->add_option("--svg", g_svg, "optional scatter SVG");

  // rls
  auto* rls_cmd = app.add_subcommand("rls", "Leverage scores for a dataset");
  std::string r_data, r_features = "gaussian", r_features_path, r_checkpoint,
              r_out = "scores.csv", r_svg;
  double r_sigma = 0.15, r_gamma = 1e-3;
  bool r_header = false;
  int r_sketch = 0;
  rls_cmd->add_option("--data", r_data, "dataset CSV")->required();
  rls_cmd->add_option("--features", r_features,
                      "gaussian | file | discriminator");
  rls_cmd->add_option("--sigma", r_sigma, "Gaussian kernel bandwidth");
  rls_cmd->add_option("--gamma", r_gamma, "ridge parameter");
  rls_cmd->add_option("--features-path", r_features_path, "feature CSV file");
  rls_cmd->add_flag("--header", r_header, "feature file has a header row");
  rls_cmd->add_option("--sketch-dim", r_sketch, "PCA dimension for file features");
  rls_cmd->add_option("--checkpoint", r_checkpoint, "discriminator checkpoint");
  rls_cmd->add_option("--out", r_out, "scores CSV path");
  rls_cmd->add_option("--svg", r_svg, "score-shaded scatter SVG");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train model x sampler over seeds");
  std::string t_config;
  std::vector<std::string> t_sets;
  train_cmd->add_option("--config", t_config, "key=value config file");
  train_cmd->add_option("--set", t_sets, "override: key=value (repeatable)");

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Gamma/sketch grid of train runs");
  std::string a_config, a_gammas = "1e-2,1e-3,1e-4", a_sketch_dims;
  std::vector<std::string> a_sets;
  ablate_cmd->add_option("--config", a_config, "key=value config file");
  ablate_cmd->add_option("--set", a_sets, "override: key=value (repeatable)");
  ablate_cmd->add_option("--gammas", a_gammas, "comma list of gamma values");
  ablate_cmd->add_option("--sketch-dims", a_sketch_dims, "comma list of k values");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Scatter SVG of sample files");
  std::string p_samples, p_real, p_out = "plot.svg";
  plot_cmd->add_option("--samples", p_samples, "generated samples CSV");
  plot_cmd->add_option("--real", p_real, "real/true samples CSV");
  plot_cmd->add_option("--out", p_out, "output SVG")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a sample file");
  std::string e_samples, e_dataset = "ring", e_out;
  eval_cmd->add_option("--samples", e_samples, "samples CSV")->required();
  eval_cmd->add_option("--dataset", e_dataset, "ring | grid | 1d-motivating");
  eval_cmd->add_option("--out", e_out, "report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      rg_dataset* data = nullptr;
      check(rg_dataset_generate(g_dataset.c_str(), g_n, g_seed, &data),
            "dataset generation");
      check(rg_dataset_save_csv(data, resolve_out(g_out).c_str()), "dataset save");
      if (!g_svg.empty()) {
        const int dim = rg_dataset_dim(data);
        std::vector<double> pts(static_cast<std::size_t>(g_n) * dim);
        check(rg_dataset_copy_points(data, pts.data(),
                                     static_cast<int64_t>(pts.size())),
              "dataset copy");
        check(rg_plot_scatter_svg(resolve_out(g_svg).c_str(), pts.data(), g_n,
                                  "#2ca02c", nullptr, 0, "#1f77b4", dim),
              "plot");
      }
      rg_dataset_free(data);
      std::cout << "wrote " << resolve_out(g_out) << " (" << g_n << " rows)\n";
      return kExitOk;
    }

    if (rls_cmd->parsed()) {
      rg_dataset* data = nullptr;
      check(rg_dataset_load_csv(r_data.c_str(), &data), "dataset load");
      rg_feature_spec spec;
      rg_feature_spec_defaults(&spec);
      if (r_features == "gaussian") {
        spec.kind = RG_FEATURES_GAUSSIAN_KERNEL;
        spec.sigma = r_sigma;
      } else if (r_features == "file") {
        spec.kind = RG_FEATURES_EXTERNAL_FILE;
        spec.features_path = r_features_path.c_str();
        spec.file_has_header = r_header ? 1 : 0;
        spec.sketch_dim = r_sketch;
      } else if (r_features == "discriminator") {
        spec.kind = RG_FEATURES_DISCRIMINATOR;
        spec.checkpoint_path = r_checkpoint.c_str();
      } else {
        throw UsageError("unknown feature map: " + r_features);
      }
      rg_scores* scores = nullptr;
      check(rg_rls_compute(data, &spec, r_gamma, &scores), "rls");
      check(rg_scores_save_csv(scores, resolve_out(r_out).c_str()), "scores save");
      if (!r_svg.empty()) {
        const int64_t n = rg_scores_size(scores);
        const int dim = rg_dataset_dim(data);
        std::vector<double> pts(static_cast<std::size_t>(n) * dim);
        std::vector<double> vals(static_cast<std::size_t>(n));
        check(rg_dataset_copy_points(data, pts.data(),
                                     static_cast<int64_t>(pts.size())),
              "dataset copy");
        check(rg_scores_copy(scores, vals.data(), nullptr), "scores copy");
        check(rg_plot_scores_svg(resolve_out(r_svg).c_str(), pts.data(),
                                 vals.data(), n, dim),
              "plot");
      }
      rg_scores_free(scores);
      rg_dataset_free(data);
      std::cout << "wrote " << resolve_out(r_out) << "\n";
      return kExitOk;
    }

    if (train_cmd->parsed() || ablate_cmd->parsed()) {
      const bool is_train = train_cmd->parsed();
      ExperimentConfig cfg;
      const std::string& config_path = is_train ? t_config : a_config;
      if (!config_path.empty()) load_config_file(cfg, config_path);
      for (const std::string& kv : is_train ? t_sets : a_sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
          throw UsageError("--set expects key=value, got: " + kv);
        apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (cfg.seeds.empty()) throw UsageError("no seeds configured");
      return is_train ? cmd_train(cfg) : cmd_ablate(cfg, a_gammas, a_sketch_dims);
    }

    if (plot_cmd->parsed()) {
      std::vector<double> gen_xy, real_xy;
      int dim = 2;
      if (!p_samples.empty()) gen_xy = load_xy_csv(p_samples, dim);
      if (!p_real.empty()) real_xy = load_xy_csv(p_real, dim);
      check(rg_plot_scatter_svg(
                resolve_out(p_out).c_str(), real_xy.data(),
                static_cast<int64_t>(real_xy.size() / dim), "#2ca02c",
                gen_xy.data(), static_cast<int64_t>(gen_xy.size() / dim),
                "#1f77b4", dim),
            "plot");
      std::cout << "wrote " << resolve_out(p_out) << "\n";
      return kExitOk;
    }

    if (eval_cmd->parsed()) {
      int dim = 2;
      const std::vector<double> xy = load_xy_csv(e_samples, dim);
      rg_eval_report report;
      check(rg_evaluate(e_dataset.c_str(), xy.data(),
                        static_cast<int64_t>(xy.size() / dim), &report),
            "evaluation");
      std::cout << "samples: " << report.n_samples << "\n"
                << "modes covered: " << report.modes_covered << " / "
                << report.n_modes << "\n"
                << "high-quality fraction: " << report.hq_fraction << "\n"
                << "KL(modes || uniform): " << report.kl_to_uniform << "\n";
      if (!e_out.empty())
        check(rg_eval_report_save_csv(&report, resolve_out(e_out).c_str()),
              "report save");
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
