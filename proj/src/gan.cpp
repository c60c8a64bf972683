#include "rlsgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/eval.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::gan {

void TrainConfig::validate() const {
  if (iterations < 0)
    fail(ErrorCode::invalid_argument, "train: iterations must be >= 0");
  if (batch_size < 2)
    fail(ErrorCode::invalid_argument, "train: batch_size must be >= 2");
  if (bures_weight < 0.0)
    fail(ErrorCode::invalid_argument, "train: bures weight must be >= 0");
  if (!(bures_eps > 0.0))
    fail(ErrorCode::invalid_argument, "train: bures_eps must be > 0");
  if (multiplier < 1)
    fail(ErrorCode::invalid_argument, "train: multiplier must be >= 1");
  if (latent_dim < 1)
    fail(ErrorCode::invalid_argument, "train: latent_dim must be >= 1");
  if (!(lr > 0.0)) fail(ErrorCode::invalid_argument, "train: lr must be > 0");
}

CenteredNormalized center_normalize(const Matrix& features) {
  const std::size_t b = features.rows;
  const std::size_t m = features.cols;
  if (b < 2)
    fail(ErrorCode::invalid_argument, "center_normalize: batch must be >= 2");

  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    const double* row = features.row(i);
    for (std::size_t j = 0; j < m; ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= static_cast<double>(b);

  CenteredNormalized cn;
  cn.rows = Matrix(b, m);
  cn.norms.resize(b);
  for (std::size_t i = 0; i < b; ++i) {
    const double* src = features.row(i);
    double* dst = cn.rows.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      dst[j] = src[j] - mean[j];
      sq += dst[j] * dst[j];
    }
    const double norm = std::sqrt(sq);
    cn.norms[i] = norm;
    if (norm > 1e-30) {
      const double inv = 1.0 / norm;
      for (std::size_t j = 0; j < m; ++j) dst[j] *= inv;
    } else {
      for (std::size_t j = 0; j < m; ++j) dst[j] = 0.0;
    }
  }
  return cn;
}

Matrix center_normalize_backward(const CenteredNormalized& cn,
                                 const Matrix& d_rows) {
  const std::size_t b = cn.rows.rows;
  const std::size_t m = cn.rows.cols;
  if (d_rows.rows != b || d_rows.cols != m)
    fail(ErrorCode::dimension_mismatch, "center_normalize_backward: shape mismatch");

  Matrix d_centered(b, m);
  std::vector<double> col_sum(m, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    const double* phi = cn.rows.row(i);
    const double* g = d_rows.row(i);
    double* out = d_centered.row(i);
    if (cn.norms[i] > 1e-30) {
      double dot = 0.0;
      for (std::size_t j = 0; j < m; ++j) dot += phi[j] * g[j];
      const double inv = 1.0 / cn.norms[i];
      for (std::size_t j = 0; j < m; ++j) {
        out[j] = (g[j] - dot * phi[j]) * inv;
        col_sum[j] += out[j];
      }
    }
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    double* out = d_centered.row(i);
    for (std::size_t j = 0; j < m; ++j) out[j] -= col_sum[j] * inv_b;
  }
  return d_centered;
}

Matrix batch_covariance(const featmap::FeatureBatch& features) {
  const CenteredNormalized cn = center_normalize(features.vectors);
  Matrix c = linalg::gram_tn(cn.rows);
  const double inv_b = 1.0 / static_cast<double>(cn.rows.rows);
  for (double& v : c.data) v *= inv_b;
  return c;
}

namespace {

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) t += a(i, i);
  return t;
}

struct BuresCore {
  double value = 0.0;
  Matrix grad;  // w.r.t. c_g
};

// Shared dense route: one eigendecomposition of P = A C_g A serves both
// the value (sum of sqrt eigenvalues) and M^-1/2 with M = P + eps I.
BuresCore bures_core(const Matrix& c_d, const Matrix& c_g, double eps,
                     bool want_grad) {
  if (c_d.rows != c_g.rows || !c_d.square() || !c_g.square())
    fail(ErrorCode::dimension_mismatch, "bures: covariance shapes disagree");
  if (eps < 0.0) fail(ErrorCode::invalid_argument, "bures: eps must be >= 0");

  const std::size_t m = c_d.rows;
  Matrix shifted = c_d;
  for (std::size_t i = 0; i < m; ++i) shifted(i, i) += eps;
  const Matrix a = linalg::psd_sqrt(shifted);

  Matrix p = linalg::matmul(a, linalg::matmul(c_g, a));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = v;
      p(j, i) = v;
    }
  linalg::EigenDecomposition e = linalg::sym_eig(p);

  BuresCore out;
  double sqrt_sum = 0.0;
  for (double lambda : e.eigenvalues) sqrt_sum += std::sqrt(std::max(lambda, 0.0));
  out.value = std::max(trace(c_d) + trace(c_g) - 2.0 * sqrt_sum, 0.0);

  if (want_grad) {
    // M^-1/2 = Q (lambda + eps)^-1/2 Q^T.
    Matrix m_inv_sqrt(m, m);
    std::vector<double> inv_sqrt(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double lam = std::max(e.eigenvalues[k], 0.0) + eps;
      if (!(lam > 0.0))
        fail(ErrorCode::numeric, "bures gradient: M is singular despite eps");
      inv_sqrt[k] = 1.0 / std::sqrt(lam);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          s += e.eigenvectors(i, k) * inv_sqrt[k] * e.eigenvectors(j, k);
        m_inv_sqrt(i, j) = s;
        m_inv_sqrt(j, i) = s;
      }
    Matrix ama = linalg::matmul(a, linalg::matmul(m_inv_sqrt, a));
    out.grad = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        out.grad(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * (ama(i, j) + ama(j, i));
  }
  return out;
}

// Eigenpairs of (1/b) X X^T lifted to the feature space: returns the
// nonzero eigenvalues and the corresponding orthonormal columns of the
// feature-space factor.
struct LiftedEig {
  std::vector<double> values;  // descending, > tolerance
  Matrix vectors;              // m x r
};

LiftedEig lifted_gram_eig(const Matrix& x) {
  const std::size_t b = x.rows;
  const std::size_t m = x.cols;
  Matrix gram = linalg::matmul_nt(x, x);
  const double inv_b = 1.0 / static_cast<double>(b);
  for (double& v : gram.data) v *= inv_b;
  linalg::EigenDecomposition e = linalg::sym_eig(gram);

  const double top = e.eigenvalues.empty() ? 0.0 : std::max(e.eigenvalues.front(), 0.0);
  const double tol = std::max(top * 1e-12, 1e-300);

  LiftedEig out;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < e.eigenvalues.size(); ++j)
    if (e.eigenvalues[j] > tol) keep.push_back(j);

  out.values.resize(keep.size());
  out.vectors = Matrix(m, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const std::size_t j = keep[c];
    out.values[c] = e.eigenvalues[j];
    // v = X^T u / sqrt(b * mu)
    const double scale = 1.0 / std::sqrt(static_cast<double>(b) * e.eigenvalues[j]);
    for (std::size_t i = 0; i < b; ++i) {
      const double w = e.eigenvectors(i, j) * scale;
      const double* xi = x.row(i);
      for (std::size_t d = 0; d < m; ++d) out.vectors(d, c) += w * xi[d];
    }
  }
  return out;
}

// Dense m x m matrix sqrt(eps)*I + V diag(d) V^T.
Matrix low_rank_plus_identity(const Matrix& v, const std::vector<double>& d,
                              double diag) {
  const std::size_t m = v.rows;
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) out(i, i) = diag;
  for (std::size_t c = 0; c < v.cols; ++c) {
    const double dc = d[c];
    for (std::size_t i = 0; i < m; ++i) {
      const double vic = v(i, c) * dc;
      if (vic == 0.0) continue;
      double* row = out.row(i);
      for (std::size_t j = 0; j < m; ++j) row[j] += vic * v(j, c);
    }
  }
  return out;
}

}  // namespace

double bures_sq(const Matrix& c_d, const Matrix& c_g, double eps) {
  return bures_core(c_d, c_g, eps, false).value;
}

Matrix bures_sq_grad(const Matrix& c_d, const Matrix& c_g, double eps) {
  return bures_core(c_d, c_g, eps, true).grad;
}

BuresBatchResult bures_from_batches(const CenteredNormalized& real,
                                    const CenteredNormalized& fake,
                                    double eps) {
  const Matrix& xr = real.rows;
  const Matrix& xg = fake.rows;
  if (xr.cols != xg.cols)
    fail(ErrorCode::dimension_mismatch, "bures_from_batches: feature dims disagree");
  const std::size_t m = xr.cols;
  const std::size_t br = xr.rows;
  const std::size_t bg = xg.rows;

  BuresBatchResult out;
  if (br >= m || bg >= m) {
    // Batch covariances are full-size here; the dense route is cheaper.
    Matrix c_d = linalg::matmul_tn(xr, xr);
    for (double& v : c_d.data) v /= static_cast<double>(br);
    Matrix c_g = linalg::matmul_tn(xg, xg);
    for (double& v : c_g.data) v /= static_cast<double>(bg);
    BuresCore core = bures_core(c_d, c_g, eps, true);
    out.value = core.value;
    out.d_phi_bar_g = linalg::matmul(xg, core.grad);
    const double scale = 2.0 / static_cast<double>(bg);
    for (double& v : out.d_phi_bar_g.data) v *= scale;
    return out;
  }

  // Rank-limited route: both covariances have rank <= batch size, so all
  // eigendecompositions happen at batch size.
  const double sqrt_eps = std::sqrt(eps);

  // A = (C_d + eps I)^1/2 from the real-batch Gram spectrum.
  const LiftedEig real_eig = lifted_gram_eig(xr);
  std::vector<double> a_shift(real_eig.values.size());
  for (std::size_t j = 0; j < a_shift.size(); ++j)
    a_shift[j] = std::sqrt(real_eig.values[j] + eps) - sqrt_eps;
  const Matrix a = low_rank_plus_identity(real_eig.vectors, a_shift, sqrt_eps);

  // Spectrum of A C_g A from the projected fake batch Z = Xg A.
  const Matrix z = linalg::matmul(xg, a);
  const LiftedEig z_eig = lifted_gram_eig(z);

  double trace_cd = 0.0;
  for (std::size_t i = 0; i < br; ++i) {
    const double* row = xr.row(i);
    for (std::size_t j = 0; j < m; ++j) trace_cd += row[j] * row[j];
  }
  trace_cd /= static_cast<double>(br);
  double trace_cg = 0.0;
  for (std::size_t i = 0; i < bg; ++i) {
    const double* row = xg.row(i);
    for (std::size_t j = 0; j < m; ++j) trace_cg += row[j] * row[j];
  }
  trace_cg /= static_cast<double>(bg);

  double sqrt_sum = 0.0;
  for (double nu : z_eig.values) sqrt_sum += std::sqrt(nu);
  out.value = std::max(trace_cd + trace_cg - 2.0 * sqrt_sum, 0.0);

  // M^-1/2 with M = A C_g A + eps I shares the Z spectrum.
  if (!(eps > 0.0))
    fail(ErrorCode::numeric, "bures gradient: M is singular despite eps");
  const double inv_sqrt_eps = 1.0 / sqrt_eps;
  std::vector<double> m_shift(z_eig.values.size());
  for (std::size_t j = 0; j < m_shift.size(); ++j)
    m_shift[j] = 1.0 / std::sqrt(z_eig.values[j] + eps) - inv_sqrt_eps;
  const Matrix m_inv_sqrt =
      low_rank_plus_identity(z_eig.vectors, m_shift, inv_sqrt_eps);

  // grad = I - A M^-1/2 A applied to the fake rows, times 2/b.
  const Matrix ama = linalg::matmul(a, linalg::matmul(m_inv_sqrt, a));
  out.d_phi_bar_g = Matrix(bg, m);
  const Matrix xg_ama = linalg::matmul(xg, ama);
  const double scale = 2.0 / static_cast<double>(bg);
  for (std::size_t i = 0; i < bg; ++i) {
    const double* xi = xg.row(i);
    const double* pi = xg_ama.row(i);
    double* oi = out.d_phi_bar_g.row(i);
    for (std::size_t j = 0; j < m; ++j) oi[j] = scale * (xi[j] - pi[j]);
  }
  return out;
}

namespace {

void add_grads(nn::Grads& into, const nn::Grads& other) {
  for (std::size_t l = 0; l < into.d_weights.size(); ++l) {
    for (std::size_t i = 0; i < into.d_weights[l].data.size(); ++i)
      into.d_weights[l].data[i] += other.d_weights[l].data[i];
    for (std::size_t i = 0; i < into.d_bias[l].size(); ++i)
      into.d_bias[l][i] += other.d_bias[l][i];
  }
}

}  // namespace

DiscriminatorStep discriminator_step(const nn::Mlp& disc, const Matrix& x_real,
                                     const Matrix& x_fake) {
  nn::ForwardResult fr = nn::forward(disc, x_real);
  nn::ForwardResult ff = nn::forward(disc, x_fake);
  const nn::GanLosses losses = nn::gan_losses(fr.output, ff.output);

  Matrix d_real(fr.output.rows, fr.output.cols);
  const double inv_r = 1.0 / static_cast<double>(fr.output.data.size());
  for (std::size_t i = 0; i < d_real.data.size(); ++i)
    d_real.data[i] = (nn::sigmoid(fr.output.data[i]) - 1.0) * inv_r;

  Matrix d_fake(ff.output.rows, ff.output.cols);
  const double inv_f = 1.0 / static_cast<double>(ff.output.data.size());
  for (std::size_t i = 0; i < d_fake.data.size(); ++i)
    d_fake.data[i] = nn::sigmoid(ff.output.data[i]) * inv_f;

  DiscriminatorStep step;
  step.loss = losses.disc_loss;
  step.grads = nn::backward(disc, fr.tape, d_real);
  const nn::Grads fake_grads = nn::backward(disc, ff.tape, d_fake);
  add_grads(step.grads, fake_grads);
  return step;
}

GeneratorStep generator_step(const nn::Mlp& gen, const nn::Mlp& disc,
                             const Matrix& latent, const Matrix& x_real,
                             double lambda, double eps) {
  nn::ForwardResult fg = nn::forward(gen, latent);
  nn::ForwardResult fd = nn::forward(disc, fg.output);

  GeneratorStep step;
  const std::size_t bf = fd.output.data.size();
  double gen_loss = 0.0;
  for (double v : fd.output.data) gen_loss += nn::softplus(-v);
  gen_loss /= static_cast<double>(bf);
  step.gan_loss = gen_loss;

  Matrix d_logits(fd.output.rows, fd.output.cols);
  const double inv_b = 1.0 / static_cast<double>(bf);
  for (std::size_t i = 0; i < bf; ++i)
    d_logits.data[i] = (nn::sigmoid(fd.output.data[i]) - 1.0) * inv_b;

  Matrix d_hidden;
  if (lambda > 0.0) {
    const nn::ForwardResult freal = nn::forward(disc, x_real);
    const CenteredNormalized cn_real = center_normalize(freal.hidden);
    const CenteredNormalized cn_fake = center_normalize(fd.hidden);
    BuresBatchResult bb = bures_from_batches(cn_real, cn_fake, eps);
    step.bures_value = bb.value;
    for (double& v : bb.d_phi_bar_g.data) v *= lambda;
    d_hidden = center_normalize_backward(cn_fake, bb.d_phi_bar_g);
  }
  step.total_loss = gen_loss + lambda * step.bures_value;

  const nn::Grads disc_grads = nn::backward(disc, fd.tape, d_logits, d_hidden);
  step.grads = nn::backward(gen, fg.tape, disc_grads.d_input);
  return step;
}

namespace {

class RealBatchSampler {
 public:
  RealBatchSampler(const synth::Dataset& data, const TrainConfig& config)
      : data_(data), config_(config) {
    if (config.sampler == SamplerKind::fixed_probs) {
      if (config.fixed_probs.size() != data.size())
        fail(ErrorCode::dimension_mismatch,
             "train: fixed sampling distribution length disagrees with dataset");
      cum_.resize(config.fixed_probs.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < cum_.size(); ++i) {
        const double p = config.fixed_probs[i];
        if (!(p >= 0.0) || !std::isfinite(p))
          fail(ErrorCode::invalid_argument, "train: invalid sampling probability");
        acc += p;
        cum_[i] = acc;
      }
      if (!(acc > 0.0))
        fail(ErrorCode::invalid_argument, "train: sampling probabilities sum to zero");
      for (double& v : cum_) v /= acc;
      cum_.back() = 1.0;
    }
  }

  std::vector<std::size_t> draw(const nn::Mlp& disc, Rng& rng) const {
    const std::size_t n = data_.size();
    std::vector<std::size_t> idx(config_.batch_size);
    switch (config_.sampler) {
      case SamplerKind::uniform:
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = rng.index(n);
        break;
      case SamplerKind::fixed_probs:
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const double u = rng.uniform01();
          std::size_t k = std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
          idx[i] = std::min(k, n - 1);
        }
        break;
      case SamplerKind::two_stage_discriminator: {
        rls::TwoStageOptions opt;
        opt.batch_size = config_.batch_size;
        opt.multiplier = config_.multiplier;
        opt.gamma = config_.gamma;
        opt.sketch_dim = config_.sketch_dim;
        idx = rls::two_stage_sample(data_.points, disc, opt, rng);
        break;
      }
    }
    return idx;
  }

 private:
  const synth::Dataset& data_;
  const TrainConfig& config_;
  std::vector<double> cum_;
};

Matrix gather_rows(const Matrix& points, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), points.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double* src = points.row(idx[i]);
    double* dst = out.row(i);
    for (std::size_t d = 0; d < points.cols; ++d) dst[d] = src[d];
  }
  return out;
}

}  // namespace

TrainResult train(const synth::Dataset& data, const TrainConfig& config) {
  config.validate();
  if (data.size() == 0) fail(ErrorCode::invalid_argument, "train: empty dataset");

  Rng rng(config.seed);
  TrainResult result;
  result.generator = nn::init_mlp(
      {config.latent_dim, 128, 128, data.dim()},
      {nn::Activation::tanh, nn::Activation::tanh, nn::Activation::none}, rng);
  result.discriminator = nn::init_mlp(
      {data.dim(), 128, 128, 1},
      {nn::Activation::tanh, nn::Activation::tanh, nn::Activation::none}, rng);

  nn::AdamState adam_g = nn::make_adam_state(result.generator, config.lr,
                                             config.beta1, config.beta2,
                                             config.adam_eps);
  nn::AdamState adam_d = nn::make_adam_state(result.discriminator, config.lr,
                                             config.beta1, config.beta2,
                                             config.adam_eps);

  const RealBatchSampler sampler(data, config);

  for (long it = 0; it < config.iterations; ++it) {
    const std::vector<std::size_t> idx = sampler.draw(result.discriminator, rng);
    const Matrix x_real = gather_rows(data.points, idx);

    Matrix z = nn::sample_latent(config.batch_size, config.latent_dim, rng);
    const Matrix x_fake = nn::forward_plain(result.generator, z);
    DiscriminatorStep dstep =
        discriminator_step(result.discriminator, x_real, x_fake);
    nn::adam_step(result.discriminator, dstep.grads, adam_d);

    z = nn::sample_latent(config.batch_size, config.latent_dim, rng);
    GeneratorStep gstep =
        generator_step(result.generator, result.discriminator, z, x_real,
                       config.bures_weight, config.bures_eps);
    nn::adam_step(result.generator, gstep.grads, adam_g);

    if (!std::isfinite(dstep.loss) || !std::isfinite(gstep.total_loss))
      fail(ErrorCode::divergence,
           "train: non-finite loss at iteration " + std::to_string(it + 1));

    const bool last = it + 1 == config.iterations;
    if ((config.eval_every > 0 && (it + 1) % config.eval_every == 0) || last) {
      TraceRow row;
      row.iter = it + 1;
      row.disc_loss = dstep.loss;
      row.gen_loss = gstep.gan_loss;
      row.bures_sq = gstep.bures_value;
      if (config.trace_eval && data.has_spec && config.eval_samples > 0) {
        const Matrix samples = sample_generator(
            result.generator, config.eval_samples, config.latent_dim,
            mix_seed(config.seed, 0x00e7a100u + static_cast<std::uint64_t>(it)));
        const eval::EvalReport report = eval::evaluate(samples, data.spec);
        row.modes_covered = report.modes_covered;
        row.hq_fraction = report.hq_fraction;
      }
      if (result.trace.empty() || result.trace.back().iter != row.iter)
        result.trace.push_back(row);
    }
  }
  return result;
}

TrainResult train_vanilla(const synth::Dataset& data, TrainConfig config) {
  config.bures_weight = 0.0;
  return train(data, config);
}

TrainResult train_bures(const synth::Dataset& data, const TrainConfig& config) {
  return train(data, config);
}

Matrix sample_generator(const nn::Mlp& gen, std::size_t count,
                        std::size_t latent_dim, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix z = nn::sample_latent(count, latent_dim, rng);
  return nn::forward_plain(gen, z);
}

void save_trace_csv(const std::vector<TraceRow>& trace,
                    const std::string& path) {
  std::ostringstream out;
  out << "iter,disc_loss,gen_loss,bures_sq,modes_covered,hq_fraction\n";
  for (const TraceRow& row : trace) {
    out << row.iter << "," << io::format_double(row.disc_loss) << ","
        << io::format_double(row.gen_loss) << ","
        << io::format_double(row.bures_sq) << "," << row.modes_covered << ","
        << io::format_double(row.hq_fraction) << "\n";
  }
  io::write_file_atomic(path, out.str());
}

}  // namespace rlsgan::gan
