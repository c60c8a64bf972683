#include "rlsgan/nn.hpp"

#include <cmath>
#include <sstream>

#include "rlsgan/error.hpp"
#include "rlsgan/io.hpp"

namespace rlsgan::nn {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::none: return "none";
  }
  return "none";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "none") return Activation::none;
  fail(ErrorCode::parse, "unknown activation: " + name);
}

std::size_t Mlp::hidden_dim() const {
  if (layers.size() < 2) return input_dim();
  return layers[layers.size() - 2].weights.cols;
}

Mlp init_mlp(const std::vector<std::size_t>& dims,
             const std::vector<Activation>& activations, Rng& rng,
             double leaky_slope) {
  if (dims.size() < 2)
    fail(ErrorCode::invalid_argument, "init_mlp: need at least one layer");
  if (activations.size() != dims.size() - 1)
    fail(ErrorCode::invalid_argument, "init_mlp: one activation per layer required");
  Mlp net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    layer.weights = Matrix(dims[l], dims[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
    layer.bias.assign(dims[l + 1], 0.0);
    layer.activation = activations[l];
    layer.leaky_slope = leaky_slope;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Mlp make_synthetic_generator(Rng& rng, std::size_t latent_dim) {
  return init_mlp({latent_dim, 128, 128, 2},
                  {Activation::tanh, Activation::tanh, Activation::none}, rng);
}

Mlp make_synthetic_discriminator(Rng& rng) {
  return init_mlp({2, 128, 128, 1},
                  {Activation::tanh, Activation::tanh, Activation::none}, rng);
}

namespace {

void apply_activation(Matrix& z, Activation act, double slope) {
  switch (act) {
    case Activation::tanh:
      for (double& v : z.data) v = std::tanh(v);
      break;
    case Activation::relu:
      for (double& v : z.data) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::leaky_relu:
      for (double& v : z.data) v = v > 0.0 ? v : slope * v;
      break;
    case Activation::none:
      break;
  }
}

// Derivative of the activation expressed through its output value.
double activation_derivative(double post, Activation act, double slope) {
  switch (act) {
    case Activation::tanh: return 1.0 - post * post;
    case Activation::relu: return post > 0.0 ? 1.0 : 0.0;
    case Activation::leaky_relu: return post > 0.0 ? 1.0 : slope;
    case Activation::none: return 1.0;
  }
  return 1.0;
}

Matrix affine(const Matrix& x, const Layer& layer) {
  Matrix z = linalg::matmul(x, layer.weights);
  for (std::size_t i = 0; i < z.rows; ++i) {
    double* zi = z.row(i);
    for (std::size_t j = 0; j < z.cols; ++j) zi[j] += layer.bias[j];
  }
  return z;
}

}  // namespace

ForwardResult forward(const Mlp& net, const Matrix& x) {
  if (net.layers.empty()) fail(ErrorCode::invalid_argument, "forward: empty network");
  if (x.cols != net.input_dim())
    fail(ErrorCode::dimension_mismatch, "forward: input width disagrees with network");

  ForwardResult r;
  r.tape.input = x;
  r.tape.post.reserve(net.layers.size());
  const Matrix* cur = &x;
  for (const Layer& layer : net.layers) {
    Matrix z = affine(*cur, layer);
    apply_activation(z, layer.activation, layer.leaky_slope);
    r.tape.post.push_back(std::move(z));
    cur = &r.tape.post.back();
  }
  r.output = r.tape.post.back();
  r.hidden = net.layers.size() >= 2 ? r.tape.post[net.layers.size() - 2]
                                    : r.tape.input;
  return r;
}

Matrix forward_plain(const Mlp& net, const Matrix& x) {
  if (x.cols != net.input_dim())
    fail(ErrorCode::dimension_mismatch, "forward: input width disagrees with network");
  Matrix cur = x;
  for (const Layer& layer : net.layers) {
    Matrix z = affine(cur, layer);
    apply_activation(z, layer.activation, layer.leaky_slope);
    cur = std::move(z);
  }
  return cur;
}

Grads backward(const Mlp& net, Tape& tape, const Matrix& d_output,
               const Matrix& d_hidden) {
  if (tape.used) fail(ErrorCode::invalid_argument, "backward: tape already consumed");
  tape.used = true;
  const std::size_t depth = net.layers.size();
  if (tape.post.size() != depth)
    fail(ErrorCode::dimension_mismatch, "backward: tape does not match network");
  if (d_output.rows != tape.input.rows || d_output.cols != net.output_dim())
    fail(ErrorCode::dimension_mismatch, "backward: upstream gradient shape mismatch");

  Grads g;
  g.d_weights.resize(depth);
  g.d_bias.resize(depth);

  Matrix delta = d_output;  // gradient w.r.t. post-activation of layer l
  for (std::size_t l = depth; l-- > 0;) {
    const Layer& layer = net.layers[l];
    const Matrix& post = tape.post[l];
    for (std::size_t i = 0; i < delta.rows; ++i) {
      double* di = delta.row(i);
      const double* pi = post.row(i);
      for (std::size_t j = 0; j < delta.cols; ++j)
        di[j] *= activation_derivative(pi[j], layer.activation, layer.leaky_slope);
    }
    const Matrix& lin = l == 0 ? tape.input : tape.post[l - 1];
    g.d_weights[l] = linalg::matmul_tn(lin, delta);
    g.d_bias[l].assign(layer.bias.size(), 0.0);
    for (std::size_t i = 0; i < delta.rows; ++i) {
      const double* di = delta.row(i);
      for (std::size_t j = 0; j < delta.cols; ++j) g.d_bias[l][j] += di[j];
    }
    delta = linalg::matmul_nt(delta, layer.weights);
    if (l == depth - 1 && d_hidden.rows > 0) {
      if (d_hidden.rows != delta.rows || d_hidden.cols != delta.cols)
        fail(ErrorCode::dimension_mismatch, "backward: hidden gradient shape mismatch");
      for (std::size_t i = 0; i < delta.data.size(); ++i)
        delta.data[i] += d_hidden.data[i];
    }
  }
  g.d_input = std::move(delta);
  return g;
}

AdamState make_adam_state(const Mlp& net, double lr, double beta1,
                          double beta2, double eps) {
  AdamState s;
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  for (const Layer& layer : net.layers) {
    s.m_weights.emplace_back(layer.weights.rows, layer.weights.cols);
    s.v_weights.emplace_back(layer.weights.rows, layer.weights.cols);
    s.m_bias.emplace_back(layer.bias.size(), 0.0);
    s.v_bias.emplace_back(layer.bias.size(), 0.0);
  }
  return s;
}

namespace {

void adam_update(double* param, double* m, double* v, const double* grad,
                 std::size_t n, const AdamState& s, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double gval = grad[i];
    if (!std::isfinite(gval))
      fail(ErrorCode::divergence, "adam_step: non-finite gradient");
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * gval;
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * gval * gval;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
  }
}

}  // namespace

void adam_step(Mlp& net, const Grads& grads, AdamState& state) {
  if (grads.d_weights.size() != net.layers.size())
    fail(ErrorCode::dimension_mismatch, "adam_step: gradient layer count mismatch");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& layer = net.layers[l];
    adam_update(layer.weights.data.data(), state.m_weights[l].data.data(),
                state.v_weights[l].data.data(), grads.d_weights[l].data.data(),
                layer.weights.data.size(), state, bc1, bc2);
    adam_update(layer.bias.data(), state.m_bias[l].data(),
                state.v_bias[l].data(), grads.d_bias[l].data(),
                layer.bias.size(), state, bc1, bc2);
  }
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

GanLosses gan_losses(const Matrix& d_real_logits, const Matrix& d_fake_logits) {
  GanLosses out;
  double real_term = 0.0;
  for (double v : d_real_logits.data) {
    if (!std::isfinite(v)) fail(ErrorCode::divergence, "gan_losses: non-finite logit");
    real_term += softplus(-v);  // -log sigmoid(v)
  }
  real_term /= static_cast<double>(d_real_logits.data.size());

  double fake_term = 0.0;
  double gen_term = 0.0;
  for (double v : d_fake_logits.data) {
    if (!std::isfinite(v)) fail(ErrorCode::divergence, "gan_losses: non-finite logit");
    fake_term += softplus(v);   // -log(1 - sigmoid(v))
    gen_term += softplus(-v);   // -log sigmoid(v)
  }
  const double nf = static_cast<double>(d_fake_logits.data.size());
  out.disc_loss = real_term + fake_term / nf;
  out.gen_loss = gen_term / nf;
  return out;
}

Matrix sample_latent(std::size_t batch, std::size_t latent_dim, Rng& rng) {
  Matrix z(batch, latent_dim);
  for (double& v : z.data) v = rng.normal();
  return z;
}

void save_checkpoint(const Mlp& net, const std::string& path) {
  std::ostringstream out;
  out << "rlsgan-mlp 1\n";
  out << net.layers.size() << "\n";
  for (const Layer& layer : net.layers) {
    out << layer.weights.rows << " " << layer.weights.cols << " "
        << activation_name(layer.activation) << " "
        << io::format_double(layer.leaky_slope) << "\n";
    for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
      out << io::format_double(layer.weights.data[i])
          << (i + 1 == layer.weights.data.size() ? "\n" : " ");
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i)
      out << io::format_double(layer.bias[i]) << (i + 1 == layer.bias.size() ? "\n" : " ");
  }
  io::write_file_atomic(path, out.str());
}

Mlp load_checkpoint(const std::string& path) {
  std::istringstream in(io::read_file(path));
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "rlsgan-mlp" || version != 1)
    fail(ErrorCode::parse, "not a recognized checkpoint file: " + path);
  std::size_t n_layers = 0;
  in >> n_layers;
  Mlp net;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Layer layer;
    std::size_t r = 0, c = 0;
    std::string act;
    in >> r >> c >> act >> layer.leaky_slope;
    layer.activation = activation_from_name(act);
    layer.weights = Matrix(r, c);
    for (double& v : layer.weights.data) in >> v;
    layer.bias.resize(c);
    for (double& v : layer.bias) in >> v;
    if (!in) fail(ErrorCode::parse, "truncated checkpoint file: " + path);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace rlsgan::nn
