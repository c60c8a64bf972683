#ifndef RLSGAN_NN_HPP
#define RLSGAN_NN_HPP

#include <string>
#include <vector>

#include "rlsgan/linalg.hpp"
#include "rlsgan/rng.hpp"

namespace rlsgan::nn {

using linalg::Matrix;

enum class Activation { tanh, relu, leaky_relu, none };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct Layer {
  Matrix weights;              // in x out
  std::vector<double> bias;    // out
  Activation activation = Activation::none;
  double leaky_slope = 0.01;
};

struct Mlp {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().weights.rows; }
  std::size_t output_dim() const { return layers.back().weights.cols; }
  // Width of the layer feeding the final dense output.
  std::size_t hidden_dim() const;
};

// Recorded forward activations for one batch; consumed exactly once by
// backward().
struct Tape {
  Matrix input;
  std::vector<Matrix> post;  // post[l] = activation output of layer l
  bool used = false;
};

struct ForwardResult {
  Matrix output;
  Matrix hidden;  // last hidden-layer activations (input when depth == 1)
  Tape tape;
};

struct Grads {
  std::vector<Matrix> d_weights;
  std::vector<std::vector<double>> d_bias;
  Matrix d_input;
};

struct AdamState {
  long step = 0;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double lr = 1e-3;
  double eps = 1e-8;
  std::vector<Matrix> m_weights, v_weights;
  std::vector<std::vector<double>> m_bias, v_bias;
};

// Glorot-uniform weights, zero biases.
Mlp init_mlp(const std::vector<std::size_t>& dims,
             const std::vector<Activation>& activations, Rng& rng,
             double leaky_slope = 0.01);

// Generator 25 -> 128 tanh -> 128 tanh -> 2 and discriminator
// 2 -> 128 tanh -> 128 tanh -> 1 used for the 2D experiments.
Mlp make_synthetic_generator(Rng& rng, std::size_t latent_dim = 25);
Mlp make_synthetic_discriminator(Rng& rng);

ForwardResult forward(const Mlp& net, const Matrix& x);

// Output without bookkeeping, for sampling/evaluation paths.
Matrix forward_plain(const Mlp& net, const Matrix& x);

// Reverse pass. d_output is dLoss/d(output); d_hidden, when non-empty,
// is an extra gradient injected at the last hidden-layer activations
// (the feature branch). Marks the tape used.
Grads backward(const Mlp& net, Tape& tape, const Matrix& d_output,
               const Matrix& d_hidden = Matrix());

AdamState make_adam_state(const Mlp& net, double lr, double beta1,
                          double beta2, double eps = 1e-8);

// In-place Adam update with bias correction; raises a divergence error
// on non-finite gradients.
void adam_step(Mlp& net, const Grads& grads, AdamState& state);

struct GanLosses {
  double disc_loss = 0.0;
  double gen_loss = 0.0;
};

// Cross-entropy GAN losses from raw logits, evaluated in log-sigmoid
// form.
GanLosses gan_losses(const Matrix& d_real_logits, const Matrix& d_fake_logits);

// log(1 + exp(x)) without overflow.
double softplus(double x);
double sigmoid(double x);

// Batch of standard-normal latent draws.
Matrix sample_latent(std::size_t batch, std::size_t latent_dim, Rng& rng);

// Text checkpoint with a versioned header; values round-trip exactly.
void save_checkpoint(const Mlp& net, const std::string& path);
Mlp load_checkpoint(const std::string& path);

}  // namespace rlsgan::nn

#endif  // RLSGAN_NN_HPP
