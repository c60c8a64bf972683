#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "oracles.hpp"
#include "rlsgan/error.hpp"
#include "rlsgan/nn.hpp"
#include "rlsgan/rng.hpp"

using namespace rlsgan;
using linalg::Matrix;

namespace {

// Scalar loss used for gradient checking: sum of c .* output plus,
// optionally, d .* hidden.
double probe_loss(const nn::Mlp& net, const Matrix& x, const Matrix& c,
                  const Matrix* d_hidden_coeff) {
  nn::ForwardResult r = nn::forward(net, x);
  double loss = 0.0;
  for (std::size_t i = 0; i < r.output.data.size(); ++i)
    loss += c.data[i] * r.output.data[i];
  if (d_hidden_coeff)
    for (std::size_t i = 0; i < r.hidden.data.size(); ++i)
      loss += d_hidden_coeff->data[i] * r.hidden.data[i];
  return loss;
}

}  // namespace

TEST_CASE("forward with zero weights gives tanh-chained biases") {
  Rng rng(1);
  nn::Mlp net = nn::init_mlp({3, 4, 2}, {nn::Activation::tanh, nn::Activation::none}, rng);
  for (auto& layer : net.layers)
    for (double& w : layer.weights.data) w = 0.0;
  const Matrix x = oracles::random_matrix(5, 3, rng);
  const nn::ForwardResult r = nn::forward(net, x);
  for (double v : r.output.data) CHECK(v == 0.0);
}

TEST_CASE("identity single layer is the identity") {
  Rng rng(2);
  nn::Mlp net = nn::init_mlp({3, 3}, {nn::Activation::none}, rng);
  net.layers[0].weights = Matrix::identity(3);
  const Matrix x = oracles::random_matrix(4, 3, rng);
  const nn::ForwardResult r = nn::forward(net, x);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    CHECK(r.output.data[i] == doctest::Approx(x.data[i]));
  // With a single layer the hidden branch is the input itself.
  CHECK(r.hidden.data == x.data);
}

TEST_CASE("forward matches a per-neuron hand computation") {
  Rng rng(3);
  nn::Mlp net = nn::init_mlp({2, 3, 1}, {nn::Activation::tanh, nn::Activation::none}, rng);
  Matrix x(1, 2);
  x(0, 0) = 0.3;
  x(0, 1) = -0.7;
  const nn::ForwardResult r = nn::forward(net, x);

  double hidden[3];
  for (int j = 0; j < 3; ++j) {
    double z = net.layers[0].bias[j];
    for (int i = 0; i < 2; ++i) z += x(0, i) * net.layers[0].weights(i, j);
    hidden[j] = std::tanh(z);
  }
  double out = net.layers[1].bias[0];
  for (int j = 0; j < 3; ++j) out += hidden[j] * net.layers[1].weights(j, 0);

  CHECK(r.output(0, 0) == doctest::Approx(out).epsilon(1e-12));
  for (int j = 0; j < 3; ++j)
    CHECK(r.hidden(0, j) == doctest::Approx(hidden[j]).epsilon(1e-12));
}

TEST_CASE("forward is deterministic") {
  Rng rng(4);
  const nn::Mlp net = nn::make_synthetic_discriminator(rng);
  const Matrix x = oracles::random_matrix(8, 2, rng);
  const Matrix y1 = nn::forward_plain(net, x);
  const Matrix y2 = nn::forward_plain(net, x);
  CHECK(y1.data == y2.data);
}

TEST_CASE("backward zero upstream gradient gives zero parameter gradients") {
  Rng rng(5);
  nn::Mlp net = nn::init_mlp({3, 5, 2}, {nn::Activation::tanh, nn::Activation::none}, rng);
  const Matrix x = oracles::random_matrix(4, 3, rng);
  nn::ForwardResult r = nn::forward(net, x);
  const Matrix zero(4, 2);
  const nn::Grads g = nn::backward(net, r.tape, zero);
  for (const Matrix& dw : g.d_weights)
    for (double v : dw.data) CHECK(v == 0.0);
}

TEST_CASE("linear net squared loss has the closed-form gradient") {
  Rng rng(6);
  nn::Mlp net = nn::init_mlp({3, 1}, {nn::Activation::none}, rng);
  const Matrix x = oracles::random_matrix(6, 3, rng);
  const Matrix t = oracles::random_matrix(6, 1, rng);
  nn::ForwardResult r = nn::forward(net, x);

  // L = (1/b) sum (y - t)^2, dL/dy = 2 (y - t) / b
  Matrix dy(6, 1);
  for (std::size_t i = 0; i < 6; ++i)
    dy(i, 0) = 2.0 * (r.output(i, 0) - t(i, 0)) / 6.0;
  const nn::Grads g = nn::backward(net, r.tape, dy);

  // closed form: 2 X^T (X w - t) / b
  for (std::size_t k = 0; k < 3; ++k) {
    double expect = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
      expect += 2.0 * x(i, k) * (r.output(i, 0) - t(i, 0)) / 6.0;
    CHECK(g.d_weights[0](k, 0) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    nn::Mlp net = nn::init_mlp(
        {3, 6, 5, 2},
        {nn::Activation::tanh, nn::Activation::leaky_relu, nn::Activation::none},
        rng);
    const Matrix x = oracles::random_matrix(4, 3, rng);
    const Matrix c = oracles::random_matrix(4, 2, rng);
    const Matrix d = oracles::random_matrix(4, 5, rng);

    nn::ForwardResult r = nn::forward(net, x);
    const nn::Grads g = nn::backward(net, r.tape, c, d);

    const double h = 1e-5;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      for (std::size_t p = 0; p < net.layers[l].weights.data.size(); p += 7) {
        double& w = net.layers[l].weights.data[p];
        const double saved = w;
        w = saved + h;
        const double up = probe_loss(net, x, c, &d);
        w = saved - h;
        const double down = probe_loss(net, x, c, &d);
        w = saved;
        const double fd = (up - down) / (2.0 * h);
        const double an = g.d_weights[l].data[p];
        CHECK(std::fabs(fd - an) <= 1e-4 * std::max(1.0, std::fabs(fd)));
      }
    }
  }
}

TEST_CASE("tape cannot be consumed twice") {
  Rng rng(8);
  nn::Mlp net = nn::init_mlp({2, 3, 1}, {nn::Activation::tanh, nn::Activation::none}, rng);
  const Matrix x = oracles::random_matrix(2, 2, rng);
  nn::ForwardResult r = nn::forward(net, x);
  const Matrix dy(2, 1, 0.5);
  nn::backward(net, r.tape, dy);
  CHECK_THROWS_AS(nn::backward(net, r.tape, dy), Error);
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
  Rng rng(9);
  nn::Mlp net = nn::init_mlp({2, 4, 1}, {nn::Activation::tanh, nn::Activation::none}, rng);
  const std::vector<double> before = net.layers[0].weights.data;
  nn::AdamState state = nn::make_adam_state(net, 1e-3, 0.5, 0.999);

  nn::Grads zero;
  for (const auto& layer : net.layers) {
    zero.d_weights.emplace_back(layer.weights.rows, layer.weights.cols);
    zero.d_bias.emplace_back(layer.bias.size(), 0.0);
  }
  nn::adam_step(net, zero, state);
  CHECK(state.step == 1);
  CHECK(net.layers[0].weights.data == before);
}

TEST_CASE("first adam step is signed unit step scaled by lr") {
  Rng rng(10);
  nn::Mlp net = nn::init_mlp({2, 2}, {nn::Activation::none}, rng);
  const std::vector<double> before = net.layers[0].weights.data;
  nn::AdamState state = nn::make_adam_state(net, 1e-3, 0.5, 0.999, 1e-8);

  nn::Grads g;
  g.d_weights.emplace_back(2, 2);
  g.d_bias.emplace_back(2, 0.0);
  for (std::size_t i = 0; i < 4; ++i) g.d_weights[0].data[i] = (i % 2 ? -0.3 : 0.7);

  nn::adam_step(net, g, state);
  for (std::size_t i = 0; i < 4; ++i) {
    const double grad = g.d_weights[0].data[i];
    const double expect = before[i] - 1e-3 * grad / (std::fabs(grad) + 1e-8);
    CHECK(net.layers[0].weights.data[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("adam drives a convex quadratic down") {
  Rng rng(11);
  nn::Mlp net = nn::init_mlp({2, 1}, {nn::Activation::none}, rng);
  nn::AdamState state = nn::make_adam_state(net, 1e-2, 0.5, 0.999);
  const Matrix x = oracles::random_matrix(16, 2, rng);
  const Matrix t = oracles::random_matrix(16, 1, rng);

  auto loss_of = [&] {
    const Matrix y = nn::forward_plain(net, x);
    double loss = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
      loss += (y(i, 0) - t(i, 0)) * (y(i, 0) - t(i, 0)) / 16.0;
    return loss;
  };

  const double initial = loss_of();
  for (int step = 0; step < 100; ++step) {
    nn::ForwardResult r = nn::forward(net, x);
    Matrix dy(16, 1);
    for (std::size_t i = 0; i < 16; ++i)
      dy(i, 0) = 2.0 * (r.output(i, 0) - t(i, 0)) / 16.0;
    const nn::Grads g = nn::backward(net, r.tape, dy);
    nn::adam_step(net, g, state);
  }
  CHECK(loss_of() < initial);
}

TEST_CASE("adam rejects non-finite gradients") {
  Rng rng(12);
  nn::Mlp net = nn::init_mlp({2, 1}, {nn::Activation::none}, rng);
  nn::AdamState state = nn::make_adam_state(net, 1e-3, 0.5, 0.999);
  nn::Grads g;
  g.d_weights.emplace_back(2, 1);
  g.d_bias.emplace_back(1, 0.0);
  g.d_weights[0](0, 0) = std::nan("");
  CHECK_THROWS_AS(nn::adam_step(net, g, state), Error);
}

TEST_CASE("gan losses at zero logits") {
  const Matrix zeros(4, 1);
  const nn::GanLosses losses = nn::gan_losses(zeros, zeros);
  CHECK(losses.disc_loss == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(losses.gen_loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("perfect discriminator drives the loss to zero") {
  Matrix real(3, 1, 40.0);
  Matrix fake(3, 1, -40.0);
  const nn::GanLosses losses = nn::gan_losses(real, fake);
  CHECK(losses.disc_loss <= 1e-15);
}

TEST_CASE("stable loss matches the naive formula at moderate logits") {
  Rng rng(13);
  Matrix real(6, 1), fake(6, 1);
  for (double& v : real.data) v = rng.uniform(-3.0, 3.0);
  for (double& v : fake.data) v = rng.uniform(-3.0, 3.0);
  const nn::GanLosses losses = nn::gan_losses(real, fake);

  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  double disc = 0.0, gen = 0.0;
  for (double v : real.data) disc += -std::log(sig(v)) / 6.0;
  for (double v : fake.data) {
    disc += -std::log(1.0 - sig(v)) / 6.0;
    gen += -std::log(sig(v)) / 6.0;
  }
  CHECK(std::fabs(losses.disc_loss - disc) <= 1e-10);
  CHECK(std::fabs(losses.gen_loss - gen) <= 1e-10);
}

TEST_CASE("checkpoints round-trip exactly") {
  Rng rng(14);
  const nn::Mlp net = nn::make_synthetic_generator(rng);
  const std::string path = "/tmp/rlsgan_test_ckpt.txt";
  nn::save_checkpoint(net, path);
  const nn::Mlp loaded = nn::load_checkpoint(path);
  REQUIRE(loaded.layers.size() == net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(loaded.layers[l].weights.data == net.layers[l].weights.data);
    CHECK(loaded.layers[l].bias == net.layers[l].bias);
    CHECK(loaded.layers[l].activation == net.layers[l].activation);
  }
  std::remove(path.c_str());
}

TEST_CASE("synthetic architectures have the published shapes") {
  Rng rng(15);
  const nn::Mlp gen = nn::make_synthetic_generator(rng);
  CHECK(gen.input_dim() == 25);
  CHECK(gen.output_dim() == 2);
  CHECK(gen.hidden_dim() == 128);
  const nn::Mlp disc = nn::make_synthetic_discriminator(rng);
  CHECK(disc.input_dim() == 2);
  CHECK(disc.output_dim() == 1);
  CHECK(disc.hidden_dim() == 128);
}
