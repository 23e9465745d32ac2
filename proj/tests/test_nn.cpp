#include <gtest/gtest.h>

#include <cmath>

#include "ecggan/error.hpp"
#include "ecggan/nn/checkpoint.hpp"
#include "ecggan/nn/layer_spec.hpp"
#include "ecggan/nn/layers.hpp"
#include "ecggan/nn/loss.hpp"
#include "ecggan/nn/network.hpp"
#include "ecggan/nn/optimizer.hpp"
#include "support/nn_oracles.hpp"

using namespace ecggan;
using namespace ecggan::nn;

namespace {

struct ConvCase {
  std::size_t time, leads, in, out, stride_time, stride_lead;
};

class ConvMatchesReference : public ::testing::TestWithParam<ConvCase> {};

TEST_P(ConvMatchesReference, ForwardAndBackward) {
  const ConvCase c = GetParam();
  LayerSpec spec = conv2d("c", c.in, c.out, {c.stride_time, c.stride_lead});
  Conv2D layer(spec);
  Rng rng(derive_seed(7, c.time, c.in * 100 + c.out));
  layer.init(rng);
  for (auto& b : layer.bias()) b = rng.normal();

  const Tensor x = oracle::random_tensor({c.time, c.leads, c.in}, rng);
  const Tensor y = layer.forward(x);
  const Tensor y_ref = oracle::conv_forward(spec, layer.weights(), layer.bias(), x);
  ASSERT_EQ(y.shape(), y_ref.shape());
  for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(y[i], y_ref[i], 1e-11 * (1 + std::abs(y_ref[i]))) << i;

  const Tensor dy = oracle::random_tensor(y.shape(), rng);
  for (auto& p : layer.params()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
  const Tensor dx = layer.backward(dy, true);
  const auto ref = oracle::conv_backward(spec, layer.weights(), x, dy);
  for (std::size_t i = 0; i < dx.size(); ++i) ASSERT_NEAR(dx[i], ref.dx[i], 1e-11 * (1 + std::abs(ref.dx[i]))) << i;
  auto params = layer.params();
  for (std::size_t i = 0; i < ref.dw.size(); ++i)
    ASSERT_NEAR(params[0].grad[i], ref.dw[i], 1e-10 * (1 + std::abs(ref.dw[i]))) << i;
  for (std::size_t i = 0; i < ref.db.size(); ++i) ASSERT_NEAR(params[1].grad[i], ref.db[i], 1e-10 * (1 + std::abs(ref.db[i])));
}

INSTANTIATE_TEST_SUITE_P(Shapes, ConvMatchesReference,
                         ::testing::Values(ConvCase{20, 8, 1, 3, 1, 1}, ConvCase{23, 8, 3, 5, 2, 1},
                                           ConvCase{16, 5, 2, 4, 2, 1}, ConvCase{1, 1, 2, 2, 1, 1},
                                           ConvCase{400, 8, 2, 3, 1, 1}, ConvCase{31, 8, 6, 7, 2, 1},
                                           ConvCase{17, 7, 4, 9, 1, 2}, ConvCase{100, 8, 9, 1, 2, 1},
                                           ConvCase{3, 2, 5, 6, 2, 1}));

TEST(Conv2D, SingleSampleUsesCenterTap) {
  Conv2D layer(conv2d("c", 1, 1));
  std::fill(layer.weights().begin(), layer.weights().end(), 0.0);
  layer.weights()[7 * 3 + 1] = 2.5;  // kernel row 7, column 1
  Tensor x({1, 1, 1});
  x[0] = 3.0;
  EXPECT_DOUBLE_EQ(layer.forward(x)[0], 7.5);
}

TEST(Conv2D, RejectsWrongKernel) {
  LayerSpec s = conv2d("c", 1, 1);
  s.kernel = {3, 3};
  EXPECT_THROW(Conv2D{s}, Error);
  try {
    param_count(s);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedLayer);
  }
}

TEST(Conv2D, BackwardBeforeForwardFails) {
  Conv2D layer(conv2d("c", 1, 1));
  try {
    layer.backward(Tensor({4, 2, 1}), true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRecorded);
  }
}

class GradientCheck : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GradientCheck, Conv2DStride1) {
  Conv2D layer(conv2d("c", 2, 3));
  const auto r = oracle::grad_check(layer, {9, 3, 2}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
  EXPECT_LT(r.max_param_error, 1e-4);
}

TEST_P(GradientCheck, Conv2DStride2) {
  Conv2D layer(conv2d("c", 3, 2, {2, 1}));
  const auto r = oracle::grad_check(layer, {12, 4, 3}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
  EXPECT_LT(r.max_param_error, 1e-4);
}

TEST_P(GradientCheck, Dense) {
  Dense layer(dense("d", 7, 3));
  const auto r = oracle::grad_check(layer, {7}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
  EXPECT_LT(r.max_param_error, 1e-4);
}

TEST_P(GradientCheck, BiLSTM) {
  BiLSTM layer(bilstm("l", 3, 4));
  const auto r = oracle::grad_check(layer, {6, 3}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
  EXPECT_LT(r.max_param_error, 1e-4);
}

TEST_P(GradientCheck, LeakyReLU) {
  LeakyReLU layer(leaky_relu_layer());
  const auto r = oracle::grad_check(layer, {5, 4, 2}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
}

TEST_P(GradientCheck, Sigmoid) {
  Sigmoid layer(sigmoid_layer());
  const auto r = oracle::grad_check(layer, {11}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
}

TEST_P(GradientCheck, Reshape) {
  Reshape layer(reshape("r", {6, 2}));
  const auto r = oracle::grad_check(layer, {3, 4, 1}, GetParam());
  EXPECT_LT(r.max_input_error, 1e-4);
}

TEST_P(GradientCheck, BinaryCrossEntropy) { EXPECT_LT(oracle::bce_grad_check(GetParam()), 1e-4); }

INSTANTIATE_TEST_SUITE_P(Seeds, GradientCheck, ::testing::Values(11u, 12u, 13u));

// Two time steps of one direction written out by hand.
TEST(BiLSTM, MatchesHandUnrolledCell) {
  BiLSTM layer(bilstm("l", 1, 1));
  for (int d = 0; d < 2; ++d) {
    auto& dir = layer.direction(d);
    dir.w = {0.5, -0.3, 0.8, 0.2};
    dir.u = {0.1, 0.4, -0.6, 0.7};
    dir.b = {0.0, 1.0, 0.1, -0.2};
  }
  Tensor x({2, 1});
  x[0] = 1.0;
  x[1] = -2.0;
  const Tensor y = layer.forward(x);

  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  auto step = [&](double xt, double h, double c, double& h_out, double& c_out) {
    const double i = sig(0.5 * xt + 0.1 * h + 0.0);
    const double f = sig(-0.3 * xt + 0.4 * h + 1.0);
    const double g = std::tanh(0.8 * xt - 0.6 * h + 0.1);
    const double o = sig(0.2 * xt + 0.7 * h - 0.2);
    c_out = f * c + i * g;
    h_out = o * std::tanh(c_out);
  };
  double h1, c1, h2, c2;
  step(1.0, 0, 0, h1, c1);
  step(-2.0, h1, c1, h2, c2);
  EXPECT_NEAR(y[0 * 2 + 0], h1, 1e-15);
  EXPECT_NEAR(y[1 * 2 + 0], h2, 1e-15);
  // Reverse direction sees -2 first.
  double r1, rc1, r2, rc2;
  step(-2.0, 0, 0, r1, rc1);
  step(1.0, r1, rc1, r2, rc2);
  EXPECT_NEAR(y[1 * 2 + 1], r1, 1e-15);
  EXPECT_NEAR(y[0 * 2 + 1], r2, 1e-15);
}

TEST(BiLSTM, ForgetBiasStartsAtOne) {
  BiLSTM layer(bilstm("l", 12, 64));
  Rng rng(1);
  layer.init(rng);
  for (int d = 0; d < 2; ++d) {
    const auto& b = layer.direction(d).b;
    for (std::size_t j = 0; j < 64; ++j) {
      EXPECT_EQ(b[j], 0.0);
      EXPECT_EQ(b[64 + j], 1.0);
    }
  }
}

TEST(Loss, ClampedPredictionsGiveFiniteLossAndZeroGradient) {
  const std::vector<double> p{0.0, 1.0}, y{1.0, 0.0};
  const double l = bce_loss(p, y);
  EXPECT_NEAR(l, -std::log(kProbabilityClamp), 1e-9);
  for (double g : bce_grad(p, y)) EXPECT_EQ(g, 0.0);
}

TEST(Loss, RejectsBadInput) {
  const std::vector<double> p{0.5, 1.5}, y{1.0, 0.0}, short_y{1.0};
  EXPECT_THROW(bce_loss(p, y), Error);
  EXPECT_THROW(bce_loss(std::vector<double>{0.5}, std::vector<double>{2.0}), Error);
  EXPECT_THROW(bce_loss(std::vector<double>{0.5, 0.5}, short_y), Error);
}

TEST(Adam, FirstStepMovesByAtMostLearningRate) {
  AdamHyper hyper;
  std::vector<double> w{1.0, -2.0, 0.5}, g{0.3, -1e-3, 40.0};
  const auto before = w;
  AdamState s(3);
  adam_step(w, g, s, hyper);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_LE(std::abs(w[i] - before[i]), hyper.learning_rate * (1 + 1e-12));
    EXPECT_NE(w[i], before[i]);
  }
  // With bias correction the first step is lr * g / (|g| + eps') ~= lr * sign(g).
  EXPECT_NEAR(w[2] - before[2], -hyper.learning_rate, 1e-9);
}

TEST(Adam, MatchesClosedFormAfterTwoSteps) {
  AdamHyper hp;
  std::vector<double> w{0.0};
  AdamState s(1);
  const double g1 = 0.2, g2 = -0.1;
  adam_step(w, std::vector<double>{g1}, s, hp);
  adam_step(w, std::vector<double>{g2}, s, hp);
  double m = 0, v = 0, x = 0;
  for (int t = 1; t <= 2; ++t) {
    const double g = t == 1 ? g1 : g2;
    m = hp.beta1 * m + (1 - hp.beta1) * g;
    v = hp.beta2 * v + (1 - hp.beta2) * g * g;
    const double lr = hp.learning_rate * std::sqrt(1 - std::pow(hp.beta2, t)) / (1 - std::pow(hp.beta1, t));
    x -= lr * m / (std::sqrt(v) + hp.epsilon);
  }
  EXPECT_NEAR(w[0], x, 1e-15);
  EXPECT_EQ(s.step, 2u);
}

TEST(Network, ValidatesShapes) {
  NetworkSpec bad{"bad", {10, 8, 1}, {conv2d("c", 2, 3)}};
  EXPECT_THROW(Network{bad}, Error);
  NetworkSpec ok{"ok", {10, 8, 1}, {conv2d("c", 1, 3), leaky_relu_layer(), reshape("f", {240}), dense("d", 240, 1)}};
  Network net(ok);
  net.init(3);
  EXPECT_THROW(net.forward(Tensor({9, 8, 1})), Error);
  EXPECT_THROW(net.backward(Tensor({1})), Error);
  EXPECT_EQ(net.forward(Tensor({10, 8, 1})).shape(), Shape{1});
}

TEST(Network, InitIsDeterministicPerSeed) {
  NetworkSpec spec{"n", {10, 8, 1}, {conv2d("c", 1, 3), reshape("f", {240}), dense("d", 240, 1)}};
  Network a(spec), b(spec), c(spec);
  a.init(5);
  b.init(5);
  c.init(6);
  EXPECT_EQ(a.flat_params(), b.flat_params());
  EXPECT_NE(a.flat_params(), c.flat_params());
}

TEST(Checkpoint, NetworkAndOptimizerRoundTripExactly) {
  NetworkSpec spec{"n", {6, 3}, {bilstm("l", 3, 2), reshape("r", {6, 4, 1}), conv2d("c", 1, 2)}};
  Network a(spec), b(spec);
  a.init(9);
  AdamState s(a.param_count());
  s.step = 4;
  s.m[3] = 0.125;
  s.v[1] = std::nextafter(1.0, 2.0);
  Rng rng(77);
  rng.normal();

  BinaryWriter w;
  write_network(w, a);
  write_adam(w, s);
  write_rng(w, rng);
  BinaryReader r(w.bytes());
  read_network(r, b);
  const AdamState s2 = read_adam(r);
  Rng rng2(1);
  read_rng(r, rng2);
  EXPECT_TRUE(r.done());
  EXPECT_EQ(a.flat_params(), b.flat_params());
  EXPECT_EQ(s, s2);
  EXPECT_EQ(rng.normal(), rng2.normal());
  EXPECT_EQ(rng.uniform(), rng2.uniform());

  Network other(NetworkSpec{"n", {6, 3}, {bilstm("l", 3, 3), reshape("r", {6, 6, 1}), conv2d("c", 1, 2)}});
  BinaryReader r2(w.bytes());
  EXPECT_THROW(read_network(r2, other), Error);
}

}  // namespace
