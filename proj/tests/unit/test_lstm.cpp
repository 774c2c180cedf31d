#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pdl/neural/lstm.hpp"
#include "oracles/oracles.hpp"
#include "pdl/rng.hpp"

namespace pdl::neural {
namespace {

// W = (0.5, -0.25, 1, 0.75), U = (0.1, 0.2, -0.3, 0.4), b = (0, 1, 0, 0); x = (1, 0).
// Step 1: i = s(0.5), f = s(0.75), o = s(1), g = tanh(0.75); c1 = i g; h1 = o tanh(c1).
// Step 2: i = s(0.1 h1), f = s(1 + 0.2 h1), o = s(-0.3 h1), g = tanh(0.4 h1);
//         c2 = f c1 + i g; h2 = o tanh(c2).
TEST(Lstm, HandComputedRecurrence) {
  LstmParameters p(LstmShape{1, 1, 1});
  const double w[] = {0.5, -0.25, 1.0, 0.75};
  const double u[] = {0.1, 0.2, -0.3, 0.4};
  std::copy(w, w + 4, p.W());
  std::copy(u, u + 4, p.U());
  p.b()[1] = 1.0;
  p.V()[0] = 0.3;
  p.c()[0] = 0.1;
  EncodedSequence seq{Matrix(2, 1), Matrix(2, 1), 2, {0}};
  seq.inputs.at(0, 0) = 1.0;
  seq.targets.at(0, 0) = 1.0;
  const auto f = lstm_forward(p, seq);
  EXPECT_NEAR(f.cell[0], 0.39535439211654943289, 1e-12);
  EXPECT_NEAR(f.hidden[0], 0.27485390068577303333, 1e-12);
  EXPECT_NEAR(f.cell[1], 0.34874827020588759706, 1e-12);
  EXPECT_NEAR(f.hidden[1], 0.16072523599945835363, 1e-12);
  EXPECT_EQ(f.probs.at(0, 0), 1.0);
  EXPECT_EQ(sequence_loss(f, seq), 0.0);
}

TEST(Lstm, InitializationRangesAndForgetBias) {
  const LstmShape shape{5, 8, 3};
  const auto p = LstmParameters::initialized(shape, 4);
  const double bound = 1.0 / std::sqrt(8.0);
  for (std::size_t i = 0; i < 4 * 8 * 5; ++i) EXPECT_LE(std::abs(p.W()[i]), bound);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_EQ(p.b()[j], 0.0);
    EXPECT_EQ(p.b()[8 + j], 1.0);
    EXPECT_EQ(p.b()[16 + j], 0.0);
  }
  EXPECT_EQ(p, LstmParameters::initialized(shape, 4));
  EXPECT_NE(p, LstmParameters::initialized(shape, 5));
}

TEST(Lstm, GradientMatchesFiniteDifferences) {
  const LstmShape shape{6, 4, 2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto params = LstmParameters::initialized(shape, seed + 100);
    const auto seq = oracle::random_sequence(rng, shape.d, shape.n, 4, 5);
    ASSERT_EQ(seq.target_steps(), 3U);
    EXPECT_LT(oracle::max_gradient_error(params, seq, nullptr), 1e-4) << "seed " << seed;
  }
}

// Masked units shrink some gradients to ~1e-8, where the difference quotient
// carries ~1e-11 of rounding; a 1e-6 floor keeps those from reading as errors.
TEST(Lstm, GradientWithDropoutMatchesFiniteDifferences) {
  const LstmShape shape{6, 4, 2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto params = LstmParameters::initialized(shape, seed + 100);
    const auto seq = oracle::random_sequence(rng, shape.d, shape.n, 4, 5);
    const auto mask = oracle::random_mask(rng, 5, shape.h);
    EXPECT_LT(oracle::max_gradient_error(params, seq, &mask, 1e-6), 1e-4) << "seed " << seed;
  }
}

TEST(Lstm, PaddingRowsAreNeutral) {
  const LstmShape shape{6, 4, 3};
  Rng rng(8);
  const auto params = LstmParameters::initialized(shape, 1);
  const auto seq = oracle::random_sequence(rng, shape.d, shape.n, 4, 9);
  auto noisy = seq;
  for (std::size_t t = seq.steps; t < seq.inputs.rows; ++t) {
    for (std::size_t c = 0; c < shape.d; ++c) noisy.inputs.at(t, c) = rng.uniform(-5.0, 5.0);
    for (std::size_t c = 0; c < shape.n; ++c) noisy.targets.at(t, c) = rng.uniform();
  }
  LstmParameters g1(shape);
  LstmParameters g2(shape);
  const double l1 = loss_and_gradient(params, seq, g1);
  const double l2 = loss_and_gradient(params, noisy, g2);
  EXPECT_EQ(l1, l2);
  EXPECT_EQ(g1.data(), g2.data());
  const auto f1 = lstm_forward(params, seq);
  const auto f2 = lstm_forward(params, noisy);
  EXPECT_EQ(f1.probs, f2.probs);
}

TEST(Lstm, PredictTakesFirstMaximum) {
  Matrix probs(1, 3);
  probs.at(0, 0) = 0.25;
  probs.at(0, 1) = 0.375;
  probs.at(0, 2) = 0.375;
  EXPECT_EQ(predict(probs, 0), 1U);
}

TEST(Lstm, ShapeErrors) {
  const auto params = LstmParameters::initialized({3, 2, 2}, 0);
  Rng rng(1);
  const auto wrong = oracle::random_sequence(rng, 4, 2, 3, 3);
  EXPECT_THROW(lstm_forward(params, wrong), PreconditionError);
  LstmParameters grad(LstmShape{3, 3, 2});
  const auto ok = oracle::random_sequence(rng, 3, 2, 3, 3);
  EXPECT_THROW(loss_and_gradient(params, ok, grad), PreconditionError);
}

TEST(Lstm, NonFiniteLogitsRaise) {
  auto params = LstmParameters::initialized({3, 2, 2}, 0);
  params.c()[0] = std::numeric_limits<double>::infinity();
  Rng rng(1);
  const auto seq = oracle::random_sequence(rng, 3, 2, 3, 3);
  EXPECT_THROW(lstm_forward(params, seq), NumericError);
}

TEST(Adam, FirstStepMovesBySignTimesLearningRate) {
  LstmParameters params(LstmShape{1, 1, 1});
  LstmParameters grad(params.shape());
  for (std::size_t i = 0; i < grad.data().size(); ++i) grad.data()[i] = i % 2 == 0 ? 0.5 : -2.0;
  Adam adam(params.data().size(), AdamConfig{});
  adam.step(params, grad);
  EXPECT_EQ(adam.steps(), 1U);
  for (std::size_t i = 0; i < params.data().size(); ++i) {
    EXPECT_NEAR(params.data()[i], i % 2 == 0 ? -1e-3 : 1e-3, 1e-10);
  }
}

}  // namespace
}  // namespace pdl::neural
