#pragma once

// Single-layer LSTM with a softmax head, one sequence at a time.
// Gate order in the stacked weights is input, forget, output, candidate.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdl/neural/encoding.hpp"

namespace pdl::neural {

struct LstmShape {
  std::size_t d = 0;  // input
  std::size_t h = 0;  // hidden
  std::size_t n = 0;  // classes

  std::size_t size() const { return 4 * h * d + 4 * h * h + 4 * h + n * h + n; }
  bool operator==(const LstmShape&) const = default;
};

// Flat storage: W (4h x d), U (4h x h), b (4h), V (n x h), c (n).
class LstmParameters {
 public:
  LstmParameters() = default;
  explicit LstmParameters(LstmShape shape) : shape_(shape), data_(shape.size(), 0.0) {}

  // Uniform(-1/sqrt(h), 1/sqrt(h)) weights, zero biases except forget gate = 1.
  static LstmParameters initialized(LstmShape shape, std::uint64_t seed);

  const LstmShape& shape() const { return shape_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double* W() { return data_.data(); }
  double* U() { return W() + 4 * shape_.h * shape_.d; }
  double* b() { return U() + 4 * shape_.h * shape_.h; }
  double* V() { return b() + 4 * shape_.h; }
  double* c() { return V() + shape_.n * shape_.h; }
  const double* W() const { return data_.data(); }
  const double* U() const { return W() + 4 * shape_.h * shape_.d; }
  const double* b() const { return U() + 4 * shape_.h * shape_.h; }
  const double* V() const { return b() + 4 * shape_.h; }
  const double* c() const { return V() + shape_.n * shape_.h; }

  void zero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool operator==(const LstmParameters&) const = default;

 private:
  LstmShape shape_;
  std::vector<double> data_;
};

// Per-step activations kept for the backward pass.
struct ForwardTrace {
  std::size_t steps = 0;
  std::vector<double> gates;   // steps x 4h, post-activation
  std::vector<double> cell;    // steps x h
  std::vector<double> hidden;  // steps x h
  std::vector<double> head_in; // steps x h, hidden after dropout
  Matrix probs;                // steps x n
};

// dropout_mask, when given, is steps x h of multipliers applied to the hidden
// state entering the softmax head. Throws NumericError on non-finite values.
ForwardTrace lstm_forward(const LstmParameters& params, const EncodedSequence& seq,
                          const Matrix* dropout_mask = nullptr);

// Mean cross-entropy over the real target steps.
double sequence_loss(const ForwardTrace& fwd, const EncodedSequence& seq);

// Accumulates d(loss)/d(params) into grad and returns the loss.
double loss_and_gradient(const LstmParameters& params, const EncodedSequence& seq, LstmParameters& grad,
                         const Matrix* dropout_mask = nullptr);

// Argmax over the row, lowest index on ties.
std::size_t predict(const Matrix& probs, std::size_t step);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(std::size_t size, AdamConfig cfg) : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}
  void step(LstmParameters& params, const LstmParameters& grad);
  std::uint64_t steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

}  // namespace pdl::neural
