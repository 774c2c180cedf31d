#pragma once

// Cross-validated training and model scoring.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdl/neural/encoding.hpp"
#include "pdl/neural/lstm.hpp"
#include "pdl/pruner.hpp"
#include "pdl/rational.hpp"

namespace pdl::neural {

struct TrainConfig {
  std::size_t hidden_units = 128;
  double dropout_rate = 0.8;
  std::size_t epochs = 10;
  std::size_t folds = 5;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t rng_seed = 0;

  void validate() const;  // throws PreconditionError
};

struct TrainResult {
  LstmParameters params;
  std::vector<double> loss_history;  // mean per-target-step loss of each epoch
};

// One Adam step per sequence, shuffled every epoch.
TrainResult train(std::span<const EncodedSequence> dataset, LstmShape shape, const TrainConfig& cfg,
                  std::uint64_t seed);

// Seeded permutation cut into k contiguous, near-equal folds.
std::vector<std::vector<std::size_t>> make_folds(std::size_t count, std::size_t k, std::uint64_t seed);

// Correct argmax predictions over the real target steps.
struct Accuracy {
  std::size_t correct = 0;
  std::size_t total = 0;

  Rational value() const { return total == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(correct),
                                                                     static_cast<std::int64_t>(total)); }
  Accuracy& operator+=(const Accuracy& o) {
    correct += o.correct;
    total += o.total;
    return *this;
  }
};

Accuracy accuracy(const LstmParameters& params, const EncodedSequence& seq);

struct FoldModel {
  std::vector<std::size_t> validation;  // trace indices held out
  LstmParameters params;
  std::vector<double> loss_history;
  Accuracy training_encoding;  // held-out accuracy with the training encoding
};

struct CrossValidation {
  EncodingLayout layout;
  std::size_t batch_len = 0;
  TrainConfig config;
  std::vector<FoldModel> folds;
};

CrossValidation cross_validate(std::span<const PlanTrace> traces, const EncodingLayout& layout,
                               const TrainConfig& cfg);

struct ModelScore {
  std::string id;
  bool reference = false;
  std::vector<Rational> fold_accuracy;
  Rational mean_accuracy;
  // Fraction of trace steps the model reproduces exactly (applicable, same successor).
  Rational replay_agreement;
  std::size_t pre_size = 0;
  std::size_t total_predicates = 0;
};

std::vector<ModelScore> score_models(const CrossValidation& cv, std::span<const PlanTrace> traces,
                                     const SampledModelSet& models);

Rational replay_agreement(const ActionModel& model, std::span<const PlanTrace> traces);

// Strict ranking: higher mean accuracy; ties by replay agreement (higher),
// precondition count (higher), total predicates (lower), then id.
bool ranks_before(const ModelScore& a, const ModelScore& b);

std::size_t select_best(const std::vector<ModelScore>& scores);

// File: 8-byte magic "PDLLSTM1", u64 little-endian header length, JSON header,
// then every fold's parameters as little-endian IEEE-754 doubles.
std::string serialize_parameters(const CrossValidation& cv);
CrossValidation parse_parameters(std::string_view bytes, const EncodingLayout& layout);

}  // namespace pdl::neural
