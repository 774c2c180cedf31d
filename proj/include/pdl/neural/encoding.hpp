#pragma once

// Binary input/target encodings of plan traces for next-action labeling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/error.hpp"

namespace pdl::neural {

class EncodingError : public Error {
 public:
  using Error::Error;
};

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  bool operator==(const Matrix&) const = default;
};

// Columns [0, n) hold the one-hot action; then one block of relevant refs per
// action, in action order.
struct EncodingLayout {
  std::vector<std::string> actions;
  std::vector<std::vector<LiftedRef>> blocks;
  std::vector<std::size_t> offsets;  // first column of each block
  std::size_t d = 0;
  std::size_t n = 0;

  std::size_t action_slot(const std::string& action) const;  // throws EncodingError
  std::optional<std::size_t> ref_slot(std::size_t action, const LiftedRef& ref) const;
  // FNV-1a over a canonical text form.
  std::uint64_t hash() const;
};

EncodingLayout build_layout(const DomainSchema& schema);

// Longest trace in actions.
std::size_t batch_len(std::span<const PlanTrace> traces);

struct EncodedSequence {
  Matrix inputs;   // batchLen x d
  Matrix targets;  // batchLen x n; rows [0, steps - 1) are real
  std::size_t steps = 0;  // real input rows
  std::vector<std::size_t> labels;  // target class per real target row

  std::size_t target_steps() const { return labels.size(); }
};

// Block slots set for relevant refs true before the action or added by it.
EncodedSequence encode_training(const PlanTrace& trace, const EncodingLayout& layout, std::size_t batch_len);

// Block slots set for refs listed anywhere in the model's entry for the action.
EncodedSequence encode_validation(const PlanTrace& trace, const EncodingLayout& layout, const ActionModel& model,
                                  std::size_t batch_len);

}  // namespace pdl::neural
