#pragma once

// Key-value pipeline configuration (docs/formats.md).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "pdl/candidates.hpp"
#include "pdl/neural/train.hpp"
#include "pdl/planner.hpp"
#include "pdl/rational.hpp"

namespace pdl {

struct PipelineConfig {
  // Paths as written; resolved against base_dir.
  std::string domain;
  std::string generator;
  std::string unitary;
  std::string run_root = "runs";
  std::string base_dir = ".";

  std::uint64_t seed = 1;
  std::size_t traces = 100;
  PlannerConfig planner;
  CandidateOptions candidates;
  Rational min_support{2, 5};
  Rational min_confidence{3, 5};
  Rational tolerance{1, 10};
  std::size_t schedule_start = 10;
  bool skip_mining = false;
  std::size_t budget = 50;
  bool include_reference = false;
  neural::TrainConfig train;

  std::string resolve(const std::string& path) const;
  // Sorted key=value lines of every setting except seed and run_root.
  std::string canonical() const;
  // First 12 hex digits of FNV-1a over canonical().
  std::string hash() const;
};

// '#' starts a comment; blank lines ignored; unknown or repeated keys are errors.
PipelineConfig parse_config(std::string_view text, const std::string& base_dir = ".");

}  // namespace pdl
