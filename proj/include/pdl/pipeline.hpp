#pragma once

// generate -> enumerate -> mine -> prune -> sample -> train -> select -> evaluate

#include <string>
#include <utility>
#include <vector>

#include "pdl/config.hpp"
#include "pdl/evaluator.hpp"

namespace pdl {

enum class Phase { Config, Generate, Enumerate, Mine, Prune, Sample, Train, Select, Evaluate };

std::string to_string(Phase phase);
// Process exit status for a failure in `phase` (2..10; 1 is reserved for usage errors).
int exit_code(Phase phase);

class PipelineError : public Error {
 public:
  PipelineError(Phase phase, const std::string& cause, std::vector<std::string> artifacts);

  Phase phase() const { return phase_; }
  const std::vector<std::string>& artifacts() const { return artifacts_; }

 private:
  Phase phase_;
  std::vector<std::string> artifacts_;
};

struct PipelineResult {
  std::string run_dir;
  EvaluationReport report;
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> timings;  // seconds per phase
};

// Artifacts go to <run_root>/<config hash>-s<seed>. Wall-clock timings are
// written to timings.json only, so report files are reproducible byte for byte.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Seeds handed to the randomized phases.
std::uint64_t generation_seed(std::uint64_t seed);
std::uint64_t sampling_seed(std::uint64_t seed);
std::uint64_t training_seed(std::uint64_t seed);

}  // namespace pdl
