#pragma once

// Reconstruction error against a reference model and run reports.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdl/candidates.hpp"
#include "pdl/core.hpp"
#include "pdl/neural/train.hpp"
#include "pdl/rational.hpp"
#include "pdl/rules.hpp"

namespace pdl {

struct DiffCounts {
  std::string action;
  std::size_t diff_pre = 0;
  std::size_t diff_add = 0;
  std::size_t diff_del = 0;
  std::size_t rel_cons = 0;  // number of relevant refs of the action

  std::size_t total() const { return diff_pre + diff_add + diff_del; }
  bool operator==(const DiffCounts&) const = default;
};

struct ReconstructionError {
  Rational value;
  std::vector<DiffCounts> per_action;
};

// E = (1/n) Σ_a (|Δpre| + |Δadd| + |Δdel|) / relCons_a, with symmetric set
// differences. Actions without relevant refs contribute 0.
ReconstructionError reconstruction_error(const ActionModel& learned, const ActionModel& reference);

struct PruneRow {
  std::string action;
  std::size_t initial = 0;
  std::size_t final = 0;
};

struct EvaluationReport {
  std::string domain;
  std::uint64_t seed = 0;
  std::size_t trace_count = 0;
  bool mining_skipped = false;
  std::vector<ActionPair> frequent_pairs;
  std::vector<PruneRow> pruning;
  BigInt initial_space = 0;
  BigInt final_space = 0;
  std::size_t draws = 0;
  bool exhaustive = false;
  std::vector<neural::ModelScore> scores;
  std::size_t selected = 0;  // index into scores
  std::vector<double> mean_loss_history;  // averaged over folds
  Rational training_encoding_accuracy;    // mean over folds
  std::string selected_model_text;        // PDDL of the selected model
  std::optional<ReconstructionError> error;  // present when a reference is known
};

// Percentage reduction, two decimals.
std::string reduction_percent(std::size_t initial, std::size_t final);

enum class ReportFormat { Text, Json };

std::string render_report(const EvaluationReport& report, ReportFormat format);

nlohmann::json to_json(const ReconstructionError& error);

}  // namespace pdl
