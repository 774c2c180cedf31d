#pragma once

// Sequential action-pair rules mined from trace action sequences.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdl/core.hpp"
#include "pdl/rational.hpp"

namespace pdl {

struct SequenceDatabase {
  std::vector<std::vector<std::string>> sequences;

  std::size_t size() const { return sequences.size(); }
  SequenceDatabase prefix(std::size_t count) const;
};

SequenceDatabase to_sequence_database(std::span<const PlanTrace> traces);

// Rule antecedent → consequent over adjacent occurrences. pair_count counts
// every adjacent occurrence, so support may exceed 1.
struct SequentialRule {
  std::string antecedent;
  std::string consequent;
  std::uint64_t pair_count = 0;
  std::uint64_t antecedent_count = 0;
  Rational support;
  Rational confidence;

  bool operator==(const SequentialRule&) const = default;
};

// Mergeable occurrence counts; counting is a fold over sequences.
struct RuleCounts {
  std::uint64_t sequences = 0;
  std::map<std::string, std::uint64_t> items;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;

  void add(const std::vector<std::string>& sequence);
  RuleCounts& merge(const RuleCounts& other);
  std::vector<SequentialRule> rules(const Rational& min_support, const Rational& min_confidence) const;
};

RuleCounts count_rules(const SequenceDatabase& db);

// Rules with support ≥ min_support and confidence ≥ min_confidence, ordered
// by (antecedent, consequent). Throws PreconditionError on an empty database.
std::vector<SequentialRule> mine_rules(const SequenceDatabase& db, const Rational& min_support,
                                       const Rational& min_confidence);

struct StabilityPoint {
  std::size_t trace_count = 0;
  std::uint64_t pair_count = 0;
  std::uint64_t antecedent_count = 0;
  Rational support;
  Rational confidence;
  bool present = false;  // cleared both thresholds at this point
};

struct RuleStability {
  std::string antecedent;
  std::string consequent;
  std::vector<StabilityPoint> series;
  bool stable = false;
};

struct StabilityReport {
  std::vector<std::size_t> schedule;
  Rational min_support;
  Rational min_confidence;
  Rational tolerance;
  std::vector<RuleStability> rules;  // every rule present at ≥ 1 point
};

// `schedule` must be strictly growing nested prefixes.
StabilityReport stability_scan(std::span<const SequenceDatabase> schedule, const Rational& min_support,
                               const Rational& min_confidence, const Rational& tolerance);

using ActionPair = std::pair<std::string, std::string>;

// Stable rules by descending final confidence, then support, then names.
std::vector<ActionPair> frequent_pairs(const StabilityReport& report);

nlohmann::json to_json(const StabilityReport& report);
std::vector<ActionPair> frequent_pairs_from_json(const nlohmann::json& doc);
std::string render_rules_table(const StabilityReport& report);

}  // namespace pdl
