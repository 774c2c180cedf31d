#pragma once

// Action-pair constraint pruning of candidate sets and planner-screened
// sampling of candidate models.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdl/candidates.hpp"
#include "pdl/planner.hpp"
#include "pdl/rules.hpp"

namespace pdl {

// Subset of {C1, C2, C3} for an ordered pair (first, second):
//   C1: a shared precondition that the first action does not delete
//   C2: something the first action adds is a precondition of the second
//   C3: something the first action deletes is added by the second
// Refs of the two actions are matched by predicate name.
struct PairConstraints {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;

  bool any() const { return c1 || c2 || c3; }
  bool operator==(const PairConstraints&) const = default;
};

std::string to_string(const PairConstraints& c);

PairConstraints check_pair_constraints(const ActionModelEntry& first, const ActionModelEntry& second);

struct PairConstraintWitness {
  ActionPair pair;
  ActionModelEntry first;
  ActionModelEntry second;
  PairConstraints satisfied;
};

class PruneError : public Error {
 public:
  using Error::Error;
};

struct PairStats {
  ActionPair pair;
  std::uint64_t evaluations = 0;  // |CAS_first| × |CAS_second|
  std::uint64_t satisfying = 0;
};

struct PruneResult {
  CandidateModelSpace space;
  std::vector<std::size_t> initial_counts;  // per action
  std::vector<std::size_t> final_counts;
  std::vector<PairStats> pair_stats;
};

// Keeps, for every action in some pair, the candidates that satisfy at least
// one constraint with some candidate of a partner. Other actions pass through.
// Throws PruneError if a candidate set becomes empty.
PruneResult prune_candidates(const CandidateModelSpace& space, const std::vector<ActionPair>& pairs);

// First candidate of `pair.second` (in set order) that forms a constraint-
// satisfying pair with `first`, if any.
std::optional<PairConstraintWitness> find_witness(const CandidateModelSpace& space, const ActionPair& pair,
                                                  const ActionModelEntry& first);

struct SampledModel {
  std::string id;                    // zero-padded candidate indices joined by '.'
  std::vector<std::size_t> indices;  // per action, into the (reduced) candidate sets
  ActionModel model;
  bool reference = false;
  bool unitary_solved = false;
};

struct SampledModelSet {
  std::vector<SampledModel> models;
  std::size_t draws = 0;
  bool exhaustive = false;
};

struct SampleOptions {
  std::size_t budget = 50;
  std::uint64_t rng_seed = 0;
  bool include_reference = false;
  PlannerConfig planner;
};

std::string model_id(const CandidateModelSpace& space, const std::vector<std::size_t>& indices);

// Up to `budget` distinct models from the cross-product, each solving the
// unitary problem. Exhaustive when |M| ≤ budget, else seeded uniform draws
// (at most 100 × budget). With include_reference, `reference` comes first.
SampledModelSet sample_models(const CandidateModelSpace& space, const ProblemSpec& unitary,
                              const SampleOptions& options,
                              const std::optional<ActionModel>& reference = std::nullopt);

nlohmann::json to_json(const SampledModelSet& set);
SampledModelSet sampled_models_from_json(const nlohmann::json& doc,
                                         std::shared_ptr<const DomainSchema> schema);

nlohmann::json entry_to_json(const ActionModelEntry& entry);
ActionModelEntry entry_from_json(const std::string& action, const nlohmann::json& doc);

}  // namespace pdl
