#pragma once

// Relevant-predicate computation and exhaustive candidate enumeration.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pdl/core.hpp"
#include "pdl/error.hpp"

namespace pdl {

using BigInt = boost::multiprecision::cpp_int;

class TooLargeError : public Error {
 public:
  using Error::Error;
};

// A candidate (pre, add, del) as bitmasks over an action's relevant-ref list.
struct CandidateMasks {
  std::uint32_t pre = 0;
  std::uint32_t add = 0;
  std::uint32_t del = 0;

  auto operator<=>(const CandidateMasks&) const = default;
};

struct CandidateOptions {
  bool strict_del = false;    // additionally require del ⊆ pre
  std::size_t max_rel = 16;   // cap on |relevant|
  std::size_t max_candidates = std::size_t{1} << 24;
};

// Every injective, type-compatible binding of each predicate onto the action's
// parameters. Ordered by predicate name, then binding.
std::vector<LiftedRef> relevant_predicates(const ActionSignature& action,
                                           std::span<const PredicateSchema> predicates);

class CandidateActionSet {
 public:
  CandidateActionSet() = default;
  CandidateActionSet(std::string action, std::vector<LiftedRef> relevant,
                     std::vector<CandidateMasks> candidates);

  const std::string& action() const { return action_; }
  const std::vector<LiftedRef>& relevant() const { return relevant_; }
  const std::vector<CandidateMasks>& candidates() const { return candidates_; }
  std::size_t size() const { return candidates_.size(); }

  ActionModelEntry entry(std::size_t index) const;
  ActionModelEntry entry(const CandidateMasks& masks) const;
  std::optional<CandidateMasks> masks_of(const ActionModelEntry& entry) const;
  std::optional<std::size_t> find(const ActionModelEntry& entry) const;
  bool contains(const ActionModelEntry& entry) const { return find(entry).has_value(); }

  // Same action and relevant list, keeping only `kept` (in order).
  CandidateActionSet subset(std::vector<CandidateMasks> kept) const;

 private:
  std::string action_;
  std::vector<LiftedRef> relevant_;
  std::vector<CandidateMasks> candidates_;
};

// All triples over `relevant` with add ∩ del = ∅ and add ∩ pre = ∅ (and
// del ⊆ pre when strict). Throws TooLargeError past the configured caps.
CandidateActionSet enumerate_candidates(const ActionSignature& action,
                                        std::vector<LiftedRef> relevant,
                                        const CandidateOptions& options = {});

// Closed form of the enumeration size: 5^k, or 4^k with strict del.
BigInt candidate_count(std::size_t relevant, bool strict_del);

// The implicit model space M: one candidate set per action, never expanded.
struct CandidateModelSpace {
  std::shared_ptr<const DomainSchema> schema;
  CandidateOptions options;
  std::vector<CandidateActionSet> per_action;  // parallel to schema->actions()

  const CandidateActionSet& for_action(std::string_view action) const;
  std::size_t total_candidates() const;
  ActionModel model(std::span<const std::size_t> indices) const;
};

CandidateModelSpace build_space(std::shared_ptr<const DomainSchema> schema,
                                const CandidateOptions& options = {});

// Exact |M| = ∏ |CAS_a|.
BigInt space_size(const CandidateModelSpace& space);

// Candidate-set file (docs/formats.md).
std::string serialize_space(const CandidateModelSpace& space);
CandidateModelSpace parse_space(std::string_view text, std::shared_ptr<const DomainSchema> schema);

}  // namespace pdl
