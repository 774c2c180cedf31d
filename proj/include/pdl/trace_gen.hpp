#pragma once

// Random problem generation and plan-trace emission.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/planner.hpp"
#include "pdl/pddl_io.hpp"
#include "pdl/rational.hpp"
#include "pdl/rng.hpp"

namespace pdl {

struct ObjectRange {
  std::string type;
  std::size_t min = 1;
  std::size_t max = 1;
};

struct AtomTemplate {
  std::string predicate;
  std::vector<std::string> vars;
};

// For every tuple over `forall`, draw one object per `choose` variable and
// emit `atom` (with probability `chance`, else `otherwise` if given).
struct InitRule {
  std::vector<TypedObject> forall;
  std::vector<TypedObject> choose;
  std::optional<Rational> chance;
  AtomTemplate atom;
  std::optional<AtomTemplate> otherwise;
};

struct GenerationSpec {
  std::string domain;
  std::vector<ObjectRange> objects;
  std::vector<InitRule> rules;
  std::size_t walk_min = 3;
  std::size_t walk_max = 12;
  // When non-empty, goals keep only newly true atoms of these predicates.
  std::vector<std::string> goal_predicates;
  std::size_t problem_count = 10;
  std::uint64_t rng_seed = 0;
  std::size_t retry_limit = 50;
};

// Reads a `.gen` file; problem_count and rng_seed keep their defaults.
GenerationSpec parse_generation_spec(std::string_view text, const DomainSchema& schema);

// Random problem: sampled objects and init, goal = atoms made true by a random
// walk of walk_min..walk_max steps (filtered by goal_predicates). Returns nullopt if the walk changed nothing.
std::optional<ProblemSpec> random_problem(const GenerationSpec& spec, const ActionModel& model,
                                          Rng& rng, std::string name);

// Replays `actions` from `init`, recording every intermediate state.
PlanTrace make_trace(const ObjectTable& objects, const State& init,
                     const std::vector<GroundAction>& actions, const ActionModel& model);

// problem_count traces; trace i depends only on (rng_seed, i), so shorter runs
// are prefixes of longer ones.
std::vector<PlanTrace> generate_traces(const GenerationSpec& spec, const ActionModel& model,
                                       const PlannerConfig& cfg);

// 10, 20, 40, ... capped by `total` (which is always the last point).
std::vector<std::size_t> doubling_schedule(std::size_t total, std::size_t start = 10);

}  // namespace pdl
