#pragma once

// Forward state-space search over ground STRIPS actions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/pddl_io.hpp"

namespace pdl {

enum class SearchStrategy { BreadthFirst, GreedyGoalCount };

SearchStrategy parse_strategy(const std::string& name);
std::string to_string(SearchStrategy strategy);

struct PlannerConfig {
  SearchStrategy strategy = SearchStrategy::BreadthFirst;
  std::size_t max_expansions = 100000;
  std::uint64_t rng_seed = 0;
};

struct PlanResult {
  std::optional<std::vector<GroundAction>> plan;
  bool budget_exhausted = false;
  std::size_t expansions = 0;
};

// All ground actions with pairwise-distinct arguments, ordered by action name
// then by object declaration order.
std::vector<GroundAction> ground_actions(const DomainSchema& schema, const ObjectTable& objects);

// Problem compiled against one model: interned atoms, bitset states.
class GroundTask {
 public:
  using Bits = std::vector<std::uint64_t>;

  GroundTask(const ProblemSpec& problem, const ActionModel& model);

  const Bits& init() const { return init_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  std::size_t atom_count() const { return atoms_.size(); }

  bool goal_holds(const Bits& state) const;
  std::size_t unsatisfied_goals(const Bits& state) const;
  bool applicable(const Bits& state, std::size_t action) const;
  Bits successor(const Bits& state, std::size_t action) const;
  State to_state(const Bits& state) const;

 private:
  struct Compiled {
    std::vector<std::uint32_t> pre;
    std::vector<std::uint32_t> add;
    std::vector<std::uint32_t> del;
  };

  std::vector<GroundAtom> atoms_;
  std::vector<GroundAction> actions_;
  std::vector<Compiled> compiled_;
  std::vector<std::uint32_t> goal_;
  Bits init_;
};

// Plan from problem.init to a state containing problem.goal under `model`.
PlanResult plan(const ProblemSpec& problem, const ActionModel& model, const PlannerConfig& cfg);

bool solves_unitary(const ActionModel& model, const ProblemSpec& problem, const PlannerConfig& cfg);

}  // namespace pdl
