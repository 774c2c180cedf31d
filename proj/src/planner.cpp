#include "pdl/planner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <unordered_map>

#include "pdl/error.hpp"

namespace pdl {

SearchStrategy parse_strategy(const std::string& name) {
  if (name == "breadth-first" || name == "bfs") return SearchStrategy::BreadthFirst;
  if (name == "greedy-by-goal-count" || name == "greedy") return SearchStrategy::GreedyGoalCount;
  throw Error("unknown search strategy '" + name + "'");
}

std::string to_string(SearchStrategy strategy) {
  return strategy == SearchStrategy::BreadthFirst ? "breadth-first" : "greedy-by-goal-count";
}

std::vector<GroundAction> ground_actions(const DomainSchema& schema, const ObjectTable& objects) {
  std::vector<GroundAction> out;
  for (const auto& sig : schema.actions()) {
    std::vector<std::vector<std::string>> domains;
    bool empty = false;
    for (const auto& type : sig.param_types) {
      domains.push_back(objects.of_type(type));
      empty = empty || domains.back().empty();
    }
    if (empty) continue;
    std::vector<std::size_t> idx(sig.arity(), 0);
    bool done = false;
    while (!done) {
      GroundAction ga{sig.name, {}};
      bool distinct = true;
      for (std::size_t i = 0; i < idx.size() && distinct; ++i) {
        const auto& obj = domains[i][idx[i]];
        distinct = std::find(ga.args.begin(), ga.args.end(), obj) == ga.args.end();
        ga.args.push_back(obj);
      }
      if (distinct) out.push_back(std::move(ga));
      // Odometer increment, last position fastest.
      done = true;
      for (std::size_t k = idx.size(); k > 0 && done; --k) {
        if (++idx[k - 1] < domains[k - 1].size()) {
          done = false;
        } else {
          idx[k - 1] = 0;
        }
      }
    }
  }
  return out;
}

GroundTask::GroundTask(const ProblemSpec& problem, const ActionModel& model) {
  actions_ = ground_actions(model.schema(), problem.objects);
  compiled_.reserve(actions_.size());
  std::map<GroundAtom, std::uint32_t> ids;
  auto id_of = [&](const GroundAtom& atom) {
    auto [it, inserted] = ids.emplace(atom, static_cast<std::uint32_t>(atoms_.size()));
    if (inserted) atoms_.push_back(atom);
    return it->second;
  };
  for (const auto& a : problem.init.atoms) id_of(a);
  for (const auto& g : problem.goal) goal_.push_back(id_of(g));
  for (const auto& ga : actions_) {
    const auto& e = model.entry(ga.action);
    Compiled c;
    for (const auto& r : e.pre()) c.pre.push_back(id_of(ground(r, ga)));
    for (const auto& r : e.add()) c.add.push_back(id_of(ground(r, ga)));
    for (const auto& r : e.del()) c.del.push_back(id_of(ground(r, ga)));
    compiled_.push_back(std::move(c));
  }
  init_.assign((atoms_.size() + 63) / 64, 0);
  for (const auto& a : problem.init.atoms) {
    const auto id = ids.at(a);
    init_[id / 64] |= std::uint64_t{1} << (id % 64);
  }
}

namespace {

bool test_bit(const GroundTask::Bits& bits, std::uint32_t id) {
  return (bits[id / 64] >> (id % 64)) & 1U;
}

struct BitsHash {
  std::size_t operator()(const GroundTask::Bits& bits) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : bits) {
      h ^= w;
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

bool GroundTask::goal_holds(const Bits& state) const { return unsatisfied_goals(state) == 0; }

std::size_t GroundTask::unsatisfied_goals(const Bits& state) const {
  return static_cast<std::size_t>(
      std::count_if(goal_.begin(), goal_.end(), [&](std::uint32_t g) { return !test_bit(state, g); }));
}

bool GroundTask::applicable(const Bits& state, std::size_t action) const {
  const auto& pre = compiled_[action].pre;
  return std::all_of(pre.begin(), pre.end(), [&](std::uint32_t p) { return test_bit(state, p); });
}

GroundTask::Bits GroundTask::successor(const Bits& state, std::size_t action) const {
  Bits next = state;
  for (auto d : compiled_[action].del) next[d / 64] &= ~(std::uint64_t{1} << (d % 64));
  for (auto a : compiled_[action].add) next[a / 64] |= std::uint64_t{1} << (a % 64);
  return next;
}

State GroundTask::to_state(const Bits& state) const {
  State out;
  for (std::uint32_t id = 0; id < atoms_.size(); ++id) {
    if (test_bit(state, id)) out.atoms.insert(atoms_[id]);
  }
  return out;
}

PlanResult plan(const ProblemSpec& problem, const ActionModel& model, const PlannerConfig& cfg) {
  if (cfg.max_expansions == 0) throw PreconditionError("max_expansions must be > 0");
  const GroundTask task(problem, model);
  PlanResult result;

  struct Node {
    GroundTask::Bits state;
    std::size_t parent;
    std::size_t action;
  };
  std::vector<Node> nodes;
  std::unordered_map<GroundTask::Bits, std::size_t, BitsHash> seen;
  nodes.push_back({task.init(), 0, 0});
  seen.emplace(task.init(), 0);

  auto extract = [&](std::size_t node) {
    std::vector<GroundAction> actions;
    while (node != 0) {
      actions.push_back(task.actions()[nodes[node].action]);
      node = nodes[node].parent;
    }
    std::reverse(actions.begin(), actions.end());
    return actions;
  };

  // Greedy open list is ordered by (unsatisfied goals, node id); BFS is FIFO.
  using Key = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> greedy_open;
  std::deque<std::size_t> fifo_open;
  const bool greedy = cfg.strategy == SearchStrategy::GreedyGoalCount;
  auto push = [&](std::size_t node) {
    if (greedy) {
      greedy_open.emplace(task.unsatisfied_goals(nodes[node].state), node);
    } else {
      fifo_open.push_back(node);
    }
  };
  push(0);

  while (greedy ? !greedy_open.empty() : !fifo_open.empty()) {
    std::size_t current;
    if (greedy) {
      current = greedy_open.top().second;
      greedy_open.pop();
    } else {
      current = fifo_open.front();
      fifo_open.pop_front();
    }
    if (task.goal_holds(nodes[current].state)) {
      result.plan = extract(current);
      return result;
    }
    if (result.expansions == cfg.max_expansions) {
      result.budget_exhausted = true;
      return result;
    }
    ++result.expansions;
    for (std::size_t a = 0; a < task.actions().size(); ++a) {
      if (!task.applicable(nodes[current].state, a)) continue;
      auto next = task.successor(nodes[current].state, a);
      if (seen.count(next) != 0) continue;
      seen.emplace(next, nodes.size());
      nodes.push_back({std::move(next), current, a});
      push(nodes.size() - 1);
    }
  }
  return result;
}

bool solves_unitary(const ActionModel& model, const ProblemSpec& problem, const PlannerConfig& cfg) {
  return plan(problem, model, cfg).plan.has_value();
}

}  // namespace pdl
