#include "pdl/trace_gen.hpp"

#include <algorithm>
#include <set>

#include "pdl/error.hpp"
#include "pdl/sexpr.hpp"

namespace pdl {

namespace {

std::size_t parse_count(const SExpr& node) {
  if (!node.is_atom() || node.text.empty() ||
      !std::all_of(node.text.begin(), node.text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      node.text.size() > 9) {
    fail_at(node, "expected a non-negative integer");
  }
  return static_cast<std::size_t>(std::stoul(node.text));
}

AtomTemplate parse_template(const SExpr& node, const std::vector<TypedObject>& vars,
                            const DomainSchema& schema) {
  if (!node.is_list() || node.items.empty() || !node.items[0].is_atom()) {
    fail_at(node, "expected an atom template (pred ?x ...)");
  }
  AtomTemplate t{node.items[0].text, {}};
  const auto* pred = schema.find_predicate(t.predicate);
  if (pred == nullptr) fail_at(node, "unknown predicate '" + t.predicate + "'");
  if (node.items.size() - 1 != pred->arity()) fail_at(node, "arity mismatch for '" + t.predicate + "'");
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const auto& arg = node.items[i];
    auto it = std::find_if(vars.begin(), vars.end(),
                           [&](const TypedObject& v) { return arg.is_atom(v.name); });
    if (it == vars.end()) fail_at(arg, "unbound variable in atom template");
    if (it->type != pred->param_types[i - 1]) fail_at(arg, "type mismatch in atom template");
    t.vars.push_back(it->name);
  }
  return t;
}

InitRule parse_rule(const SExpr& node, const DomainSchema& schema) {
  if (!node.has_head("rule")) fail_at(node, "expected (rule ...)");
  InitRule rule;
  std::vector<TypedObject> vars;
  std::vector<const SExpr*> templates;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const auto& item = node.items[i];
    if (item.has_head("forall") || item.has_head("choose")) {
      auto list = sexpr_util::typed_list(item.items, 1);
      for (const auto& v : list) {
        if (!schema.has_type(v.type)) fail_at(item, "unknown type '" + v.type + "'");
        if (v.name.empty() || v.name.front() != '?') fail_at(item, "expected variables");
      }
      auto& target = item.has_head("forall") ? rule.forall : rule.choose;
      target.insert(target.end(), list.begin(), list.end());
      vars.insert(vars.end(), list.begin(), list.end());
    } else if (item.has_head("chance")) {
      if (item.items.size() != 2 || !item.items[1].is_atom()) fail_at(item, "expected (chance p)");
      try {
        rule.chance = parse_rational(item.items[1].text);
      } catch (const Error& e) {
        fail_at(item, e.what());
      }
      if (rule.chance->numerator() < 0 || *rule.chance > Rational(1)) fail_at(item, "chance must lie in [0, 1]");
    } else {
      templates.push_back(&item);
    }
  }
  if (templates.empty() || templates.size() > 2) fail_at(node, "rule needs one atom (and an optional alternative)");
  if (templates.size() == 2 && !rule.chance) fail_at(node, "an alternative atom requires (chance p)");
  rule.atom = parse_template(*templates[0], vars, schema);
  if (templates.size() == 2) rule.otherwise = parse_template(*templates[1], vars, schema);
  return rule;
}

}  // namespace

GenerationSpec parse_generation_spec(std::string_view text, const DomainSchema& schema) {
  const auto top = read_sexprs(text);
  if (top.size() != 1 || !top[0].has_head("generator") || top[0].items.size() < 2 ||
      !top[0].items[1].is_atom()) {
    throw ParseError("expected a single (generator <domain> ...) form",
                     top.empty() ? 1 : top[0].line, top.empty() ? 1 : top[0].column);
  }
  const auto& root = top[0];
  GenerationSpec spec;
  spec.domain = root.items[1].text;
  if (spec.domain != schema.name()) fail_at(root.items[1], "generator is for a different domain");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const auto& section = root.items[i];
    if (section.has_head(":objects")) {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const auto& r = section.items[k];
        if (!r.is_list() || r.items.size() != 3 || !r.items[0].is_atom()) fail_at(r, "expected (type min max)");
        ObjectRange range{r.items[0].text, parse_count(r.items[1]), parse_count(r.items[2])};
        if (!schema.has_type(range.type)) fail_at(r, "unknown type '" + range.type + "'");
        if (range.min == 0 || range.min > range.max) fail_at(r, "object range must satisfy 1 <= min <= max");
        spec.objects.push_back(range);
      }
    } else if (section.has_head(":init")) {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        spec.rules.push_back(parse_rule(section.items[k], schema));
      }
    } else if (section.has_head(":walk")) {
      if (section.items.size() != 3) fail_at(section, "expected (:walk min max)");
      spec.walk_min = parse_count(section.items[1]);
      spec.walk_max = parse_count(section.items[2]);
      if (spec.walk_min == 0 || spec.walk_min > spec.walk_max) fail_at(section, "walk range must satisfy 1 <= min <= max");
    } else if (section.has_head(":goal-predicates")) {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const auto& name = section.items[k];
        if (!name.is_atom() || schema.find_predicate(name.text) == nullptr) fail_at(name, "unknown predicate");
        spec.goal_predicates.push_back(name.text);
      }
    } else {
      fail_at(section, "unsupported generator section");
    }
  }
  if (spec.objects.empty()) fail_at(root, "generator declares no objects");
  return spec;
}

namespace {

GroundAtom instantiate(const AtomTemplate& t, const std::vector<TypedObject>& vars,
                       const std::vector<std::string>& values) {
  GroundAtom atom{t.predicate, {}};
  for (const auto& v : t.vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name == v) {
        atom.args.push_back(values[i]);
        break;
      }
    }
  }
  return atom;
}

void apply_rule(const InitRule& rule, const ObjectTable& objects, Rng& rng, State& init) {
  std::vector<std::vector<std::string>> domains;
  for (const auto& v : rule.forall) {
    domains.push_back(objects.of_type(v.type));
    if (domains.back().empty()) return;
  }
  std::vector<TypedObject> vars = rule.forall;
  vars.insert(vars.end(), rule.choose.begin(), rule.choose.end());

  std::vector<std::size_t> idx(rule.forall.size(), 0);
  bool done = false;
  while (!done) {
    std::vector<std::string> values;
    bool distinct = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& obj = domains[i][idx[i]];
      distinct = distinct && std::find(values.begin(), values.end(), obj) == values.end();
      values.push_back(obj);
    }
    if (distinct) {
      bool chosen = true;
      for (const auto& c : rule.choose) {
        std::vector<std::string> pool;
        for (const auto& o : objects.of_type(c.type)) {
          if (std::find(values.begin(), values.end(), o) == values.end()) pool.push_back(o);
        }
        if (pool.empty()) {
          chosen = false;
          break;
        }
        values.push_back(pool[rng.below(pool.size())]);
      }
      if (chosen) {
        bool primary = true;
        if (rule.chance) primary = rng.uniform() < to_double(*rule.chance);
        if (primary) {
          init.atoms.insert(instantiate(rule.atom, vars, values));
        } else if (rule.otherwise) {
          init.atoms.insert(instantiate(*rule.otherwise, vars, values));
        }
      }
    }
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

}  // namespace

std::optional<ProblemSpec> random_problem(const GenerationSpec& spec, const ActionModel& model,
                                          Rng& rng, std::string name) {
  ProblemSpec problem;
  problem.name = std::move(name);
  problem.domain = model.schema().name();
  std::vector<TypedObject> objects;
  for (const auto& range : spec.objects) {
    const auto count = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(range.min), static_cast<std::int64_t>(range.max)));
    for (std::size_t i = 1; i <= count; ++i) {
      objects.push_back({range.type + std::to_string(i), range.type});
    }
  }
  problem.objects = ObjectTable(std::move(objects));
  for (const auto& rule : spec.rules) apply_rule(rule, problem.objects, rng, problem.init);

  const GroundTask task(problem, model);
  auto state = task.init();
  const auto steps = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(spec.walk_min),
                                                          static_cast<std::int64_t>(spec.walk_max)));
  std::vector<std::size_t> applicable;
  for (std::size_t s = 0; s < steps; ++s) {
    applicable.clear();
    for (std::size_t a = 0; a < task.actions().size(); ++a) {
      if (task.applicable(state, a)) applicable.push_back(a);
    }
    if (applicable.empty()) break;
    state = task.successor(state, applicable[rng.below(applicable.size())]);
  }
  for (const auto& atom : task.to_state(state).atoms) {
    if (problem.init.contains(atom)) continue;
    if (!spec.goal_predicates.empty() &&
        std::find(spec.goal_predicates.begin(), spec.goal_predicates.end(), atom.predicate) ==
            spec.goal_predicates.end()) {
      continue;
    }
    problem.goal.push_back(atom);
  }
  if (problem.goal.empty()) return std::nullopt;
  return problem;
}

PlanTrace make_trace(const ObjectTable& objects, const State& init,
                     const std::vector<GroundAction>& actions, const ActionModel& model) {
  std::vector<State> states{init};
  for (const auto& a : actions) states.push_back(apply(states.back(), a, model));
  return PlanTrace(objects, std::move(states), actions);
}

std::vector<PlanTrace> generate_traces(const GenerationSpec& spec, const ActionModel& model,
                                       const PlannerConfig& cfg) {
  if (spec.problem_count == 0) throw PreconditionError("trace count must be > 0");
  std::vector<PlanTrace> traces;
  traces.reserve(spec.problem_count);
  for (std::size_t i = 0; i < spec.problem_count; ++i) {
    Rng rng(derive_seed(spec.rng_seed, i));
    bool done = false;
    for (std::size_t attempt = 0; attempt < spec.retry_limit && !done; ++attempt) {
      auto problem = random_problem(spec, model, rng, "p" + std::to_string(i));
      if (!problem) continue;
      const auto result = plan(*problem, model, cfg);
      if (!result.plan || result.plan->empty()) continue;
      traces.push_back(make_trace(problem->objects, problem->init, *result.plan, model));
      done = true;
    }
    if (!done) {
      throw Error("no solvable problem found for trace " + std::to_string(i) + " after " +
                  std::to_string(spec.retry_limit) + " attempts");
    }
  }
  return traces;
}

std::vector<std::size_t> doubling_schedule(std::size_t total, std::size_t start) {
  if (total == 0 || start == 0) throw PreconditionError("schedule needs positive sizes");
  std::vector<std::size_t> out;
  for (std::size_t n = start; n < total; n *= 2) out.push_back(n);
  out.push_back(total);
  return out;
}

}  // namespace pdl
