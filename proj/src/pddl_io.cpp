#include "pdl/pddl_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "pdl/error.hpp"

namespace pdl {

namespace sexpr_util {

std::vector<TypedObject> typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  std::vector<TypedObject> out;
  std::size_t pending = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const auto& item = items[i];
    if (!item.is_atom()) fail_at(item, "expected a name in typed list");
    if (item.text == "-") {
      if (i + 1 >= items.size() || !items[i + 1].is_atom()) fail_at(item, "expected a type after '-'");
      if (pending == 0) fail_at(item, "type without preceding names");
      const std::string& type = items[i + 1].text;
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type;
      pending = 0;
      ++i;
    } else {
      out.push_back({item.text, ""});
      ++pending;
    }
  }
  if (pending != 0) fail_at(items.back(), "untyped names; every name needs '- type'");
  return out;
}

GroundAtom ground_atom(const SExpr& node) {
  if (!node.is_list() || node.items.empty()) fail_at(node, "expected an atom like (pred arg ...)");
  GroundAtom atom;
  for (std::size_t i = 0; i < node.items.size(); ++i) {
    const auto& item = node.items[i];
    if (!item.is_atom()) fail_at(item, "nested expression inside atom");
    if (i == 0) {
      atom.predicate = item.text;
    } else {
      if (!item.text.empty() && item.text.front() == '?') fail_at(item, "variable in ground atom");
      atom.args.push_back(item.text);
    }
  }
  return atom;
}

std::string typed_list_text(const std::vector<TypedObject>& objects) {
  std::string out;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (i > 0) out += ' ';
    out += objects[i].name;
    if (i + 1 == objects.size() || objects[i + 1].type != objects[i].type) {
      out += " - " + objects[i].type;
    }
  }
  return out;
}

}  // namespace sexpr_util

using sexpr_util::ground_atom;
using sexpr_util::typed_list;
using sexpr_util::typed_list_text;

bool ProblemSpec::goal_holds(const State& state) const {
  return std::all_of(goal.begin(), goal.end(),
                     [&](const GroundAtom& a) { return state.contains(a); });
}

namespace {

const SExpr& single_define(const std::vector<SExpr>& top, std::string_view what) {
  if (top.empty()) throw ParseError("expected (define ...) " + std::string(what), 1, 1);
  if (top.size() > 1) fail_at(top[1], "unexpected expression after (define ...)");
  const auto& def = top.front();
  if (!def.has_head("define")) fail_at(def, "expected (define ...)");
  return def;
}

std::string header_name(const SExpr& def, std::string_view keyword) {
  if (def.items.size() < 2 || !def.items[1].has_head(keyword) || def.items[1].items.size() != 2 ||
      !def.items[1].items[1].is_atom()) {
    fail_at(def, "expected (" + std::string(keyword) + " <name>)");
  }
  return def.items[1].items[1].text;
}

void check_identifier(const SExpr& node) {
  if (!node.is_atom() || node.text.empty() || node.text.front() == '?' ||
      node.text.front() == ':' || node.text == "-") {
    fail_at(node, "expected an identifier");
  }
}

struct PendingAction {
  ActionSignature signature;
  const SExpr* node = nullptr;
  const SExpr* precondition = nullptr;
  const SExpr* effect = nullptr;
};

// Collects atoms of an (and ...) block, a single atom, or ().
std::vector<std::pair<const SExpr*, bool>> conjunction(const SExpr& node, bool allow_negation) {
  std::vector<std::pair<const SExpr*, bool>> out;
  if (!node.is_list()) fail_at(node, "expected a formula");
  std::vector<const SExpr*> parts;
  if (node.items.empty()) return out;
  if (node.has_head("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i) parts.push_back(&node.items[i]);
  } else {
    parts.push_back(&node);
  }
  for (const SExpr* part : parts) {
    if (part->has_head("not")) {
      if (!allow_negation) fail_at(*part, "negative preconditions are not supported");
      if (part->items.size() != 2) fail_at(*part, "(not ...) takes one atom");
      out.emplace_back(&part->items[1], true);
    } else if (part->has_head("and") || part->has_head("or") || part->has_head("forall") ||
               part->has_head("exists") || part->has_head("when") || part->has_head("imply")) {
      fail_at(*part, "only conjunctions of atoms are supported");
    } else {
      out.emplace_back(part, false);
    }
  }
  return out;
}

LiftedRef lifted_atom(const SExpr& node, const ActionSignature& sig, const DomainSchema& schema) {
  if (!node.is_list() || node.items.empty() || !node.items[0].is_atom()) {
    fail_at(node, "expected an atom like (pred ?x ...)");
  }
  const std::string& name = node.items[0].text;
  const auto* pred = schema.find_predicate(name);
  if (pred == nullptr) fail_at(node.items[0], "unknown predicate '" + name + "'");
  if (node.items.size() - 1 != pred->arity()) {
    fail_at(node, "arity mismatch for '" + name + "': expected " + std::to_string(pred->arity()) +
                      ", got " + std::to_string(node.items.size() - 1));
  }
  LiftedRef ref{name, {}};
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const auto& arg = node.items[i];
    if (!arg.is_atom()) fail_at(arg, "expected a parameter");
    auto it = std::find(sig.param_names.begin(), sig.param_names.end(), arg.text);
    if (it == sig.param_names.end()) {
      fail_at(arg, "'" + arg.text + "' is not a parameter of action '" + sig.name + "'");
    }
    const auto pos = static_cast<std::size_t>(it - sig.param_names.begin());
    if (sig.param_types[pos] != pred->param_types[i - 1]) {
      fail_at(arg, "type mismatch: '" + arg.text + "' is '" + sig.param_types[pos] + "', '" + name +
                       "' expects '" + pred->param_types[i - 1] + "'");
    }
    ref.binding.push_back(pos);
  }
  if (!is_relevant(ref, sig, *pred)) fail_at(node, "a parameter is bound twice in '" + name + "'");
  return ref;
}

}  // namespace

ParsedDomain parse_domain(std::string_view text) {
  const auto top = read_sexprs(text);
  const auto& def = single_define(top, "domain");
  const std::string name = header_name(def, "domain");

  std::vector<std::string> types;
  std::vector<PredicateSchema> predicates;
  std::vector<PendingAction> pending;
  std::map<std::string, const SExpr*> type_nodes;
  bool seen_types = false;
  bool seen_predicates = false;

  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const auto& section = def.items[i];
    if (section.has_head(":requirements")) {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const auto& req = section.items[k];
        if (!req.is_atom(":strips") && !req.is_atom(":typing")) {
          fail_at(req, "unsupported requirement '" + (req.is_atom() ? req.text : "(...)") + "'");
        }
      }
    } else if (section.has_head(":types")) {
      if (seen_types) fail_at(section, "duplicate :types section");
      seen_types = true;
      std::size_t pending_names = 0;
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const auto& item = section.items[k];
        if (item.is_atom("-")) {
          if (k + 1 >= section.items.size() || !section.items[k + 1].is_atom("object")) {
            fail_at(item, "type hierarchies are not supported (only '- object')");
          }
          if (pending_names == 0) fail_at(item, "'-' without preceding types");
          pending_names = 0;
          ++k;
          continue;
        }
        check_identifier(item);
        if (type_nodes.count(item.text) != 0) fail_at(item, "duplicate type '" + item.text + "'");
        type_nodes[item.text] = &item;
        types.push_back(item.text);
        ++pending_names;
      }
    } else if (section.has_head(":predicates")) {
      if (seen_predicates) fail_at(section, "duplicate :predicates section");
      seen_predicates = true;
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const auto& p = section.items[k];
        if (!p.is_list() || p.items.empty()) fail_at(p, "expected (predicate ?x - type ...)");
        check_identifier(p.items[0]);
        PredicateSchema schema{p.items[0].text, {}};
        for (const auto& param : typed_list(p.items, 1)) {
          if (param.name.empty() || param.name.front() != '?') fail_at(p, "predicate parameters must be variables");
          if (type_nodes.count(param.type) == 0) fail_at(p, "unknown type '" + param.type + "'");
          schema.param_types.push_back(param.type);
        }
        for (const auto& existing : predicates) {
          if (existing.name == schema.name) fail_at(p, "duplicate predicate '" + schema.name + "'");
        }
        predicates.push_back(std::move(schema));
      }
    } else if (section.has_head(":action")) {
      if (section.items.size() < 2) fail_at(section, "action without a name");
      check_identifier(section.items[1]);
      PendingAction action;
      action.signature.name = section.items[1].text;
      action.node = &section;
      for (std::size_t k = 2; k < section.items.size(); k += 2) {
        const auto& key = section.items[k];
        if (k + 1 >= section.items.size()) fail_at(key, "missing value after keyword");
        const auto& value = section.items[k + 1];
        if (key.is_atom(":parameters")) {
          if (!value.is_list()) fail_at(value, "expected a parameter list");
          for (const auto& param : typed_list(value.items, 0)) {
            if (param.name.empty() || param.name.front() != '?') fail_at(value, "parameters must be variables");
            if (type_nodes.count(param.type) == 0) fail_at(value, "unknown type '" + param.type + "'");
            if (std::count(action.signature.param_names.begin(), action.signature.param_names.end(),
                           param.name) != 0) {
              fail_at(value, "duplicate parameter '" + param.name + "'");
            }
            action.signature.param_names.push_back(param.name);
            action.signature.param_types.push_back(param.type);
          }
        } else if (key.is_atom(":precondition")) {
          action.precondition = &value;
        } else if (key.is_atom(":effect")) {
          action.effect = &value;
        } else {
          fail_at(key, "unexpected action keyword");
        }
      }
      for (const auto& existing : pending) {
        if (existing.signature.name == action.signature.name) {
          fail_at(section, "duplicate action '" + action.signature.name + "'");
        }
      }
      pending.push_back(std::move(action));
    } else {
      fail_at(section, "unsupported domain section");
    }
  }

  std::vector<ActionSignature> signatures;
  for (const auto& a : pending) signatures.push_back(a.signature);
  auto schema = std::make_shared<const DomainSchema>(name, types, predicates, signatures);

  std::vector<ActionModelEntry> entries;
  for (const auto& a : pending) {
    RefSet pre;
    RefSet add;
    RefSet del;
    if (a.precondition != nullptr) {
      for (auto [node, negated] : conjunction(*a.precondition, false)) {
        (void)negated;
        pre.insert(lifted_atom(*node, a.signature, *schema));
      }
    }
    if (a.effect != nullptr) {
      for (auto [node, negated] : conjunction(*a.effect, true)) {
        (negated ? del : add).insert(lifted_atom(*node, a.signature, *schema));
      }
    }
    try {
      entries.emplace_back(a.signature.name, std::move(pre), std::move(add), std::move(del));
    } catch (const SchemaError& e) {
      fail_at(*a.node, e.what());
    }
  }
  ActionModel model(schema, std::move(entries));
  return {schema, std::move(model)};
}

namespace {

GroundAtom checked_atom(const SExpr& node, const DomainSchema& schema, const ObjectTable& objects) {
  GroundAtom atom = ground_atom(node);
  try {
    check_atom(schema, objects, atom);
  } catch (const SchemaError& e) {
    fail_at(node, e.what());
  }
  return atom;
}

ObjectTable checked_objects(const SExpr& node, std::size_t begin, const DomainSchema& schema) {
  auto objects = typed_list(node.items, begin);
  for (const auto& o : objects) {
    if (!schema.has_type(o.type)) fail_at(node, "unknown type '" + o.type + "'");
    if (o.name.empty() || o.name.front() == '?') fail_at(node, "invalid object name '" + o.name + "'");
  }
  try {
    return ObjectTable(std::move(objects));
  } catch (const SchemaError& e) {
    fail_at(node, e.what());
  }
}

State state_from(const SExpr& node, std::size_t begin, const DomainSchema& schema,
                 const ObjectTable& objects) {
  State state;
  for (std::size_t i = begin; i < node.items.size(); ++i) {
    state.atoms.insert(checked_atom(node.items[i], schema, objects));
  }
  return state;
}

}  // namespace

ProblemSpec parse_problem(std::string_view text, const DomainSchema& schema) {
  const auto top = read_sexprs(text);
  const auto& def = single_define(top, "problem");
  ProblemSpec problem;
  problem.name = header_name(def, "problem");
  bool have_objects = false;
  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const auto& section = def.items[i];
    if (section.has_head(":domain")) {
      if (section.items.size() != 2 || !section.items[1].is_atom()) fail_at(section, "expected (:domain <name>)");
      problem.domain = section.items[1].text;
      if (problem.domain != schema.name()) {
        fail_at(section, "problem is for domain '" + problem.domain + "', not '" + schema.name() + "'");
      }
    } else if (section.has_head(":objects")) {
      problem.objects = checked_objects(section, 1, schema);
      have_objects = true;
    } else if (section.has_head(":init")) {
      if (!have_objects) fail_at(section, ":objects must precede :init");
      problem.init = state_from(section, 1, schema, problem.objects);
    } else if (section.has_head(":goal")) {
      if (!have_objects) fail_at(section, ":objects must precede :goal");
      if (section.items.size() != 2) fail_at(section, "expected (:goal <formula>)");
      std::set<GroundAtom> goal;
      for (auto [node, negated] : conjunction(section.items[1], false)) {
        (void)negated;
        goal.insert(checked_atom(*node, schema, problem.objects));
      }
      problem.goal.assign(goal.begin(), goal.end());
    } else {
      fail_at(section, "unsupported problem section");
    }
  }
  return problem;
}

std::vector<PlanTrace> parse_traces(std::string_view text, const DomainSchema& schema) {
  const auto top = read_sexprs(text);
  std::vector<PlanTrace> traces;
  for (std::size_t t = 0; t < top.size(); ++t) {
    const auto& block = top[t];
    if (block.has_head(":domain")) {
      if (t != 0) fail_at(block, "(:domain ...) header must come first");
      if (block.items.size() != 2 || !block.items[1].is_atom()) fail_at(block, "expected (:domain <name>)");
      if (block.items[1].text != schema.name()) {
        fail_at(block, "traces are for domain '" + block.items[1].text + "', not '" + schema.name() + "'");
      }
      continue;
    }
    if (!block.is_list() || block.open != '[') fail_at(block, "expected a trace block [...]");
    std::size_t k = 0;
    ObjectTable objects;
    if (k < block.items.size() && block.items[k].has_head(":objects")) {
      objects = checked_objects(block.items[k], 1, schema);
      ++k;
    }
    if (k >= block.items.size() || !block.items[k].has_head(":init")) {
      fail_at(block, "trace must start with (:init ...)");
    }
    std::vector<State> states{state_from(block.items[k], 1, schema, objects)};
    std::vector<GroundAction> actions;
    bool closed = false;
    for (++k; k < block.items.size(); ++k) {
      const auto& item = block.items[k];
      if (closed) fail_at(item, "nothing may follow (:goal ...)");
      const bool expect_action = states.size() == actions.size() + 1;
      if (item.has_head("action")) {
        if (!expect_action) fail_at(item, "alternation error: two actions without a state between them");
        if (item.items.size() != 2) fail_at(item, "expected (action (<name> <args>...))");
        GroundAtom parsed = ground_atom(item.items[1]);
        GroundAction action{parsed.predicate, parsed.args};
        try {
          check_action(schema, objects, action);
        } catch (const SchemaError& e) {
          fail_at(item.items[1], e.what());
        }
        actions.push_back(std::move(action));
      } else if (item.has_head("state") || item.has_head(":goal")) {
        if (expect_action) fail_at(item, "alternation error: two states without an action between them");
        states.push_back(state_from(item, 1, schema, objects));
        closed = item.has_head(":goal");
      } else {
        fail_at(item, "expected (action ...), (state ...) or (:goal ...)");
      }
    }
    if (!closed) fail_at(block, "trace must end with (:goal ...)");
    try {
      traces.emplace_back(std::move(objects), std::move(states), std::move(actions));
    } catch (const Error& e) {
      fail_at(block, e.what());
    }
  }
  return traces;
}

namespace {

std::string atoms_text(const State& state) {
  std::string out;
  for (const auto& a : state.atoms) out += " " + to_string(a);
  return out;
}

}  // namespace

std::string serialize_model(const ActionModel& model) {
  const auto& schema = model.schema();
  std::ostringstream out;
  out << "(define (domain " << schema.name() << ")\n";
  out << "  (:requirements :strips :typing)\n";
  out << "  (:types";
  for (const auto& t : schema.types()) out << ' ' << t;
  out << ")\n";
  out << "  (:predicates";
  for (const auto& p : schema.predicates()) {
    out << "\n    (" << p.name;
    for (std::size_t i = 0; i < p.param_types.size(); ++i) {
      out << " ?x" << i << " - " << p.param_types[i];
    }
    out << ")";
  }
  out << ")";
  for (const auto& sig : schema.actions()) {
    const auto& e = model.entry(sig.name);
    std::vector<TypedObject> params;
    for (std::size_t i = 0; i < sig.arity(); ++i) params.push_back({sig.param_names[i], sig.param_types[i]});
    out << "\n  (:action " << sig.name << "\n";
    out << "    :parameters (" << typed_list_text(params) << ")\n";
    out << "    :precondition (and";
    for (const auto& r : e.pre()) out << ' ' << to_string(r, sig);
    out << ")\n";
    out << "    :effect (and";
    for (const auto& r : e.add()) out << ' ' << to_string(r, sig);
    for (const auto& r : e.del()) out << " (not " << to_string(r, sig) << ")";
    out << "))";
  }
  out << ")\n";
  return out.str();
}

std::string serialize_problem(const ProblemSpec& problem) {
  std::ostringstream out;
  out << "(define (problem " << problem.name << ")\n";
  out << "  (:domain " << problem.domain << ")\n";
  out << "  (:objects " << typed_list_text(problem.objects.objects()) << ")\n";
  out << "  (:init" << atoms_text(problem.init) << ")\n";
  out << "  (:goal (and";
  for (const auto& g : problem.goal) out << ' ' << to_string(g);
  out << ")))\n";
  return out.str();
}

std::string serialize_traces(std::string_view domain_name, const std::vector<PlanTrace>& traces) {
  std::ostringstream out;
  out << "(:domain " << domain_name << ")\n";
  for (const auto& trace : traces) {
    out << "[(:objects " << typed_list_text(trace.objects().objects()) << ")\n";
    out << " (:init" << atoms_text(trace.initial()) << ")\n";
    for (std::size_t i = 0; i < trace.length(); ++i) {
      out << " (action " << to_string(trace.actions()[i]) << ")\n";
      const bool last = i + 1 == trace.length();
      out << (last ? " (:goal" : " (state") << atoms_text(trace.states()[i + 1]) << ")"
          << (last ? "]\n" : "\n");
    }
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace pdl
