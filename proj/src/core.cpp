#include "pdl/core.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "pdl/error.hpp"

namespace pdl {

namespace {

template <typename T>
const T* find_by_name(const std::vector<T>& items, std::string_view name) {
  auto it = std::lower_bound(items.begin(), items.end(), name,
                             [](const T& item, std::string_view n) { return item.name < n; });
  if (it == items.end() || it->name != name) return nullptr;
  return &*it;
}

template <typename T>
void sort_unique_by_name(std::vector<T>& items, const char* what) {
  std::sort(items.begin(), items.end(),
            [](const T& a, const T& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].name == items[i - 1].name) {
      throw SchemaError(std::string("duplicate ") + what + " '" + items[i].name + "'");
    }
  }
}

bool intersects(const RefSet& a, const RefSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace

DomainSchema::DomainSchema(std::string name, std::vector<std::string> types,
                           std::vector<PredicateSchema> predicates,
                           std::vector<ActionSignature> actions)
    : name_(std::move(name)),
      types_(std::move(types)),
      predicates_(std::move(predicates)),
      actions_(std::move(actions)) {
  std::sort(types_.begin(), types_.end());
  if (std::adjacent_find(types_.begin(), types_.end()) != types_.end()) {
    throw SchemaError("duplicate type in domain '" + name_ + "'");
  }
  for (const auto& t : types_) {
    if (t.empty()) throw SchemaError("empty type name");
  }
  sort_unique_by_name(predicates_, "predicate");
  sort_unique_by_name(actions_, "action");
  for (const auto& p : predicates_) {
    for (const auto& t : p.param_types) {
      if (!has_type(t)) throw SchemaError("predicate '" + p.name + "' uses unknown type '" + t + "'");
    }
  }
  for (const auto& a : actions_) {
    if (a.param_names.size() != a.param_types.size()) {
      throw SchemaError("action '" + a.name + "' has mismatched parameter names and types");
    }
    for (const auto& t : a.param_types) {
      if (!has_type(t)) throw SchemaError("action '" + a.name + "' uses unknown type '" + t + "'");
    }
  }
}

bool DomainSchema::has_type(std::string_view type) const {
  return std::binary_search(types_.begin(), types_.end(), type);
}

const PredicateSchema* DomainSchema::find_predicate(std::string_view name) const {
  return find_by_name(predicates_, name);
}

const ActionSignature* DomainSchema::find_action(std::string_view name) const {
  return find_by_name(actions_, name);
}

const PredicateSchema& DomainSchema::predicate(std::string_view name) const {
  if (const auto* p = find_predicate(name)) return *p;
  throw SchemaError("unknown predicate '" + std::string(name) + "'");
}

const ActionSignature& DomainSchema::action(std::string_view name) const {
  if (const auto* a = find_action(name)) return *a;
  throw SchemaError("unknown action '" + std::string(name) + "'");
}

std::size_t DomainSchema::predicate_index(std::string_view name) const {
  return static_cast<std::size_t>(&predicate(name) - predicates_.data());
}

std::size_t DomainSchema::action_index(std::string_view name) const {
  return static_cast<std::size_t>(&action(name) - actions_.data());
}

bool is_relevant(const LiftedRef& ref, const ActionSignature& action,
                 const PredicateSchema& pred) {
  if (ref.predicate != pred.name || ref.binding.size() != pred.arity()) return false;
  for (std::size_t slot = 0; slot < ref.binding.size(); ++slot) {
    const std::size_t pos = ref.binding[slot];
    if (pos >= action.arity()) return false;
    if (action.param_types[pos] != pred.param_types[slot]) return false;
    for (std::size_t other = 0; other < slot; ++other) {
      if (ref.binding[other] == pos) return false;
    }
  }
  return true;
}

std::string to_string(const LiftedRef& ref, const ActionSignature& action) {
  std::string out = "(" + ref.predicate;
  for (std::size_t pos : ref.binding) {
    out += ' ';
    out += pos < action.param_names.size() ? action.param_names[pos] : "?" + std::to_string(pos);
  }
  return out + ")";
}

ActionModelEntry::ActionModelEntry(std::string action, RefSet pre, RefSet add, RefSet del)
    : action_(std::move(action)), pre_(std::move(pre)), add_(std::move(add)), del_(std::move(del)) {
  if (intersects(add_, del_)) {
    throw SchemaError("action '" + action_ + "': a predicate is both added and deleted");
  }
  if (intersects(add_, pre_)) {
    throw SchemaError("action '" + action_ + "': a predicate is both required and added");
  }
}

ActionModel::ActionModel(std::shared_ptr<const DomainSchema> schema,
                         std::vector<ActionModelEntry> entries)
    : schema_(std::move(schema)), entries_(std::move(entries)) {
  if (!schema_) throw SchemaError("action model without schema");
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.action() < b.action(); });
  if (entries_.size() != schema_->actions().size()) {
    throw SchemaError("action model must have exactly one entry per action");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& sig = schema_->actions()[i];
    const auto& e = entries_[i];
    if (e.action() != sig.name) {
      throw SchemaError("action model entry '" + e.action() + "' does not match schema action '" +
                        sig.name + "'");
    }
    for (const RefSet* list : {&e.pre(), &e.add(), &e.del()}) {
      for (const auto& ref : *list) {
        const auto* pred = schema_->find_predicate(ref.predicate);
        if (pred == nullptr || !is_relevant(ref, sig, *pred)) {
          throw SchemaError("predicate " + to_string(ref, sig) + " is not relevant to action '" +
                            sig.name + "'");
        }
      }
    }
  }
}

const ActionModelEntry& ActionModel::entry(std::string_view action) const {
  return entries_[schema_->action_index(action)];
}

ActionModel ActionModel::with_entry(ActionModelEntry replacement) const {
  auto entries = entries_;
  entries[schema_->action_index(replacement.action())] = std::move(replacement);
  return ActionModel(schema_, std::move(entries));
}

bool ActionModel::operator==(const ActionModel& other) const {
  return (schema_ == other.schema_ || *schema_ == *other.schema_) && entries_ == other.entries_;
}

std::string to_string(const GroundAtom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& a : atom.args) out += " " + a;
  return out + ")";
}

std::string to_string(const GroundAction& action) {
  std::string out = "(" + action.action;
  for (const auto& a : action.args) out += " " + a;
  return out + ")";
}

ObjectTable::ObjectTable(std::vector<TypedObject> objects) : objects_(std::move(objects)) {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (objects_[i].name == objects_[j].name) {
        throw SchemaError("duplicate object '" + objects_[i].name + "'");
      }
    }
  }
}

std::optional<std::string> ObjectTable::type_of(std::string_view name) const {
  for (const auto& o : objects_) {
    if (o.name == name) return o.type;
  }
  return std::nullopt;
}

std::vector<std::string> ObjectTable::of_type(std::string_view type) const {
  std::vector<std::string> out;
  for (const auto& o : objects_) {
    if (o.type == type) out.push_back(o.name);
  }
  return out;
}

namespace {

void check_args(const ObjectTable& objects, const std::vector<std::string>& args,
                const std::vector<std::string>& types, const std::string& what) {
  if (args.size() != types.size()) {
    throw SchemaError(what + ": expected " + std::to_string(types.size()) + " arguments, got " +
                      std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto type = objects.type_of(args[i]);
    if (!type) throw SchemaError(what + ": unknown object '" + args[i] + "'");
    if (*type != types[i]) {
      throw SchemaError(what + ": object '" + args[i] + "' has type '" + *type + "', expected '" +
                        types[i] + "'");
    }
  }
}

}  // namespace

void check_atom(const DomainSchema& schema, const ObjectTable& objects, const GroundAtom& atom) {
  check_args(objects, atom.args, schema.predicate(atom.predicate).param_types, to_string(atom));
}

void check_action(const DomainSchema& schema, const ObjectTable& objects,
                  const GroundAction& action) {
  check_args(objects, action.args, schema.action(action.action).param_types, to_string(action));
}

PlanTrace::PlanTrace(ObjectTable objects, std::vector<State> states,
                     std::vector<GroundAction> actions)
    : objects_(std::move(objects)), states_(std::move(states)), actions_(std::move(actions)) {
  if (actions_.empty()) throw PreconditionError("plan trace must contain at least one action");
  if (states_.size() != actions_.size() + 1) {
    throw PreconditionError("plan trace must alternate states and actions, starting and ending with a state");
  }
}

GroundAtom ground(const LiftedRef& ref, const GroundAction& action) {
  GroundAtom atom{ref.predicate, {}};
  atom.args.reserve(ref.binding.size());
  for (std::size_t pos : ref.binding) {
    if (pos >= action.args.size()) {
      throw SchemaError("binding position out of range for " + to_string(action));
    }
    atom.args.push_back(action.args[pos]);
  }
  return atom;
}

namespace {

const ActionModelEntry& entry_for(const GroundAction& action, const ActionModel& model) {
  const auto& sig = model.schema().action(action.action);
  if (sig.arity() != action.args.size()) {
    throw SchemaError(to_string(action) + ": expected " + std::to_string(sig.arity()) +
                      " arguments");
  }
  return model.entry(action.action);
}

}  // namespace

bool is_applicable(const State& state, const GroundAction& action, const ActionModel& model) {
  const auto& e = entry_for(action, model);
  return std::all_of(e.pre().begin(), e.pre().end(),
                     [&](const LiftedRef& ref) { return state.contains(ground(ref, action)); });
}

State apply(const State& state, const GroundAction& action, const ActionModel& model) {
  if (!is_applicable(state, action, model)) {
    throw PreconditionError(to_string(action) + " is not applicable");
  }
  const auto& e = model.entry(action.action);
  State next = state;
  for (const auto& ref : e.del()) next.atoms.erase(ground(ref, action));
  for (const auto& ref : e.add()) next.atoms.insert(ground(ref, action));
  return next;
}

TraceCheck validate_trace(const PlanTrace& trace, const ActionModel& model) {
  for (std::size_t i = 0; i < trace.length(); ++i) {
    const auto& action = trace.actions()[i];
    const auto& before = trace.states()[i];
    if (model.schema().find_action(action.action) == nullptr) {
      return {false, "step " + std::to_string(i + 1) + ": unknown action " + to_string(action)};
    }
    if (!is_applicable(before, action, model)) {
      return {false, "step " + std::to_string(i + 1) + ": " + to_string(action) + " is not applicable"};
    }
    const State expected = apply(before, action, model);
    const auto& recorded = trace.states()[i + 1];
    if (!(expected == recorded)) {
      std::ostringstream msg;
      msg << "step " << (i + 1) << ": successor of " << to_string(action)
          << " differs from recorded state";
      for (const auto& a : expected.atoms) {
        if (!recorded.contains(a)) {
          msg << "; missing " << to_string(a);
          break;
        }
      }
      for (const auto& a : recorded.atoms) {
        if (!expected.contains(a)) {
          msg << "; unexpected " << to_string(a);
          break;
        }
      }
      return {false, msg.str()};
    }
  }
  return {};
}

}  // namespace pdl
