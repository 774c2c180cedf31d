#pragma once

// Lifted and ground STRIPS objects plus their execution semantics.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pdl {

struct PredicateSchema {
  std::string name;
  std::vector<std::string> param_types;

  std::size_t arity() const { return param_types.size(); }
  auto operator<=>(const PredicateSchema&) const = default;
};

struct ActionSignature {
  std::string name;
  // Variable names as written in the domain file ("?r"); used only for printing.
  std::vector<std::string> param_names;
  std::vector<std::string> param_types;

  std::size_t arity() const { return param_types.size(); }
  auto operator<=>(const ActionSignature&) const = default;
};

// Types, predicates and actions of a domain. Immutable after construction;
// predicates and actions are kept sorted by name.
class DomainSchema {
 public:
  DomainSchema() = default;
  DomainSchema(std::string name, std::vector<std::string> types,
               std::vector<PredicateSchema> predicates,
               std::vector<ActionSignature> actions);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& types() const { return types_; }
  const std::vector<PredicateSchema>& predicates() const { return predicates_; }
  const std::vector<ActionSignature>& actions() const { return actions_; }

  bool has_type(std::string_view type) const;
  const PredicateSchema* find_predicate(std::string_view name) const;
  const ActionSignature* find_action(std::string_view name) const;
  // Throwing lookups (SchemaError).
  const PredicateSchema& predicate(std::string_view name) const;
  const ActionSignature& action(std::string_view name) const;
  std::size_t predicate_index(std::string_view name) const;
  std::size_t action_index(std::string_view name) const;

  bool operator==(const DomainSchema&) const = default;

 private:
  std::string name_;
  std::vector<std::string> types_;
  std::vector<PredicateSchema> predicates_;
  std::vector<ActionSignature> actions_;
};

// A predicate whose slots are bound to parameter positions of the owning action.
struct LiftedRef {
  std::string predicate;
  std::vector<std::size_t> binding;

  auto operator<=>(const LiftedRef&) const = default;
};

using RefSet = std::set<LiftedRef>;

// True iff `ref` binds `pred` injectively onto type-matching parameters of `action`.
bool is_relevant(const LiftedRef& ref, const ActionSignature& action,
                 const PredicateSchema& pred);

std::string to_string(const LiftedRef& ref, const ActionSignature& action);

class ActionModelEntry {
 public:
  // Throws SchemaError if add ∩ del or add ∩ pre is non-empty.
  ActionModelEntry(std::string action, RefSet pre, RefSet add, RefSet del);

  const std::string& action() const { return action_; }
  const RefSet& pre() const { return pre_; }
  const RefSet& add() const { return add_; }
  const RefSet& del() const { return del_; }
  std::size_t total() const { return pre_.size() + add_.size() + del_.size(); }

  auto operator<=>(const ActionModelEntry&) const = default;

 private:
  std::string action_;
  RefSet pre_;
  RefSet add_;
  RefSet del_;
};

class ActionModel {
 public:
  // Requires exactly one entry per schema action, each ref relevant to its action.
  ActionModel(std::shared_ptr<const DomainSchema> schema,
              std::vector<ActionModelEntry> entries);

  const DomainSchema& schema() const { return *schema_; }
  const std::shared_ptr<const DomainSchema>& schema_ptr() const { return schema_; }
  // Sorted by action name, parallel to schema().actions().
  const std::vector<ActionModelEntry>& entries() const { return entries_; }
  const ActionModelEntry& entry(std::string_view action) const;

  ActionModel with_entry(ActionModelEntry replacement) const;

  bool operator==(const ActionModel& other) const;

 private:
  std::shared_ptr<const DomainSchema> schema_;
  std::vector<ActionModelEntry> entries_;
};

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const GroundAtom&) const = default;
};

std::string to_string(const GroundAtom& atom);

// Closed-world set of positive ground atoms.
struct State {
  std::set<GroundAtom> atoms;

  bool contains(const GroundAtom& atom) const { return atoms.count(atom) != 0; }
  bool operator==(const State&) const = default;
};

struct GroundAction {
  std::string action;
  std::vector<std::string> args;

  auto operator<=>(const GroundAction&) const = default;
};

std::string to_string(const GroundAction& action);

struct TypedObject {
  std::string name;
  std::string type;

  bool operator==(const TypedObject&) const = default;
};

// Objects in declaration order.
class ObjectTable {
 public:
  ObjectTable() = default;
  explicit ObjectTable(std::vector<TypedObject> objects);

  const std::vector<TypedObject>& objects() const { return objects_; }
  std::optional<std::string> type_of(std::string_view name) const;
  std::vector<std::string> of_type(std::string_view type) const;
  bool empty() const { return objects_.empty(); }

  bool operator==(const ObjectTable& other) const { return objects_ == other.objects_; }

 private:
  std::vector<TypedObject> objects_;
};

// Throws SchemaError unless atom/action matches arity and argument types.
void check_atom(const DomainSchema& schema, const ObjectTable& objects, const GroundAtom& atom);
void check_action(const DomainSchema& schema, const ObjectTable& objects,
                  const GroundAction& action);

// [s0, a1, s1, ..., an, g] stored as n+1 states and n actions; g is states.back().
class PlanTrace {
 public:
  // Throws PreconditionError unless there is ≥ 1 action and states = actions + 1.
  PlanTrace(ObjectTable objects, std::vector<State> states, std::vector<GroundAction> actions);

  const ObjectTable& objects() const { return objects_; }
  const std::vector<State>& states() const { return states_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  std::size_t length() const { return actions_.size(); }
  const State& initial() const { return states_.front(); }
  const State& goal() const { return states_.back(); }

  bool operator==(const PlanTrace&) const = default;

 private:
  ObjectTable objects_;
  std::vector<State> states_;
  std::vector<GroundAction> actions_;
};

GroundAtom ground(const LiftedRef& ref, const GroundAction& action);

bool is_applicable(const State& state, const GroundAction& action, const ActionModel& model);

// (state \ ground(del)) ∪ ground(add). Throws PreconditionError when inapplicable.
State apply(const State& state, const GroundAction& action, const ActionModel& model);

struct TraceCheck {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

TraceCheck validate_trace(const PlanTrace& trace, const ActionModel& model);

}  // namespace pdl
