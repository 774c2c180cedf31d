#pragma once

// Typed-STRIPS PDDL subset, problem files and the interleaved trace format.
// Grammars are documented in docs/formats.md.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/sexpr.hpp"

namespace pdl {

struct ParsedDomain {
  std::shared_ptr<const DomainSchema> schema;
  ActionModel reference;  // populated from :precondition / :effect
};

struct ProblemSpec {
  std::string name;
  std::string domain;
  ObjectTable objects;
  State init;
  std::vector<GroundAtom> goal;  // partial; sorted, unique

  bool goal_holds(const State& state) const;
};

ParsedDomain parse_domain(std::string_view text);

ProblemSpec parse_problem(std::string_view text, const DomainSchema& schema);

std::vector<PlanTrace> parse_traces(std::string_view text, const DomainSchema& schema);

// Domain file text for `model` (and its schema). Actions and predicates are
// emitted alphabetically; list members in LiftedRef order.
std::string serialize_model(const ActionModel& model);

std::string serialize_problem(const ProblemSpec& problem);

std::string serialize_traces(std::string_view domain_name, const std::vector<PlanTrace>& traces);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Helpers shared by the other s-expression formats.
namespace sexpr_util {

// Parses "a b - t c - u" into (name, type) pairs. Names may be "?x" variables.
std::vector<TypedObject> typed_list(const std::vector<SExpr>& items, std::size_t begin);

GroundAtom ground_atom(const SExpr& node);

std::string typed_list_text(const std::vector<TypedObject>& objects);

}  // namespace sexpr_util

}  // namespace pdl
