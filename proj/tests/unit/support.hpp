#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/pddl_io.hpp"

namespace pdl::test {

inline std::string source_path(const std::string& rel) { return std::string(PDL_SOURCE_DIR) + "/" + rel; }

inline ParsedDomain load_domain(const std::string& name) {
  return parse_domain(read_file(source_path("domains/" + name + "/domain.pddl")));
}

inline ProblemSpec load_unitary(const std::string& name, const DomainSchema& schema) {
  return parse_problem(read_file(source_path("domains/" + name + "/unitary.pddl")), schema);
}

inline GroundAtom atom(std::string pred, std::vector<std::string> args) { return {std::move(pred), std::move(args)}; }

inline GroundAction act(std::string name, std::vector<std::string> args) { return {std::move(name), std::move(args)}; }

inline const std::vector<std::string>& shipped_domains() {
  static const std::vector<std::string> names{"gripper", "elevator", "bakery"};
  return names;
}

}  // namespace pdl::test
