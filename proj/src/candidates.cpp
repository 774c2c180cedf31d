#include "pdl/candidates.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "pdl/sexpr.hpp"

namespace pdl {

std::vector<LiftedRef> relevant_predicates(const ActionSignature& action,
                                           std::span<const PredicateSchema> predicates) {
  std::vector<const PredicateSchema*> sorted;
  for (const auto& p : predicates) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });

  std::vector<LiftedRef> out;
  for (const auto* pred : sorted) {
    LiftedRef ref{pred->name, {}};
    std::vector<bool> used(action.arity(), false);
    std::function<void(std::size_t)> bind = [&](std::size_t slot) {
      if (slot == pred->arity()) {
        out.push_back(ref);
        return;
      }
      for (std::size_t pos = 0; pos < action.arity(); ++pos) {
        if (used[pos] || action.param_types[pos] != pred->param_types[slot]) continue;
        used[pos] = true;
        ref.binding.push_back(pos);
        bind(slot + 1);
        ref.binding.pop_back();
        used[pos] = false;
      }
    };
    bind(0);
  }
  return out;
}

CandidateActionSet::CandidateActionSet(std::string action, std::vector<LiftedRef> relevant,
                                       std::vector<CandidateMasks> candidates)
    : action_(std::move(action)), relevant_(std::move(relevant)), candidates_(std::move(candidates)) {}

ActionModelEntry CandidateActionSet::entry(std::size_t index) const {
  return entry(candidates_.at(index));
}

ActionModelEntry CandidateActionSet::entry(const CandidateMasks& masks) const {
  RefSet pre;
  RefSet add;
  RefSet del;
  for (std::size_t i = 0; i < relevant_.size(); ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    if (masks.pre & bit) pre.insert(relevant_[i]);
    if (masks.add & bit) add.insert(relevant_[i]);
    if (masks.del & bit) del.insert(relevant_[i]);
  }
  return ActionModelEntry(action_, std::move(pre), std::move(add), std::move(del));
}

std::optional<CandidateMasks> CandidateActionSet::masks_of(const ActionModelEntry& entry) const {
  if (entry.action() != action_) return std::nullopt;
  CandidateMasks masks;
  auto fill = [&](const RefSet& refs, std::uint32_t& mask) {
    for (const auto& r : refs) {
      auto it = std::find(relevant_.begin(), relevant_.end(), r);
      if (it == relevant_.end()) return false;
      mask |= std::uint32_t{1} << (it - relevant_.begin());
    }
    return true;
  };
  if (!fill(entry.pre(), masks.pre) || !fill(entry.add(), masks.add) || !fill(entry.del(), masks.del)) {
    return std::nullopt;
  }
  return masks;
}

std::optional<std::size_t> CandidateActionSet::find(const ActionModelEntry& entry) const {
  const auto masks = masks_of(entry);
  if (!masks) return std::nullopt;
  auto it = std::find(candidates_.begin(), candidates_.end(), *masks);
  if (it == candidates_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - candidates_.begin());
}

CandidateActionSet CandidateActionSet::subset(std::vector<CandidateMasks> kept) const {
  return CandidateActionSet(action_, relevant_, std::move(kept));
}

BigInt candidate_count(std::size_t relevant, bool strict_del) {
  BigInt count = 1;
  for (std::size_t i = 0; i < relevant; ++i) count *= strict_del ? 4 : 5;
  return count;
}

CandidateActionSet enumerate_candidates(const ActionSignature& action,
                                        std::vector<LiftedRef> relevant,
                                        const CandidateOptions& options) {
  const std::size_t k = relevant.size();
  if (k > options.max_rel || k > 31) {
    throw TooLargeError("action '" + action.name + "' has " + std::to_string(k) +
                        " relevant predicates (limit " + std::to_string(std::min<std::size_t>(options.max_rel, 31)) + ")");
  }
  const BigInt count = candidate_count(k, options.strict_del);
  if (count > options.max_candidates) {
    throw TooLargeError("action '" + action.name + "' would have " + count.str() +
                        " candidates (limit " + std::to_string(options.max_candidates) + ")");
  }

  // Each relevant predicate independently takes one role; add excludes the others.
  struct Role {
    bool pre, add, del;
  };
  static constexpr Role kRoles[] = {
      {false, false, false}, {true, false, false}, {false, false, true},
      {true, false, true},   {false, true, false}};
  static constexpr Role kStrictRoles[] = {
      {false, false, false}, {true, false, false}, {true, false, true}, {false, true, false}};
  const std::span<const Role> roles = options.strict_del ? std::span<const Role>(kStrictRoles)
                                                         : std::span<const Role>(kRoles);

  std::vector<CandidateMasks> candidates;
  candidates.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> digit(k, 0);
  for (;;) {
    CandidateMasks m;
    for (std::size_t i = 0; i < k; ++i) {
      const Role& r = roles[digit[i]];
      const std::uint32_t bit = std::uint32_t{1} << i;
      if (r.pre) m.pre |= bit;
      if (r.add) m.add |= bit;
      if (r.del) m.del |= bit;
    }
    candidates.push_back(m);
    std::size_t i = 0;
    while (i < k && ++digit[i] == roles.size()) digit[i++] = 0;
    if (i == k) break;
  }
  return CandidateActionSet(action.name, std::move(relevant), std::move(candidates));
}

const CandidateActionSet& CandidateModelSpace::for_action(std::string_view action) const {
  return per_action.at(schema->action_index(action));
}

std::size_t CandidateModelSpace::total_candidates() const {
  std::size_t total = 0;
  for (const auto& cas : per_action) total += cas.size();
  return total;
}

ActionModel CandidateModelSpace::model(std::span<const std::size_t> indices) const {
  if (indices.size() != per_action.size()) throw PreconditionError("one candidate index per action required");
  std::vector<ActionModelEntry> entries;
  for (std::size_t a = 0; a < per_action.size(); ++a) entries.push_back(per_action[a].entry(indices[a]));
  return ActionModel(schema, std::move(entries));
}

CandidateModelSpace build_space(std::shared_ptr<const DomainSchema> schema,
                                const CandidateOptions& options) {
  CandidateModelSpace space{schema, options, {}};
  for (const auto& sig : schema->actions()) {
    space.per_action.push_back(
        enumerate_candidates(sig, relevant_predicates(sig, schema->predicates()), options));
  }
  return space;
}

BigInt space_size(const CandidateModelSpace& space) {
  BigInt size = 1;
  for (const auto& cas : space.per_action) size *= cas.size();
  return size;
}

namespace {

void write_indices(std::ostream& out, const char* name, std::uint32_t mask, std::size_t k) {
  out << '(' << name;
  for (std::size_t i = 0; i < k; ++i) {
    if (mask & (std::uint32_t{1} << i)) out << ' ' << i;
  }
  out << ')';
}

std::uint32_t read_indices(const SExpr& node, const char* name, std::size_t k) {
  if (!node.has_head(name)) fail_at(node, std::string("expected (") + name + " ...)");
  std::uint32_t mask = 0;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const auto& item = node.items[i];
    if (!item.is_atom() || item.text.empty() || item.text.size() > 2 ||
        !std::all_of(item.text.begin(), item.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail_at(item, "expected a relevant-predicate index");
    }
    const auto idx = static_cast<std::size_t>(std::stoul(item.text));
    if (idx >= k) fail_at(item, "relevant-predicate index out of range");
    mask |= std::uint32_t{1} << idx;
  }
  return mask;
}

}  // namespace

std::string serialize_space(const CandidateModelSpace& space) {
  std::ostringstream out;
  out << "(candidates " << space.schema->name() << "\n";
  out << "  (:options (strict-del " << (space.options.strict_del ? "true" : "false") << ") (max-rel "
      << space.options.max_rel << "))";
  for (std::size_t a = 0; a < space.per_action.size(); ++a) {
    const auto& cas = space.per_action[a];
    const auto& sig = space.schema->actions()[a];
    const std::size_t k = cas.relevant().size();
    out << "\n  (action " << cas.action() << "\n    (relevant";
    for (const auto& r : cas.relevant()) out << ' ' << to_string(r, sig);
    out << ")\n    (count " << cas.size() << ")";
    for (const auto& m : cas.candidates()) {
      out << "\n    (entry ";
      write_indices(out, "pre", m.pre, k);
      out << ' ';
      write_indices(out, "add", m.add, k);
      out << ' ';
      write_indices(out, "del", m.del, k);
      out << ')';
    }
    out << ")";
  }
  out << ")\n";
  return out.str();
}

CandidateModelSpace parse_space(std::string_view text, std::shared_ptr<const DomainSchema> schema) {
  const auto top = read_sexprs(text);
  if (top.size() != 1 || !top[0].has_head("candidates") || top[0].items.size() < 2) {
    throw ParseError("expected a single (candidates <domain> ...) form", 1, 1);
  }
  const auto& root = top[0];
  if (!root.items[1].is_atom(schema->name())) fail_at(root.items[1], "candidates are for a different domain");
  CandidateModelSpace space{schema, {}, {}};
  std::vector<std::optional<CandidateActionSet>> sets(schema->actions().size());
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const auto& node = root.items[i];
    if (node.has_head(":options")) {
      for (std::size_t k = 1; k < node.items.size(); ++k) {
        const auto& opt = node.items[k];
        if (opt.has_head("strict-del") && opt.items.size() == 2) {
          space.options.strict_del = opt.items[1].is_atom("true");
        } else if (opt.has_head("max-rel") && opt.items.size() == 2 && opt.items[1].is_atom()) {
          space.options.max_rel = static_cast<std::size_t>(std::stoul(opt.items[1].text));
        } else {
          fail_at(opt, "unknown option");
        }
      }
      continue;
    }
    if (!node.has_head("action") || node.items.size() < 4 || !node.items[1].is_atom()) {
      fail_at(node, "expected (action <name> (relevant ...) (count n) (entry ...)*)");
    }
    const auto* sig = schema->find_action(node.items[1].text);
    if (sig == nullptr) fail_at(node.items[1], "unknown action '" + node.items[1].text + "'");
    const auto a = schema->action_index(sig->name);
    if (sets[a]) fail_at(node, "duplicate action block");

    const auto& rel_node = node.items[2];
    if (!rel_node.has_head("relevant")) fail_at(rel_node, "expected (relevant ...)");
    std::vector<LiftedRef> relevant;
    for (std::size_t k = 1; k < rel_node.items.size(); ++k) {
      const auto& r = rel_node.items[k];
      if (!r.is_list() || r.items.empty() || !r.items[0].is_atom()) fail_at(r, "expected (pred ?x ...)");
      LiftedRef ref{r.items[0].text, {}};
      for (std::size_t v = 1; v < r.items.size(); ++v) {
        auto it = std::find_if(sig->param_names.begin(), sig->param_names.end(),
                               [&](const std::string& n) { return r.items[v].is_atom(n); });
        if (it == sig->param_names.end()) fail_at(r.items[v], "unknown parameter");
        ref.binding.push_back(static_cast<std::size_t>(it - sig->param_names.begin()));
      }
      const auto* pred = schema->find_predicate(ref.predicate);
      if (pred == nullptr || !is_relevant(ref, *sig, *pred)) fail_at(r, "predicate is not relevant to the action");
      relevant.push_back(std::move(ref));
    }
    if (relevant.size() > 31) fail_at(rel_node, "too many relevant predicates");

    const auto& count_node = node.items[3];
    if (!count_node.has_head("count") || count_node.items.size() != 2 || !count_node.items[1].is_atom()) {
      fail_at(count_node, "expected (count n)");
    }
    std::vector<CandidateMasks> candidates;
    for (std::size_t k = 4; k < node.items.size(); ++k) {
      const auto& e = node.items[k];
      if (!e.has_head("entry") || e.items.size() != 4) fail_at(e, "expected (entry (pre ...) (add ...) (del ...))");
      CandidateMasks m{read_indices(e.items[1], "pre", relevant.size()),
                       read_indices(e.items[2], "add", relevant.size()),
                       read_indices(e.items[3], "del", relevant.size())};
      if ((m.add & m.del) != 0 || (m.add & m.pre) != 0) fail_at(e, "entry violates the STRIPS semantic constraints");
      candidates.push_back(m);
    }
    if (count_node.items[1].text != std::to_string(candidates.size())) {
      fail_at(count_node, "count does not match the number of entries");
    }
    sets[a] = CandidateActionSet(sig->name, std::move(relevant), std::move(candidates));
  }
  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (!sets[a]) fail_at(root, "missing action block for '" + schema->actions()[a].name + "'");
    space.per_action.push_back(std::move(*sets[a]));
  }
  return space;
}

}  // namespace pdl
