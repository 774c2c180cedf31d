#include "pdl/pruner.hpp"

#include <algorithm>
#include <set>

#include "pdl/rng.hpp"

namespace pdl {

std::string to_string(const PairConstraints& c) {
  std::string out = "{";
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (out.size() > 1) out += ",";
    out += name;
  };
  add(c.c1, "C1");
  add(c.c2, "C2");
  add(c.c3, "C3");
  return out + "}";
}

namespace {

std::set<std::string> names(const RefSet& refs) {
  std::set<std::string> out;
  for (const auto& r : refs) out.insert(r.predicate);
  return out;
}

bool overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::any_of(a.begin(), a.end(), [&](const std::string& n) { return b.count(n) != 0; });
}

// Predicate-name bitmasks of one candidate, over schema predicate indices.
struct NameMasks {
  std::uint64_t pre = 0;
  std::uint64_t pre_kept = 0;  // preconditions not deleted by the same entry
  std::uint64_t add = 0;
  std::uint64_t del = 0;
};

std::vector<NameMasks> name_masks(const CandidateActionSet& cas, const DomainSchema& schema) {
  std::vector<std::uint64_t> ref_bit;
  for (const auto& r : cas.relevant()) ref_bit.push_back(std::uint64_t{1} << schema.predicate_index(r.predicate));
  std::vector<NameMasks> out;
  out.reserve(cas.size());
  for (const auto& m : cas.candidates()) {
    NameMasks n;
    for (std::size_t i = 0; i < ref_bit.size(); ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if (m.pre & bit) n.pre |= ref_bit[i];
      if ((m.pre & bit) && !(m.del & bit)) n.pre_kept |= ref_bit[i];
      if (m.add & bit) n.add |= ref_bit[i];
      if (m.del & bit) n.del |= ref_bit[i];
    }
    out.push_back(n);
  }
  return out;
}

PairConstraints check(const NameMasks& first, const NameMasks& second) {
  return {(first.pre_kept & second.pre) != 0, (first.add & second.pre) != 0,
          (first.del & second.add) != 0};
}

}  // namespace

PairConstraints check_pair_constraints(const ActionModelEntry& first, const ActionModelEntry& second) {
  std::set<std::string> kept;
  for (const auto& p : first.pre()) {
    if (first.del().count(p) == 0) kept.insert(p.predicate);
  }
  return {overlap(kept, names(second.pre())), overlap(names(first.add()), names(second.pre())),
          overlap(names(first.del()), names(second.add()))};
}

PruneResult prune_candidates(const CandidateModelSpace& space, const std::vector<ActionPair>& pairs) {
  const auto& schema = *space.schema;
  if (schema.predicates().size() > 64) throw TooLargeError("pruning supports at most 64 predicates");
  const std::size_t n = space.per_action.size();

  PruneResult result{space, {}, {}, {}};
  std::vector<std::vector<NameMasks>> masks;
  for (const auto& cas : space.per_action) {
    result.initial_counts.push_back(cas.size());
    masks.push_back(name_masks(cas, schema));
  }

  std::vector<bool> paired(n, false);
  std::vector<std::vector<bool>> keep(n);
  for (std::size_t a = 0; a < n; ++a) keep[a].assign(space.per_action[a].size(), false);

  for (const auto& pair : pairs) {
    const auto i = schema.action_index(pair.first);
    const auto j = schema.action_index(pair.second);
    paired[i] = paired[j] = true;
    PairStats stats{pair, 0, 0};
    for (std::size_t x = 0; x < masks[i].size(); ++x) {
      for (std::size_t y = 0; y < masks[j].size(); ++y) {
        ++stats.evaluations;
        if (check(masks[i][x], masks[j][y]).any()) {
          ++stats.satisfying;
          keep[i][x] = true;
          keep[j][y] = true;
        }
      }
    }
    result.pair_stats.push_back(stats);
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (!paired[a]) continue;
    const auto& cas = space.per_action[a];
    std::vector<CandidateMasks> kept;
    for (std::size_t x = 0; x < cas.size(); ++x) {
      if (keep[a][x]) kept.push_back(cas.candidates()[x]);
    }
    if (kept.empty()) throw PruneError("pruning removed every candidate of action '" + cas.action() + "'");
    result.space.per_action[a] = cas.subset(std::move(kept));
  }
  for (const auto& cas : result.space.per_action) result.final_counts.push_back(cas.size());
  return result;
}

std::optional<PairConstraintWitness> find_witness(const CandidateModelSpace& space, const ActionPair& pair,
                                                  const ActionModelEntry& first) {
  const auto& partner = space.for_action(pair.second);
  for (std::size_t y = 0; y < partner.size(); ++y) {
    auto second = partner.entry(y);
    const auto c = check_pair_constraints(first, second);
    if (c.any()) return PairConstraintWitness{pair, first, std::move(second), c};
  }
  return std::nullopt;
}

std::string model_id(const CandidateModelSpace& space, const std::vector<std::size_t>& indices) {
  std::string id;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const auto width = std::to_string(std::max<std::size_t>(space.per_action[a].size(), 1) - 1).size();
    auto digits = std::to_string(indices[a]);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    if (a > 0) id += '.';
    id += digits;
  }
  return id;
}

SampledModelSet sample_models(const CandidateModelSpace& space, const ProblemSpec& unitary,
                              const SampleOptions& options, const std::optional<ActionModel>& reference) {
  if (options.budget == 0) throw PreconditionError("sampling budget must be > 0");
  const std::size_t n = space.per_action.size();
  for (const auto& cas : space.per_action) {
    if (cas.size() == 0) throw PreconditionError("candidate set of '" + cas.action() + "' is empty");
  }

  SampledModelSet out;
  std::set<std::vector<std::size_t>> seen;
  auto screen = [&](std::vector<std::size_t> indices, bool is_reference) {
    seen.insert(indices);
    ActionModel model = space.model(indices);
    const bool solved = solves_unitary(model, unitary, options.planner);
    if (!solved) return;
    out.models.push_back(SampledModel{model_id(space, indices), std::move(indices), std::move(model),
                                      is_reference, true});
  };

  if (options.include_reference) {
    if (!reference) throw PreconditionError("include_reference requires a reference model");
    std::vector<std::size_t> indices;
    for (std::size_t a = 0; a < n; ++a) {
      const auto idx = space.per_action[a].find(reference->entries()[a]);
      if (!idx) {
        throw PreconditionError("reference entry for '" + space.per_action[a].action() +
                                "' is not in the candidate space");
      }
      indices.push_back(*idx);
    }
    screen(indices, true);
    if (out.models.empty()) throw PreconditionError("reference model does not solve the unitary problem");
  }

  if (space_size(space) <= options.budget) {
    out.exhaustive = true;
    std::vector<std::size_t> idx(n, 0);
    bool done = false;
    while (!done && out.models.size() < options.budget) {
      ++out.draws;
      if (seen.count(idx) == 0) screen(idx, false);
      done = true;
      for (std::size_t k = n; k > 0 && done; --k) {
        if (++idx[k - 1] < space.per_action[k - 1].size()) {
          done = false;
        } else {
          idx[k - 1] = 0;
        }
      }
    }
  } else {
    Rng rng(options.rng_seed);
    const std::size_t max_draws = 100 * options.budget;
    while (out.models.size() < options.budget && out.draws < max_draws) {
      ++out.draws;
      std::vector<std::size_t> idx;
      for (const auto& cas : space.per_action) idx.push_back(static_cast<std::size_t>(rng.below(cas.size())));
      if (seen.count(idx) != 0) continue;
      screen(std::move(idx), false);
    }
  }
  if (out.models.empty()) {
    throw Error("no sampled model solved the unitary problem within " + std::to_string(out.draws) + " draws");
  }
  return out;
}

nlohmann::json entry_to_json(const ActionModelEntry& entry) {
  auto refs = [](const RefSet& set) {
    auto arr = nlohmann::json::array();
    for (const auto& r : set) arr.push_back({{"predicate", r.predicate}, {"binding", r.binding}});
    return arr;
  };
  return {{"pre", refs(entry.pre())}, {"add", refs(entry.add())}, {"del", refs(entry.del())}};
}

ActionModelEntry entry_from_json(const std::string& action, const nlohmann::json& doc) {
  auto refs = [&](const char* key) {
    RefSet set;
    for (const auto& r : doc.at(key)) {
      set.insert(LiftedRef{r.at("predicate").get<std::string>(), r.at("binding").get<std::vector<std::size_t>>()});
    }
    return set;
  };
  return ActionModelEntry(action, refs("pre"), refs("add"), refs("del"));
}

nlohmann::json to_json(const SampledModelSet& set) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["exhaustive"] = set.exhaustive;
  doc["draws"] = set.draws;
  auto& models = doc["models"] = nlohmann::json::array();
  for (const auto& m : set.models) {
    nlohmann::json entry{{"id", m.id}, {"reference", m.reference}, {"unitary_solved", m.unitary_solved}};
    entry["domain"] = m.model.schema().name();
    auto& indices = entry["indices"] = nlohmann::json::object();
    auto& entries = entry["entries"] = nlohmann::json::object();
    for (std::size_t a = 0; a < m.indices.size(); ++a) {
      const auto& e = m.model.entries()[a];
      indices[e.action()] = m.indices[a];
      entries[e.action()] = entry_to_json(e);
    }
    models.push_back(std::move(entry));
  }
  return doc;
}

SampledModelSet sampled_models_from_json(const nlohmann::json& doc, std::shared_ptr<const DomainSchema> schema) {
  SampledModelSet set;
  try {
    set.exhaustive = doc.at("exhaustive").get<bool>();
    set.draws = doc.at("draws").get<std::size_t>();
    for (const auto& m : doc.at("models")) {
      if (m.at("domain").get<std::string>() != schema->name()) throw Error("model manifest is for a different domain");
      std::vector<ActionModelEntry> entries;
      std::vector<std::size_t> indices;
      for (const auto& sig : schema->actions()) {
        entries.push_back(entry_from_json(sig.name, m.at("entries").at(sig.name)));
        indices.push_back(m.at("indices").at(sig.name).get<std::size_t>());
      }
      set.models.push_back(SampledModel{m.at("id").get<std::string>(), std::move(indices),
                                        ActionModel(schema, std::move(entries)),
                                        m.at("reference").get<bool>(), m.at("unitary_solved").get<bool>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model manifest: ") + e.what());
  }
  return set;
}

}  // namespace pdl
