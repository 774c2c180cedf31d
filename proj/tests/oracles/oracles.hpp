#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance checks. Each one is written directly from the definition, with no
// calls into the code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdl/candidates.hpp"
#include "pdl/neural/lstm.hpp"
#include "pdl/rng.hpp"
#include "pdl/rules.hpp"

namespace pdl::oracle {

// Triples over k refs with add ∩ del = ∅ and add ∩ pre = ∅ (and del ⊆ pre when strict).
inline std::size_t candidate_count(std::size_t k, bool strict_del) {
  const std::uint32_t full = std::uint32_t{1} << k;
  std::size_t count = 0;
  for (std::uint32_t pre = 0; pre < full; ++pre) {
    for (std::uint32_t add = 0; add < full; ++add) {
      for (std::uint32_t del = 0; del < full; ++del) {
        if ((add & del) != 0 || (add & pre) != 0) continue;
        if (strict_del && (del & ~pre) != 0) continue;
        ++count;
      }
    }
  }
  return count;
}

// One action over a single parameter of type t and k unary predicates on t.
inline ActionSignature synthetic_action() { return {"a", {"?x"}, {"t"}}; }

inline std::vector<PredicateSchema> synthetic_predicates(std::size_t k) {
  std::vector<PredicateSchema> preds;
  for (std::size_t i = 0; i < k; ++i) preds.push_back({"p" + std::to_string(i), {"t"}});
  return preds;
}

// For each ordered symbol pair, scan every sequence position directly.
inline std::vector<SequentialRule> naive_rules(const SequenceDatabase& db, const std::vector<std::string>& alphabet,
                                               const Rational& min_support, const Rational& min_confidence) {
  std::vector<SequentialRule> out;
  for (const auto& x : alphabet) {
    for (const auto& y : alphabet) {
      std::uint64_t pairs = 0;
      std::uint64_t xs = 0;
      for (const auto& s : db.sequences) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s[i] != x) continue;
          ++xs;
          if (i + 1 < s.size() && s[i + 1] == y) ++pairs;
        }
      }
      if (pairs == 0) continue;
      SequentialRule r{x, y, pairs, xs,
                       Rational(static_cast<std::int64_t>(pairs), static_cast<std::int64_t>(db.size())),
                       Rational(static_cast<std::int64_t>(pairs), static_cast<std::int64_t>(xs))};
      if (r.support >= min_support && r.confidence >= min_confidence) out.push_back(r);
    }
  }
  return out;
}

struct RandomDatabase {
  std::vector<std::string> alphabet;
  SequenceDatabase db;
};

// Up to 50 sequences of up to 30 actions over up to 6 symbols.
inline RandomDatabase random_database(Rng& rng) {
  RandomDatabase out;
  const auto symbols = 1 + rng.below(6);
  for (std::uint64_t i = 0; i < symbols; ++i) out.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
  const auto count = 1 + rng.below(50);
  for (std::uint64_t s = 0; s < count; ++s) {
    std::vector<std::string> seq;
    const auto len = 1 + rng.below(30);
    for (std::uint64_t k = 0; k < len; ++k) seq.push_back(out.alphabet[rng.below(out.alphabet.size())]);
    out.db.sequences.push_back(std::move(seq));
  }
  return out;
}

// Up to 4 types, 6 predicates of arity 0..3 and 5 actions of arity 0..4.
inline DomainSchema random_schema(Rng& rng) {
  std::vector<std::string> types;
  const auto type_count = 1 + rng.below(4);
  for (std::uint64_t i = 0; i < type_count; ++i) types.push_back("t" + std::to_string(i));
  auto pick_types = [&](std::uint64_t arity) {
    std::vector<std::string> out;
    for (std::uint64_t i = 0; i < arity; ++i) out.push_back(types[rng.below(types.size())]);
    return out;
  };
  std::vector<PredicateSchema> preds;
  const auto pred_count = 1 + rng.below(6);
  for (std::uint64_t i = 0; i < pred_count; ++i) preds.push_back({"p" + std::to_string(i), pick_types(rng.below(4))});
  std::vector<ActionSignature> actions;
  const auto action_count = 1 + rng.below(5);
  for (std::uint64_t i = 0; i < action_count; ++i) {
    auto param_types = pick_types(rng.below(5));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < param_types.size(); ++k) names.push_back("?x" + std::to_string(k));
    actions.push_back({"a" + std::to_string(i), names, param_types});
  }
  return DomainSchema("random", types, preds, actions);
}

// Injective assignments of predicate slots to type-matching action parameters.
inline std::size_t count_bindings(const PredicateSchema& pred, const ActionSignature& action) {
  std::size_t count = 0;
  std::vector<bool> used(action.arity(), false);
  auto rec = [&](auto&& self, std::size_t slot) -> void {
    if (slot == pred.arity()) {
      ++count;
      return;
    }
    for (std::size_t p = 0; p < action.arity(); ++p) {
      if (used[p] || action.param_types[p] != pred.param_types[slot]) continue;
      used[p] = true;
      self(self, slot + 1);
      used[p] = false;
    }
  };
  rec(rec, 0);
  return count;
}

// n + Σ over actions and predicates of the binding count.
inline std::size_t input_width(const DomainSchema& schema) {
  std::size_t d = schema.actions().size();
  for (const auto& a : schema.actions()) {
    for (const auto& p : schema.predicates()) d += count_bindings(p, a);
  }
  return d;
}

// Adds one relevant ref the entry does not list yet to its pre or del list,
// keeping the entry valid. Returns the index of the changed action.
inline std::optional<std::size_t> perturb(const CandidateModelSpace& space, ActionModel& model, Rng& rng) {
  const auto n = space.per_action.size();
  const auto start = static_cast<std::size_t>(rng.below(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto a = (start + k) % n;
    const auto& entry = model.entries()[a];
    for (const auto& r : space.per_action[a].relevant()) {
      if (entry.add().count(r) != 0) continue;
      RefSet pre = entry.pre();
      RefSet del = entry.del();
      const bool to_pre = pre.count(r) == 0 && (del.count(r) != 0 || rng.below(2) == 0);
      if (to_pre) {
        pre.insert(r);
      } else if (del.count(r) == 0) {
        del.insert(r);
      } else {
        continue;
      }
      model = model.with_entry(ActionModelEntry(entry.action(), pre, entry.add(), del));
      return a;
    }
  }
  return std::nullopt;
}

inline ActionModel random_model(const CandidateModelSpace& space, Rng& rng) {
  std::vector<std::size_t> idx;
  for (const auto& cas : space.per_action) idx.push_back(static_cast<std::size_t>(rng.below(cas.size())));
  return space.model(idx);
}

// `steps` real rows out of `rows`, random binary inputs and random labels.
inline neural::EncodedSequence random_sequence(Rng& rng, std::size_t d, std::size_t n, std::size_t steps,
                                               std::size_t rows) {
  neural::EncodedSequence seq{neural::Matrix(rows, d), neural::Matrix(rows, n), steps, {}};
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t c = 0; c < d; ++c) seq.inputs.at(t, c) = rng.below(2) == 0 ? 0.0 : 1.0;
    if (t + 1 < steps) {
      const auto label = static_cast<std::size_t>(rng.below(n));
      seq.targets.at(t, label) = 1.0;
      seq.labels.push_back(label);
    }
  }
  return seq;
}

inline neural::Matrix random_mask(Rng& rng, std::size_t rows, std::size_t h) {
  neural::Matrix m(rows, h);
  for (auto& v : m.data) v = rng.below(2) == 0 ? 0.0 : 2.0;
  return m;
}

// Largest |analytic - numeric| / max(|analytic| + |numeric|, floor) over all
// parameters, with central differences of step eps. Entries where both forms
// are exactly zero (weights on zero inputs) are skipped.
inline double max_gradient_error(const neural::LstmParameters& params, const neural::EncodedSequence& seq,
                                 const neural::Matrix* mask, double floor = 0.0, double eps = 1e-5) {
  neural::LstmParameters grad(params.shape());
  neural::loss_and_gradient(params, seq, grad, mask);
  double worst = 0.0;
  neural::LstmParameters probe = params;
  for (std::size_t i = 0; i < params.data().size(); ++i) {
    const double orig = probe.data()[i];
    probe.data()[i] = orig + eps;
    const double up = neural::sequence_loss(neural::lstm_forward(probe, seq, mask), seq);
    probe.data()[i] = orig - eps;
    const double down = neural::sequence_loss(neural::lstm_forward(probe, seq, mask), seq);
    probe.data()[i] = orig;
    const double numeric = (up - down) / (2 * eps);
    const double analytic = grad.data()[i];
    const double scale = std::abs(numeric) + std::abs(analytic);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(numeric - analytic) / std::max(scale, floor));
  }
  return worst;
}

// Actions 0 and 1 alternate; one-hot inputs only.
inline std::vector<neural::EncodedSequence> alternating_corpus(std::size_t count, std::size_t len) {
  std::vector<neural::EncodedSequence> out;
  for (std::size_t s = 0; s < count; ++s) {
    neural::EncodedSequence seq{neural::Matrix(len, 2), neural::Matrix(len, 2), len, {}};
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t a = (s + t) % 2;
      seq.inputs.at(t, a) = 1.0;
      if (t + 1 < len) {
        seq.targets.at(t, 1 - a) = 1.0;
        seq.labels.push_back(1 - a);
      }
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace pdl::oracle
