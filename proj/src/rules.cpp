#include "pdl/rules.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "pdl/error.hpp"

namespace pdl {

namespace {

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

SequenceDatabase SequenceDatabase::prefix(std::size_t count) const {
  SequenceDatabase out;
  out.sequences.assign(sequences.begin(),
                       sequences.begin() + static_cast<std::ptrdiff_t>(std::min(count, sequences.size())));
  return out;
}

SequenceDatabase to_sequence_database(std::span<const PlanTrace> traces) {
  SequenceDatabase db;
  for (const auto& t : traces) {
    std::vector<std::string> seq;
    for (const auto& a : t.actions()) seq.push_back(a.action);
    db.sequences.push_back(std::move(seq));
  }
  return db;
}

void RuleCounts::add(const std::vector<std::string>& sequence) {
  ++sequences;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    ++items[sequence[i]];
    if (i + 1 < sequence.size()) ++pairs[{sequence[i], sequence[i + 1]}];
  }
}

RuleCounts& RuleCounts::merge(const RuleCounts& other) {
  sequences += other.sequences;
  for (const auto& [k, v] : other.items) items[k] += v;
  for (const auto& [k, v] : other.pairs) pairs[k] += v;
  return *this;
}

std::vector<SequentialRule> RuleCounts::rules(const Rational& min_support,
                                              const Rational& min_confidence) const {
  if (sequences == 0) throw PreconditionError("cannot mine rules from an empty sequence database");
  std::vector<SequentialRule> out;
  for (const auto& [pair, count] : pairs) {
    SequentialRule r;
    r.antecedent = pair.first;
    r.consequent = pair.second;
    r.pair_count = count;
    r.antecedent_count = items.at(pair.first);
    r.support = Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(sequences));
    r.confidence = Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(r.antecedent_count));
    if (r.support >= min_support && r.confidence >= min_confidence) out.push_back(std::move(r));
  }
  return out;
}

RuleCounts count_rules(const SequenceDatabase& db) {
  RuleCounts counts;
  for (const auto& s : db.sequences) counts.add(s);
  return counts;
}

std::vector<SequentialRule> mine_rules(const SequenceDatabase& db, const Rational& min_support,
                                       const Rational& min_confidence) {
  if (min_support.numerator() < 0 || min_confidence.numerator() < 0) throw PreconditionError("thresholds must be non-negative");
  return count_rules(db).rules(min_support, min_confidence);
}

StabilityReport stability_scan(std::span<const SequenceDatabase> schedule, const Rational& min_support,
                               const Rational& min_confidence, const Rational& tolerance) {
  if (schedule.empty()) throw PreconditionError("stability scan needs at least one database");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const auto& prev = schedule[i - 1].sequences;
    const auto& next = schedule[i].sequences;
    if (next.size() <= prev.size() || !std::equal(prev.begin(), prev.end(), next.begin())) {
      throw PreconditionError("schedule databases must be strictly growing nested prefixes");
    }
  }

  StabilityReport report;
  report.min_support = min_support;
  report.min_confidence = min_confidence;
  report.tolerance = tolerance;
  std::vector<RuleCounts> counts;
  std::set<ActionPair> seen;
  for (const auto& db : schedule) {
    report.schedule.push_back(db.size());
    counts.push_back(count_rules(db));
    for (const auto& r : counts.back().rules(min_support, min_confidence)) {
      seen.emplace(r.antecedent, r.consequent);
    }
  }

  for (const auto& [x, y] : seen) {
    RuleStability rs{x, y, {}, true};
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      const auto& c = counts[i];
      StabilityPoint p;
      p.trace_count = report.schedule[i];
      auto pit = c.pairs.find({x, y});
      p.pair_count = pit == c.pairs.end() ? 0 : pit->second;
      auto iit = c.items.find(x);
      p.antecedent_count = iit == c.items.end() ? 0 : iit->second;
      p.support = Rational(static_cast<std::int64_t>(p.pair_count), static_cast<std::int64_t>(c.sequences));
      p.confidence = p.antecedent_count == 0
                         ? Rational(0)
                         : Rational(static_cast<std::int64_t>(p.pair_count),
                                    static_cast<std::int64_t>(p.antecedent_count));
      p.present = p.pair_count > 0 && p.support >= min_support && p.confidence >= min_confidence;
      if (!p.present) rs.stable = false;
      if (!rs.series.empty()) {
        const auto& q = rs.series.back();
        if (abs_diff(p.support, q.support) > tolerance || abs_diff(p.confidence, q.confidence) > tolerance) {
          rs.stable = false;
        }
      }
      rs.series.push_back(p);
    }
    report.rules.push_back(std::move(rs));
  }
  return report;
}

std::vector<ActionPair> frequent_pairs(const StabilityReport& report) {
  std::vector<const RuleStability*> stable;
  for (const auto& r : report.rules) {
    if (r.stable) stable.push_back(&r);
  }
  std::sort(stable.begin(), stable.end(), [](const RuleStability* a, const RuleStability* b) {
    const auto& pa = a->series.back();
    const auto& pb = b->series.back();
    if (pa.confidence != pb.confidence) return pa.confidence > pb.confidence;
    if (pa.support != pb.support) return pa.support > pb.support;
    return std::tie(a->antecedent, a->consequent) < std::tie(b->antecedent, b->consequent);
  });
  std::vector<ActionPair> out;
  for (const auto* r : stable) out.emplace_back(r->antecedent, r->consequent);
  return out;
}

nlohmann::json to_json(const StabilityReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["schedule"] = report.schedule;
  doc["thresholds"] = {{"min_support", rational_text(report.min_support)},
                       {"min_confidence", rational_text(report.min_confidence)},
                       {"tolerance", rational_text(report.tolerance)}};
  auto& rules = doc["rules"] = nlohmann::json::array();
  for (const auto& r : report.rules) {
    nlohmann::json entry{{"antecedent", r.antecedent}, {"consequent", r.consequent}, {"stable", r.stable}};
    auto& series = entry["series"] = nlohmann::json::array();
    for (const auto& p : r.series) {
      series.push_back({{"traces", p.trace_count},
                        {"pair_count", p.pair_count},
                        {"antecedent_count", p.antecedent_count},
                        {"support", rational_text(p.support)},
                        {"confidence", rational_text(p.confidence)},
                        {"present", p.present}});
    }
    rules.push_back(std::move(entry));
  }
  auto& pairs = doc["frequent_pairs"] = nlohmann::json::array();
  for (const auto& [x, y] : frequent_pairs(report)) pairs.push_back({x, y});
  return doc;
}

std::vector<ActionPair> frequent_pairs_from_json(const nlohmann::json& doc) {
  std::vector<ActionPair> out;
  if (!doc.contains("frequent_pairs") || !doc["frequent_pairs"].is_array()) {
    throw Error("rules report has no frequent_pairs array");
  }
  for (const auto& p : doc["frequent_pairs"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
      throw Error("malformed frequent pair in rules report");
    }
    out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return out;
}

std::string render_rules_table(const StabilityReport& report) {
  std::ostringstream out;
  out << "min support " << format_fixed(report.min_support, 3) << ", min confidence "
      << format_fixed(report.min_confidence, 3) << ", tolerance " << format_fixed(report.tolerance, 3)
      << "\n";
  out << std::left << std::setw(28) << "rule";
  for (auto n : report.schedule) out << std::setw(16) << ("T=" + std::to_string(n));
  out << "stable\n";
  for (const auto& r : report.rules) {
    out << std::setw(28) << (r.antecedent + " -> " + r.consequent);
    for (const auto& p : r.series) {
      std::string cell = format_fixed(p.support, 2) + "/" + format_fixed(p.confidence, 2);
      if (!p.present) cell += "*";
      out << std::setw(16) << cell;
    }
    out << (r.stable ? "yes" : "no") << "\n";
  }
  out << "cells are support/confidence; * marks a point below threshold\n";
  return out.str();
}

}  // namespace pdl
