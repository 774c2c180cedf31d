#include "pdl/evaluator.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace pdl {

namespace {

std::size_t symmetric_difference(const RefSet& a, const RefSet& b) {
  std::size_t n = 0;
  for (const auto& r : a) n += b.count(r) == 0;
  for (const auto& r : b) n += a.count(r) == 0;
  return n;
}

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

ReconstructionError reconstruction_error(const ActionModel& learned, const ActionModel& reference) {
  if (!(learned.schema() == reference.schema())) throw SchemaError("models are over different schemas");
  const auto& schema = reference.schema();
  ReconstructionError out{Rational(0), {}};
  const auto n = static_cast<std::int64_t>(schema.actions().size());
  for (std::size_t a = 0; a < schema.actions().size(); ++a) {
    const auto& sig = schema.actions()[a];
    const auto& l = learned.entries()[a];
    const auto& r = reference.entries()[a];
    DiffCounts d{sig.name, symmetric_difference(l.pre(), r.pre()), symmetric_difference(l.add(), r.add()),
                 symmetric_difference(l.del(), r.del()), relevant_predicates(sig, schema.predicates()).size()};
    if (d.rel_cons > 0) {
      out.value += Rational(static_cast<std::int64_t>(d.total()), static_cast<std::int64_t>(d.rel_cons));
    }
    out.per_action.push_back(d);
  }
  if (n > 0) out.value /= n;
  return out;
}

std::string reduction_percent(std::size_t initial, std::size_t final) {
  if (initial == 0) return format_fixed(Rational(0), 2);
  return format_percent(Rational(static_cast<std::int64_t>(initial - final), static_cast<std::int64_t>(initial)));
}

nlohmann::json to_json(const ReconstructionError& error) {
  nlohmann::json doc;
  doc["value"] = rational_text(error.value);
  doc["percent"] = format_percent(error.value);
  auto& rows = doc["per_action"] = nlohmann::json::array();
  for (const auto& d : error.per_action) {
    rows.push_back({{"action", d.action},
                    {"diff_pre", d.diff_pre},
                    {"diff_add", d.diff_add},
                    {"diff_del", d.diff_del},
                    {"rel_cons", d.rel_cons}});
  }
  return doc;
}

namespace {

std::vector<std::size_t> ranking(const std::vector<neural::ModelScore>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return neural::ranks_before(scores[a], scores[b]); });
  return order;
}

std::string render_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "domain " << r.domain << "  seed " << r.seed << "  traces " << r.trace_count << "\n\n";

  out << "Candidate pruning" << (r.mining_skipped ? " (skipped: no mining)" : "") << "\n";
  out << std::left << std::setw(20) << "action" << std::right << std::setw(10) << "initial" << std::setw(10)
      << "final" << std::setw(14) << "reduction %" << "\n";
  std::size_t init_total = 0, final_total = 0;
  for (const auto& row : r.pruning) {
    out << std::left << std::setw(20) << row.action << std::right << std::setw(10) << row.initial << std::setw(10)
        << row.final << std::setw(14) << reduction_percent(row.initial, row.final) << "\n";
    init_total += row.initial;
    final_total += row.final;
  }
  out << std::left << std::setw(20) << "total" << std::right << std::setw(10) << init_total << std::setw(10)
      << final_total << std::setw(14) << reduction_percent(init_total, final_total) << "\n";
  out << "model space " << r.initial_space << " -> " << r.final_space << "\n";
  out << "frequent pairs:";
  if (r.frequent_pairs.empty()) out << " none";
  for (const auto& [a, b] : r.frequent_pairs) out << " " << a << "->" << b;
  out << "\n\n";

  out << "Sampled models: " << r.scores.size() << " (draws " << r.draws << (r.exhaustive ? ", exhaustive" : "")
      << ")\n";
  out << "training-encoding accuracy %: " << format_percent(r.training_encoding_accuracy) << "\n";
  out << "mean loss per epoch:";
  for (double l : r.mean_loss_history) {
    std::ostringstream v;
    v << std::fixed << std::setprecision(6) << l;
    out << " " << v.str();
  }
  out << "\n";
  out << std::left << std::setw(4) << "" << std::setw(24) << "model" << std::right << std::setw(10) << "acc %"
      << std::setw(10) << "replay %" << std::setw(6) << "pre" << std::setw(7) << "total" << "\n";
  for (auto i : ranking(r.scores)) {
    const auto& s = r.scores[i];
    std::string mark = i == r.selected ? "*" : "";
    if (s.reference) mark += "R";
    out << std::left << std::setw(4) << mark << std::setw(24) << s.id << std::right << std::setw(10)
        << format_percent(s.mean_accuracy) << std::setw(10) << format_percent(s.replay_agreement) << std::setw(6)
        << s.pre_size << std::setw(7) << s.total_predicates << "\n";
  }
  out << "(* selected, R reference)\n\n";

  const auto& sel = r.scores.at(r.selected);
  out << "Selected model " << sel.id << (sel.reference ? " (reference)" : "") << "\n";
  out << "accuracy rate % " << format_percent(sel.mean_accuracy) << "\n";
  if (r.error) {
    out << "reconstruction error E % " << format_percent(r.error->value) << "\n";
    out << std::left << std::setw(20) << "action" << std::right << std::setw(8) << "dPre" << std::setw(8) << "dAdd"
        << std::setw(8) << "dDel" << std::setw(10) << "relCons" << "\n";
    for (const auto& d : r.error->per_action) {
      out << std::left << std::setw(20) << d.action << std::right << std::setw(8) << d.diff_pre << std::setw(8)
          << d.diff_add << std::setw(8) << d.diff_del << std::setw(10) << d.rel_cons << "\n";
    }
  } else {
    out << "reconstruction error E: n/a (no reference model)\n";
  }
  out << "\n" << r.selected_model_text;
  return out.str();
}

nlohmann::json render_json(const EvaluationReport& r) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["domain"] = r.domain;
  doc["seed"] = r.seed;
  doc["trace_count"] = r.trace_count;
  doc["mining_skipped"] = r.mining_skipped;
  auto& pairs = doc["frequent_pairs"] = nlohmann::json::array();
  for (const auto& [a, b] : r.frequent_pairs) pairs.push_back({a, b});
  auto& pruning = doc["pruning"] = nlohmann::json::array();
  for (const auto& row : r.pruning) {
    pruning.push_back({{"action", row.action},
                       {"initial", row.initial},
                       {"final", row.final},
                       {"reduction_percent", reduction_percent(row.initial, row.final)}});
  }
  doc["model_space"] = {{"initial", r.initial_space.str()}, {"final", r.final_space.str()}};
  doc["sampling"] = {{"models", r.scores.size()}, {"draws", r.draws}, {"exhaustive", r.exhaustive}};
  doc["training"] = {{"mean_loss_history", r.mean_loss_history},
                     {"training_encoding_accuracy", rational_text(r.training_encoding_accuracy)}};
  auto& scores = doc["scores"] = nlohmann::json::array();
  for (auto i : ranking(r.scores)) {
    const auto& s = r.scores[i];
    auto folds = nlohmann::json::array();
    for (const auto& a : s.fold_accuracy) folds.push_back(rational_text(a));
    scores.push_back({{"id", s.id},
                      {"reference", s.reference},
                      {"selected", i == r.selected},
                      {"fold_accuracy", folds},
                      {"mean_accuracy", rational_text(s.mean_accuracy)},
                      {"mean_accuracy_percent", format_percent(s.mean_accuracy)},
                      {"replay_agreement", rational_text(s.replay_agreement)},
                      {"pre_size", s.pre_size},
                      {"total_predicates", s.total_predicates}});
  }
  const auto& sel = r.scores.at(r.selected);
  doc["selected"] = {{"id", sel.id},
                     {"reference", sel.reference},
                     {"accuracy_percent", format_percent(sel.mean_accuracy)},
                     {"model", r.selected_model_text}};
  doc["reconstruction_error"] = r.error ? to_json(*r.error) : nlohmann::json(nullptr);
  return doc;
}

}  // namespace

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  if (report.scores.empty()) throw PreconditionError("report has no scored models");
  if (format == ReportFormat::Text) return render_text(report);
  return render_json(report).dump(2) + "\n";
}

}  // namespace pdl
