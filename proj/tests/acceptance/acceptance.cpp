// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include "oracles/oracles.hpp"
#include "pdl/candidates.hpp"
#include "pdl/config.hpp"
#include "pdl/evaluator.hpp"
#include "pdl/neural/encoding.hpp"
#include "pdl/neural/lstm.hpp"
#include "pdl/neural/train.hpp"
#include "pdl/pipeline.hpp"
#include "pdl/pruner.hpp"
#include "pdl/rules.hpp"
#include "pdl/trace_gen.hpp"
#include "unit/support.hpp"

namespace fs = std::filesystem;
using namespace pdl;

namespace {

// Throws with a message when cond is false.
void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

PipelineConfig load_config(const std::string& name, const fs::path& run_root) {
  const auto path = test::source_path("configs/" + name + ".conf");
  auto cfg = parse_config(read_file(path), fs::path(path).parent_path().string());
  cfg.run_root = run_root.string();
  return cfg;
}

fs::path scratch(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("pdl-acceptance-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const neural::ModelScore& reference_score(const EvaluationReport& report) {
  for (const auto& s : report.scores) {
    if (s.reference) return s;
  }
  throw std::runtime_error("reference model missing from scores");
}

void pipeline_selects_reference() {
  const auto result = run_pipeline(load_config("gripper", scratch("c1")));
  const auto& r = result.report;
  require(r.error.has_value(), "no reconstruction error computed");
  require(r.error->value == Rational(0),
          "selected " + r.scores.at(r.selected).id + " with E = " + format_fixed(r.error->value, 4));
}

void candidate_counts() {
  for (std::size_t k = 0; k <= 6; ++k) {
    const auto action = oracle::synthetic_action();
    const auto rel = relevant_predicates(action, oracle::synthetic_predicates(k));
    for (bool strict : {false, true}) {
      CandidateOptions opts;
      opts.strict_del = strict;
      const auto n = enumerate_candidates(action, rel, opts).size();
      require(n == oracle::candidate_count(k, strict),
              "k=" + std::to_string(k) + " strict=" + std::to_string(strict) + " gave " + std::to_string(n));
    }
  }
  const auto one = enumerate_candidates(oracle::synthetic_action(),
                                        relevant_predicates(oracle::synthetic_action(), oracle::synthetic_predicates(1)));
  require(one.size() == 5, "k=1 gave " + std::to_string(one.size()));
}

void reference_survives_pruning() {
  for (const auto& name : test::shipped_domains()) {
    const auto cfg = load_config(name, scratch("c3"));
    const auto dom = test::load_domain(name);
    auto spec = parse_generation_spec(read_file(cfg.resolve(cfg.generator)), *dom.schema);
    spec.problem_count = cfg.traces;
    spec.rng_seed = generation_seed(cfg.seed);
    const auto db = to_sequence_database(generate_traces(spec, dom.reference, cfg.planner));
    std::vector<SequenceDatabase> schedule;
    for (auto n : doubling_schedule(db.size(), cfg.schedule_start)) schedule.push_back(db.prefix(n));
    const auto pairs = frequent_pairs(stability_scan(schedule, cfg.min_support, cfg.min_confidence, cfg.tolerance));
    const auto space = build_space(dom.schema, cfg.candidates);
    const auto pruned = prune_candidates(space, pairs);
    for (std::size_t a = 0; a < space.per_action.size(); ++a) {
      const auto& entry = dom.reference.entries()[a];
      const auto& action = dom.schema->actions()[a].name;
      require(space.per_action[a].contains(entry), name + ": reference " + action + " not enumerated");
      require(pruned.space.per_action[a].contains(entry), name + ": reference " + action + " pruned");
    }
  }
}

void miner_matches_oracle() {
  Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    const auto [alphabet, db] = oracle::random_database(rng);
    const Rational sup(static_cast<std::int64_t>(rng.below(5)), 4);
    const Rational conf(static_cast<std::int64_t>(rng.below(5)), 4);
    require(mine_rules(db, sup, conf) == oracle::naive_rules(db, alphabet, sup, conf),
            "mismatch on database " + std::to_string(round));
  }
}

void gradient_check() {
  const neural::LstmShape shape{6, 4, 2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto params = neural::LstmParameters::initialized(shape, seed + 100);
    const auto seq = oracle::random_sequence(rng, shape.d, shape.n, 4, 5);
    require(seq.target_steps() == 3, "sequence should have 3 targets");
    const double err = oracle::max_gradient_error(params, seq, nullptr);
    require(err < 1e-4, "seed " + std::to_string(seed) + " relative error " + std::to_string(err));
  }
}

void padding_neutral() {
  const neural::LstmShape shape{6, 4, 3};
  Rng rng(8);
  const auto params = neural::LstmParameters::initialized(shape, 1);
  const auto seq = oracle::random_sequence(rng, shape.d, shape.n, 4, 9);
  auto noisy = seq;
  for (std::size_t t = seq.steps; t < seq.inputs.rows; ++t) {
    for (std::size_t c = 0; c < shape.d; ++c) noisy.inputs.at(t, c) = rng.uniform(-5.0, 5.0);
    for (std::size_t c = 0; c < shape.n; ++c) noisy.targets.at(t, c) = rng.uniform();
  }
  neural::LstmParameters g1(shape);
  neural::LstmParameters g2(shape);
  require(neural::loss_and_gradient(params, seq, g1) == neural::loss_and_gradient(params, noisy, g2), "loss differs");
  require(g1.data() == g2.data(), "gradient differs");
  require(neural::lstm_forward(params, seq).probs == neural::lstm_forward(params, noisy).probs, "outputs differ");
  require(neural::accuracy(params, seq).value() == neural::accuracy(params, noisy).value(), "accuracy differs");
}

void dimension_law() {
  Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    const auto schema = oracle::random_schema(rng);
    const auto layout = neural::build_layout(schema);
    require(layout.n == schema.actions().size(), "n mismatch on schema " + std::to_string(round));
    require(layout.d == oracle::input_width(schema), "d mismatch on schema " + std::to_string(round));
  }
}

void error_properties() {
  Rng rng(10);
  std::vector<CandidateModelSpace> spaces;
  for (const auto& name : test::shipped_domains()) spaces.push_back(build_space(test::load_domain(name).schema));
  for (int round = 0; round < 100; ++round) {
    const auto tag = "pair " + std::to_string(round);
    const auto& space = spaces[static_cast<std::size_t>(round) % spaces.size()];
    const auto m = oracle::random_model(space, rng);
    const auto other = oracle::random_model(space, rng);
    require(reconstruction_error(m, m).value == Rational(0), tag + ": E(m, m) != 0");
    const auto forward = reconstruction_error(m, other).value;
    require(forward == reconstruction_error(other, m).value, tag + ": not symmetric");
    require((forward == Rational(0)) == (m == other), tag + ": zero does not mean equal");
    auto changed = m;
    const auto a = oracle::perturb(space, changed, rng);
    require(a.has_value(), tag + ": no perturbation possible");
    const Rational step(1, static_cast<std::int64_t>(space.per_action.size() * space.per_action[*a].relevant().size()));
    require(reconstruction_error(changed, m).value == step, tag + ": single edit is not one step");
    require(abs_diff(reconstruction_error(changed, other).value, forward) == step,
            tag + ": single edit moves E(., other) by more than one step");
  }
}

void training_sanity() {
  const auto data = oracle::alternating_corpus(40, 8);
  neural::TrainConfig cfg;
  cfg.hidden_units = 16;
  const auto result = neural::train(data, neural::LstmShape{2, 16, 2}, cfg, 3);
  require(result.loss_history.size() == 10, "expected 10 epochs");
  require(result.loss_history.back() < result.loss_history.front(), "epoch-10 loss not below epoch-1 loss");
  neural::Accuracy acc;
  for (const auto& s : data) acc += neural::accuracy(result.params, s);
  require(to_double(acc.value()) >= 0.95, "accuracy " + format_fixed(acc.value(), 4));
}

void reference_scores_highest() {
  for (const auto& name : test::shipped_domains()) {
    const auto result = run_pipeline(load_config(name, scratch("c10")));
    const auto& ref = reference_score(result.report);
    for (const auto& s : result.report.scores) {
      require(ref.mean_accuracy >= s.mean_accuracy,
              name + ": " + s.id + " scores " + format_percent(s.mean_accuracy) + " over reference " +
                  format_percent(ref.mean_accuracy));
    }
  }
}

void runs_are_reproducible() {
  const auto a = run_pipeline(load_config("gripper", scratch("c11a")));
  const auto b = run_pipeline(load_config("gripper", scratch("c11b")));
  for (const auto* file : {"report.txt", "report.json", "params.bin"}) {
    require(read_file((fs::path(a.run_dir) / file).string()) == read_file((fs::path(b.run_dir) / file).string()),
            std::string(file) + " differs between runs");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"gripper pipeline selects a model with zero reconstruction error", pipeline_selects_reference},
      {"candidate counts match brute force for k = 0..6, and k = 1 gives 5", candidate_counts},
      {"reference models survive enumeration and pruning on every shipped domain", reference_survives_pruning},
      {"rule miner matches a naive counter on 200 random databases", miner_matches_oracle},
      {"LSTM gradient matches central differences below 1e-4 on 10 seeds", gradient_check},
      {"padding rows leave loss, gradient and outputs bit-identical", padding_neutral},
      {"input width law holds on 50 random schemas", dimension_law},
      {"reconstruction error is zero on self, symmetric and steps by one unit per edit", error_properties},
      {"LSTM learns an alternating corpus", training_sanity},
      {"reference model scores at least as high as every sampled model on every domain", reference_scores_highest},
      {"identical configs give byte-identical reports and parameters", runs_are_reproducible},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = true;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.2fs", dt.count());
    std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << ": " << criteria[i].first << " [" << seconds << "]";
    if (!ok) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    failures += ok ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
