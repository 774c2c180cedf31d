#include "pdl/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <optional>

#include "pdl/pddl_io.hpp"
#include "pdl/pruner.hpp"
#include "pdl/rng.hpp"
#include "pdl/trace_gen.hpp"

namespace pdl {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::Config: return "config";
    case Phase::Generate: return "generate";
    case Phase::Enumerate: return "enumerate";
    case Phase::Mine: return "mine";
    case Phase::Prune: return "prune";
    case Phase::Sample: return "sample";
    case Phase::Train: return "train";
    case Phase::Select: return "select";
    case Phase::Evaluate: return "evaluate";
  }
  return "unknown";
}

int exit_code(Phase phase) { return 2 + static_cast<int>(phase); }

namespace {

std::string describe(Phase phase, const std::string& cause, const std::vector<std::string>& artifacts) {
  std::string msg = "phase " + to_string(phase) + " failed: " + cause;
  if (!artifacts.empty()) {
    msg += "\ncompleted artifacts:";
    for (const auto& a : artifacts) msg += "\n  " + a;
  }
  return msg;
}

}  // namespace

PipelineError::PipelineError(Phase phase, const std::string& cause, std::vector<std::string> artifacts)
    : Error(describe(phase, cause, artifacts)), phase_(phase), artifacts_(std::move(artifacts)) {}

std::uint64_t generation_seed(std::uint64_t seed) { return derive_seed(seed, 1); }
std::uint64_t sampling_seed(std::uint64_t seed) { return derive_seed(seed, 2); }
std::uint64_t training_seed(std::uint64_t seed) { return derive_seed(seed, 3); }

namespace {

bool has_effects(const ActionModel& model) {
  for (const auto& e : model.entries()) {
    if (e.total() > 0) return true;
  }
  return false;
}

class Runner {
 public:
  explicit Runner(std::string run_dir) : run_dir_(std::move(run_dir)) {}

  template <typename Fn>
  auto phase(Phase p, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(p, start);
      } else {
        auto out = fn();
        record(p, start);
        return out;
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(p, e.what(), artifacts);
    }
  }

  void write(const std::string& name, std::string_view contents) {
    const auto path = (std::filesystem::path(run_dir_) / name).string();
    write_file(path, contents);
    artifacts.push_back(path);
  }

  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> timings;

 private:
  void record(Phase p, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    timings.emplace_back(to_string(p), dt.count());
  }

  std::string run_dir_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const std::string run_dir =
      (std::filesystem::path(cfg.resolve(cfg.run_root)) / (cfg.hash() + "-s" + std::to_string(cfg.seed))).string();
  Runner run(run_dir);

  struct Inputs {
    ParsedDomain domain;
    GenerationSpec gen;
    ProblemSpec unitary;
  };
  auto inputs = run.phase(Phase::Config, [&] {
    std::filesystem::create_directories(run_dir);
    auto domain = parse_domain(read_file(cfg.resolve(cfg.domain)));
    auto gen = parse_generation_spec(read_file(cfg.resolve(cfg.generator)), *domain.schema);
    auto unitary = parse_problem(read_file(cfg.resolve(cfg.unitary)), *domain.schema);
    run.write("config.txt", cfg.canonical() + "seed=" + std::to_string(cfg.seed) + "\n");
    return Inputs{std::move(domain), std::move(gen), std::move(unitary)};
  });
  const auto& schema = inputs.domain.schema;
  const auto& reference = inputs.domain.reference;

  auto traces = run.phase(Phase::Generate, [&] {
    auto spec = inputs.gen;
    spec.problem_count = cfg.traces;
    spec.rng_seed = generation_seed(cfg.seed);
    auto out = generate_traces(spec, reference, cfg.planner);
    run.write("traces.traces", serialize_traces(schema->name(), out));
    return out;
  });

  auto space = run.phase(Phase::Enumerate, [&] {
    auto out = build_space(schema, cfg.candidates);
    run.write("candidates.cas", serialize_space(out));
    return out;
  });

  EvaluationReport report;
  report.domain = schema->name();
  report.seed = cfg.seed;
  report.trace_count = traces.size();
  report.mining_skipped = cfg.skip_mining;

  if (!cfg.skip_mining) {
    report.frequent_pairs = run.phase(Phase::Mine, [&] {
      const auto db = to_sequence_database(traces);
      std::vector<SequenceDatabase> schedule;
      for (auto count : doubling_schedule(db.size(), cfg.schedule_start)) schedule.push_back(db.prefix(count));
      const auto stability = stability_scan(schedule, cfg.min_support, cfg.min_confidence, cfg.tolerance);
      run.write("rules.json", to_json(stability).dump(2) + "\n");
      run.write("rules.txt", render_rules_table(stability));
      return frequent_pairs(stability);
    });
  }

  auto pruned = run.phase(Phase::Prune, [&] {
    PruneResult result{space, {}, {}, {}};
    if (cfg.skip_mining) {
      for (const auto& cas : space.per_action) {
        result.initial_counts.push_back(cas.size());
        result.final_counts.push_back(cas.size());
      }
    } else {
      result = prune_candidates(space, report.frequent_pairs);
    }
    run.write("pruned.cas", serialize_space(result.space));
    return result;
  });
  for (std::size_t a = 0; a < schema->actions().size(); ++a) {
    report.pruning.push_back({schema->actions()[a].name, pruned.initial_counts[a], pruned.final_counts[a]});
  }
  report.initial_space = space_size(space);
  report.final_space = space_size(pruned.space);

  auto sampled = run.phase(Phase::Sample, [&] {
    SampleOptions opts;
    opts.budget = cfg.budget;
    opts.rng_seed = sampling_seed(cfg.seed);
    opts.include_reference = cfg.include_reference;
    opts.planner = cfg.planner;
    auto out = sample_models(pruned.space, inputs.unitary, opts, reference);
    run.write("models.json", to_json(out).dump(2) + "\n");
    return out;
  });
  report.draws = sampled.draws;
  report.exhaustive = sampled.exhaustive;

  const auto layout = neural::build_layout(*schema);
  auto cv = run.phase(Phase::Train, [&] {
    auto train_cfg = cfg.train;
    train_cfg.rng_seed = training_seed(cfg.seed);
    auto out = neural::cross_validate(traces, layout, train_cfg);
    run.write("params.bin", neural::serialize_parameters(out));
    return out;
  });
  {
    const std::size_t epochs = cv.folds.front().loss_history.size();
    report.mean_loss_history.assign(epochs, 0.0);
    Rational acc(0);
    for (const auto& f : cv.folds) {
      for (std::size_t e = 0; e < epochs; ++e) report.mean_loss_history[e] += f.loss_history[e];
      acc += f.training_encoding.value();
    }
    for (auto& l : report.mean_loss_history) l /= static_cast<double>(cv.folds.size());
    report.training_encoding_accuracy = acc / static_cast<std::int64_t>(cv.folds.size());
  }

  run.phase(Phase::Select, [&] {
    report.scores = neural::score_models(cv, traces, sampled);
    report.selected = neural::select_best(report.scores);
  });

  run.phase(Phase::Evaluate, [&] {
    const auto& chosen = sampled.models.at(report.selected).model;
    report.selected_model_text = serialize_model(chosen);
    if (has_effects(reference)) report.error = reconstruction_error(chosen, reference);
    run.write("selected.pddl", report.selected_model_text);
    run.write("report.txt", render_report(report, ReportFormat::Text));
    run.write("report.json", render_report(report, ReportFormat::Json));
  });

  nlohmann::json timing = nlohmann::json::object();
  for (const auto& [name, sec] : run.timings) timing[name] = sec;
  write_file((std::filesystem::path(run_dir) / "timings.json").string(), timing.dump(2) + "\n");

  return PipelineResult{run_dir, std::move(report), std::move(run.artifacts), std::move(run.timings)};
}

}  // namespace pdl
