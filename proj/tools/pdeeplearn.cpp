// Command-line front end: one subcommand per phase plus the full pipeline.

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pdl/candidates.hpp"
#include "pdl/config.hpp"
#include "pdl/evaluator.hpp"
#include "pdl/neural/train.hpp"
#include "pdl/pddl_io.hpp"
#include "pdl/pipeline.hpp"
#include "pdl/pruner.hpp"
#include "pdl/rules.hpp"
#include "pdl/trace_gen.hpp"

namespace {

using pdl::Phase;

struct Options {
  std::string domain;
  std::string generator;
  std::string traces;
  std::string candidates;
  std::string rules;
  std::string unitary;
  std::string models;
  std::string params;
  std::string out;
  std::string config;
  std::string run_root;
  std::string strategy = "breadth-first";
  std::size_t max_expansions = 100000;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> seed_override;
  bool strict_del = false;
  std::size_t max_rel = 16;
  std::string min_support = "0.4";
  std::string min_confidence = "0.6";
  std::string tolerance = "0.1";
  std::size_t schedule = 10;
  std::size_t budget = 50;
  bool include_reference = false;
  bool skip_mining = false;
  pdl::neural::TrainConfig train;
};

pdl::PlannerConfig planner(const Options& o) {
  pdl::PlannerConfig cfg;
  cfg.strategy = pdl::parse_strategy(o.strategy);
  cfg.max_expansions = o.max_expansions;
  return cfg;
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    pdl::write_file(path, contents);
  }
}

pdl::ParsedDomain load_domain(const Options& o) { return pdl::parse_domain(pdl::read_file(o.domain)); }

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(pdl::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw pdl::Error(path + ": " + e.what());
  }
}

void cmd_generate(const Options& o) {
  const auto domain = load_domain(o);
  auto spec = pdl::parse_generation_spec(pdl::read_file(o.generator), *domain.schema);
  spec.problem_count = o.count;
  spec.rng_seed = o.seed;
  const auto traces = pdl::generate_traces(spec, domain.reference, planner(o));
  emit(o.out, pdl::serialize_traces(domain.schema->name(), traces));
}

void cmd_enumerate(const Options& o) {
  const auto domain = load_domain(o);
  pdl::CandidateOptions opts;
  opts.strict_del = o.strict_del;
  opts.max_rel = o.max_rel;
  const auto space = pdl::build_space(domain.schema, opts);
  for (const auto& cas : space.per_action) {
    std::cerr << cas.action() << ": " << cas.relevant().size() << " relevant, " << cas.size() << " candidates\n";
  }
  std::cerr << "total " << space.total_candidates() << ", |M| = " << pdl::space_size(space) << "\n";
  emit(o.out, pdl::serialize_space(space));
}

void cmd_mine(const Options& o) {
  const auto domain = load_domain(o);
  const auto traces = pdl::parse_traces(pdl::read_file(o.traces), *domain.schema);
  const auto db = pdl::to_sequence_database(traces);
  std::vector<pdl::SequenceDatabase> schedule;
  for (auto n : pdl::doubling_schedule(db.size(), o.schedule)) schedule.push_back(db.prefix(n));
  const auto report = pdl::stability_scan(schedule, pdl::parse_rational(o.min_support),
                                          pdl::parse_rational(o.min_confidence), pdl::parse_rational(o.tolerance));
  std::cout << pdl::render_rules_table(report);
  if (!o.out.empty()) pdl::write_file(o.out, pdl::to_json(report).dump(2) + "\n");
}

void cmd_prune(const Options& o) {
  const auto domain = load_domain(o);
  const auto space = pdl::parse_space(pdl::read_file(o.candidates), domain.schema);
  const auto pairs = pdl::frequent_pairs_from_json(load_json(o.rules));
  const auto result = pdl::prune_candidates(space, pairs);
  for (std::size_t a = 0; a < space.per_action.size(); ++a) {
    std::cerr << space.per_action[a].action() << ": " << result.initial_counts[a] << " -> " << result.final_counts[a]
              << " (" << pdl::reduction_percent(result.initial_counts[a], result.final_counts[a]) << "%)\n";
  }
  emit(o.out, pdl::serialize_space(result.space));
}

void cmd_sample(const Options& o) {
  const auto domain = load_domain(o);
  const auto space = pdl::parse_space(pdl::read_file(o.candidates), domain.schema);
  const auto unitary = pdl::parse_problem(pdl::read_file(o.unitary), *domain.schema);
  pdl::SampleOptions opts;
  opts.budget = o.budget;
  opts.rng_seed = o.seed;
  opts.include_reference = o.include_reference;
  opts.planner = planner(o);
  const auto set = pdl::sample_models(space, unitary, opts, domain.reference);
  std::cerr << set.models.size() << " models from " << set.draws << " draws\n";
  emit(o.out, pdl::to_json(set).dump(2) + "\n");
}

void cmd_train(const Options& o) {
  const auto domain = load_domain(o);
  const auto traces = pdl::parse_traces(pdl::read_file(o.traces), *domain.schema);
  auto cfg = o.train;
  cfg.rng_seed = o.seed;
  const auto cv = pdl::neural::cross_validate(traces, pdl::neural::build_layout(*domain.schema), cfg);
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    std::cerr << "fold " << f << " loss";
    for (double l : cv.folds[f].loss_history) std::cerr << " " << l;
    std::cerr << "  held-out accuracy " << pdl::format_percent(cv.folds[f].training_encoding.value()) << "%\n";
  }
  if (o.out.empty()) throw pdl::Error("train needs --out for the parameter file");
  pdl::write_file(o.out, pdl::neural::serialize_parameters(cv));
}

void cmd_select(const Options& o) {
  const auto domain = load_domain(o);
  const auto traces = pdl::parse_traces(pdl::read_file(o.traces), *domain.schema);
  const auto models = pdl::sampled_models_from_json(load_json(o.models), domain.schema);
  const auto cv = pdl::neural::parse_parameters(pdl::read_file(o.params), pdl::neural::build_layout(*domain.schema));
  const auto scores = pdl::neural::score_models(cv, traces, models);
  const auto best = pdl::neural::select_best(scores);
  for (const auto& s : scores) {
    std::cout << (&s == &scores[best] ? "* " : "  ") << s.id << " " << pdl::format_percent(s.mean_accuracy) << "%"
              << (s.reference ? " reference" : "") << "\n";
  }
  const auto& chosen = models.models[best].model;
  const auto e = pdl::reconstruction_error(chosen, domain.reference);
  std::cout << "selected " << scores[best].id << ", E = " << pdl::format_percent(e.value) << "%\n";
  if (!o.out.empty()) pdl::write_file(o.out, pdl::serialize_model(chosen));
}

int cmd_pipeline(const Options& o) {
  pdl::PipelineConfig cfg;
  try {
    const auto base = std::filesystem::path(o.config).parent_path().string();
    cfg = pdl::parse_config(pdl::read_file(o.config), base.empty() ? "." : base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << o.config << ": " << e.what() << "\n";
    return pdl::exit_code(Phase::Config);
  }
  if (o.seed_override) cfg.seed = *o.seed_override;
  if (o.skip_mining) cfg.skip_mining = true;
  if (!o.run_root.empty()) cfg.run_root = std::filesystem::absolute(o.run_root).string();
  try {
    const auto result = pdl::run_pipeline(cfg);
    std::cout << pdl::render_report(result.report, pdl::ReportFormat::Text);
    for (const auto& [phase, sec] : result.timings) std::cerr << phase << " " << sec << " s\n";
    std::cerr << "artifacts in " << result.run_dir << "\n";
  } catch (const pdl::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pdl::exit_code(e.phase());
  }
  return 0;
}

void add_planner_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--strategy", o.strategy, "breadth-first or greedy-by-goal-count");
  cmd->add_option("--max-expansions", o.max_expansions, "search node budget");
}

void add_train_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--hidden", o.train.hidden_units, "LSTM hidden units");
  cmd->add_option("--dropout", o.train.dropout_rate, "dropout rate before the softmax head");
  cmd->add_option("--epochs", o.train.epochs, "training epochs");
  cmd->add_option("--folds", o.train.folds, "cross-validation folds");
  cmd->add_option("--lr", o.train.learning_rate, "Adam learning rate");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn STRIPS action models from plan traces"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "generate plan traces from random problems");
  gen->add_option("--domain", o.domain, "domain file")->required();
  gen->add_option("--generator", o.generator, "problem generator file")->required();
  gen->add_option("--out", o.out, "trace file (default stdout)");
  gen->add_option("--count", o.count, "number of traces");
  gen->add_option("--seed", o.seed, "random seed");
  add_planner_flags(gen, o);

  auto* enu = app.add_subcommand("enumerate", "enumerate candidate action sets");
  enu->add_option("--domain", o.domain, "domain file")->required();
  enu->add_option("--out", o.out, "candidate file (default stdout)");
  enu->add_flag("--strict-del", o.strict_del, "require del to be a subset of pre");
  enu->add_option("--max-rel", o.max_rel, "cap on relevant predicates per action");

  auto* mine = app.add_subcommand("mine", "mine stable adjacent action rules");
  mine->add_option("--domain", o.domain, "domain file")->required();
  mine->add_option("--traces", o.traces, "trace file")->required();
  mine->add_option("--min-support", o.min_support, "minimum support");
  mine->add_option("--min-confidence", o.min_confidence, "minimum confidence");
  mine->add_option("--schedule", o.schedule, "first point of the doubling schedule");
  mine->add_option("--tolerance", o.tolerance, "largest change between schedule points");
  mine->add_option("--out", o.out, "JSON rules report");

  auto* prune = app.add_subcommand("prune", "prune candidates with action-pair constraints");
  prune->add_option("--domain", o.domain, "domain file")->required();
  prune->add_option("--candidates", o.candidates, "candidate file")->required();
  prune->add_option("--rules", o.rules, "JSON rules report from mine")->required();
  prune->add_option("--out", o.out, "reduced candidate file (default stdout)");

  auto* sample = app.add_subcommand("sample", "sample models that solve the unitary problem");
  sample->add_option("--domain", o.domain, "domain file")->required();
  sample->add_option("--candidates", o.candidates, "candidate file")->required();
  sample->add_option("--unitary", o.unitary, "unitary problem file")->required();
  sample->add_option("--budget", o.budget, "number of models");
  sample->add_option("--seed", o.seed, "random seed");
  sample->add_flag("--include-reference", o.include_reference, "put the domain's model first");
  sample->add_option("--out", o.out, "JSON model manifest (default stdout)");
  add_planner_flags(sample, o);

  auto* train = app.add_subcommand("train", "train the next-action LSTM with cross-validation");
  train->add_option("--domain", o.domain, "domain file")->required();
  train->add_option("--traces", o.traces, "trace file")->required();
  train->add_option("--seed", o.seed, "random seed");
  train->add_option("--out", o.out, "parameter file")->required();
  add_train_flags(train, o);

  auto* select = app.add_subcommand("select", "score sampled models and pick the best");
  select->add_option("--domain", o.domain, "domain file")->required();
  select->add_option("--traces", o.traces, "trace file")->required();
  select->add_option("--models", o.models, "JSON model manifest")->required();
  select->add_option("--params", o.params, "parameter file from train")->required();
  select->add_option("--out", o.out, "selected model as a domain file");

  auto* pipe = app.add_subcommand("pipeline", "run every phase from a config file");
  pipe->add_option("--config", o.config, "key = value config file")->required();
  pipe->add_option("--seed", o.seed_override, "override the config seed");
  pipe->add_option("--run-root", o.run_root, "override the run directory root");
  pipe->add_flag("--skip-mining", o.skip_mining, "skip mining and pruning (ablation)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::pair<CLI::App*, Phase> phases[] = {{gen, Phase::Generate}, {enu, Phase::Enumerate},
                                                {mine, Phase::Mine},    {prune, Phase::Prune},
                                                {sample, Phase::Sample}, {train, Phase::Train},
                                                {select, Phase::Select}};
  if (pipe->parsed()) return cmd_pipeline(o);
  for (const auto& [cmd, phase] : phases) {
    if (!cmd->parsed()) continue;
    try {
      switch (phase) {
        case Phase::Generate: cmd_generate(o); break;
        case Phase::Enumerate: cmd_enumerate(o); break;
        case Phase::Mine: cmd_mine(o); break;
        case Phase::Prune: cmd_prune(o); break;
        case Phase::Sample: cmd_sample(o); break;
        case Phase::Train: cmd_train(o); break;
        case Phase::Select: cmd_select(o); break;
        default: break;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << cmd->get_name() << ": " << e.what() << "\n";
      return pdl::exit_code(phase);
    }
    return 0;
  }
  return 1;
}
