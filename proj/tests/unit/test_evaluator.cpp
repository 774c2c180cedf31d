#include <gtest/gtest.h>

#include "pdl/candidates.hpp"
#include "pdl/evaluator.hpp"
#include "pdl/rng.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

namespace pdl {
namespace {

TEST(ReconstructionError, PropertiesOnRandomPairs) {
  Rng rng(10);
  std::vector<CandidateModelSpace> spaces;
  for (const auto& name : test::shipped_domains()) spaces.push_back(build_space(test::load_domain(name).schema));
  for (int round = 0; round < 100; ++round) {
    const auto& space = spaces[static_cast<std::size_t>(round) % spaces.size()];
    const auto m = oracle::random_model(space, rng);
    const auto other = oracle::random_model(space, rng);
    const auto self = reconstruction_error(m, m);
    EXPECT_EQ(self.value, Rational(0));
    for (const auto& d : self.per_action) EXPECT_EQ(d.total(), 0U);
    EXPECT_EQ(reconstruction_error(m, other).value, reconstruction_error(other, m).value);
    EXPECT_EQ(reconstruction_error(m, other).value == Rational(0), m == other);

    auto changed = m;
    const auto a = oracle::perturb(space, changed, rng);
    ASSERT_TRUE(a.has_value());
    const Rational step(1, static_cast<std::int64_t>(space.per_action.size() * space.per_action[*a].relevant().size()));
    EXPECT_EQ(reconstruction_error(changed, m).value, step) << "round " << round;
    EXPECT_EQ(abs_diff(reconstruction_error(changed, other).value, reconstruction_error(m, other).value), step);
  }
}

TEST(ReconstructionError, MissingPreconditionIsOneThird) {
  const auto schema = std::make_shared<const DomainSchema>(
      "d", std::vector<std::string>{"t"}, std::vector<PredicateSchema>{{"p", {"t"}}, {"q", {"t"}}, {"r", {"t"}}},
      std::vector<ActionSignature>{{"a", {"?x"}, {"t"}}});
  const LiftedRef p{"p", {0}}, q{"q", {0}}, r{"r", {0}};
  const ActionModel reference(schema, {ActionModelEntry("a", {p, q}, {r}, {p})});
  const ActionModel learned(schema, {ActionModelEntry("a", {p}, {r}, {p})});
  const auto e = reconstruction_error(learned, reference);
  EXPECT_EQ(e.value, Rational(1, 3));
  ASSERT_EQ(e.per_action.size(), 1U);
  EXPECT_EQ(e.per_action[0], (DiffCounts{"a", 1, 0, 0, 3}));
}

TEST(ReconstructionError, ActionsWithoutRelevantRefsContributeZero) {
  const auto schema = std::make_shared<const DomainSchema>(
      "d", std::vector<std::string>{"t", "u"}, std::vector<PredicateSchema>{{"p", {"t"}}},
      std::vector<ActionSignature>{{"a", {"?x"}, {"t"}}, {"b", {"?y"}, {"u"}}});
  const LiftedRef p{"p", {0}};
  const ActionModel m1(schema, {ActionModelEntry("a", {p}, {}, {}), ActionModelEntry("b", {}, {}, {})});
  const ActionModel m2(schema, {ActionModelEntry("a", {}, {}, {}), ActionModelEntry("b", {}, {}, {})});
  const auto e = reconstruction_error(m1, m2);
  EXPECT_EQ(e.value, Rational(1, 2));
  EXPECT_EQ(e.per_action[1].rel_cons, 0U);
}

TEST(ReconstructionError, SchemasMustMatch) {
  const auto g = test::load_domain("gripper");
  const auto e = test::load_domain("elevator");
  EXPECT_THROW(reconstruction_error(g.reference, e.reference), SchemaError);
  EXPECT_EQ(reconstruction_error(g.reference, test::load_domain("gripper").reference).value, Rational(0));
}

EvaluationReport sample_report() {
  EvaluationReport r;
  r.domain = "gripper";
  r.seed = 7;
  r.trace_count = 100;
  r.frequent_pairs = {{"pick", "move"}};
  r.pruning = {{"drop", 625, 375}, {"move", 25, 24}, {"pick", 625, 500}};
  r.initial_space = 9765625;
  r.final_space = 4500000;
  r.draws = 60;
  neural::ModelScore ref;
  ref.id = "1.2.3";
  ref.reference = true;
  ref.fold_accuracy = {Rational(1), Rational(1)};
  ref.mean_accuracy = Rational(1);
  ref.replay_agreement = Rational(1);
  neural::ModelScore other = ref;
  other.id = "4.5.6";
  other.reference = false;
  other.mean_accuracy = Rational(1, 2);
  r.scores = {other, ref};
  r.selected = 1;
  r.mean_loss_history = {1.5, 0.25};
  r.training_encoding_accuracy = Rational(1);
  r.selected_model_text = "(define (domain gripper))\n";
  r.error = ReconstructionError{Rational(0), {{"drop", 0, 0, 0, 4}}};
  return r;
}

TEST(Report, TextLayout) {
  const auto text = render_report(sample_report(), ReportFormat::Text);
  EXPECT_NE(text.find("drop                       625       375         40.00"), std::string::npos) << text;
  EXPECT_NE(text.find("total                     1275       899         29.49"), std::string::npos) << text;
  EXPECT_NE(text.find("accuracy rate % 100.00"), std::string::npos);
  EXPECT_NE(text.find("reconstruction error E % 0.00"), std::string::npos);
  EXPECT_NE(text.find("frequent pairs: pick->move"), std::string::npos);
  // Ranked: the selected reference is listed before the weaker model.
  EXPECT_LT(text.find("*R  1.2.3"), text.find("    4.5.6"));
}

TEST(Report, JsonIsVersionedAndExact) {
  const auto doc = nlohmann::json::parse(render_report(sample_report(), ReportFormat::Json));
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["scores"][0]["id"], "1.2.3");
  EXPECT_EQ(doc["scores"][1]["mean_accuracy"], "1/2");
  EXPECT_EQ(doc["reconstruction_error"]["percent"], "0.00");
  EXPECT_EQ(doc["model_space"]["initial"], "9765625");
  EXPECT_EQ(doc["pruning"][2]["reduction_percent"], "20.00");
}

TEST(Report, NeedsScores) {
  auto r = sample_report();
  r.scores.clear();
  EXPECT_THROW(render_report(r, ReportFormat::Text), PreconditionError);
  EXPECT_EQ(reduction_percent(0, 0), "0.00");
}

}  // namespace
}  // namespace pdl
