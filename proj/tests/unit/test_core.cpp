#include <gtest/gtest.h>

#include "pdl/core.hpp"
#include "pdl/error.hpp"
#include "pdl/rational.hpp"
#include "pdl/rng.hpp"
#include "support.hpp"

namespace pdl {
namespace {

using test::act;
using test::atom;

class GripperCore : public ::testing::Test {
 protected:
  ParsedDomain dom = test::load_domain("gripper");
  ObjectTable objects{{{"rob1", "robot"}, {"r1", "room"}, {"r2", "room"}, {"b1", "ball"}, {"g1", "gripper"}}};
  State start{{atom("at", {"b1", "r1"}), atom("at-robby", {"rob1", "r1"}), atom("free", {"rob1", "g1"})}};
  GroundAction pick = act("pick", {"rob1", "b1", "r1", "g1"});
};

TEST_F(GripperCore, PickApplicableWhenPreconditionsHold) {
  EXPECT_TRUE(is_applicable(start, pick, dom.reference));
}

TEST_F(GripperCore, PickInapplicableWithoutBall) {
  State s = start;
  s.atoms.erase(atom("at", {"b1", "r1"}));
  EXPECT_FALSE(is_applicable(s, pick, dom.reference));
  EXPECT_THROW(apply(s, pick, dom.reference), PreconditionError);
}

TEST_F(GripperCore, PickAddsCarryAndDeletesAtAndFree) {
  const State next = apply(start, pick, dom.reference);
  const State expected{{atom("at-robby", {"rob1", "r1"}), atom("carry", {"rob1", "g1", "b1"})}};
  EXPECT_EQ(next, expected);
}

TEST_F(GripperCore, ValidTraceValidates) {
  std::vector<GroundAction> actions{pick, act("move", {"rob1", "r1", "r2"}), act("drop", {"rob1", "b1", "r2", "g1"})};
  std::vector<State> states{start};
  for (const auto& a : actions) states.push_back(apply(states.back(), a, dom.reference));
  const PlanTrace trace(objects, states, actions);
  EXPECT_TRUE(validate_trace(trace, dom.reference));
}

TEST_F(GripperCore, TraceWithUndeletedAtomFails) {
  State next = apply(start, pick, dom.reference);
  next.atoms.insert(atom("at", {"b1", "r1"}));
  const PlanTrace trace(objects, {start, next}, {pick});
  const auto check = validate_trace(trace, dom.reference);
  EXPECT_FALSE(check);
  EXPECT_FALSE(check.diagnostic.empty());
}

TEST_F(GripperCore, TraceShapeIsChecked) {
  EXPECT_THROW(PlanTrace(objects, {start}, {}), PreconditionError);
  EXPECT_THROW(PlanTrace(objects, {start}, {pick}), PreconditionError);
}

TEST_F(GripperCore, GroundBindsParameterPositions) {
  const LiftedRef carry{"carry", {0, 3, 1}};
  EXPECT_EQ(ground(carry, pick), atom("carry", {"rob1", "g1", "b1"}));
  EXPECT_THROW(ground(LiftedRef{"at", {1, 7}}, pick), SchemaError);
}

TEST_F(GripperCore, EntryRejectsOverlappingLists) {
  const LiftedRef p{"at", {1, 2}};
  EXPECT_THROW(ActionModelEntry("pick", {}, {p}, {p}), SchemaError);
  EXPECT_THROW(ActionModelEntry("pick", {p}, {p}, {}), SchemaError);
  EXPECT_NO_THROW(ActionModelEntry("pick", {p}, {}, {p}));
}

TEST_F(GripperCore, ModelRejectsIrrelevantRef) {
  auto entries = dom.reference.entries();
  entries[1] = ActionModelEntry("move", {LiftedRef{"at-robby", {0, 0}}}, {}, {});
  EXPECT_THROW(ActionModel(dom.schema, entries), SchemaError);
}

TEST_F(GripperCore, CheckActionValidatesTypes) {
  EXPECT_NO_THROW(check_action(*dom.schema, objects, pick));
  EXPECT_THROW(check_action(*dom.schema, objects, act("pick", {"rob1", "r1", "r1", "g1"})), SchemaError);
  EXPECT_THROW(check_action(*dom.schema, objects, act("fly", {})), SchemaError);
  EXPECT_THROW(check_atom(*dom.schema, objects, atom("at", {"b1"})), SchemaError);
}

TEST(Relevance, InjectiveTypedBindings) {
  const ActionSignature move{"move", {"?r", "?from", "?to"}, {"robot", "room", "room"}};
  const PredicateSchema at_robby{"at-robby", {"robot", "room"}};
  EXPECT_TRUE(is_relevant({"at-robby", {0, 1}}, move, at_robby));
  EXPECT_TRUE(is_relevant({"at-robby", {0, 2}}, move, at_robby));
  EXPECT_FALSE(is_relevant({"at-robby", {1, 2}}, move, at_robby));
  EXPECT_FALSE(is_relevant({"at-robby", {0}}, move, at_robby));
}

TEST(RationalText, ParsesDecimalsFractionsAndExponents) {
  EXPECT_EQ(parse_rational("0.4"), Rational(2, 5));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
  EXPECT_EQ(parse_rational("1e-2"), Rational(1, 100));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  for (const char* bad : {"", "x", "1/0", "1e", "1.2.3", "--1"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(RationalText, FormatsFixedPoint) {
  EXPECT_EQ(format_percent(Rational(1)), "100.00");
  EXPECT_EQ(format_percent(Rational(0)), "0.00");
  EXPECT_EQ(format_percent(Rational(1, 3)), "33.33");
  EXPECT_EQ(format_percent(Rational(2, 3)), "66.67");
  EXPECT_EQ(format_fixed(Rational(-1, 8), 2), "-0.13");
}

TEST(Rng, SeededStreamsRepeat) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.below(13);
    EXPECT_LT(v, 13U);
    const auto u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

}  // namespace
}  // namespace pdl
