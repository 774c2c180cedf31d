#include <gtest/gtest.h>

#include <map>

#include "pdl/error.hpp"
#include "pdl/pipeline.hpp"
#include "pdl/rng.hpp"
#include "pdl/rules.hpp"
#include "pdl/trace_gen.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

namespace pdl {
namespace {

SequenceDatabase db_of(std::vector<std::vector<std::string>> seqs) { return SequenceDatabase{std::move(seqs)}; }

const SequentialRule* find_rule(const std::vector<SequentialRule>& rules, const std::string& x, const std::string& y) {
  for (const auto& r : rules) {
    if (r.antecedent == x && r.consequent == y) return &r;
  }
  return nullptr;
}

TEST(Miner, HandCountedExample) {
  const auto db = db_of({{"a", "b"}, {"a", "b"}, {"a", "c"}});
  const auto rules = mine_rules(db, Rational(0), Rational(0));
  ASSERT_EQ(rules.size(), 2U);
  const auto* ab = find_rule(rules, "a", "b");
  ASSERT_NE(ab, nullptr);
  EXPECT_EQ(ab->pair_count, 2U);
  EXPECT_EQ(ab->antecedent_count, 3U);
  EXPECT_EQ(ab->support, Rational(2, 3));
  EXPECT_EQ(ab->confidence, Rational(2, 3));
  const auto* ac = find_rule(rules, "a", "c");
  ASSERT_NE(ac, nullptr);
  EXPECT_EQ(ac->support, Rational(1, 3));
  EXPECT_EQ(ac->confidence, Rational(1, 3));
}

TEST(Miner, FullConfidenceThreshold) {
  const auto rules = mine_rules(db_of({{"a", "b"}, {"a", "b"}}), Rational(0), Rational(1));
  ASSERT_EQ(rules.size(), 1U);
  EXPECT_EQ(rules[0].confidence, Rational(1));
  EXPECT_EQ(rules[0].support, Rational(1));
}

TEST(Miner, SupportCanExceedOne) {
  const auto rules = mine_rules(db_of({{"a", "b", "a", "b"}}), Rational(0), Rational(0));
  const auto* ab = find_rule(rules, "a", "b");
  ASSERT_NE(ab, nullptr);
  EXPECT_EQ(ab->support, Rational(2));
}

TEST(Miner, Errors) {
  EXPECT_THROW(mine_rules(SequenceDatabase{}, Rational(0), Rational(0)), PreconditionError);
  EXPECT_THROW(mine_rules(db_of({{"a"}}), Rational(-1, 2), Rational(0)), PreconditionError);
}

TEST(Miner, MatchesNaiveCounterOnRandomDatabases) {
  Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    const auto [alphabet, db] = oracle::random_database(rng);
    const Rational sup(static_cast<std::int64_t>(rng.below(5)), 4);
    const Rational conf(static_cast<std::int64_t>(rng.below(5)), 4);
    EXPECT_EQ(mine_rules(db, sup, conf), oracle::naive_rules(db, alphabet, sup, conf)) << "round " << round;
  }
}

TEST(Miner, CountsMergeLikeConcatenation) {
  const auto a = db_of({{"x", "y", "x"}, {"y"}});
  const auto b = db_of({{"x", "x"}});
  auto merged = count_rules(a);
  merged.merge(count_rules(b));
  const auto whole = count_rules(db_of({{"x", "y", "x"}, {"y"}, {"x", "x"}}));
  EXPECT_EQ(merged.sequences, whole.sequences);
  EXPECT_EQ(merged.items, whole.items);
  EXPECT_EQ(merged.pairs, whole.pairs);
}

TEST(Stability, StableAndUnstableRules) {
  // a->b holds throughout; c->d appears only in the later half.
  SequenceDatabase full;
  for (int i = 0; i < 10; ++i) full.sequences.push_back({"a", "b"});
  for (int i = 0; i < 10; ++i) full.sequences.push_back({"c", "d"});
  const std::vector<SequenceDatabase> schedule{full.prefix(10), full};
  const auto report = stability_scan(schedule, Rational(1, 5), Rational(1, 2), Rational(1, 10));
  ASSERT_EQ(report.rules.size(), 2U);
  EXPECT_EQ(report.schedule, (std::vector<std::size_t>{10, 20}));
  // a->b: support 1 then 1/2, a drift of 1/2 > tolerance.
  EXPECT_FALSE(report.rules[0].stable);
  EXPECT_FALSE(report.rules[1].stable);
  const auto loose = stability_scan(schedule, Rational(1, 5), Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(frequent_pairs(loose), (std::vector<ActionPair>{{"a", "b"}}));
}

TEST(Stability, ScheduleMustBeNestedPrefixes) {
  const auto a = db_of({{"a", "b"}});
  const auto b = db_of({{"b", "a"}, {"a", "b"}});
  const std::vector<SequenceDatabase> bad{a, b};
  EXPECT_THROW(stability_scan(bad, Rational(0), Rational(0), Rational(0)), PreconditionError);
}

TEST(Stability, JsonRoundTripOfPairs) {
  SequenceDatabase full;
  for (int i = 0; i < 20; ++i) full.sequences.push_back({"a", "b", "c"});
  const std::vector<SequenceDatabase> schedule{full.prefix(10), full};
  const auto report = stability_scan(schedule, Rational(2, 5), Rational(3, 5), Rational(1, 10));
  const auto pairs = frequent_pairs(report);
  EXPECT_EQ(pairs, (std::vector<ActionPair>{{"a", "b"}, {"b", "c"}}));
  EXPECT_EQ(frequent_pairs_from_json(to_json(report)), pairs);
  EXPECT_FALSE(render_rules_table(report).empty());
}

TEST(Stability, GripperTracesYieldPickMove) {
  const auto dom = test::load_domain("gripper");
  auto spec = parse_generation_spec(read_file(test::source_path("domains/gripper/generator.gen")), *dom.schema);
  spec.problem_count = 100;
  spec.rng_seed = generation_seed(7);
  const auto traces = generate_traces(spec, dom.reference, {});
  const auto db = to_sequence_database(traces);
  std::vector<SequenceDatabase> schedule;
  for (auto n : doubling_schedule(db.size(), 10)) schedule.push_back(db.prefix(n));
  const auto report = stability_scan(schedule, Rational(2, 5), Rational(3, 5), Rational(1, 10));
  EXPECT_EQ(frequent_pairs(report), (std::vector<ActionPair>{{"pick", "move"}, {"move", "drop"}}));
}

}  // namespace
}  // namespace pdl
