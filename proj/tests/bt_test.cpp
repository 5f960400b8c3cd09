#include <gtest/gtest.h>

#include <regex>
#include <set>
#include <sstream>

#include "optbt/bt.hpp"
#include "optbt/planner.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace optbt;
using bt::TickStatus;
using world::ConditionSet;
using world::Lit;
using world::WorldState;

class BtTest : public ::testing::Test {
 protected:
  world::Domain d = fixtures::toy_chain();
  Lit l1 = fixtures::lit(d, "l1");
  Lit l2 = fixtures::lit(d, "l2");
  Lit l3 = fixtures::lit(d, "l3");
  world::ActionId a1 = 0, a2 = 1, a3 = 2;
  WorldState s_l1{l1.atom()};
};

TEST_F(BtTest, FallbackOverSatisfiedCondition) {
  auto root = bt::fallback({bt::condition_group(ConditionSet{l1})});
  std::uint64_t ticks = 0;
  EXPECT_EQ(bt::tick(*root, s_l1, ticks), TickStatus::success());
  EXPECT_EQ(ticks, 1U);
}

TEST_F(BtTest, SequenceReturnsRunningAction) {
  auto root = bt::sequence({bt::condition_group(ConditionSet{l1}), bt::action(a2)});
  EXPECT_EQ(bt::tick(*root, s_l1), TickStatus::running(a2));
  EXPECT_EQ(bt::tick(*root, WorldState{}), TickStatus::failure());
}

TEST_F(BtTest, NotInvertsAndPassesRunning) {
  EXPECT_EQ(bt::tick(*bt::negate(bt::condition(l1)), WorldState{}), TickStatus::success());
  EXPECT_EQ(bt::tick(*bt::negate(bt::condition(l1)), s_l1), TickStatus::failure());
  EXPECT_EQ(bt::tick(*bt::negate(bt::action(a1)), WorldState{}), TickStatus::running(a1));
}

TEST_F(BtTest, GroupShortCircuitsInSortedOrder) {
  auto group = bt::condition_group(ConditionSet{l3, l1, l2});
  std::uint64_t ticks = 0;
  EXPECT_EQ(bt::tick(*group, WorldState{}, ticks), TickStatus::failure());
  EXPECT_EQ(ticks, 1U);  // stops at the first literal, l1
  ticks = 0;
  EXPECT_EQ(bt::tick(*group, s_l1, ticks), TickStatus::failure());
  EXPECT_EQ(ticks, 2U);
}

TEST_F(BtTest, FallbackReturnsFirstNonFailure) {
  auto root = bt::fallback({bt::condition(l2), bt::sequence({bt::condition(l1), bt::action(a3)}), bt::action(a1)});
  EXPECT_EQ(bt::tick(*root, s_l1), TickStatus::running(a3));
  EXPECT_EQ(bt::tick(*root, WorldState{}), TickStatus::running(a1));
}

TEST_F(BtTest, EmptyControlNodesRejected) {
  EXPECT_THROW(bt::sequence({}), std::invalid_argument);
  EXPECT_THROW(bt::fallback({}), std::invalid_argument);
}

TEST_F(BtTest, SimulateToyChain) {
  auto plan = planner::obtea(logic::to_dnf(logic::parse_wff("l1 & l3")), WorldState{}, d);
  auto trace = bt::simulate(*plan.tree, WorldState{}, d);
  ASSERT_TRUE(trace.succeeded());
  EXPECT_EQ(trace.executed, (std::vector<world::ActionId>{a1, a3}));
  EXPECT_EQ(trace.total_cost, Cost::from_integer(13));
  EXPECT_EQ(trace.states.size(), trace.executed.size() + 1);
}

TEST_F(BtTest, SimulateGoalAlreadyTrue) {
  auto root = bt::fallback({bt::condition_group(ConditionSet{l1})});
  auto trace = bt::simulate(*root, s_l1, d);
  EXPECT_TRUE(trace.succeeded());
  EXPECT_TRUE(trace.executed.empty());
  EXPECT_EQ(trace.total_cost, Cost{});
}

TEST_F(BtTest, SimulateStuckWithoutActions) {
  auto root = bt::fallback({bt::condition_group(ConditionSet{l1})});
  auto trace = bt::simulate(*root, WorldState{}, d);
  EXPECT_EQ(trace.outcome, bt::ExecTrace::Outcome::Stuck);
  EXPECT_EQ(trace.root_ticks, 1U);
}

TEST_F(BtTest, SimulateStuckOnTickBudget) {
  // a1 keeps being selected because its effect never satisfies the guard.
  auto root = bt::fallback({bt::condition(l3), bt::action(a1)});
  auto trace = bt::simulate(*root, WorldState{}, d, 5);
  EXPECT_EQ(trace.outcome, bt::ExecTrace::Outcome::Stuck);
  EXPECT_EQ(trace.root_ticks, 5U);
}

TEST_F(BtTest, SimulateThrowsOnViolatedPrecondition) {
  auto root = bt::fallback({bt::condition(l2), bt::action(a2)});
  EXPECT_THROW(bt::simulate(*root, WorldState{}, d), world::PreconditionViolated);
}

TEST_F(BtTest, EveryRootTickCountsAConditionTick) {
  auto plan = planner::obtea(logic::to_dnf(logic::parse_wff("l2 | l3")), WorldState{}, d);
  auto trace = bt::simulate(*plan.tree, WorldState{}, d);
  ASSERT_TRUE(trace.succeeded());
  EXPECT_GE(trace.condition_ticks, trace.root_ticks);
}

TEST_F(BtTest, TickIsDeterministic) {
  auto plan = planner::obtea(logic::to_dnf(logic::parse_wff("(l1 & l2) | (l1 & l3)")), WorldState{}, d);
  for (const auto& s : {WorldState{}, s_l1, WorldState{l1.atom(), l2.atom()}}) {
    std::uint64_t t1 = 0, t2 = 0;
    EXPECT_EQ(bt::tick(*plan.tree, s, t1), bt::tick(*plan.tree, s, t2));
    EXPECT_EQ(t1, t2);
  }
}

TEST_F(BtTest, RenderText) {
  auto root = bt::fallback({bt::condition_group(ConditionSet{l1}),
                            bt::sequence({bt::condition_group(ConditionSet{}), bt::action(a1)})});
  EXPECT_EQ(bt::render(*root, d, bt::RenderFormat::Text), "?\n  cond {l1}\n  →\n    cond {}\n    act a1\n");
}

TEST_F(BtTest, RenderTextDistinguishesStructure) {
  auto a = bt::fallback({bt::condition(l1), bt::condition(l2)});
  auto b = bt::fallback({bt::condition(l2), bt::condition(l1)});
  auto c = bt::fallback({bt::condition_group(ConditionSet{l1}), bt::condition(l2)});
  auto e = bt::sequence({bt::condition(l1), bt::condition(l2)});
  const auto ra = bt::render(*a, d, bt::RenderFormat::Text);
  EXPECT_NE(ra, bt::render(*b, d, bt::RenderFormat::Text));
  EXPECT_NE(ra, bt::render(*c, d, bt::RenderFormat::Text));
  EXPECT_NE(ra, bt::render(*e, d, bt::RenderFormat::Text));
}

TEST_F(BtTest, RenderDotIsWellFormed) {
  auto plan = planner::obtea(logic::to_dnf(logic::parse_wff("(l1 & l2) | (l1 & l3)")), WorldState{}, d);
  const auto dot = bt::render(*plan.tree, d, bt::RenderFormat::Dot);
  ASSERT_TRUE(dot.starts_with("digraph BT {\n"));
  ASSERT_TRUE(dot.ends_with("}\n"));
  // Every body line is a node or an edge statement, and every edge names declared nodes.
  const std::regex node(R"(  n(\d+) \[label="(?:[^"\\]|\\.)*", [^\]]*\];)");
  const std::regex edge(R"(  n(\d+) -> n(\d+);)");
  std::set<std::string> declared;
  std::istringstream in(dot);
  std::string line;
  std::getline(in, line);
  std::size_t nodes = 0;
  while (std::getline(in, line)) {
    if (line == "}" || line == "  ordering=out;") continue;
    std::smatch m;
    if (std::regex_match(line, m, node)) {
      declared.insert(m[1]);
      ++nodes;
    } else {
      ASSERT_TRUE(std::regex_match(line, m, edge)) << line;
      EXPECT_TRUE(declared.count(m[1]) && declared.count(m[2])) << line;
    }
  }
  EXPECT_EQ(nodes, bt::node_count(*plan.tree));
}

}  // namespace
