#include <gtest/gtest.h>

#include <sstream>

#include "optbt/bench.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace optbt;
using bench::GenParams;

const world::GroundAction& action_named(const world::Domain& d, const std::string& name) {
  for (const auto& a : d.actions()) {
    if (a.name == name) return a;
  }
  throw std::out_of_range(name);
}

GenParams small(std::uint64_t seed) {
  auto p = GenParams::preset("small");
  p.seed = seed;
  return p;
}

TEST(GenParams, PresetsValidate) {
  for (const auto& name : GenParams::preset_names()) EXPECT_NO_THROW(GenParams::preset(name).validate()) << name;
  EXPECT_THROW(GenParams::preset("case10"), std::invalid_argument);
  auto bad = GenParams::preset("small");
  bad.path_length = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = GenParams::preset("small");
  bad.cost_range = {5, 1};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Generate, DeterministicInSeed) {
  auto a = bench::generate(small(7));
  auto b = bench::generate(small(7));
  ASSERT_EQ(a.domain.actions().size(), b.domain.actions().size());
  for (std::size_t i = 0; i < a.domain.actions().size(); ++i) {
    EXPECT_EQ(a.domain.actions()[i].name, b.domain.actions()[i].name);
    EXPECT_EQ(a.domain.actions()[i].cost, b.domain.actions()[i].cost);
    EXPECT_EQ(a.domain.actions()[i].pre, b.domain.actions()[i].pre);
  }
  EXPECT_EQ(a.s0, b.s0);
  EXPECT_EQ(a.sub_goals, b.sub_goals);
  auto c = bench::generate(small(8));
  EXPECT_FALSE(a.s0 == c.s0 && a.sub_goals == c.sub_goals);
}

TEST(Generate, WitnessesReplayToTheirClause) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = bench::generate(small(seed));
    ASSERT_EQ(inst.witnesses.size(), inst.sub_goals.size());
    for (const auto& w : inst.witnesses) {
      ASSERT_EQ(w.states.size(), w.actions.size() + 1);
      EXPECT_EQ(w.states.front(), inst.s0);
      world::WorldState s = inst.s0;
      Cost cost;
      for (std::size_t i = 0; i < w.actions.size(); ++i) {
        const auto& a = action_named(inst.domain, w.actions[i]);
        s = world::apply(a, s);
        cost += a.cost;
        EXPECT_EQ(s, w.states[i + 1]);
      }
      EXPECT_TRUE(world::holds(inst.sub_goals.at(w.clause), s)) << "seed " << seed;
      auto oracle = planner::dijkstra_oracle(inst.s0, inst.sub_goals, inst.domain, 1U << 12);
      ASSERT_TRUE(oracle.has_value());
      EXPECT_LE(*oracle, cost);
    }
  }
}

TEST(Generate, Case0Shape) {
  auto p = GenParams::preset("case0");
  auto inst = bench::generate(p);
  EXPECT_EQ(inst.domain.literal_count(), 1000U);
  EXPECT_GT(inst.domain.actions().size(), 100U);
  EXPECT_LT(inst.domain.actions().size(), 2000U);
  EXPECT_FALSE(inst.sub_goals.empty());
}

TEST(Generate, InstanceParamsVarySeed) {
  auto base = small(3);
  EXPECT_NE(bench::instance_params(base, 0).seed, bench::instance_params(base, 1).seed);
  EXPECT_EQ(bench::instance_params(base, 4).seed, bench::instance_params(base, 4).seed);
}

TEST(ReachableStates, CapIsRespected) {
  auto inst = bench::generate(small(1));
  auto n = bench::count_reachable_states(inst.domain, inst.s0, 1U << 12);
  ASSERT_TRUE(n.has_value());
  EXPECT_GE(*n, 1U);
  EXPECT_FALSE(bench::count_reachable_states(inst.domain, inst.s0, 0).has_value());
}

TEST(Comparison, RowsAndAggregates) {
  auto report = bench::run_comparison({small(11)}, {5, planner::kDefaultCompactionDepth, 0});
  ASSERT_EQ(report.rows.size(), 15U);
  for (auto m : {bench::kBaseline, bench::kObtea, bench::kObteaNc}) {
    const auto* agg = report.find("small", m);
    ASSERT_NE(agg, nullptr) << m;
    EXPECT_EQ(agg->count, 5U);
    EXPECT_EQ(agg->failures, 0U);
  }
  EXPECT_LE(report.find("small", bench::kObtea)->mean_cost, report.find("small", bench::kBaseline)->mean_cost);
  // compaction does not change the executed actions, only the checks
  EXPECT_DOUBLE_EQ(report.find("small", bench::kObtea)->mean_cost, report.find("small", bench::kObteaNc)->mean_cost);

  auto csv = report.rows_csv(false);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "scenario,instance,label,literals,actions,states,method,ok,cost,condition_ticks");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 16);
  auto agg = report.aggregates_csv(true);
  EXPECT_EQ(agg.substr(0, agg.find('\n')),
            "scenario,method,count,failures,mean_cost,mean_condition_ticks,mean_literals,mean_actions,"
            "mean_planning_seconds");
  EXPECT_EQ(report.rows_csv(false), bench::run_comparison({small(11)}, {5, 4, 0}).rows_csv(false));
}

TEST(Ablation, DepthZeroMatchesUncompacted) {
  auto p = small(21);
  auto curve = bench::ablate_depth(p, {0, 2}, 6);
  ASSERT_EQ(curve.per_instance.size(), 6U);
  auto report = bench::run_comparison({p}, {6, 2, 0});
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& nc = report.rows[i * 3 + 2];
    ASSERT_EQ(nc.run.method, bench::kObteaNc);
    EXPECT_EQ(curve.per_instance[i][0], nc.run.condition_ticks);
    const auto& ob = report.rows[i * 3 + 1];
    ASSERT_EQ(ob.run.method, bench::kObtea);
    EXPECT_EQ(curve.per_instance[i][1], ob.run.condition_ticks);
  }
  EXPECT_EQ(curve.csv().substr(0, curve.csv().find('\n')), "depth,mean_condition_ticks");
  EXPECT_THROW(bench::ablate_depth(p, {}, 2), std::invalid_argument);
}

TEST(CafeSuite, OneRowPerGoalAndMethod) {
  auto report = bench::run_cafe_suite(fixtures::data_path("cafe/cafe_goals.jsonl"),
                                      fixtures::data_path("cafe/cafe.domain"), fixtures::data_path("cafe/cafe.state"),
                                      planner::kDefaultCompactionDepth);
  EXPECT_EQ(report.rows.size(), 200U);
  const auto* all_b = report.find("all", bench::kBaseline);
  const auto* all_o = report.find("all", bench::kObtea);
  ASSERT_NE(all_b, nullptr);
  ASSERT_NE(all_o, nullptr);
  EXPECT_EQ(all_o->failures, 0U);
  EXPECT_LE(all_o->mean_cost, all_b->mean_cost);
  ASSERT_NE(report.find("Hard", bench::kObtea), nullptr);
}

}  // namespace
