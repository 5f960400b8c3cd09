#include <gtest/gtest.h>

#include "optbt/bench.hpp"
#include "optbt/world.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace optbt;
using world::ConditionSet;
using world::Lit;
using world::WorldState;

world::GroundAction make_action(std::string name, ConditionSet pre, std::vector<world::AtomId> add,
                                std::vector<world::AtomId> del) {
  world::GroundAction a;
  a.name = std::move(name);
  a.pre = std::move(pre);
  a.add = std::move(add);
  a.del = std::move(del);
  a.cost = Cost::from_integer(1);
  return a;
}

TEST(Holds, Examples) {
  EXPECT_TRUE(world::holds(ConditionSet{}, WorldState{3, 5}));
  EXPECT_FALSE(world::holds(ConditionSet{Lit::neg(1)}, WorldState{1}));
  EXPECT_TRUE(world::holds(ConditionSet{Lit::pos(1), Lit::neg(2)}, WorldState{1}));
}

TEST(Apply, AddsThenDeletes) {
  auto a = make_action("a", {Lit::pos(1)}, {2}, {});
  EXPECT_EQ(world::apply(a, WorldState{1}), (WorldState{1, 2}));
  auto b = make_action("b", {Lit::pos(1)}, {3}, {1});
  const WorldState s{1, 2};
  EXPECT_EQ(world::apply(b, s), (WorldState{2, 3}));
  EXPECT_EQ(s, (WorldState{1, 2}));
}

TEST(Apply, PreconditionViolated) {
  auto a = make_action("a", {Lit::pos(1)}, {2}, {});
  EXPECT_THROW(world::apply(a, WorldState{}), world::PreconditionViolated);
}

TEST(SignedEffects, Examples) {
  auto e = world::signed_effects(make_action("a", {}, {1}, {2}));
  EXPECT_EQ(e.add, (ConditionSet{Lit::pos(1), Lit::neg(2)}));
  EXPECT_EQ(e.del, (ConditionSet{Lit::pos(2), Lit::neg(1)}));
  auto none = world::signed_effects(make_action("b", {}, {}, {}));
  EXPECT_TRUE(none.add.empty());
  EXPECT_TRUE(none.del.empty());
}

TEST(SignedEffects, CleanTableAchievesNotDirty) {
  const auto& d = fixtures::cafe_domain();
  const Lit dirty = d.literal({logic::Atom{"Dirty", {"Table"}}, false});
  for (world::ActionId id = 0; id < d.actions().size(); ++id) {
    if (d.action(id).name != "Clean(Table)") continue;
    EXPECT_TRUE(d.effects(id).add.contains(dirty.complement()));
    return;
  }
  FAIL() << "Clean(Table) not found";
}

TEST(SignedEffects, ConsistentWithApplyOnSmallDomains) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto params = bench::GenParams::preset("small");
    params.seed = seed;
    auto inst = bench::generate(params);
    const auto& d = inst.domain;
    const std::size_t n = d.literal_count();
    ASSERT_LE(n, 16U);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<world::AtomId> atoms;
      for (world::AtomId x = 0; x < n; ++x) {
        if (mask & (1U << x)) atoms.push_back(x);
      }
      WorldState s(atoms);
      for (world::ActionId id = 0; id < d.actions().size(); ++id) {
        if (!world::holds(d.action(id).pre, s)) continue;
        WorldState next = world::apply(d.action(id), s);
        ASSERT_TRUE(world::holds(d.effects(id).add, next));
        for (Lit l : d.effects(id).del) ASSERT_FALSE(next.holds(l));
        for (world::AtomId x : next.atoms()) ASSERT_LT(x, n);
      }
    }
  }
}

TEST(ConditionSet, ConsistencyAndSetOps) {
  ConditionSet c{Lit::pos(2), Lit::pos(1), Lit::pos(2)};
  EXPECT_EQ(c.size(), 2U);
  EXPECT_TRUE(c.consistent());
  EXPECT_FALSE((ConditionSet{Lit::pos(1), Lit::neg(1)}).consistent());
  EXPECT_TRUE((ConditionSet{Lit::pos(1)}).subset_of(c));
  EXPECT_EQ(c.minus(ConditionSet{Lit::pos(1)}), ConditionSet{Lit::pos(2)});
  EXPECT_EQ(c.intersect(ConditionSet{Lit::pos(2), Lit::pos(7)}), ConditionSet{Lit::pos(2)});
}

TEST(CafeDomain, VocabularySizes) {
  const auto& d = fixtures::cafe_domain();
  EXPECT_EQ(d.vocabulary().objects().size(), 80U);
  EXPECT_EQ(d.vocabulary().condition_predicates().size(), 8U);
  EXPECT_EQ(d.vocabulary().action_predicates().size(), 6U);
  // Same order of magnitude as the published 1318 literals and 1269 actions.
  EXPECT_EQ(d.literal_count(), 1313U);
  EXPECT_EQ(d.actions().size(), 1147U);
}

TEST(CafeDomain, StateLoads) {
  const auto& s = fixtures::cafe_state();
  EXPECT_TRUE(s.holds(fixtures::cafe_domain().literal({logic::Atom{"RobotNear", {"Bar"}}, false})));
}

TEST(DomainFile, GroundingCountIsProductOfCategorySizes) {
  auto d = world::parse_domain(R"(
[objects]
Kitchen, Hall : room
Cup : item
[predicates]
At(room)
In(item, room)
[actions]
Carry(i: item, from: room, to: room)
  pre: At(from) & In(i, from)
  add: In(i, to) & At(to)
  del: In(i, from) & At(from)
  cost: 2.5
Go(r: room)
  pre: !At(r)
  add: At(r)
  del: At(_)
  cost: 1
[costs]
Go(Hall) : 4
)");
  EXPECT_EQ(d.literal_count(), 2U + 2U);
  ASSERT_EQ(d.actions().size(), 1U * 2U * 2U + 2U);
  for (const auto& a : d.actions()) {
    if (a.name == "Go(Hall)") EXPECT_EQ(a.cost, Cost::from_integer(4));
    if (a.name == "Go(Kitchen)") {
      EXPECT_EQ(a.cost, Cost::from_integer(1));
      // The wildcard deletes At(Hall) but not the atom being added.
      ASSERT_EQ(a.del.size(), 1U);
      EXPECT_EQ(d.atoms().atom(a.del[0]).str(), "At(Hall)");
    }
    if (a.name.starts_with("Carry")) EXPECT_EQ(a.cost, Cost::parse("2.5"));
  }
}

TEST(DomainFile, EmptyActionSection) {
  auto d = world::parse_domain("[objects]\nA : thing\n[predicates]\nP(thing)\n[actions]\n");
  EXPECT_EQ(d.actions().size(), 0U);
  EXPECT_EQ(d.literal_count(), 1U);
}

TEST(DomainFile, ParseErrorsCarryLineNumbers) {
  try {
    world::parse_domain("[objects]\nA : thing\n[predicates]\nP(thing)\n[actions]\nGo(x: thing)\n  pre: P(x\n  cost: 1\n");
    FAIL() << "expected DomainParseError";
  } catch (const world::DomainParseError& e) {
    EXPECT_EQ(e.line(), 7U);
  }
  EXPECT_THROW(world::parse_domain("[objects]\nA : thing\n[actions]\nGo(x: thing)\n  pre:\n"), world::DomainParseError);
}

TEST(DomainFile, UnknownCategoryIsGroundingError) {
  EXPECT_THROW(world::parse_domain("[objects]\nA : thing\n[predicates]\nP(thing)\n[actions]\nGo(x: place)\n  cost: 1\n"),
               world::GroundingError);
}

TEST(StateFile, RejectsNegativeLiterals) {
  const auto& d = fixtures::cafe_domain();
  EXPECT_THROW(world::parse_state("!Dirty(Table)", d), world::DomainParseError);
  auto s = world::parse_state("# comment\nDirty(Table) & RobotNear(Bar)\n", d);
  EXPECT_EQ(s.size(), 2U);
}

}  // namespace
