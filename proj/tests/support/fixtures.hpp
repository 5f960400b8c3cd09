#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "optbt/logic.hpp"
#include "optbt/world.hpp"

namespace optbt::fixtures {

inline std::string data_path(const std::string& rel) { return std::string(OPTBT_TEST_DATA_DIR) + "/" + rel; }

inline const world::Domain& cafe_domain() {
  static const world::Domain d = world::load_domain(data_path("cafe/cafe.domain"));
  return d;
}

inline const world::WorldState& cafe_state() {
  static const world::WorldState s = world::load_state(data_path("cafe/cafe.state"), cafe_domain());
  return s;
}

inline constexpr const char* kCafeGoal = "¬Dirty(Table) ∧ (On(Coffee,Table) ∨ On(Tea,Table))";

// l1..l4 as 0-ary literals. a1 reaches l1; a2 and a3 build on it. Nothing produces l4.
inline constexpr const char* kToyChain = R"([predicates]
l1
l2
l3
l4

[actions]
a1
  pre:
  add: l1
  cost: 10
a2
  pre: l1
  add: l2
  cost: 5
a3
  pre: l1
  add: l3
  cost: 3
)";

// The toy chain plus an expensive copy of a3 declared first.
inline constexpr const char* kToyChainWithCopy = R"([predicates]
l1
l2
l3
l4

[actions]
a3x
  pre: l1
  add: l3
  cost: 30
a1
  pre:
  add: l1
  cost: 10
a2
  pre: l1
  add: l2
  cost: 5
a3
  pre: l1
  add: l3
  cost: 3
)";

inline world::Domain toy_chain() { return world::parse_domain(kToyChain); }

inline world::Lit lit(const world::Domain& d, const std::string& name, bool negated = false) {
  return world::Lit(d.atoms().id(logic::Atom{name, {}}), negated);
}

/// Random formula over atoms p0..p{atoms-1} (0-ary).
class WffGenerator {
 public:
  WffGenerator(std::uint64_t seed, int atoms, int max_depth) : rng_(seed), atoms_(atoms), max_depth_(max_depth) {}

  logic::Wff next() { return gen(max_depth_); }

 private:
  logic::Wff gen(int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 0 : 3);
    switch (kind(rng_)) {
      case 0: {
        std::uniform_int_distribution<int> atom(0, atoms_ - 1);
        return logic::Wff::literal("p" + std::to_string(atom(rng_)));
      }
      case 1:
        return logic::Wff::negation(gen(depth - 1));
      case 2:
        return logic::Wff::conjunction(gen(depth - 1), gen(depth - 1));
      default:
        return logic::Wff::disjunction(gen(depth - 1), gen(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  int atoms_;
  int max_depth_;
};

/// Every assignment over `atoms`, as the list of true atoms.
inline std::vector<std::vector<logic::Atom>> assignments(const std::vector<logic::Atom>& atoms) {
  std::vector<std::vector<logic::Atom>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
    std::vector<logic::Atom> on;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) on.push_back(atoms[i]);
    }
    out.push_back(std::move(on));
  }
  return out;
}

}  // namespace optbt::fixtures
