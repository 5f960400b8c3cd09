#pragma once

// Pairs of atoms that never hold together in a state reachable from s0.
//
// Forward fixpoint over atom pairs (the h^2 relaxation). Negative
// preconditions are ignored, which only makes more pairs reachable, so every
// reported mutex is genuine. A condition containing a mutex pair, or an atom
// that is never reachable, can be dropped from a backward search without
// losing any plan.

#include <cstdint>
#include <vector>

#include "optbt/world.hpp"

namespace optbt::planner::detail {

class Mutexes {
 public:
  Mutexes(const world::Domain& domain, const world::WorldState& s0);

  /// True if no reachable state satisfies the positive literals of c.
  bool unreachable(const world::ConditionSet& c) const;

 private:
  bool pair(world::AtomId p, world::AtomId q) const { return (rows_[p * words_ + q / 64] >> (q % 64)) & 1U; }

  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;  // row p, bit q: {p, q} reachable; bit p of row p: p reachable
};

}  // namespace optbt::planner::detail
