#pragma once

// Optimal behavior-tree expansion (OBTEA), the cost-blind BT Expansion
// baseline, and a forward Dijkstra oracle used to check optimality.
//
// For each DNF clause (sub-goal) the planner searches backwards through
// condition space. A popped condition c is regressed through every action a
// that helps and does not hurt it,
//
//     c ∩ (pre(a) ∪ add⁺(a)) ≠ ∅   and   c ∩ del⁺(a) = ∅
//     c_a = pre(a) ∪ (c \ add⁺(a))
//
// where add⁺/del⁺ are the signed effects (see world::signed_effects), so
// negative goal literals are handled by the same set algebra. Expanded
// conditions are appended to the sub-goal's Fallback as Sequence(c, a) in
// order of nondecreasing cost-to-goal; the search stops at the first
// expanded condition that holds in the initial state.

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optbt/bt.hpp"
#include "optbt/cost.hpp"
#include "optbt/logic.hpp"
#include "optbt/world.hpp"

namespace optbt::planner {

inline constexpr int kDefaultCompactionDepth = 3;

struct ExpansionRecord {
  world::ConditionSet condition;
  Cost cost_to_goal;       // D(c)
  bt::NodePtr subtree;     // Sequence(condition, action)
  world::ActionId via_action = 0;
};

struct SubgoalPlan {
  std::size_t clause_index = 0;  // position in the DNF
  world::ConditionSet goal;
  bt::NodePtr expanded;          // Fallback(goal, M(c1), M(c2), ...) before compaction
  bt::NodePtr subtree;           // the tree used for assembly (compacted for OBTEA)
  MaybeCost cost;                // nullopt: infeasible
  std::vector<ExpansionRecord> records;
  std::size_t explored = 0;
  std::size_t expanded_count = 0;
};

struct PlanStats {
  std::size_t explored = 0;
  std::size_t expanded = 0;
  double planning_seconds = 0;
  double compaction_seconds = 0;
};

struct PlanResult {
  std::string method;
  bt::NodePtr tree;
  bt::NodePtr uncompacted_tree;  // same assembly without compaction
  /// Feasible sub-goals ascending by cost (ties in clause order), then infeasible ones.
  std::vector<SubgoalPlan> subgoals;
  std::vector<ExpansionRecord> expanded_conditions;
  PlanStats stats;

  /// Cost of the first (cheapest) feasible sub-goal.
  MaybeCost best_cost() const;
};

class InconsistentGoal : public std::invalid_argument {
 public:
  explicit InconsistentGoal(const std::string& goal)
      : std::invalid_argument("sub-goal '" + goal + "' contains a literal and its negation") {}
};

class NoFeasibleSubgoal : public std::runtime_error {
 public:
  NoFeasibleSubgoal() : std::runtime_error("no sub-goal is reachable from the initial state") {}
};

class StateSpaceTooLarge : public std::runtime_error {
 public:
  explicit StateSpaceTooLarge(std::size_t bound)
      : std::runtime_error("more than " + std::to_string(bound) + " reachable states") {}
};

/// One condition set per DNF clause, in clause order.
std::vector<world::ConditionSet> parse_sub_goals(const logic::Dnf& goal, const world::Domain& domain);

/// Cost-ordered exploration and expansion for one sub-goal. Throws InconsistentGoal.
SubgoalPlan plan_subgoal(const world::ConditionSet& goal, const world::WorldState& s0, const world::Domain& domain);

/// Merges adjacent expanded pairs on their common literals, up to
/// `max_depth` passes. `subtree` must have the plan_subgoal shape.
bt::NodePtr compact(const bt::NodePtr& subtree, int max_depth);

/// Root Fallback over the feasible subtrees sorted by cost (stable).
/// Throws NoFeasibleSubgoal.
bt::NodePtr assemble(const std::vector<SubgoalPlan>& plans);

PlanResult obtea(const logic::Dnf& goal, const world::WorldState& s0, const world::Domain& domain,
                 int compaction_depth = kDefaultCompactionDepth);
PlanResult obtea(const std::vector<world::ConditionSet>& sub_goals, const world::WorldState& s0,
                 const world::Domain& domain, int compaction_depth = kDefaultCompactionDepth);

/// First-in-first-out expansion without cost keys; the first discovery of a
/// condition fixes its subtree. No compaction, sub-trees kept in clause order.
PlanResult bt_expansion_baseline(const logic::Dnf& goal, const world::WorldState& s0, const world::Domain& domain);
PlanResult bt_expansion_baseline(const std::vector<world::ConditionSet>& sub_goals, const world::WorldState& s0,
                                 const world::Domain& domain);

inline constexpr std::size_t kDefaultOracleStateBound = 1'000'000;

/// Minimum total cost of an action sequence from `s0` to a state satisfying
/// any of `goals`, by Dijkstra over explicit world states. Throws
/// StateSpaceTooLarge once more than `state_bound` states are discovered.
MaybeCost dijkstra_oracle(const world::WorldState& s0, const std::vector<world::ConditionSet>& goals,
                          const world::Domain& domain, std::size_t state_bound = kDefaultOracleStateBound);
MaybeCost dijkstra_oracle(const world::WorldState& s0, const logic::Dnf& goal, const world::Domain& domain,
                          std::size_t state_bound = kDefaultOracleStateBound);

/// Structured report: method, best cost, per-subgoal costs, statistics and
/// optionally the rendered tree. Pretty-printed JSON.
std::string report_json(const PlanResult& result, const world::Domain& domain, bool include_tree = true);

}  // namespace optbt::planner
