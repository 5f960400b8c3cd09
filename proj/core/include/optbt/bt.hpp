#pragma once

// Behavior trees: node types, synchronous tick semantics, a closed-loop
// simulator over a Domain, and text/DOT rendering.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "optbt/cost.hpp"
#include "optbt/world.hpp"

namespace optbt::bt {

enum class NodeKind { Condition, ConditionGroup, Action, Sequence, Fallback, Not };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable tree node. Subtrees are shared between trees (e.g. a compacted
/// tree reuses the action leaves of the tree it was built from).
struct Node {
  NodeKind kind;
  world::Lit lit;              // Condition
  world::ConditionSet cond;    // ConditionGroup, checked literal by literal in sorted order
  world::ActionId action = 0;  // Action
  std::vector<NodePtr> children;
};

NodePtr condition(world::Lit lit);
NodePtr condition_group(world::ConditionSet cond);
NodePtr action(world::ActionId id);
/// Throw std::invalid_argument on an empty child list.
NodePtr sequence(std::vector<NodePtr> children);
NodePtr fallback(std::vector<NodePtr> children);
NodePtr negate(NodePtr child);

/// Deep structural equality.
bool same_tree(const Node& a, const Node& b);
std::size_t node_count(const Node& root);

struct TickStatus {
  enum class Kind { Success, Failure, Running };
  Kind kind;
  world::ActionId action = 0;  // meaningful only when Running

  static TickStatus success() { return {Kind::Success}; }
  static TickStatus failure() { return {Kind::Failure}; }
  static TickStatus running(world::ActionId a) { return {Kind::Running, a}; }
  friend bool operator==(const TickStatus& a, const TickStatus& b) {
    return a.kind == b.kind && (a.kind != Kind::Running || a.action == b.action);
  }
};

/// One tick from `root` in state `s`. Action leaves report Running with their
/// action; the caller applies effects. `condition_ticks` is incremented once
/// per literal evaluated.
TickStatus tick(const Node& root, const world::WorldState& s, std::uint64_t& condition_ticks);
TickStatus tick(const Node& root, const world::WorldState& s);

struct ExecTrace {
  enum class Outcome { Success, Stuck };

  std::vector<world::WorldState> states;
  std::vector<world::ActionId> executed;
  std::uint64_t condition_ticks = 0;
  std::uint64_t root_ticks = 0;
  Cost total_cost;
  Outcome outcome = Outcome::Stuck;

  bool succeeded() const { return outcome == Outcome::Success; }
};

/// Ticks `root` until it returns Success (outcome Success), Failure or the
/// tick budget runs out (outcome Stuck). Each Running action is applied
/// before the next tick. Throws world::PreconditionViolated if the tree
/// selects an action whose precondition does not hold.
ExecTrace simulate(const Node& root, const world::WorldState& s0, const world::Domain& domain,
                   std::uint64_t max_root_ticks = 100000);

enum class RenderFormat { Text, Dot };

/// Text uses "?" for Fallback, "→" for Sequence and "!" for Not, two spaces
/// of indent per level. Leaves read "cond X", "cond {X & Y}" for a condition
/// group, and "act A". Dot output is a Graphviz digraph.
std::string render(const Node& root, const world::Domain& domain, RenderFormat format);

}  // namespace optbt::bt
