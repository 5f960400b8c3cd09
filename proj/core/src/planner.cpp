#include "optbt/planner.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "mutex.hpp"

namespace optbt::planner {

using world::ActionId;
using world::ConditionSet;
using world::Domain;
using world::Lit;
using world::WorldState;

MaybeCost PlanResult::best_cost() const {
  for (const auto& sg : subgoals) {
    if (sg.cost) return sg.cost;
  }
  return std::nullopt;
}

std::vector<ConditionSet> parse_sub_goals(const logic::Dnf& goal, const Domain& domain) {
  std::vector<ConditionSet> out;
  out.reserve(goal.clauses.size());
  for (const auto& clause : goal.clauses) out.push_back(domain.condition(clause));
  return out;
}

namespace {

enum class Order { CostFirst, Fifo };

// Backward search over condition space for a single sub-goal.
class ConditionSearch {
 public:
  ConditionSearch(const Domain& domain, const WorldState& s0, Order order, const detail::Mutexes* mutexes)
      : domain_(domain), s0_(s0), order_(order), mutexes_(mutexes), by_literal_(domain.literal_count() * 2),
        stamp_(domain.actions().size(), 0) {}

  SubgoalPlan run(const ConditionSet& goal) {
    if (!goal.consistent()) throw InconsistentGoal(domain_.condition_name(goal));
    SubgoalPlan plan;
    plan.goal = goal;
    std::vector<bt::NodePtr> children{bt::condition_group(goal)};

    if (world::holds(goal, s0_)) {
      plan.cost = Cost{};
      plan.expanded = plan.subtree = bt::fallback(std::move(children));
      plan.explored = 1;
      return plan;
    }

    discover(goal, Cost{}, 0);
    while (auto next = pop()) {
      const std::uint32_t id = *next;
      // Copies: nodes_ may grow while neighbours are generated.
      const ConditionSet c = nodes_[id].cond;
      const Cost dc = nodes_[id].cost;
      if (id != 0 && subsumed(c)) continue;
      mark_expanded(id);
      ++plan.expanded_count;

      for (ActionId a : candidates(c)) {
        const auto& eff = domain_.effects(a);
        if (c.intersects(eff.del)) continue;
        ConditionSet ca = domain_.action(a).pre.unite(c.minus(eff.add));
        if (!ca.consistent() || subsumed(ca)) continue;
        if (mutexes_ && mutexes_->unreachable(ca)) continue;
        relax(std::move(ca), dc + domain_.action(a).cost, a);
      }

      if (id == 0) continue;
      const ActionId via = nodes_[id].via;
      bt::NodePtr m = bt::sequence({bt::condition_group(c), bt::action(via)});
      children.push_back(m);
      plan.records.push_back({c, dc, m, via});
      if (world::holds(c, s0_)) {
        plan.cost = dc;
        break;
      }
    }
    plan.explored = nodes_.size();
    plan.expanded = plan.subtree = bt::fallback(std::move(children));
    return plan;
  }

 private:
  struct SearchNode {
    ConditionSet cond;
    Cost cost;
    ActionId via = 0;
    bool expanded = false;
  };

  using HeapEntry = std::tuple<Cost, std::uint64_t, std::uint32_t>;

  void discover(ConditionSet c, Cost cost, ActionId via) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    index_.emplace(c, id);
    nodes_.push_back({std::move(c), cost, via, false});
    push(id);
  }

  void relax(ConditionSet ca, Cost cost, ActionId via) {
    auto it = index_.find(ca);
    if (it == index_.end()) {
      discover(std::move(ca), cost, via);
      return;
    }
    if (order_ == Order::Fifo) return;  // first discovery wins
    SearchNode& n = nodes_[it->second];
    if (n.expanded || cost >= n.cost) return;
    n.cost = cost;
    n.via = via;
    push(it->second);
  }

  void push(std::uint32_t id) {
    if (order_ == Order::Fifo) {
      fifo_.push_back(id);
    } else {
      heap_.emplace(nodes_[id].cost, seq_++, id);
    }
  }

  std::optional<std::uint32_t> pop() {
    if (order_ == Order::Fifo) {
      if (fifo_.empty()) return std::nullopt;
      auto id = fifo_.front();
      fifo_.pop_front();
      return id;
    }
    while (!heap_.empty()) {
      auto [cost, seq, id] = heap_.top();
      heap_.pop();
      // Lazy deletion of entries superseded by a cheaper update.
      if (nodes_[id].expanded || cost != nodes_[id].cost) continue;
      return id;
    }
    return std::nullopt;
  }

  void mark_expanded(std::uint32_t id) {
    nodes_[id].expanded = true;
    const auto& c = nodes_[id].cond;
    if (c.empty()) {
      empty_expanded_ = true;
    } else {
      // Any literal of c works as the key; the least used keeps lists short.
      Lit key = c.lits().front();
      for (Lit l : c) {
        if (by_literal_[l.code()].size() < by_literal_[key.code()].size()) key = l;
      }
      by_literal_[key.code()].emplace_back(signature(c), id);
    }
  }

  // True if some expanded condition is a subset of c. Each expanded
  // condition is indexed under one of its literals, which must then occur in c.
  bool subsumed(const ConditionSet& c) const {
    if (empty_expanded_) return true;
    const std::uint64_t sig = signature(c);
    for (Lit l : c) {
      for (const auto& [s, id] : by_literal_[l.code()]) {
        if ((s & ~sig) == 0 && nodes_[id].cond.subset_of(c)) return true;
      }
    }
    return false;
  }

  // One bit per literal modulo 64: a subset's signature is contained in its superset's.
  static std::uint64_t signature(const ConditionSet& c) {
    std::uint64_t sig = 0;
    for (Lit l : c) sig |= std::uint64_t{1} << (l.code() * 0x9E3779B1U >> 26);
    return sig;
  }

  std::vector<ActionId> candidates(const ConditionSet& c) {
    ++epoch_;
    std::vector<ActionId> out;
    for (Lit l : c) {
      for (ActionId a : domain_.touching(l)) {
        if (stamp_[a] != epoch_) {
          stamp_[a] = epoch_;
          out.push_back(a);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const Domain& domain_;
  const WorldState& s0_;
  Order order_;
  const detail::Mutexes* mutexes_;
  std::vector<SearchNode> nodes_;
  std::unordered_map<ConditionSet, std::uint32_t, world::ConditionSetHash> index_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap_;
  std::deque<std::uint32_t> fifo_;
  std::uint64_t seq_ = 0;
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> by_literal_;  // (signature, node)
  bool empty_expanded_ = false;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// The pair table is quadratic in the literal count; larger domains search without it.
constexpr std::size_t kMutexLiteralLimit = 2048;

std::optional<detail::Mutexes> mutexes_for(const Domain& domain, const WorldState& s0) {
  if (domain.literal_count() > kMutexLiteralLimit) return std::nullopt;
  return detail::Mutexes(domain, s0);
}

const detail::Mutexes* ptr(const std::optional<detail::Mutexes>& m) { return m ? &*m : nullptr; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void collect(PlanResult& result) {
  for (const auto& sg : result.subgoals) {
    result.stats.explored += sg.explored;
    result.stats.expanded += sg.expanded_count;
    result.expanded_conditions.insert(result.expanded_conditions.end(), sg.records.begin(), sg.records.end());
  }
}

std::vector<SubgoalPlan> with_expanded_as_subtree(std::vector<SubgoalPlan> plans) {
  for (auto& p : plans) p.subtree = p.expanded;
  return plans;
}

}  // namespace

SubgoalPlan plan_subgoal(const ConditionSet& goal, const WorldState& s0, const Domain& domain) {
  const auto mutexes = mutexes_for(domain, s0);
  return ConditionSearch(domain, s0, Order::CostFirst, ptr(mutexes)).run(goal);
}

// ---- compaction -----------------------------------------------------------------

namespace {

// A Fallback child guarded by `guard`; rendered as Sequence(guard, body).
struct Guarded {
  ConditionSet guard;
  bt::NodePtr body;
};

bt::NodePtr guarded_node(const ConditionSet& guard, bt::NodePtr body) {
  if (guard.empty()) return body;
  return bt::sequence({bt::condition_group(guard), std::move(body)});
}

Guarded as_guarded(const bt::NodePtr& child) {
  if (child->kind == bt::NodeKind::Sequence && child->children.size() == 2 &&
      child->children[0]->kind == bt::NodeKind::ConditionGroup) {
    return {child->children[0]->cond, child->children[1]};
  }
  return {{}, child};
}

}  // namespace

bt::NodePtr compact(const bt::NodePtr& subtree, int max_depth) {
  if (max_depth <= 0 || subtree->kind != bt::NodeKind::Fallback || subtree->children.size() < 3) return subtree;

  std::vector<Guarded> items;
  for (std::size_t i = 1; i < subtree->children.size(); ++i) items.push_back(as_guarded(subtree->children[i]));

  for (int level = 0; level < max_depth; ++level) {
    std::vector<Guarded> next;
    bool merged_any = false;
    for (std::size_t i = 0; i < items.size(); i += 2) {
      if (i + 1 == items.size()) {
        next.push_back(items[i]);
        break;
      }
      const Guarded& a = items[i];
      const Guarded& b = items[i + 1];
      ConditionSet common = a.guard.intersect(b.guard);
      if (common.empty()) {
        next.push_back(a);
        next.push_back(b);
        continue;
      }
      bt::NodePtr inner = bt::fallback({guarded_node(a.guard.minus(common), a.body),
                                        guarded_node(b.guard.minus(common), b.body)});
      next.push_back({std::move(common), std::move(inner)});
      merged_any = true;
    }
    items = std::move(next);
    if (!merged_any) break;
  }

  std::vector<bt::NodePtr> children{subtree->children.front()};
  for (auto& item : items) children.push_back(guarded_node(item.guard, std::move(item.body)));
  return bt::fallback(std::move(children));
}

// ---- assembly -------------------------------------------------------------------

namespace {

std::vector<SubgoalPlan> order_by_cost(std::vector<SubgoalPlan> plans) {
  std::stable_sort(plans.begin(), plans.end(), [](const SubgoalPlan& a, const SubgoalPlan& b) {
    if (a.cost.has_value() != b.cost.has_value()) return a.cost.has_value();
    return a.cost && *a.cost < *b.cost;
  });
  return plans;
}

std::vector<SubgoalPlan> infeasible_last(std::vector<SubgoalPlan> plans) {
  std::stable_partition(plans.begin(), plans.end(), [](const SubgoalPlan& p) { return p.cost.has_value(); });
  return plans;
}

bt::NodePtr fallback_over_feasible(const std::vector<SubgoalPlan>& plans) {
  std::vector<bt::NodePtr> children;
  for (const auto& p : plans) {
    if (p.cost) children.push_back(p.subtree);
  }
  if (children.empty()) throw NoFeasibleSubgoal();
  return bt::fallback(std::move(children));
}

}  // namespace

bt::NodePtr assemble(const std::vector<SubgoalPlan>& plans) { return fallback_over_feasible(order_by_cost(plans)); }

PlanResult obtea(const std::vector<ConditionSet>& sub_goals, const WorldState& s0, const Domain& domain,
                 int compaction_depth) {
  const auto start = Clock::now();
  PlanResult result;
  result.method = compaction_depth > 0 ? "OBTEA" : "OBTEA-NC";

  const auto mutexes = mutexes_for(domain, s0);
  std::vector<SubgoalPlan> plans;
  for (std::size_t i = 0; i < sub_goals.size(); ++i) {
    plans.push_back(ConditionSearch(domain, s0, Order::CostFirst, ptr(mutexes)).run(sub_goals[i]));
    plans.back().clause_index = i;
  }
  const auto compaction_start = Clock::now();
  for (auto& p : plans) p.subtree = compact(p.expanded, compaction_depth);
  result.stats.compaction_seconds = seconds_since(compaction_start);

  result.subgoals = order_by_cost(std::move(plans));
  result.tree = fallback_over_feasible(result.subgoals);
  result.uncompacted_tree = fallback_over_feasible(with_expanded_as_subtree(result.subgoals));
  result.stats.planning_seconds = seconds_since(start);
  collect(result);
  return result;
}

PlanResult obtea(const logic::Dnf& goal, const WorldState& s0, const Domain& domain, int compaction_depth) {
  return obtea(parse_sub_goals(goal, domain), s0, domain, compaction_depth);
}

PlanResult bt_expansion_baseline(const std::vector<ConditionSet>& sub_goals, const WorldState& s0,
                                 const Domain& domain) {
  const auto start = Clock::now();
  PlanResult result;
  result.method = "baseline";
  const auto mutexes = mutexes_for(domain, s0);
  std::vector<SubgoalPlan> plans;
  for (std::size_t i = 0; i < sub_goals.size(); ++i) {
    plans.push_back(ConditionSearch(domain, s0, Order::Fifo, ptr(mutexes)).run(sub_goals[i]));
    plans.back().clause_index = i;
  }
  result.subgoals = infeasible_last(std::move(plans));
  result.tree = result.uncompacted_tree = fallback_over_feasible(result.subgoals);
  result.stats.planning_seconds = seconds_since(start);
  collect(result);
  return result;
}

PlanResult bt_expansion_baseline(const logic::Dnf& goal, const WorldState& s0, const Domain& domain) {
  return bt_expansion_baseline(parse_sub_goals(goal, domain), s0, domain);
}

// ---- oracle -----------------------------------------------------------------------

MaybeCost dijkstra_oracle(const WorldState& s0, const std::vector<ConditionSet>& goals, const Domain& domain,
                          std::size_t state_bound) {
  struct Seen {
    Cost cost;
    std::size_t index;
  };
  std::unordered_map<WorldState, Seen, world::WorldStateHash> seen;
  std::vector<WorldState> states;
  std::vector<char> closed;
  using Entry = std::tuple<Cost, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;

  seen.emplace(s0, Seen{Cost{}, 0});
  states.push_back(s0);
  closed.push_back(0);
  open.emplace(Cost{}, seq++, 0);

  while (!open.empty()) {
    auto [cost, order, idx] = open.top();
    open.pop();
    if (closed[idx]) continue;
    closed[idx] = 1;
    const WorldState s = states[idx];
    for (const auto& g : goals) {
      if (world::holds(g, s)) return cost;
    }
    for (const auto& a : domain.actions()) {
      if (!world::holds(a.pre, s)) continue;
      WorldState next = world::apply(a, s);
      const Cost nc = cost + a.cost;
      auto it = seen.find(next);
      if (it == seen.end()) {
        if (states.size() >= state_bound) throw StateSpaceTooLarge(state_bound);
        seen.emplace(next, Seen{nc, states.size()});
        states.push_back(std::move(next));
        closed.push_back(0);
        open.emplace(nc, seq++, states.size() - 1);
      } else if (nc < it->second.cost) {
        it->second.cost = nc;
        open.emplace(nc, seq++, it->second.index);
      }
    }
  }
  return std::nullopt;
}

MaybeCost dijkstra_oracle(const WorldState& s0, const logic::Dnf& goal, const Domain& domain,
                          std::size_t state_bound) {
  return dijkstra_oracle(s0, parse_sub_goals(goal, domain), domain, state_bound);
}

}  // namespace optbt::planner
