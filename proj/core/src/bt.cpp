#include "optbt/bt.hpp"

#include <stdexcept>

namespace optbt::bt {

using world::ConditionSet;
using world::Lit;
using world::WorldState;

NodePtr condition(Lit lit) { return std::make_shared<const Node>(Node{NodeKind::Condition, lit, {}, 0, {}}); }

NodePtr condition_group(ConditionSet cond) {
  return std::make_shared<const Node>(Node{NodeKind::ConditionGroup, {}, std::move(cond), 0, {}});
}

NodePtr action(world::ActionId id) { return std::make_shared<const Node>(Node{NodeKind::Action, {}, {}, id, {}}); }

NodePtr sequence(std::vector<NodePtr> children) {
  if (children.empty()) throw std::invalid_argument("Sequence needs at least one child");
  return std::make_shared<const Node>(Node{NodeKind::Sequence, {}, {}, 0, std::move(children)});
}

NodePtr fallback(std::vector<NodePtr> children) {
  if (children.empty()) throw std::invalid_argument("Fallback needs at least one child");
  return std::make_shared<const Node>(Node{NodeKind::Fallback, {}, {}, 0, std::move(children)});
}

NodePtr negate(NodePtr child) {
  if (!child) throw std::invalid_argument("Not needs a child");
  return std::make_shared<const Node>(Node{NodeKind::Not, {}, {}, 0, {std::move(child)}});
}

bool same_tree(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Condition:
      return a.lit == b.lit;
    case NodeKind::ConditionGroup:
      return a.cond == b.cond;
    case NodeKind::Action:
      return a.action == b.action;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

std::size_t node_count(const Node& root) {
  std::size_t n = 1;
  for (const auto& c : root.children) n += node_count(*c);
  return n;
}

TickStatus tick(const Node& node, const WorldState& s, std::uint64_t& condition_ticks) {
  switch (node.kind) {
    case NodeKind::Condition:
      ++condition_ticks;
      return s.holds(node.lit) ? TickStatus::success() : TickStatus::failure();
    case NodeKind::ConditionGroup:
      for (Lit l : node.cond) {
        ++condition_ticks;
        if (!s.holds(l)) return TickStatus::failure();
      }
      return TickStatus::success();
    case NodeKind::Action:
      return TickStatus::running(node.action);
    case NodeKind::Sequence:
      for (const auto& child : node.children) {
        TickStatus st = tick(*child, s, condition_ticks);
        if (st.kind != TickStatus::Kind::Success) return st;
      }
      return TickStatus::success();
    case NodeKind::Fallback:
      for (const auto& child : node.children) {
        TickStatus st = tick(*child, s, condition_ticks);
        if (st.kind != TickStatus::Kind::Failure) return st;
      }
      return TickStatus::failure();
    case NodeKind::Not: {
      TickStatus st = tick(*node.children.front(), s, condition_ticks);
      if (st.kind == TickStatus::Kind::Success) return TickStatus::failure();
      if (st.kind == TickStatus::Kind::Failure) return TickStatus::success();
      return st;
    }
  }
  return TickStatus::failure();
}

TickStatus tick(const Node& root, const WorldState& s) {
  std::uint64_t ignored = 0;
  return tick(root, s, ignored);
}

ExecTrace simulate(const Node& root, const WorldState& s0, const world::Domain& domain, std::uint64_t max_root_ticks) {
  if (max_root_ticks < 1) throw std::invalid_argument("simulate: max_root_ticks must be at least 1");
  ExecTrace trace;
  trace.states.push_back(s0);
  while (trace.root_ticks < max_root_ticks) {
    ++trace.root_ticks;
    TickStatus st = tick(root, trace.states.back(), trace.condition_ticks);
    if (st.kind == TickStatus::Kind::Success) {
      trace.outcome = ExecTrace::Outcome::Success;
      return trace;
    }
    if (st.kind == TickStatus::Kind::Failure) break;
    const auto& a = domain.action(st.action);
    trace.states.push_back(world::apply(a, trace.states.back()));
    trace.executed.push_back(st.action);
    trace.total_cost += a.cost;
  }
  trace.outcome = ExecTrace::Outcome::Stuck;
  return trace;
}

// ---- rendering ----------------------------------------------------------------

namespace {

std::string label(const Node& n, const world::Domain& domain) {
  switch (n.kind) {
    case NodeKind::Condition:
      return domain.literal_name(n.lit);
    case NodeKind::ConditionGroup:
      return domain.condition_name(n.cond);
    case NodeKind::Action:
      return domain.action(n.action).name;
    case NodeKind::Sequence:
      return "→";
    case NodeKind::Fallback:
      return "?";
    case NodeKind::Not:
      return "!";
  }
  return {};
}

void render_text(const Node& n, const world::Domain& domain, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  switch (n.kind) {
    case NodeKind::Condition:
      out += "cond " + label(n, domain);
      break;
    case NodeKind::ConditionGroup:
      // Braces keep a one-literal group distinguishable from a single leaf.
      out += "cond {" + (n.cond.empty() ? std::string() : label(n, domain)) + "}";
      break;
    case NodeKind::Action:
      out += "act " + label(n, domain);
      break;
    default:
      out += label(n, domain);
  }
  out += '\n';
  for (const auto& c : n.children) render_text(*c, domain, depth + 1, out);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::size_t render_dot(const Node& n, const world::Domain& domain, std::size_t& next_id, std::string& out) {
  const std::size_t id = next_id++;
  std::string attrs;
  switch (n.kind) {
    case NodeKind::Condition:
    case NodeKind::ConditionGroup:
      attrs = "shape=ellipse";
      break;
    case NodeKind::Action:
      attrs = "shape=box, style=\"rounded,filled\", fillcolor=lightgrey";
      break;
    case NodeKind::Not:
      attrs = "shape=diamond";
      break;
    default:
      attrs = "shape=box";
  }
  out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(label(n, domain)) + "\", " + attrs + "];\n";
  for (const auto& c : n.children) {
    std::size_t child = render_dot(*c, domain, next_id, out);
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) + ";\n";
  }
  return id;
}

}  // namespace

std::string render(const Node& root, const world::Domain& domain, RenderFormat format) {
  std::string out;
  if (format == RenderFormat::Text) {
    render_text(root, domain, 0, out);
    return out;
  }
  out = "digraph BT {\n  ordering=out;\n";
  std::size_t next_id = 0;
  render_dot(root, domain, next_id, out);
  out += "}\n";
  return out;
}

}  // namespace optbt::bt
