#include "json.hpp"
#include "optbt/planner.hpp"

namespace optbt::planner {

std::string report_json(const PlanResult& result, const world::Domain& domain, bool include_tree) {
  using nlohmann::json;
  auto cost_json = [](const MaybeCost& c) -> json { return c ? json(c->str()) : json(nullptr); };

  json subgoals = json::array();
  for (const auto& sg : result.subgoals) {
    subgoals.push_back({{"clause", sg.clause_index},
                        {"goal", domain.condition_name(sg.goal)},
                        {"cost", cost_json(sg.cost)},
                        {"feasible", sg.cost.has_value()},
                        {"explored", sg.explored},
                        {"expanded", sg.expanded_count}});
  }
  json doc = {{"method", result.method},
              {"best_cost", cost_json(result.best_cost())},
              {"subgoals", subgoals},
              {"stats",
               {{"explored", result.stats.explored},
                {"expanded", result.stats.expanded},
                {"planning_seconds", result.stats.planning_seconds}}}};
  if (include_tree && result.tree) {
    doc["tree"] = bt::render(*result.tree, domain, bt::RenderFormat::Text);
  }
  return doc.dump(2);
}

}  // namespace optbt::planner
