#pragma once

// Random planning instances with a known solution path, and the harness that
// compares OBTEA, OBTEA without compaction and the baseline on them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optbt/cost.hpp"
#include "optbt/logic.hpp"
#include "optbt/planner.hpp"
#include "optbt/world.hpp"

namespace optbt::bench {

/// Generator parameters. Objects share one category; condition and action
/// predicates are unary, so there are num_objects * num_condition_predicates
/// ground literals and at most num_objects * num_action_predicates distinct
/// action names.
struct GenParams {
  std::string name = "custom";
  std::size_t num_objects = 4;
  std::size_t num_condition_predicates = 3;
  std::size_t num_action_predicates = 6;
  int mac = 0;  // each path action gets uniform [0, mac] extra copies
  int path_length = 4;
  std::size_t extra_action_count = 6;
  int goal_clause_count = 2;
  std::pair<int, int> cost_range{1, 20};
  std::uint64_t seed = 0;

  double initial_density = 0.5;       // chance that a literal is true in s0
  int max_set_size = 3;               // bound on pre/add/del/goal sizes
  double fresh_probability = 0.5;     // chance an add literal is currently false
  double negative_probability = 0.1;  // chance a pre or goal literal is negative
  int max_attempts = 64;

  /// Throws std::invalid_argument.
  void validate() const;

  /// "case0" .. "case9" mirror the ten benchmark scenarios by (|O|, |Pc|,
  /// |Pa|, MAC); "small" keeps the state space at most 2^12.
  static GenParams preset(std::string_view name);
  static std::vector<std::string> preset_names();
};

struct Witness {
  std::vector<std::string> actions;
  std::vector<world::WorldState> states;  // states.size() == actions.size() + 1
  std::size_t clause = 0;                 // goal clause the path reaches
};

struct Instance {
  GenParams params;
  world::Domain domain;
  world::WorldState s0;
  logic::Dnf goal;
  std::vector<world::ConditionSet> sub_goals;
  /// One solution path per goal clause.
  std::vector<Witness> witnesses;
};

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic in `params`. Throws GenerationFailed.
Instance generate(const GenParams& params);

/// Parameters for the i-th instance of a run: same as `base` with a seed
/// derived from (base.seed, i).
GenParams instance_params(const GenParams& base, std::size_t index);

/// Breadth-first count of states reachable from s0; nullopt once `cap` is exceeded.
std::optional<std::size_t> count_reachable_states(const world::Domain& domain, const world::WorldState& s0,
                                                  std::size_t cap);

/// Executed cost and condition ticks of a planner's tree simulated from s0.
struct MethodRun {
  std::string method;
  bool ok = false;
  Cost cost;
  std::uint64_t condition_ticks = 0;
  double planning_seconds = 0;
  std::string error;
};

MethodRun run_method(std::string_view method, const world::Domain& domain, const world::WorldState& s0,
                     const std::vector<world::ConditionSet>& sub_goals, int compaction_depth);

struct Row {
  std::string scenario;
  std::size_t instance = 0;
  std::string label;  // seed for generated instances, difficulty for café goals
  std::size_t literals = 0;
  std::size_t actions = 0;
  std::optional<std::size_t> states;
  MethodRun run;
};

struct Aggregate {
  std::string scenario;
  std::string method;
  std::size_t count = 0;
  std::size_t failures = 0;
  Cost cost_sum;  // over successful runs
  double mean_cost = 0;
  double mean_ticks = 0;
  double mean_seconds = 0;
  double mean_literals = 0;
  double mean_actions = 0;
};

struct ComparisonReport {
  std::vector<GenParams> scenarios;
  std::vector<Row> rows;  // instance-major, methods in a fixed order
  std::vector<Aggregate> aggregates;

  const Aggregate* find(std::string_view scenario, std::string_view method) const;

  /// Header: scenario,instance,label,literals,actions,states,method,ok,cost,condition_ticks[,planning_seconds]
  std::string rows_csv(bool include_timing = true) const;
  /// Header: scenario,method,count,failures,mean_cost,mean_condition_ticks,mean_literals,mean_actions[,mean_planning_seconds]
  std::string aggregates_csv(bool include_timing = true) const;
  std::string json(bool include_timing = true) const;
};

inline constexpr std::string_view kBaseline = "baseline";
inline constexpr std::string_view kObtea = "OBTEA";
inline constexpr std::string_view kObteaNc = "OBTEA-NC";

struct ComparisonOptions {
  std::size_t instances_per_case = 100;
  int compaction_depth = planner::kDefaultCompactionDepth;
  std::size_t state_count_cap = 0;  // 0 skips the reachable-state count
};

/// Per scenario: generate N instances, plan with each method, simulate from
/// s0. Planner failures are recorded in the row, not thrown.
ComparisonReport run_comparison(const std::vector<GenParams>& scenarios, const ComparisonOptions& options);

struct DepthCurve {
  std::vector<int> depths;
  std::vector<double> mean_ticks;                       // by depth
  std::vector<std::vector<std::uint64_t>> per_instance;  // [instance][depth]

  /// Header: depth,mean_condition_ticks
  std::string csv() const;
};

/// OBTEA at each compaction depth on the same N instances. Throws
/// std::invalid_argument if `depths` is empty.
DepthCurve ablate_depth(const GenParams& params, const std::vector<int>& depths, std::size_t instances);

/// Plans every goal of the dataset with the baseline and OBTEA. Rows carry
/// the goal's difficulty as label; aggregates are grouped by difficulty
/// (scenario "Easy", "Medium", ...) plus an "all" group.
ComparisonReport run_cafe_suite(const std::filesystem::path& goals_file, const std::filesystem::path& domain_file,
                                const std::filesystem::path& state_file, int compaction_depth);

}  // namespace optbt::bench
