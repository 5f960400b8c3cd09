// optbt: command-line front end for goal normalization, planning,
// instruction interpretation and the benchmark harness.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 goal syntax error, 3 goal
// semantic error, 4 no feasible sub-goal, 5 interpretation failed after all
// retries, 6 completion backend unavailable.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optbt/bench.hpp"
#include "optbt/bt.hpp"
#include "optbt/intent.hpp"
#include "optbt/logic.hpp"
#include "optbt/planner.hpp"
#include "optbt/world.hpp"

namespace {

using namespace optbt;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kSyntax = 2,
  kSemantic = 3,
  kNoFeasible = 4,
  kInterpretFailed = 5,
  kBackendUnavailable = 6,
};

struct ExitError {
  int code;
  std::string message;
};

std::string default_data(const std::string& rel) {
#ifdef OPTBT_DATA_DIR
  return std::string(OPTBT_DATA_DIR) + "/" + rel;
#else
  return "data/" + rel;
#endif
}

// Accepts "case3", "small", or a bare case number such as "3".
bench::GenParams preset_or_exit(const std::string& name) {
  const bool numeric = !name.empty() && name.find_first_not_of("0123456789") == std::string::npos;
  try {
    return bench::GenParams::preset(numeric ? "case" + name : name);
  } catch (const std::invalid_argument& e) {
    throw ExitError{kUsage, e.what()};
  }
}

logic::Wff parse_goal_or_exit(const std::string& text, const logic::Vocabulary& vocab) {
  try {
    return logic::parse_goal(text, vocab);
  } catch (const logic::SyntaxError& e) {
    throw ExitError{kSyntax, e.what()};
  } catch (const logic::SemanticErrors& e) {
    throw ExitError{kSemantic, e.what()};
  }
}

logic::Dnf normalize_or_exit(const logic::Wff& wff) {
  try {
    return logic::to_dnf(wff);
  } catch (const logic::EmptyGoal& e) {
    throw ExitError{kSemantic, e.what()};
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ExitError{kUsage, "not an integer list: " + text};
    }
  }
  if (out.empty()) throw ExitError{kUsage, "empty integer list"};
  return out;
}

// ---- shared planning options ----------------------------------------------------

struct PlanOptions {
  std::string state_file;
  std::string init;
  int depth = planner::kDefaultCompactionDepth;
  bool baseline = false;
  bool simulate = false;
  std::string format = "text";
  std::uint64_t max_ticks = 100000;

  void add_to(CLI::App& app) {
    auto* state = app.add_option("--state", state_file, "State file: positive literals, one per line or '&'-separated");
    app.add_option("--init", init, "Initial state as literals, e.g. \"RobotNear(Bar) & Exists(Coffee)\"")
        ->excludes(state);
    app.add_option("--depth", depth, "Compaction depth (0 disables compaction)")->check(CLI::NonNegativeNumber);
    app.add_flag("--baseline", baseline, "Use the cost-blind baseline planner");
    app.add_flag("--simulate", simulate, "Execute the tree from the initial state and print the trace");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
    app.add_option("--max-ticks", max_ticks, "Tick budget for --simulate")->check(CLI::PositiveNumber);
  }

  world::WorldState initial_state(const world::Domain& domain) const {
    try {
      if (!state_file.empty()) return world::load_state(state_file, domain);
      return world::parse_state(init, domain);
    } catch (const world::DomainParseError& e) {
      throw ExitError{kSemantic, std::string("initial state: ") + e.what()};
    } catch (const std::out_of_range& e) {
      throw ExitError{kSemantic, std::string("initial state: ") + e.what()};
    }
  }
};

world::Domain load_domain_or_exit(const std::string& path) {
  try {
    return world::load_domain(path);
  } catch (const std::exception& e) {
    throw ExitError{kUsage, "domain " + path + ": " + e.what()};
  }
}

int run_plan(const logic::Dnf& goal, const world::Domain& domain, const PlanOptions& opt) {
  const world::WorldState s0 = opt.initial_state(domain);
  planner::PlanResult result;
  try {
    result = opt.baseline ? planner::bt_expansion_baseline(goal, s0, domain) : planner::obtea(goal, s0, domain, opt.depth);
  } catch (const planner::NoFeasibleSubgoal& e) {
    throw ExitError{kNoFeasible, e.what()};
  } catch (const planner::InconsistentGoal& e) {
    throw ExitError{kSemantic, e.what()};
  }

  for (const auto& sg : result.subgoals) {
    if (!sg.cost) {
      std::cerr << "warning: sub-goal [" << sg.clause_index + 1 << "] " << domain.condition_name(sg.goal)
                << " is unreachable and was dropped\n";
    }
  }

  std::optional<bt::ExecTrace> trace;
  if (opt.simulate) trace = bt::simulate(*result.tree, s0, domain, opt.max_ticks);

  if (opt.format == "dot") {
    std::cout << bt::render(*result.tree, domain, bt::RenderFormat::Dot);
    return kOk;
  }
  if (opt.format == "json") {
    auto doc = nlohmann::json::parse(planner::report_json(result, domain, true));
    if (trace) {
      nlohmann::json actions = nlohmann::json::array();
      for (auto id : trace->executed) actions.push_back(domain.action(id).name);
      doc["simulation"] = {{"outcome", trace->succeeded() ? "Success" : "Stuck"},
                           {"cost", trace->total_cost.str()},
                           {"root_ticks", trace->root_ticks},
                           {"condition_ticks", trace->condition_ticks},
                           {"actions", actions}};
    }
    std::cout << doc.dump(2) << "\n";
    return kOk;
  }

  std::cout << "method: " << result.method << "\n";
  std::cout << "sub-goals:\n";
  for (const auto& sg : result.subgoals) {
    std::cout << "  [" << sg.clause_index + 1 << "] " << (sg.cost ? "cost " + sg.cost->str() : "infeasible") << "  "
              << domain.condition_name(sg.goal) << "\n";
  }
  std::cout << "best cost: " << to_string(result.best_cost()) << "\n";
  std::cout << "explored: " << result.stats.explored << "  expanded: " << result.stats.expanded
            << "  planning seconds: " << result.stats.planning_seconds << "\n";
  std::cout << "tree:\n" << bt::render(*result.tree, domain, bt::RenderFormat::Text);
  if (trace) {
    std::cout << "simulation: " << (trace->succeeded() ? "Success" : "Stuck") << ", cost "
              << trace->total_cost.str() << ", root ticks " << trace->root_ticks << ", condition ticks "
              << trace->condition_ticks << "\n";
    for (std::size_t i = 0; i < trace->executed.size(); ++i) {
      std::cout << "  " << i + 1 << ". " << domain.action(trace->executed[i]).name << "\n";
    }
  }
  return kOk;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExitError{kUsage, "cannot write " + path};
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal behavior trees from logic goals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "optbt 0.1.0");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Print every interpretation attempt to stderr");

  // normalize
  std::string domain_path, goal_text, norm_format = "text";
  auto* normalize = app.add_subcommand("normalize", "Print the DNF clauses of a goal, one per line");
  normalize->add_option("--domain", domain_path, "Domain file")->required();
  normalize->add_option("--goal", goal_text, "Goal formula")->required();
  normalize->add_option("--format", norm_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  // plan
  PlanOptions plan_opt;
  auto* plan = app.add_subcommand("plan", "Build a behavior tree for a goal");
  plan->add_option("--domain", domain_path, "Domain file")->required();
  plan->add_option("--goal", goal_text, "Goal formula")->required();
  plan_opt.add_to(*plan);

  // interpret
  std::string instruction, replay_path, mock_response, demos_path, record_path;
  int max_retries = 5;
  bool then_plan = false;
  PlanOptions interp_plan_opt;
  auto* interp = app.add_subcommand("interpret", "Turn an instruction into a validated goal");
  interp->add_option("--domain", domain_path, "Domain file")->required();
  interp->add_option("--instruction", instruction, "Natural-language instruction")->required();
  auto* replay_opt = interp->add_option("--replay", replay_path, "Replay a recorded transcript (JSONL)");
  interp->add_option("--mock-response", mock_response, "Answer every prompt with this text")->excludes(replay_opt);
  interp->add_option("--demos", demos_path, "Demonstrations (JSONL with instruction/goal)");
  interp->add_option("--max-retries", max_retries, "Retries after the first attempt")->check(CLI::NonNegativeNumber);
  interp->add_option("--record", record_path, "Write the prompt/response transcript to this file");
  interp->add_flag("--plan", then_plan, "Plan for the interpreted goal");
  interp_plan_opt.add_to(*interp);

  // bench
  std::vector<std::string> cases;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  int bench_depth = planner::kDefaultCompactionDepth;
  std::string bench_format = "csv", out_path;
  bool rows = false, no_timing = false;
  std::size_t count_states = 0;
  auto* bench = app.add_subcommand("bench", "Compare baseline, OBTEA and OBTEA-NC on generated instances");
  bench->add_option("--case", cases, "Preset: case0..case9 (or just 0..9) or small; repeatable")->required();
  bench->add_option("--n", n, "Instances per case");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--depth", bench_depth, "Compaction depth for OBTEA")->check(CLI::NonNegativeNumber);
  bench->add_option("--format", bench_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--rows", rows, "Per-instance rows instead of per-case means (csv)");
  bench->add_flag("--no-timing", no_timing, "Omit planning-time columns");
  bench->add_option("--count-states", count_states, "Count reachable states up to this cap (0 skips)");
  bench->add_option("--out", out_path, "Output file (default stdout)");

  // ablate
  std::string ablate_case = "case3", depths_text = "0,1,2,3,4";
  auto* ablate = app.add_subcommand("ablate", "Mean condition ticks of OBTEA per compaction depth");
  ablate->add_option("--case", ablate_case, "Preset name");
  ablate->add_option("--n", n, "Instances");
  ablate->add_option("--seed", seed, "Base seed");
  ablate->add_option("--depths", depths_text, "Comma-separated depths");
  ablate->add_option("--out", out_path, "Output file (default stdout)");

  // cafe
  std::string goals_path = default_data("cafe/cafe_goals.jsonl");
  std::string cafe_domain = default_data("cafe/cafe.domain");
  std::string cafe_state = default_data("cafe/cafe.state");
  auto* cafe = app.add_subcommand("cafe", "Plan every café goal with the baseline and OBTEA");
  cafe->add_option("--goals", goals_path, "Goals file (JSONL)");
  cafe->add_option("--domain", cafe_domain, "Domain file");
  cafe->add_option("--state", cafe_state, "Initial state file");
  cafe->add_option("--depth", bench_depth, "Compaction depth")->check(CLI::NonNegativeNumber);
  cafe->add_option("--format", bench_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cafe->add_flag("--rows", rows, "Per-goal rows instead of per-difficulty means (csv)");
  cafe->add_flag("--no-timing", no_timing, "Omit planning-time columns");
  cafe->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*normalize) {
      const auto domain = load_domain_or_exit(domain_path);
      const auto dnf = normalize_or_exit(parse_goal_or_exit(goal_text, domain.vocabulary()));
      if (norm_format == "json") {
        nlohmann::json clauses = nlohmann::json::array();
        for (const auto& c : dnf.clauses) {
          nlohmann::json lits = nlohmann::json::array();
          for (const auto& l : c) lits.push_back(l.str());
          clauses.push_back(lits);
        }
        std::cout << nlohmann::json{{"clauses", clauses}}.dump(2) << "\n";
      } else {
        for (const auto& c : dnf.clauses) std::cout << logic::clause_str(c) << "\n";
      }
      return kOk;
    }

    if (*plan) {
      const auto domain = load_domain_or_exit(domain_path);
      return run_plan(normalize_or_exit(parse_goal_or_exit(goal_text, domain.vocabulary())), domain, plan_opt);
    }

    if (*interp) {
      const auto domain = load_domain_or_exit(domain_path);
      intent::PromptConfig config{domain.vocabulary(), {}};
      if (!demos_path.empty()) {
        for (auto& item : intent::load_dataset(demos_path)) config.demonstrations.push_back({item.instruction, item.goal});
        config.validate();
      }
      std::unique_ptr<intent::CompletionBackend> backend;
      if (!replay_path.empty()) {
        backend = std::make_unique<intent::ReplayBackend>(intent::load_transcript(replay_path));
      } else if (!mock_response.empty()) {
        backend = std::make_unique<intent::SequenceBackend>(std::vector<std::string>{mock_response});
      } else {
        try {
          backend = std::make_unique<intent::HttpBackend>(intent::HttpBackendConfig::from_env());
        } catch (const intent::BackendUnavailable& e) {
          throw ExitError{kBackendUnavailable, std::string("backend unavailable: ") + e.what()};
        }
      }
      intent::RecordingBackend recorder(*backend);
      intent::InterpretOutcome outcome;
      try {
        outcome = intent::interpret(instruction, recorder, config, max_retries);
      } catch (const intent::BackendUnavailable& e) {
        if (!record_path.empty()) write_text(record_path, intent::transcript_jsonl(recorder.exchanges()));
        throw ExitError{kBackendUnavailable, std::string("backend unavailable: ") + e.what()};
      }
      if (!record_path.empty()) write_text(record_path, intent::transcript_jsonl(recorder.exchanges()));
      if (verbose && outcome.ok()) {
        for (std::size_t i = 0; i < outcome.transcript.size(); ++i) {
          const auto& a = outcome.transcript[i];
          std::cerr << "attempt " << i + 1 << ": " << a.candidate << (a.errors.empty() ? "  (accepted)" : "") << "\n";
          for (const auto& e : a.errors) std::cerr << "  - " << e << "\n";
        }
      }
      if (!outcome.ok()) {
        std::cerr << "interpretation failed after " << outcome.attempts_used << " attempts\n";
        for (std::size_t i = 0; i < outcome.transcript.size(); ++i) {
          const auto& a = outcome.transcript[i];
          std::cerr << "attempt " << i + 1 << ": " << a.candidate << "\n";
          for (const auto& e : a.errors) std::cerr << "  - " << e << "\n";
        }
        return kInterpretFailed;
      }
      std::cout << logic::print(*outcome.wff) << "\n";
      if (then_plan) return run_plan(*outcome.normalized, domain, interp_plan_opt);
      return kOk;
    }

    if (*bench) {
      std::vector<bench::GenParams> scenarios;
      for (const auto& c : cases) {
        auto p = preset_or_exit(c);
        p.seed = seed;
        scenarios.push_back(p);
      }
      auto report = bench::run_comparison(scenarios, {n, bench_depth, count_states});
      if (bench_format == "json") write_text(out_path, report.json(!no_timing) + "\n");
      else write_text(out_path, rows ? report.rows_csv(!no_timing) : report.aggregates_csv(!no_timing));
      return kOk;
    }

    if (*ablate) {
      auto p = preset_or_exit(ablate_case);
      p.seed = seed;
      write_text(out_path, bench::ablate_depth(p, parse_int_list(depths_text), n).csv());
      return kOk;
    }

    if (*cafe) {
      auto report = bench::run_cafe_suite(goals_path, cafe_domain, cafe_state, bench_depth);
      if (bench_format == "json") write_text(out_path, report.json(!no_timing) + "\n");
      else write_text(out_path, rows ? report.rows_csv(!no_timing) : report.aggregates_csv(!no_timing));
      return kOk;
    }
  } catch (const ExitError& e) {
    std::cerr << "optbt: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "optbt: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
