#include "optbt/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <span>
#include <unordered_set>

#include "json.hpp"
#include "optbt/bt.hpp"
#include "optbt/intent.hpp"

namespace optbt::bench {

using world::AtomId;
using world::ConditionSet;
using world::GroundAction;
using world::Lit;
using world::WorldState;

// ---- parameters ------------------------------------------------------------

void GenParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("GenParams: " + msg); };
  if (num_objects == 0) fail("num_objects must be positive");
  if (num_condition_predicates == 0) fail("num_condition_predicates must be positive");
  if (num_action_predicates == 0) fail("num_action_predicates must be positive");
  if (mac < 0) fail("MAC must be nonnegative");
  if (path_length < 1) fail("path_length must be at least 1");
  if (goal_clause_count < 1) fail("goal_clause_count must be at least 1");
  if (cost_range.first < 0 || cost_range.second < cost_range.first) fail("cost_range must satisfy 0 <= lo <= hi");
  if (max_set_size < 1) fail("max_set_size must be at least 1");
  for (double p : {initial_density, fresh_probability, negative_probability}) {
    if (!(p >= 0 && p <= 1)) fail("probabilities must lie in [0, 1]");
  }
  if (max_attempts < 1) fail("max_attempts must be at least 1");
}

namespace {

GenParams scenario(std::string name, std::size_t objects, std::size_t pc, std::size_t pa, int mac) {
  GenParams p;
  p.name = std::move(name);
  p.num_objects = objects;
  p.num_condition_predicates = pc;
  p.num_action_predicates = pa;
  p.mac = mac;
  p.path_length = 5;
  p.extra_action_count = objects * pa / 2;
  p.goal_clause_count = 2;
  return p;
}

}  // namespace

GenParams GenParams::preset(std::string_view name) {
  static const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, int>> table = {
      {100, 10, 10, 0}, {100, 10, 50, 0}, {500, 50, 50, 0}, {100, 10, 10, 5}, {100, 30, 10, 5},
      {100, 50, 10, 5}, {100, 50, 30, 5}, {100, 50, 50, 5}, {300, 50, 50, 5}, {500, 50, 50, 5},
  };
  if (name == "small") {
    GenParams p;
    p.name = "small";
    p.num_objects = 4;
    p.num_condition_predicates = 3;
    p.num_action_predicates = 10;
    p.mac = 2;
    p.path_length = 3;
    p.extra_action_count = 8;
    p.goal_clause_count = 2;
    p.negative_probability = 0.2;
    return p;
  }
  if (name.starts_with("case") && name.size() == 5 && name[4] >= '0' && name[4] <= '9') {
    auto [o, pc, pa, mac] = table[static_cast<std::size_t>(name[4] - '0')];
    return scenario(std::string(name), o, pc, pa, mac);
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> GenParams::preset_names() {
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back("case" + std::to_string(i));
  names.emplace_back("small");
  return names;
}

GenParams instance_params(const GenParams& base, std::size_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = base.seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  GenParams p = base;
  p.seed = z ^ (z >> 31);
  return p;
}

// ---- generator -------------------------------------------------------------

namespace {

struct Effect {
  ConditionSet pre;
  std::vector<AtomId> add;
  std::vector<AtomId> del;
};

class Generator {
 public:
  explicit Generator(const GenParams& p)
      : p_(p), rng_(p.seed), atom_count_(p.num_objects * p.num_condition_predicates) {}

  std::size_t atom_count() const { return atom_count_; }

  WorldState random_state() {
    std::bernoulli_distribution coin(p_.initial_density);
    std::vector<AtomId> atoms;
    for (AtomId a = 0; a < atom_count_; ++a) {
      if (coin(rng_)) atoms.push_back(a);
    }
    return WorldState(std::move(atoms));
  }

  // An action applicable in `s` that makes at least one false literal true.
  // Its precondition includes a literal the previous step made true, when
  // there is one, so the path cannot be reordered or cut short.
  template <typename State>
  Effect step(const State& s, const std::vector<AtomId>& previous_fresh) {
    Effect e;
    std::vector<Lit> pre;
    if (!previous_fresh.empty()) pre.push_back(Lit::pos(pick(previous_fresh)));
    for (int i = static_cast<int>(pre.size()), n = size(1); i < n; ++i) {
      if (chance(p_.negative_probability) || s.size() == 0) {
        if (auto a = absent_atom(s)) pre.push_back(Lit::neg(*a));
      } else {
        pre.push_back(Lit::pos(present_atom(s)));
      }
    }
    e.pre = ConditionSet(std::move(pre));

    std::set<AtomId> add;
    for (int i = 0, n = size(1); i < n; ++i) {
      if (i == 0 || chance(p_.fresh_probability) || s.size() == 0) {
        if (auto a = absent_atom(s)) add.insert(*a);
      } else {
        add.insert(present_atom(s));
      }
    }
    std::set<AtomId> del;
    if (s.size() > 0) {
      for (int i = 0, n = size(0); i < n; ++i) {
        AtomId a = present_atom(s);
        if (!add.contains(a) && !e.pre.contains(Lit::pos(a))) del.insert(a);
      }
    }
    e.add.assign(add.begin(), add.end());
    e.del.assign(del.begin(), del.end());
    return e;
  }

  // A goal clause that holds in `final_state` and not in `start`. It
  // contains a literal that the last step made true and that was false in
  // `start`; the remaining literals are drawn from `final_state`.
  std::optional<ConditionSet> goal(const WorldState& start, const WorldState& final_state,
                                   const std::vector<AtomId>& last_fresh) {
    std::vector<AtomId> anchors;
    for (AtomId a : last_fresh) {
      if (!start.contains(a) && final_state.contains(a)) anchors.push_back(a);
    }
    if (anchors.empty()) return std::nullopt;
    std::vector<Lit> lits{Lit::pos(pick(anchors))};
    for (int i = 1, n = size(1); i < n; ++i) {
      if (chance(p_.negative_probability)) {
        if (auto a = absent_atom(final_state)) lits.push_back(Lit::neg(*a));
      } else {
        lits.push_back(Lit::pos(present_atom(final_state)));
      }
    }
    return ConditionSet(std::move(lits));
  }

  int cost() { return std::uniform_int_distribution<int>(p_.cost_range.first, p_.cost_range.second)(rng_); }
  int copies() { return std::uniform_int_distribution<int>(0, p_.mac)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  int size(int lo) { return std::uniform_int_distribution<int>(lo, p_.max_set_size)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  AtomId any_atom() { return static_cast<AtomId>(index(atom_count_)); }
  template <typename State>
  AtomId present_atom(const State& s) {
    return s.atoms()[index(s.size())];
  }
  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }
  template <typename State>
  std::optional<AtomId> absent_atom(const State& s) {
    if (s.size() >= atom_count_) return std::nullopt;
    for (;;) {
      AtomId a = any_atom();
      if (!s.contains(a)) return a;
    }
  }

  const GenParams& p_;
  std::mt19937_64 rng_;
  std::size_t atom_count_;
};

WorldState apply_effect(const Effect& e, const WorldState& s) {
  std::vector<AtomId> out;
  std::set_difference(s.atoms().begin(), s.atoms().end(), e.del.begin(), e.del.end(), std::back_inserter(out));
  std::vector<AtomId> merged;
  std::set_union(out.begin(), out.end(), e.add.begin(), e.add.end(), std::back_inserter(merged));
  return WorldState(std::move(merged));
}

logic::Vocabulary make_vocabulary(const GenParams& p) {
  std::vector<logic::ObjectDecl> objects;
  for (std::size_t i = 0; i < p.num_objects; ++i) objects.push_back({"O" + std::to_string(i), "obj"});
  std::vector<logic::PredicateDecl> conditions, actions;
  for (std::size_t i = 0; i < p.num_condition_predicates; ++i) conditions.push_back({"P" + std::to_string(i), {"obj"}});
  for (std::size_t i = 0; i < p.num_action_predicates; ++i) actions.push_back({"A" + std::to_string(i), {"obj"}});
  return logic::Vocabulary(std::move(objects), std::move(conditions), std::move(actions));
}

struct Built {
  WorldState s0;
  std::vector<ConditionSet> goals;
  std::vector<std::vector<Effect>> paths;
  std::vector<std::vector<WorldState>> path_states;
};

// A state updated in place, for long random walks over large vocabularies.
class WalkState {
 public:
  explicit WalkState(const WorldState& s) : atoms_(s.atoms().begin(), s.atoms().end()) {}
  std::span<const AtomId> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool contains(AtomId a) const { return std::binary_search(atoms_.begin(), atoms_.end(), a); }

  void apply(const Effect& e) {
    for (AtomId a : e.del) {
      auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
      if (it != atoms_.end() && *it == a) atoms_.erase(it);
    }
    for (AtomId a : e.add) {
      auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
      if (it == atoms_.end() || *it != a) atoms_.insert(it, a);
    }
  }

 private:
  std::vector<AtomId> atoms_;
};

// Atoms that `e` makes true when applied in `before`.
template <typename State>
std::vector<AtomId> fresh_atoms(const Effect& e, const State& before) {
  std::vector<AtomId> out;
  for (AtomId x : e.add) {
    if (!before.contains(x)) out.push_back(x);
  }
  return out;
}

std::optional<Built> build_paths(Generator& gen, const GenParams& p) {
  Built b;
  b.s0 = gen.random_state();
  // Extends `effects`/`states` (states already ending in the start state).
  auto walk = [&](int length, std::vector<Effect>& effects, std::vector<WorldState>& states) {
    for (int i = 0; i < length; ++i) {
      const WorldState& s = states.back();
      std::vector<AtomId> prev =
          effects.empty() ? std::vector<AtomId>{} : fresh_atoms(effects.back(), states[states.size() - 2]);
      effects.push_back(gen.step(s, prev));
      states.push_back(apply_effect(effects.back(), s));
    }
  };

  std::vector<Effect> trunk;
  std::vector<WorldState> trunk_states{b.s0};
  walk(p.path_length, trunk, trunk_states);
  for (int clause = 0; clause < p.goal_clause_count; ++clause) {
    std::vector<Effect> effects = trunk;
    std::vector<WorldState> states = trunk_states;
    if (clause > 0) {
      // Share a prefix of the trunk, then diverge.
      std::size_t t = gen.index(static_cast<std::size_t>(p.path_length));
      effects.resize(t);
      states.resize(t + 1);
      walk(p.path_length - static_cast<int>(t), effects, states);
    }
    auto g = gen.goal(b.s0, states.back(), fresh_atoms(effects.back(), states[states.size() - 2]));
    if (!g || !g->consistent()) return std::nullopt;
    b.goals.push_back(*g);
    b.paths.push_back(std::move(effects));
    b.path_states.push_back(std::move(states));
  }
  return b;
}

}  // namespace

Instance generate(const GenParams& params) {
  params.validate();
  const logic::Vocabulary vocab = make_vocabulary(params);
  world::AtomTable atoms = world::Domain::ground_atoms(vocab);

  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    GenParams p = params;
    if (attempt > 0) p = instance_params(params, static_cast<std::size_t>(attempt) + 1000000);
    Generator gen(p);
    auto built = build_paths(gen, p);
    if (!built) continue;

    // Distinct action names A<j>(O<k>) drawn from a shuffled pool.
    std::vector<std::pair<std::size_t, std::size_t>> pool;
    for (std::size_t j = 0; j < p.num_action_predicates; ++j) {
      for (std::size_t k = 0; k < p.num_objects; ++k) pool.emplace_back(j, k);
    }
    std::shuffle(pool.begin(), pool.end(), gen.rng());
    std::size_t next_name = 0;
    auto make = [&](const Effect& e) -> std::optional<GroundAction> {
      if (next_name >= pool.size()) return std::nullopt;
      auto [j, k] = pool[next_name++];
      return GroundAction{"A" + std::to_string(j) + "(O" + std::to_string(k) + ")", e.pre, e.add, e.del,
                          Cost::from_integer(gen.cost())};
    };

    std::vector<GroundAction> actions;
    std::vector<Witness> witnesses;
    bool names_ok = true;
    // Shared trunk prefixes become the same actions.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_use;  // (clause, step) -> action index
    for (std::size_t c = 0; c < built->paths.size() && names_ok; ++c) {
      Witness w;
      w.clause = c;
      w.states = built->path_states[c];
      for (std::size_t i = 0; i < built->paths[c].size(); ++i) {
        const Effect& e = built->paths[c][i];
        std::optional<std::size_t> shared;
        for (std::size_t prev = 0; prev < c && !shared; ++prev) {
          if (i < built->paths[prev].size() && built->path_states[prev][i] == w.states[i] &&
              built->paths[prev][i].pre == e.pre && built->paths[prev][i].add == e.add &&
              built->paths[prev][i].del == e.del) {
            shared = first_use.at({prev, i});
          }
        }
        if (shared) {
          first_use[{c, i}] = *shared;
          w.actions.push_back(actions[*shared].name);
          continue;
        }
        auto a = make(e);
        if (!a) {
          names_ok = false;
          break;
        }
        first_use[{c, i}] = actions.size();
        w.actions.push_back(a->name);
        actions.push_back(std::move(*a));
        for (int n = gen.copies(); n > 0 && names_ok; --n) {
          auto copy = make(e);
          if (!copy) names_ok = false;
          else actions.push_back(std::move(*copy));
        }
      }
      witnesses.push_back(std::move(w));
    }
    // Distractors form random walks of up to path_length steps that start
    // on a solution path, so they offer alternative routes of similar depth.
    std::vector<const WorldState*> starts;
    for (const auto& states : built->path_states) {
      for (const auto& st : states) starts.push_back(&st);
    }
    for (std::size_t made = 0; made < p.extra_action_count && names_ok;) {
      WalkState s(*starts[gen.index(starts.size())]);
      std::vector<AtomId> prev;
      for (std::size_t k = 0, len = 1 + gen.index(static_cast<std::size_t>(p.path_length));
           k < len && made < p.extra_action_count && names_ok; ++k, ++made) {
        Effect e = gen.step(s, prev);
        prev = fresh_atoms(e, s);
        s.apply(e);
        auto a = make(e);
        if (!a) names_ok = false;
        else actions.push_back(std::move(*a));
      }
    }
    if (!names_ok) {
      throw GenerationFailed("GenParams '" + p.name + "' need more distinct action names than |O| * |Pa| = " +
                             std::to_string(pool.size()));
    }
    std::shuffle(actions.begin(), actions.end(), gen.rng());

    world::Domain domain(vocab, atoms, std::move(actions));
    logic::Dnf dnf;
    for (const auto& g : built->goals) {
      logic::Clause clause;
      for (Lit l : g) clause.push_back({domain.atoms().atom(l.atom()), l.negated()});
      std::sort(clause.begin(), clause.end());
      dnf.clauses.push_back(std::move(clause));
    }
    try {
      dnf = logic::to_dnf(logic::dnf_to_wff(dnf));
    } catch (const logic::EmptyGoal&) {
      continue;
    }
    std::vector<ConditionSet> sub_goals = planner::parse_sub_goals(dnf, domain);

    // Keep only witnesses whose clause survived normalization, re-indexed.
    std::vector<Witness> kept;
    for (auto& w : witnesses) {
      auto it = std::find(sub_goals.begin(), sub_goals.end(), built->goals[w.clause]);
      if (it == sub_goals.end()) continue;
      w.clause = static_cast<std::size_t>(it - sub_goals.begin());
      kept.push_back(std::move(w));
    }
    return Instance{params, std::move(domain), built->s0, std::move(dnf), std::move(sub_goals), std::move(kept)};
  }
  throw GenerationFailed("no valid instance after " + std::to_string(params.max_attempts) + " attempts");
}

std::optional<std::size_t> count_reachable_states(const world::Domain& domain, const WorldState& s0,
                                                  std::size_t cap) {
  std::unordered_set<WorldState, world::WorldStateHash> seen{s0};
  std::vector<WorldState> frontier{s0};
  while (!frontier.empty()) {
    WorldState s = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& a : domain.actions()) {
      if (!world::holds(a.pre, s)) continue;
      WorldState next = world::apply(a, s);
      if (seen.insert(next).second) {
        if (seen.size() > cap) return std::nullopt;
        frontier.push_back(std::move(next));
      }
    }
  }
  return seen.size();
}

// ---- harness ---------------------------------------------------------------

namespace {

void simulate_into(MethodRun& run, const bt::NodePtr& tree, const world::Domain& domain, const WorldState& s0) {
  bt::ExecTrace trace = bt::simulate(*tree, s0, domain);
  run.condition_ticks = trace.condition_ticks;
  run.cost = trace.total_cost;
  run.ok = trace.succeeded();
  if (!run.ok) run.error = "simulation did not reach the goal";
}

// OBTEA and OBTEA-NC share one search; the uncompacted tree comes for free.
std::vector<MethodRun> run_all(const world::Domain& domain, const WorldState& s0,
                               const std::vector<ConditionSet>& sub_goals, int depth) {
  std::vector<MethodRun> runs(3);
  runs[0].method = kBaseline;
  runs[1].method = kObtea;
  runs[2].method = kObteaNc;
  try {
    auto base = planner::bt_expansion_baseline(sub_goals, s0, domain);
    runs[0].planning_seconds = base.stats.planning_seconds;
    simulate_into(runs[0], base.tree, domain, s0);
  } catch (const std::exception& e) {
    runs[0].error = e.what();
  }
  try {
    auto res = planner::obtea(sub_goals, s0, domain, depth);
    runs[1].planning_seconds = res.stats.planning_seconds;
    runs[2].planning_seconds = res.stats.planning_seconds - res.stats.compaction_seconds;
    simulate_into(runs[1], res.tree, domain, s0);
    simulate_into(runs[2], res.uncompacted_tree, domain, s0);
  } catch (const std::exception& e) {
    runs[1].error = runs[2].error = e.what();
  }
  return runs;
}

std::vector<Aggregate> aggregate(const std::vector<Row>& rows, bool by_label) {
  std::vector<Aggregate> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    const std::string& key = by_label ? r.label : r.scenario;
    auto [it, inserted] = index.try_emplace({key, r.run.method}, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().scenario = key;
      out.back().method = r.run.method;
    }
    Aggregate& a = out[it->second];
    ++a.count;
    a.mean_literals += static_cast<double>(r.literals);
    a.mean_actions += static_cast<double>(r.actions);
    if (!r.run.ok) {
      ++a.failures;
      continue;
    }
    a.cost_sum += r.run.cost;
    a.mean_ticks += static_cast<double>(r.run.condition_ticks);
    a.mean_seconds += r.run.planning_seconds;
  }
  for (auto& a : out) {
    const double ok = static_cast<double>(a.count - a.failures);
    if (ok > 0) {
      a.mean_cost = a.cost_sum.to_double() / ok;
      a.mean_ticks /= ok;
      a.mean_seconds /= ok;
    }
    a.mean_literals /= static_cast<double>(a.count);
    a.mean_actions /= static_cast<double>(a.count);
  }
  return out;
}

MethodRun failed_run(std::string_view method, std::string error) {
  MethodRun run;
  run.method = method;
  run.error = std::move(error);
  return run;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

MethodRun run_method(std::string_view method, const world::Domain& domain, const WorldState& s0,
                     const std::vector<ConditionSet>& sub_goals, int compaction_depth) {
  for (auto& run : run_all(domain, s0, sub_goals, compaction_depth)) {
    if (run.method == method) return run;
  }
  throw std::invalid_argument("unknown method '" + std::string(method) + "'");
}

const Aggregate* ComparisonReport::find(std::string_view scenario, std::string_view method) const {
  for (const auto& a : aggregates) {
    if (a.scenario == scenario && a.method == method) return &a;
  }
  return nullptr;
}

std::string ComparisonReport::rows_csv(bool include_timing) const {
  std::string out = "scenario,instance,label,literals,actions,states,method,ok,cost,condition_ticks";
  out += include_timing ? ",planning_seconds\n" : "\n";
  for (const auto& r : rows) {
    out += csv_field(r.scenario) + "," + std::to_string(r.instance) + "," + csv_field(r.label) + "," +
           std::to_string(r.literals) + "," + std::to_string(r.actions) + "," +
           (r.states ? std::to_string(*r.states) : "") + "," + r.run.method + "," + (r.run.ok ? "1" : "0") + "," +
           (r.run.ok ? r.run.cost.str() : "") + "," + std::to_string(r.run.condition_ticks);
    if (include_timing) out += "," + fmt(r.run.planning_seconds);
    out += "\n";
  }
  return out;
}

std::string ComparisonReport::aggregates_csv(bool include_timing) const {
  std::string out = "scenario,method,count,failures,mean_cost,mean_condition_ticks,mean_literals,mean_actions";
  out += include_timing ? ",mean_planning_seconds\n" : "\n";
  for (const auto& a : aggregates) {
    out += csv_field(a.scenario) + "," + a.method + "," + std::to_string(a.count) + "," + std::to_string(a.failures) +
           "," + fmt(a.mean_cost) + "," + fmt(a.mean_ticks) + "," + fmt(a.mean_literals) + "," + fmt(a.mean_actions);
    if (include_timing) out += "," + fmt(a.mean_seconds);
    out += "\n";
  }
  return out;
}

std::string ComparisonReport::json(bool include_timing) const {
  using nlohmann::json;
  json doc;
  doc["scenarios"] = json::array();
  for (const auto& s : scenarios) {
    doc["scenarios"].push_back({{"name", s.name},
                                {"objects", s.num_objects},
                                {"condition_predicates", s.num_condition_predicates},
                                {"action_predicates", s.num_action_predicates},
                                {"mac", s.mac},
                                {"path_length", s.path_length},
                                {"extra_actions", s.extra_action_count},
                                {"goal_clauses", s.goal_clause_count},
                                {"cost_range", {s.cost_range.first, s.cost_range.second}},
                                {"seed", s.seed}});
  }
  doc["aggregates"] = json::array();
  for (const auto& a : aggregates) {
    json j = {{"scenario", a.scenario},       {"method", a.method},         {"count", a.count},
              {"failures", a.failures},       {"mean_cost", a.mean_cost},   {"mean_condition_ticks", a.mean_ticks},
              {"mean_literals", a.mean_literals}, {"mean_actions", a.mean_actions}};
    if (include_timing) j["mean_planning_seconds"] = a.mean_seconds;
    doc["aggregates"].push_back(std::move(j));
  }
  doc["rows"] = json::array();
  for (const auto& r : rows) {
    json j = {{"scenario", r.scenario},
              {"instance", r.instance},
              {"label", r.label},
              {"literals", r.literals},
              {"actions", r.actions},
              {"states", r.states ? json(*r.states) : json(nullptr)},
              {"method", r.run.method},
              {"ok", r.run.ok},
              {"cost", r.run.ok ? json(r.run.cost.str()) : json(nullptr)},
              {"condition_ticks", r.run.condition_ticks}};
    if (!r.run.error.empty()) j["error"] = r.run.error;
    if (include_timing) j["planning_seconds"] = r.run.planning_seconds;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2);
}

ComparisonReport run_comparison(const std::vector<GenParams>& scenarios, const ComparisonOptions& options) {
  ComparisonReport report;
  report.scenarios = scenarios;
  for (const auto& base : scenarios) {
    for (std::size_t i = 0; i < options.instances_per_case; ++i) {
      GenParams p = instance_params(base, i);
      Row proto;
      proto.scenario = base.name;
      proto.instance = i;
      proto.label = std::to_string(p.seed);
      std::vector<MethodRun> runs;
      try {
        Instance inst = generate(p);
        proto.literals = inst.domain.literal_count();
        proto.actions = inst.domain.actions().size();
        if (options.state_count_cap > 0) {
          proto.states = count_reachable_states(inst.domain, inst.s0, options.state_count_cap);
        }
        runs = run_all(inst.domain, inst.s0, inst.sub_goals, options.compaction_depth);
      } catch (const GenerationFailed& e) {
        for (auto m : {kBaseline, kObtea, kObteaNc}) runs.push_back(failed_run(m, e.what()));
      }
      for (auto& run : runs) {
        Row r = proto;
        r.run = std::move(run);
        report.rows.push_back(std::move(r));
      }
    }
  }
  report.aggregates = aggregate(report.rows, false);
  return report;
}

std::string DepthCurve::csv() const {
  std::string out = "depth,mean_condition_ticks\n";
  for (std::size_t i = 0; i < depths.size(); ++i) out += std::to_string(depths[i]) + "," + fmt(mean_ticks[i]) + "\n";
  return out;
}

DepthCurve ablate_depth(const GenParams& params, const std::vector<int>& depths, std::size_t instances) {
  if (depths.empty()) throw std::invalid_argument("ablate_depth needs at least one depth");
  DepthCurve curve;
  curve.depths = depths;
  curve.mean_ticks.assign(depths.size(), 0);
  for (std::size_t i = 0; i < instances; ++i) {
    Instance inst = generate(instance_params(params, i));
    // Search once; compaction is a pure function of the uncompacted subtrees.
    auto res = planner::obtea(inst.sub_goals, inst.s0, inst.domain, 0);
    std::vector<std::uint64_t> ticks;
    for (int d : depths) {
      std::vector<planner::SubgoalPlan> plans = res.subgoals;
      for (auto& sg : plans) {
        if (sg.cost) sg.subtree = planner::compact(sg.expanded, d);
      }
      auto tree = planner::assemble(plans);
      ticks.push_back(bt::simulate(*tree, inst.s0, inst.domain).condition_ticks);
    }
    for (std::size_t k = 0; k < depths.size(); ++k) curve.mean_ticks[k] += static_cast<double>(ticks[k]);
    curve.per_instance.push_back(std::move(ticks));
  }
  if (instances > 0) {
    for (auto& m : curve.mean_ticks) m /= static_cast<double>(instances);
  }
  return curve;
}

ComparisonReport run_cafe_suite(const std::filesystem::path& goals_file, const std::filesystem::path& domain_file,
                                const std::filesystem::path& state_file, int compaction_depth) {
  const world::Domain domain = world::load_domain(domain_file);
  const WorldState s0 = world::load_state(state_file, domain);
  const auto items = intent::load_dataset(goals_file);

  ComparisonReport report;
  GenParams echo;
  echo.name = "cafe";
  report.scenarios.push_back(echo);
  for (std::size_t i = 0; i < items.size(); ++i) {
    Row proto;
    proto.scenario = "cafe";
    proto.instance = i;
    proto.label = items[i].difficulty.empty() ? "unlabelled" : items[i].difficulty;
    proto.literals = domain.literal_count();
    proto.actions = domain.actions().size();
    std::vector<MethodRun> runs;
    try {
      auto sub_goals = planner::parse_sub_goals(logic::to_dnf(logic::parse_goal(items[i].goal, domain.vocabulary())),
                                                domain);
      runs = run_all(domain, s0, sub_goals, compaction_depth);
      runs.pop_back();  // OBTEA-NC is not part of this report
    } catch (const std::exception& e) {
      for (auto m : {kBaseline, kObtea}) runs.push_back(failed_run(m, e.what()));
    }
    for (auto& run : runs) {
      Row r = proto;
      r.run = std::move(run);
      report.rows.push_back(std::move(r));
    }
  }
  report.aggregates = aggregate(report.rows, true);
  auto all = aggregate(report.rows, false);
  for (auto& a : all) a.scenario = "all";
  report.aggregates.insert(report.aggregates.end(), all.begin(), all.end());
  return report;
}

}  // namespace optbt::bench
