#include "optbt/intent.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace optbt::intent {

using logic::SemanticError;
using logic::Wff;

namespace {

constexpr std::string_view kInstructionMarker = "[instruction]\nInstruction: ";

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string clean_line(std::string_view line) {
  std::string s = trim(line);
  s.erase(std::remove(s.begin(), s.end(), '`'), s.end());
  s = trim(s);
  for (std::string_view prefix : {"Goal:", "goal:"}) {
    if (s.starts_with(prefix)) {
      s = trim(std::string_view(s).substr(prefix.size()));
      break;
    }
  }
  return s;
}

}  // namespace

std::string default_system_text() {
  return "You translate instructions for a service robot into goal formulas. A goal is a logical formula over "
         "ground literals Predicate(Object,...), combined with & (and), | (or), ! (not) and parentheses. Use only "
         "the objects and condition predicates listed below, with arguments of the listed categories. Reply with "
         "the goal formula on a single line.";
}

void PromptConfig::validate() const {
  for (std::size_t i = 0; i < demonstrations.size(); ++i) {
    try {
      logic::parse_goal(demonstrations[i].goal, vocabulary);
    } catch (const std::exception& e) {
      throw std::invalid_argument("demonstration " + std::to_string(i + 1) + " has an invalid goal: " + e.what());
    }
  }
}

std::string build_prompt(const PromptConfig& config, std::string_view instruction, const FeedbackState& fb) {
  const auto& vocab = config.vocabulary;
  std::string p;
  p += "[system]\n" + config.system_text + "\n\n";

  p += "[objects]\n";
  for (const auto& cat : vocab.categories()) {
    std::string line;
    for (const auto& name : vocab.objects_of(cat)) line += (line.empty() ? "" : ", ") + name;
    p += cat + ": " + line + "\n";
  }
  p += "\n[condition predicates]\n";
  for (const auto& pred : vocab.condition_predicates()) p += pred.str() + "\n";

  if (!config.demonstrations.empty()) {
    p += "\n[examples]\n";
    for (const auto& d : config.demonstrations) p += "Instruction: " + d.instruction + "\nGoal: " + d.goal + "\n";
  }

  p += "\n";
  p += kInstructionMarker;
  p += instruction;
  p += "\nGoal:\n";

  if (!fb.empty()) {
    p += "\n[correction]\n";
    p += "Your previous answer was:\n  " + fb.last_output + "\n";
    if (!fb.last_errors.empty()) {
      p += "It was rejected for these reasons:\n";
      for (const auto& e : fb.last_errors) p += "  - " + e + "\n";
    }
    if (!fb.blacklist_predicates.empty()) p += "Do not use these predicates: " + join(fb.blacklist_predicates) + "\n";
    if (!fb.blacklist_objects.empty()) p += "Do not use these objects: " + join(fb.blacklist_objects) + "\n";
    p += "Reply with a corrected goal formula only.\n";
  }
  return p;
}

std::string instruction_of(std::string_view prompt) {
  auto at = prompt.rfind(kInstructionMarker);
  if (at == std::string_view::npos) return {};
  auto rest = prompt.substr(at + kInstructionMarker.size());
  return std::string(rest.substr(0, rest.find('\n')));
}

CheckResult check(std::string_view output, const logic::Vocabulary& vocab) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(output)};
  for (std::string line; std::getline(in, line);) {
    std::string s = clean_line(line);
    if (!s.empty()) lines.push_back(std::move(s));
  }

  std::optional<std::pair<std::string, Wff>> first_parsed;
  for (const auto& line : lines) {
    try {
      Wff w = logic::parse_wff(line);
      if (logic::validate(w, vocab).empty()) return CheckResult{line, w, {}};
      if (!first_parsed) first_parsed.emplace(line, w);
    } catch (const logic::SyntaxError&) {
    }
  }

  CheckResult r;
  if (first_parsed) {
    r.candidate = first_parsed->first;
    for (auto& e : logic::validate(first_parsed->second, vocab)) {
      r.errors.push_back({CheckError::Kind::Semantic, e.message(), e});
    }
    return r;
  }
  r.candidate = clean_line(output);
  try {
    Wff w = logic::parse_wff(r.candidate);
    auto errs = logic::validate(w, vocab);
    if (errs.empty()) {
      r.wff = w;
      return r;
    }
    for (auto& e : errs) r.errors.push_back({CheckError::Kind::Semantic, e.message(), e});
  } catch (const logic::SyntaxError& e) {
    r.errors.push_back({CheckError::Kind::Syntax, e.what(), std::nullopt});
  }
  return r;
}

InterpretOutcome interpret(std::string_view instruction, CompletionBackend& backend, const PromptConfig& config,
                           int max_retries) {
  if (max_retries < 0) throw std::invalid_argument("max_retries must be nonnegative");
  InterpretOutcome out;
  FeedbackState fb;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    fb.attempt = attempt;
    out.feedback.push_back(fb);
    Attempt rec;
    rec.prompt = build_prompt(config, instruction, fb);
    rec.response = backend.complete(rec.prompt);
    CheckResult checked = check(rec.response, config.vocabulary);
    rec.candidate = checked.candidate;
    for (const auto& e : checked.errors) rec.errors.push_back(e.message);

    if (checked.ok()) {
      try {
        logic::Dnf dnf = logic::to_dnf(*checked.wff);
        out.transcript.push_back(std::move(rec));
        out.status = InterpretOutcome::Status::Goal;
        out.wff = checked.wff;
        out.normalized = std::move(dnf);
        out.attempts_used = attempt + 1;
        return out;
      } catch (const logic::EmptyGoal& e) {
        rec.errors.emplace_back(e.what());
      }
    }

    for (const auto& e : checked.errors) {
      if (!e.semantic) continue;
      if (e.semantic->kind == SemanticError::Kind::UnknownPredicate) fb.blacklist_predicates.insert(e.semantic->token);
      if (e.semantic->kind == SemanticError::Kind::UnknownObject) fb.blacklist_objects.insert(e.semantic->token);
    }
    fb.last_errors = rec.errors;
    fb.last_output = rec.candidate;
    out.transcript.push_back(std::move(rec));
  }
  out.attempts_used = max_retries + 1;
  return out;
}

bool goals_equivalent(const Wff& a, const Wff& b) {
  try {
    return logic::wff_equivalent(a, b);
  } catch (const logic::TooManyAtoms&) {
    auto clauses = [](const Wff& w) {
      std::vector<logic::Clause> cs;
      try {
        cs = logic::to_dnf(w).clauses;
      } catch (const logic::EmptyGoal&) {
      }
      std::sort(cs.begin(), cs.end());
      return cs;
    };
    return clauses(a) == clauses(b);
  }
}

DatasetMetrics evaluate_dataset(const std::vector<DatasetItem>& items, CompletionBackend& backend,
                                const PromptConfig& config, int max_retries) {
  std::vector<Wff> truths;
  truths.reserve(items.size());
  for (const auto& item : items) {
    try {
      truths.push_back(logic::parse_goal(item.goal, config.vocabulary));
    } catch (const std::exception& e) {
      throw std::invalid_argument("ground truth '" + item.goal + "' is invalid: " + e.what());
    }
  }

  DatasetMetrics m;
  std::size_t grammatical = 0, equivalent = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    InterpretOutcome o = interpret(items[i].instruction, backend, config, max_retries);
    ItemRecord rec{items[i].instruction, items[i].goal, {}, o.ok(), false, o.attempts_used};
    if (o.ok()) {
      rec.output = logic::print(*o.wff);
      rec.equivalent = goals_equivalent(*o.wff, truths[i]);
    }
    grammatical += rec.grammatical;
    equivalent += rec.equivalent;
    m.records.push_back(std::move(rec));
  }
  if (!items.empty()) {
    m.ga = static_cast<double>(grammatical) / static_cast<double>(items.size());
    m.ia = static_cast<double>(equivalent) / static_cast<double>(items.size());
  }
  return m;
}

// ---- files ---------------------------------------------------------------

namespace {

template <typename Fn>
void for_each_json_line(std::string_view jsonl, Fn fn) {
  std::istringstream in{std::string(jsonl)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected a JSON object");
    fn(j, lineno);
  }
}

std::string required_string(const nlohmann::json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw std::invalid_argument("line " + std::to_string(lineno) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<DatasetItem> parse_dataset(std::string_view jsonl) {
  std::vector<DatasetItem> items;
  for_each_json_line(jsonl, [&](const nlohmann::json& j, std::size_t lineno) {
    DatasetItem item{required_string(j, "instruction", lineno), required_string(j, "goal", lineno), {}};
    if (auto it = j.find("difficulty"); it != j.end() && it->is_string()) item.difficulty = it->get<std::string>();
    items.push_back(std::move(item));
  });
  return items;
}

std::vector<DatasetItem> load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::vector<Exchange> parse_transcript(std::string_view jsonl) {
  std::vector<Exchange> out;
  for_each_json_line(jsonl, [&](const nlohmann::json& j, std::size_t lineno) {
    std::string prompt;
    if (auto it = j.find("prompt"); it != j.end() && it->is_string()) prompt = it->get<std::string>();
    out.push_back({std::move(prompt), required_string(j, "response", lineno)});
  });
  return out;
}

std::vector<Exchange> load_transcript(const std::filesystem::path& path) {
  return parse_transcript(read_file(path));
}

std::string transcript_jsonl(const std::vector<Exchange>& exchanges) {
  std::string out;
  for (const auto& e : exchanges) {
    out += nlohmann::json{{"prompt", e.prompt}, {"response", e.response}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace optbt::intent
