#pragma once

// Natural-language instruction to goal formula: prompt assembly, output
// checking, a retry loop that feeds checker errors back to the model with
// growing blacklists, and GA/IA scoring over a labelled dataset. The model
// sits behind CompletionBackend so tests can script it.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optbt/logic.hpp"

namespace optbt::intent {

inline constexpr std::string_view kPromptTemplateVersion = "prompt-v1";

struct Demonstration {
  std::string instruction;
  std::string goal;
};

std::string default_system_text();

struct PromptConfig {
  /// Source of the object listing and predicate signatures.
  logic::Vocabulary vocabulary;
  std::vector<Demonstration> demonstrations;
  std::string system_text = default_system_text();

  /// Throws std::invalid_argument if a demonstration goal does not parse
  /// or validate against the vocabulary.
  void validate() const;
};

struct FeedbackState {
  int attempt = 0;
  std::set<std::string> blacklist_predicates;
  std::set<std::string> blacklist_objects;
  std::vector<std::string> last_errors;
  std::string last_output;

  bool empty() const { return last_errors.empty() && blacklist_predicates.empty() && blacklist_objects.empty(); }
};

/// Deterministic prompt text. A non-empty `fb` adds a correction section
/// with the previous output, its errors and the blacklisted tokens.
std::string build_prompt(const PromptConfig& config, std::string_view instruction, const FeedbackState& fb = {});

/// The instruction embedded by build_prompt, or an empty string.
std::string instruction_of(std::string_view prompt);

struct CheckError {
  enum class Kind { Syntax, Semantic };
  Kind kind;
  std::string message;
  std::optional<logic::SemanticError> semantic;
};

struct CheckResult {
  std::string candidate;  // the extracted formula text
  std::optional<logic::Wff> wff;
  std::vector<CheckError> errors;

  bool ok() const { return wff.has_value(); }
};

/// Picks a candidate line from `output` and runs the syntax and semantic
/// checkers on it. Lines are trimmed, stripped of backticks and of a leading
/// "Goal:". The first line that parses and validates wins; failing that, the
/// first line that parses; failing that, the whole trimmed response.
CheckResult check(std::string_view output, const logic::Vocabulary& vocab);

class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  /// Throws BackendUnavailable on transport failure.
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Replies from a per-instruction script. Each instruction's responses are
/// consumed in order and the last one repeats once the script runs out.
/// Unknown instructions get `fallback`.
class ScriptedBackend : public CompletionBackend {
 public:
  explicit ScriptedBackend(std::map<std::string, std::vector<std::string>> script, std::string fallback = "");
  std::string complete(const std::string& prompt) override;
  std::size_t calls() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::string>> script_;
  std::map<std::string, std::size_t> cursor_;
  std::string fallback_;
  std::size_t calls_ = 0;
};

/// Replies with `responses` in call order regardless of the prompt; the last
/// one repeats. Throws BackendUnavailable if constructed empty and called.
class SequenceBackend : public CompletionBackend {
 public:
  explicit SequenceBackend(std::vector<std::string> responses);
  std::string complete(const std::string& prompt) override;
  std::size_t calls() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

struct Exchange {
  std::string prompt;
  std::string response;
};

/// Plays back a recorded transcript in order. An entry with a non-empty
/// prompt must match the request exactly; an empty prompt matches anything.
/// Throws BackendUnavailable when the transcript is exhausted or diverges.
class ReplayBackend : public CompletionBackend {
 public:
  explicit ReplayBackend(std::vector<Exchange> transcript);
  std::string complete(const std::string& prompt) override;

 private:
  std::mutex mu_;
  std::vector<Exchange> transcript_;
  std::size_t next_ = 0;
};

/// Forwards to another backend and keeps every exchange.
class RecordingBackend : public CompletionBackend {
 public:
  explicit RecordingBackend(CompletionBackend& inner) : inner_(inner) {}
  std::string complete(const std::string& prompt) override;
  std::vector<Exchange> exchanges() const;

 private:
  CompletionBackend& inner_;
  mutable std::mutex mu_;
  std::vector<Exchange> log_;
};

struct HttpBackendConfig {
  std::string url;  // http(s)://host[:port]/path
  std::string token;
  std::chrono::milliseconds timeout{30000};
  int transport_retries = 2;

  /// Reads OPTBT_BACKEND_URL, OPTBT_BACKEND_TOKEN and optionally
  /// OPTBT_BACKEND_TIMEOUT_MS. Throws BackendUnavailable if the URL is unset.
  static HttpBackendConfig from_env();
};

/// POSTs {"prompt": ...} as JSON with a bearer token and reads the
/// "completion" field of the JSON reply.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  HttpBackendConfig config_;
  std::string base_;
  std::string path_;
};

struct Attempt {
  std::string prompt;
  std::string response;
  std::string candidate;
  std::vector<std::string> errors;
};

struct InterpretOutcome {
  enum class Status { Goal, Failed };

  Status status = Status::Failed;
  std::optional<logic::Wff> wff;
  std::optional<logic::Dnf> normalized;
  int attempts_used = 0;
  std::vector<Attempt> transcript;
  /// Feedback state in effect for each attempt.
  std::vector<FeedbackState> feedback;

  bool ok() const { return status == Status::Goal; }
};

/// Up to max_retries + 1 attempts. Blacklists grow from unknown predicate and
/// unknown object errors. Throws std::invalid_argument if max_retries < 0;
/// BackendUnavailable propagates.
InterpretOutcome interpret(std::string_view instruction, CompletionBackend& backend, const PromptConfig& config,
                           int max_retries);

struct DatasetItem {
  std::string instruction;
  std::string goal;
  std::string difficulty;  // optional label, e.g. Easy/Medium/Hard
};

struct ItemRecord {
  std::string instruction;
  std::string ground_truth;
  std::string output;  // printed goal, empty when interpretation failed
  bool grammatical = false;
  bool equivalent = false;
  int attempts = 0;
};

struct DatasetMetrics {
  double ga = 0;
  double ia = 0;
  std::vector<ItemRecord> records;
};

/// Truth-table equivalence, falling back to comparing DNF clause sets when
/// the formulas mention more atoms than the exhaustive check allows.
bool goals_equivalent(const logic::Wff& a, const logic::Wff& b);

/// Throws std::invalid_argument if a ground-truth goal fails to validate.
DatasetMetrics evaluate_dataset(const std::vector<DatasetItem>& items, CompletionBackend& backend,
                                const PromptConfig& config, int max_retries);

/// One JSON object per line with "instruction", "goal" and optional "difficulty".
std::vector<DatasetItem> parse_dataset(std::string_view jsonl);
std::vector<DatasetItem> load_dataset(const std::filesystem::path& path);
/// One JSON object per line with "prompt" and "response".
std::vector<Exchange> parse_transcript(std::string_view jsonl);
std::vector<Exchange> load_transcript(const std::filesystem::path& path);
std::string transcript_jsonl(const std::vector<Exchange>& exchanges);

}  // namespace optbt::intent
