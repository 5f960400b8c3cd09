#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "optbt/intent.hpp"

namespace optbt::intent {

ScriptedBackend::ScriptedBackend(std::map<std::string, std::vector<std::string>> script, std::string fallback)
    : script_(std::move(script)), fallback_(std::move(fallback)) {}

std::string ScriptedBackend::complete(const std::string& prompt) {
  std::lock_guard lock(mu_);
  ++calls_;
  auto it = script_.find(instruction_of(prompt));
  if (it == script_.end() || it->second.empty()) return fallback_;
  std::size_t& i = cursor_[it->first];
  const std::string& reply = it->second[std::min(i, it->second.size() - 1)];
  ++i;
  return reply;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

SequenceBackend::SequenceBackend(std::vector<std::string> responses) : responses_(std::move(responses)) {}

std::string SequenceBackend::complete(const std::string&) {
  std::lock_guard lock(mu_);
  if (responses_.empty()) throw BackendUnavailable("sequence backend has no responses");
  const std::string& reply = responses_[std::min(next_, responses_.size() - 1)];
  ++next_;
  return reply;
}

std::size_t SequenceBackend::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

ReplayBackend::ReplayBackend(std::vector<Exchange> transcript) : transcript_(std::move(transcript)) {}

std::string ReplayBackend::complete(const std::string& prompt) {
  std::lock_guard lock(mu_);
  if (next_ >= transcript_.size()) throw BackendUnavailable("replay transcript exhausted");
  const Exchange& e = transcript_[next_];
  if (!e.prompt.empty() && e.prompt != prompt) {
    throw BackendUnavailable("replay transcript diverges at entry " + std::to_string(next_ + 1));
  }
  ++next_;
  return e.response;
}

std::string RecordingBackend::complete(const std::string& prompt) {
  std::string reply = inner_.complete(prompt);
  std::lock_guard lock(mu_);
  log_.push_back({prompt, reply});
  return reply;
}

std::vector<Exchange> RecordingBackend::exchanges() const {
  std::lock_guard lock(mu_);
  return log_;
}

HttpBackendConfig HttpBackendConfig::from_env() {
  HttpBackendConfig c;
  const char* url = std::getenv("OPTBT_BACKEND_URL");
  if (!url || !*url) throw BackendUnavailable("OPTBT_BACKEND_URL is not set");
  c.url = url;
  if (const char* token = std::getenv("OPTBT_BACKEND_TOKEN")) c.token = token;
  if (const char* ms = std::getenv("OPTBT_BACKEND_TIMEOUT_MS")) {
    try {
      c.timeout = std::chrono::milliseconds(std::stol(ms));
    } catch (const std::exception&) {
      throw BackendUnavailable(std::string("bad OPTBT_BACKEND_TIMEOUT_MS: ") + ms);
    }
  }
  return c;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  auto scheme = config_.url.find("://");
  if (scheme == std::string::npos) throw BackendUnavailable("backend URL needs a scheme: " + config_.url);
  auto slash = config_.url.find('/', scheme + 3);
  base_ = config_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.url.substr(slash);
}

std::string HttpBackend::complete(const std::string& prompt) {
  httplib::Client client(base_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  if (!config_.token.empty()) client.set_bearer_token_auth(config_.token);

  const std::string body = nlohmann::json{{"prompt", prompt}}.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw BackendUnavailable("backend returned HTTP " + std::to_string(res->status));
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("completion").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw BackendUnavailable(std::string("malformed backend reply: ") + e.what());
    }
  }
  throw BackendUnavailable("backend request failed: " + last_error);
}

}  // namespace optbt::intent
