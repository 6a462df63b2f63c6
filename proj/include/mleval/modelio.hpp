// Copyright 2026 The mleval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Chat-completion access: every model, remote or local, is one HTTP chat
// endpoint behind a thin provider adapter. Responses go through a
// content-addressed replay cache; requests through a shared rate limiter
// and a retry loop with exponential backoff.

#pragma once

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mleval/common.hpp"
#include "mleval/http.hpp"

namespace mleval {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

struct ModelEndpoint {
  std::string name;
  /// "openai" (OpenAI-compatible chat API, also local servers), "gemini",
  /// or "mock".
  std::string provider = "openai";
  std::string base_url;
  std::string model_id;
  /// Name of the environment variable holding the API token; empty for none.
  std::string auth_env;
  double max_requests_per_minute = 60.0;
  int timeout_s = 60;
  int max_retries = 3;
  /// Mock provider only: path of the response script (JSON).
  std::string script;
};

inline void validate_endpoint(const ModelEndpoint& e) {
  if (!(e.max_requests_per_minute > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rpm must be positive", "rpm");
  }
  if (e.max_retries < 0) {
    throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 0",
                "max_retries");
  }
  if (e.timeout_s <= 0) {
    throw Error(ErrorCode::InvalidArgument, "timeout_s must be positive",
                "timeout_s");
  }
  if (e.provider != "openai" && e.provider != "gemini" &&
      e.provider != "mock") {
    throw Error(ErrorCode::InvalidArgument,
                "unknown provider '" + e.provider + "'", "provider");
  }
  if (e.model_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, "model_id is required",
                "model_id");
  }
}

/// Parses `key = value` lines (TOML subset: '#' comments, optional double
/// quotes around strings). Relative `script` paths resolve against
/// `base_dir`.
inline ModelEndpoint parse_endpoint_config(
    std::string_view text, const std::filesystem::path& base_dir = {}) {
  ModelEndpoint e;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine,
                  "config line " + std::to_string(line_no) + " lacks '='", "",
                  line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"') {
      const auto close = value.find('"', 1);
      value = value.substr(1, close == std::string::npos ? std::string::npos
                                                         : close - 1);
    } else if (const auto hash = value.find('#');
               hash != std::string::npos) {
      value = std::string(trim(std::string_view(value).substr(0, hash)));
    }
    auto number = [&](const char* what) {
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(what);
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedLine,
                    std::string("config key ") + what + " is not a number",
                    what, line_no);
      }
    };
    if (key == "name") {
      e.name = value;
    } else if (key == "provider") {
      e.provider = value;
    } else if (key == "base_url") {
      e.base_url = value;
    } else if (key == "model_id") {
      e.model_id = value;
    } else if (key == "auth_env") {
      e.auth_env = value;
    } else if (key == "rpm") {
      e.max_requests_per_minute = number("rpm");
    } else if (key == "timeout_s") {
      e.timeout_s = static_cast<int>(number("timeout_s"));
    } else if (key == "max_retries") {
      e.max_retries = static_cast<int>(number("max_retries"));
    } else if (key == "script") {
      std::filesystem::path p(value);
      e.script = (p.is_relative() && !base_dir.empty()) ? (base_dir / p).string()
                                                        : value;
    } else {
      throw Error(ErrorCode::MalformedLine, "unknown config key '" + key + "'",
                  key, line_no);
    }
  }
  if (e.name.empty()) e.name = e.model_id;
  validate_endpoint(e);
  return e;
}

inline ModelEndpoint load_endpoint_config(const std::filesystem::path& path) {
  return parse_endpoint_config(read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Requests and cache keys

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  /// Provenance for scripted mocks; not part of the cache key.
  std::string sample_id;
  std::uint32_t run_index = 0;
  /// Extra cache-key component separating repeated runs of one prompt.
  std::string variant;
};

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::IoFailure, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

/// SHA-256 over length-prefixed (model id, prompt, temperature[, variant]).
/// An empty variant leaves the key identical to the three-field form.
inline std::string build_cache_key(std::string_view model_id,
                                   std::string_view prompt, double temperature,
                                   std::string_view variant = {}) {
  char temp[64];
  std::snprintf(temp, sizeof temp, "%.17g", temperature);
  std::string buf;
  auto field = [&](std::string_view s) {
    buf += std::to_string(s.size());
    buf += ':';
    buf += s;
    buf += ';';
  };
  field(model_id);
  field(prompt);
  field(temp);
  if (!variant.empty()) field(variant);
  return sha256_hex(buf);
}

// ---------------------------------------------------------------------------
// Time

class Clock {
 public:
  virtual ~Clock() = default;
  /// Seconds since an arbitrary epoch.
  virtual double now() const = 0;
  virtual void sleep_for(double seconds) = 0;
};

class SystemClock final : public Clock {
 public:
  double now() const override {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
  void sleep_for(double seconds) override {
    if (seconds > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
  }
};

/// Test clock: sleeping advances time instantly.
class VirtualClock final : public Clock {
 public:
  double now() const override {
    std::lock_guard lock(mu_);
    return t_;
  }
  void sleep_for(double seconds) override {
    std::lock_guard lock(mu_);
    if (seconds > 0) {
      t_ += seconds;
      slept_ += seconds;
    }
  }
  void advance(double seconds) { sleep_for(seconds); }
  double total_slept() const {
    std::lock_guard lock(mu_);
    return slept_;
  }

 private:
  mutable std::mutex mu_;
  double t_ = 0.0;
  double slept_ = 0.0;
};

/// Sliding-window limiter: at most `per_minute` admissions in any 60 s.
class RateLimiter {
 public:
  RateLimiter(double per_minute, std::shared_ptr<Clock> clock)
      : limit_(static_cast<std::size_t>(std::max(1.0, std::floor(per_minute)))),
        clock_(std::move(clock)) {}

  /// Blocks until a slot is free, then records the admission time.
  double acquire() {
    std::lock_guard lock(mu_);
    while (true) {
      const double now = clock_->now();
      while (!admitted_.empty() && admitted_.front() <= now - kWindow) {
        admitted_.pop_front();
      }
      if (admitted_.size() < limit_) {
        admitted_.push_back(now);
        return now;
      }
      clock_->sleep_for(admitted_.front() + kWindow - now);
    }
  }

  std::size_t limit() const { return limit_; }

 private:
  static constexpr double kWindow = 60.0;
  std::size_t limit_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<double> admitted_;
};

/// Append-only directory of response bodies named by cache key.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard lock(mu_);
    const auto path = dir_ / key;
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_file(path);
  }

  void put(const std::string& key, std::string_view text) {
    std::lock_guard lock(mu_);
    const auto path = dir_ / key;
    if (std::filesystem::exists(path)) return;
    write_file_atomic(path, text);
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Transport

struct TransportReply {
  /// HTTP status; 0 for timeouts and connection failures.
  int status = 0;
  std::string text;
  std::string error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportReply send(const ModelEndpoint& endpoint,
                              const CompletionRequest& request,
                              const std::string& token) = 0;
};

inline bool is_transient(int status) {
  return status == 0 || status == 408 || status == 429 || status >= 500;
}

// Provider adapters: request body, URL, headers and response parsing.

inline json openai_request_body(const ModelEndpoint& e,
                                const CompletionRequest& r) {
  return json{{"model", e.model_id},
              {"messages", json::array({json{{"role", "user"},
                                             {"content", r.prompt}}})},
              {"temperature", r.temperature},
              {"max_tokens", r.max_output_tokens}};
}

inline std::optional<std::string> openai_parse_response(const json& body) {
  if (!body.is_object() || !body.contains("choices") ||
      !body["choices"].is_array() || body["choices"].empty()) {
    return std::nullopt;
  }
  const auto& msg = body["choices"][0];
  if (msg.contains("message") && msg["message"].contains("content") &&
      msg["message"]["content"].is_string()) {
    return msg["message"]["content"].get<std::string>();
  }
  if (msg.contains("text") && msg["text"].is_string()) {
    return msg["text"].get<std::string>();
  }
  return std::nullopt;
}

inline json gemini_request_body(const ModelEndpoint&,
                                const CompletionRequest& r) {
  return json{
      {"contents",
       json::array({json{{"role", "user"},
                         {"parts", json::array({json{{"text", r.prompt}}})}}})},
      {"generationConfig",
       json{{"temperature", r.temperature},
            {"maxOutputTokens", r.max_output_tokens}}}};
}

inline std::optional<std::string> gemini_parse_response(const json& body) {
  if (!body.is_object() || !body.contains("candidates") ||
      !body["candidates"].is_array() || body["candidates"].empty()) {
    return std::nullopt;
  }
  const auto& cand = body["candidates"][0];
  if (!cand.contains("content") || !cand["content"].contains("parts")) {
    return std::string();
  }
  std::string text;
  for (const auto& part : cand["content"]["parts"]) {
    if (part.contains("text") && part["text"].is_string()) {
      text += part["text"].get<std::string>();
    }
  }
  return text;
}

inline std::string trim_slash(std::string s) {
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

class HttpChatTransport final : public ChatTransport {
 public:
  TransportReply send(const ModelEndpoint& e, const CompletionRequest& r,
                      const std::string& token) override {
    std::string url;
    json body;
    HttpHeaders headers;
    if (e.provider == "gemini") {
      url = trim_slash(e.base_url) + "/models/" + e.model_id +
            ":generateContent";
      body = gemini_request_body(e, r);
      if (!token.empty()) headers.emplace_back("x-goog-api-key", token);
    } else {
      url = trim_slash(e.base_url) + "/chat/completions";
      body = openai_request_body(e, r);
      if (!token.empty()) {
        headers.emplace_back("Authorization", "Bearer " + token);
      }
    }
    const auto res = http_post_json(url, body.dump(), headers, e.timeout_s);
    TransportReply out;
    out.status = res.status;
    out.error = res.error;
    if (res.status != 200) {
      out.error += res.body.substr(0, 512);
      return out;
    }
    const auto parsed = json::parse(res.body, nullptr, false);
    const auto text = e.provider == "gemini" ? gemini_parse_response(parsed)
                                             : openai_parse_response(parsed);
    if (!text) {
      out.status = 502;
      out.error = "unrecognised response body";
      return out;
    }
    out.text = *text;
    return out;
  }
};

/// Canned responses keyed by sample id or by prompt digest. A key may map to
/// a list, indexed by run (cyclically).
struct MockScript {
  std::string default_response;
  std::map<std::string, std::vector<std::string>> by_id;
  std::map<std::string, std::vector<std::string>> by_prompt_hash;

  const std::string& lookup(const CompletionRequest& r) const {
    auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
      return v[r.run_index % v.size()];
    };
    if (auto it = by_id.find(r.sample_id); it != by_id.end() &&
                                           !it->second.empty()) {
      return pick(it->second);
    }
    if (!by_prompt_hash.empty()) {
      const auto h = sha256_hex(r.prompt);
      if (auto it = by_prompt_hash.find(h);
          it != by_prompt_hash.end() && !it->second.empty()) {
        return pick(it->second);
      }
    }
    return default_response;
  }

  static MockScript from_json(const json& j) {
    MockScript s;
    s.default_response = j.value("default", std::string());
    auto read_map = [&](const char* key,
                        std::map<std::string, std::vector<std::string>>& target) {
      if (!j.contains(key)) return;
      for (const auto& [k, v] : j[key].items()) {
        if (v.is_string()) {
          target[k] = {v.template get<std::string>()};
        } else {
          target[k] = v.template get<std::vector<std::string>>();
        }
      }
    };
    read_map("by_id", s.by_id);
    read_map("by_prompt_hash", s.by_prompt_hash);
    return s;
  }

  json to_json() const {
    return json{{"default", default_response},
                {"by_id", by_id},
                {"by_prompt_hash", by_prompt_hash}};
  }
};

class MockTransport final : public ChatTransport {
 public:
  explicit MockTransport(MockScript script) : script_(std::move(script)) {}

  TransportReply send(const ModelEndpoint&, const CompletionRequest& r,
                      const std::string&) override {
    ++calls_;
    return {200, script_.lookup(r), {}};
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  MockScript script_;
  std::atomic<std::size_t> calls_{0};
};

inline std::shared_ptr<ChatTransport> make_transport(const ModelEndpoint& e) {
  if (e.provider == "mock") {
    MockScript script;
    if (!e.script.empty()) {
      script = MockScript::from_json(json::parse(read_file(e.script)));
    }
    return std::make_shared<MockTransport>(std::move(script));
  }
  return std::make_shared<HttpChatTransport>();
}

// ---------------------------------------------------------------------------
// Client

enum class CachePolicy { ReadWrite, ReadOnly, Bypass };

struct RetryPolicy {
  double base_delay_s = 1.0;
  double factor = 2.0;
  /// Each delay is stretched by a uniform factor in [1, 1 + jitter).
  double jitter = 0.25;
};

/// Thread-safe front door to one endpoint.
class ModelClient {
 public:
  ModelClient(ModelEndpoint endpoint, std::shared_ptr<ChatTransport> transport,
              std::shared_ptr<ResponseCache> cache = nullptr,
              std::shared_ptr<Clock> clock = std::make_shared<SystemClock>(),
              RetryPolicy retry = {}, std::uint64_t jitter_seed = 0)
      : endpoint_(std::move(endpoint)),
        transport_(std::move(transport)),
        cache_(std::move(cache)),
        clock_(std::move(clock)),
        limiter_(endpoint_.max_requests_per_minute, clock_),
        retry_(retry),
        jitter_(jitter_seed) {
    validate_endpoint(endpoint_);
  }

  std::string complete(const CompletionRequest& request,
                       CachePolicy policy = CachePolicy::ReadWrite) {
    if (trim(request.prompt).empty()) {
      throw Error(ErrorCode::InvalidArgument, "prompt is empty", "prompt");
    }
    const auto key = build_cache_key(endpoint_.model_id, request.prompt,
                                     request.temperature, request.variant);
    if (policy != CachePolicy::Bypass && cache_) {
      if (auto hit = cache_->get(key)) {
        ++cache_hits_;
        return *hit;
      }
    }
    if (policy == CachePolicy::ReadOnly) {
      throw Error(ErrorCode::CacheMiss, "no cached response for " + key,
                  key);
    }
    std::string token;
    if (!endpoint_.auth_env.empty()) {
      const char* v = std::getenv(endpoint_.auth_env.c_str());
      if (v == nullptr || *v == '\0') {
        throw Error(ErrorCode::AuthMissing,
                    "environment variable " + endpoint_.auth_env + " is unset",
                    endpoint_.auth_env);
      }
      token = v;
    }
    std::string last_error;
    const int attempts = 1 + endpoint_.max_retries;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      if (attempt > 0) clock_->sleep_for(backoff(attempt - 1));
      limiter_.acquire();
      ++network_requests_;
      const auto reply = transport_->send(endpoint_, request, token);
      if (reply.status == 200) {
        if (policy == CachePolicy::ReadWrite && cache_) {
          cache_->put(key, reply.text);
        }
        return reply.text;
      }
      last_error = "status " + std::to_string(reply.status) +
                   (reply.error.empty() ? "" : ": " + reply.error);
      if (!is_transient(reply.status)) {
        throw Error(ErrorCode::Transport, last_error, endpoint_.name);
      }
    }
    throw Error(ErrorCode::Exhausted,
                std::to_string(attempts) + " attempts failed, last " +
                    last_error,
                endpoint_.name);
  }

  std::size_t network_requests() const { return network_requests_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }
  const ModelEndpoint& endpoint() const { return endpoint_; }

 private:
  double backoff(int retry_index) {
    double u;
    {
      std::lock_guard lock(jitter_mu_);
      u = jitter_.uniform01();
    }
    return retry_.base_delay_s * std::pow(retry_.factor, retry_index) *
           (1.0 + retry_.jitter * u);
  }

  ModelEndpoint endpoint_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  RetryPolicy retry_;
  std::mutex jitter_mu_;
  Rng jitter_;
  std::atomic<std::size_t> network_requests_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace mleval
