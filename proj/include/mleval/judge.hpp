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

// LLM-as-a-judge: rubric prompts in English around target-language content,
// 1-5 verdict parsing, and aggregation.

#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/corpus.hpp"
#include "mleval/metrics.hpp"
#include "mleval/modelio.hpp"
#include "mleval/prompting.hpp"

namespace mleval {

inline constexpr std::string_view kJudgeInstruction =
    "Respond with a single integer from 1 to 5.";
inline constexpr std::string_view kJudgeRetrySuffix =
    "\n\nRespond with only one integer between 1 and 5.";

struct JudgeConfig {
  /// Rubric body with {input}, {context}, {reference}, {prediction}.
  std::string rubric;
  int retry_on_unparseable = 1;
  double temperature = 0.0;
};

struct JudgeVerdict {
  std::string sample_id;
  std::optional<int> score;
  std::string raw;
  /// "empty", "judged", "unparseable" or "error: ...".
  std::string reason;
  int attempts = 0;

  bool operator==(const JudgeVerdict&) const = default;
};

inline std::filesystem::path rubric_path(const std::filesystem::path& dir,
                                         TaskKind task) {
  return dir / (std::string(to_string(task)) + ".txt");
}

/// Loads the rubric for a generative task; classification tasks are scored
/// by exact metrics and have none.
inline JudgeConfig load_judge_config(const std::filesystem::path& rubric_dir,
                                     TaskKind task) {
  if (!is_generative(task)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("no judge rubric for task ") + to_string(task),
                "task");
  }
  JudgeConfig c;
  c.rubric = read_file(rubric_path(rubric_dir, task));
  while (!c.rubric.empty() && c.rubric.back() == '\n') c.rubric.pop_back();
  if (c.rubric.find(kJudgeInstruction) == std::string::npos) {
    throw Error(ErrorCode::SchemaViolation,
                "rubric does not ask for a 1-5 integer", "rubric");
  }
  return c;
}

inline std::string reference_text(const Reference& ref) {
  if (const auto* s = std::get_if<std::string>(&ref)) return *s;
  if (const auto* v = std::get_if<std::vector<std::string>>(&ref)) {
    std::string out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (i > 0) out += "; ";
      out += (*v)[i];
    }
    return out;
  }
  if (const auto* i = std::get_if<std::int64_t>(&ref)) {
    return std::to_string(*i);
  }
  std::string out;
  for (auto i : std::get<std::vector<std::int64_t>>(ref)) {
    if (!out.empty()) out += ", ";
    out += std::to_string(i);
  }
  return out;
}

/// Fills the rubric. Unknown brace text is kept literally.
inline std::string render_judge_prompt(const JudgeConfig& config,
                                       const Sample& sample,
                                       std::string_view prediction) {
  if (trim(prediction).empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "empty predictions are scored without a judge", "prediction");
  }
  std::string out;
  std::string_view body = config.rubric;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find('{', pos);
    if (open == std::string_view::npos) {
      out += body.substr(pos);
      break;
    }
    out += body.substr(pos, open - pos);
    const auto close = body.find('}', open);
    if (close == std::string_view::npos) {
      out += body.substr(open);
      break;
    }
    const auto name = body.substr(open + 1, close - open - 1);
    if (name == "input") {
      out += sample.input;
    } else if (name == "context") {
      if (!sample.context) {
        throw Error(ErrorCode::MissingPlaceholderData,
                    "rubric needs a context passage", "context");
      }
      out += *sample.context;
    } else if (name == "reference") {
      out += reference_text(sample.reference);
    } else if (name == "prediction") {
      out += prediction;
    } else {
      out += body.substr(open, close - open + 1);
    }
    pos = close + 1;
  }
  return out;
}

/// First standalone integer within 1..5; out-of-range integers are skipped.
inline std::optional<int> parse_judge_score(std::string_view response) {
  for (const auto& tok : detail::standalone_integers(response)) {
    if (tok.value >= 1 && tok.value <= 5) return static_cast<int>(tok.value);
  }
  return std::nullopt;
}

/// Scores one prediction. Empty predictions get 1 without a call; an
/// unparseable reply is retried with a stricter suffix.
inline JudgeVerdict judge_prediction(ModelClient& client,
                                     const JudgeConfig& config,
                                     const Sample& sample,
                                     std::string_view prediction,
                                     CachePolicy policy = CachePolicy::ReadWrite) {
  JudgeVerdict v;
  v.sample_id = sample.id;
  if (trim(prediction).empty()) {
    v.score = 1;
    v.reason = "empty";
    return v;
  }
  const std::string prompt = render_judge_prompt(config, sample, prediction);
  for (int attempt = 0; attempt <= config.retry_on_unparseable; ++attempt) {
    CompletionRequest req;
    req.prompt = attempt == 0 ? prompt : prompt + std::string(kJudgeRetrySuffix);
    req.temperature = config.temperature;
    req.max_output_tokens = 16;
    req.sample_id = sample.id;
    v.raw = client.complete(req, policy);
    v.attempts = attempt + 1;
    v.score = parse_judge_score(v.raw);
    if (v.score) {
      v.reason = "judged";
      return v;
    }
  }
  v.reason = "unparseable";
  return v;
}

struct JudgeSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t present = 0;
  std::size_t missing = 0;
};

inline JudgeSummary judge_aggregate(std::span<const std::optional<int>> scores) {
  std::vector<double> xs;
  JudgeSummary out;
  for (const auto& s : scores) {
    if (s) {
      xs.push_back(*s);
    } else {
      ++out.missing;
    }
  }
  if (xs.empty()) {
    throw Error(ErrorCode::AllMissing, "no verdict has a score");
  }
  const auto st = score_stats(xs);
  out.mean = st.mean;
  out.sd = st.sd;
  out.present = xs.size();
  return out;
}

inline JudgeSummary judge_aggregate(std::span<const JudgeVerdict> verdicts) {
  std::vector<std::optional<int>> scores;
  scores.reserve(verdicts.size());
  for (const auto& v : verdicts) scores.push_back(v.score);
  return judge_aggregate(std::span<const std::optional<int>>(scores));
}

}  // namespace mleval
