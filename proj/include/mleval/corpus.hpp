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

// Task datasets in a language-agnostic JSONL schema.
//
// One sample per line:
//
//   {"id": "x1", "language": "en", "task": "single_label", "input": "...",
//    "context": null, "choices": null, "reference": 2}
//
// The first line may instead be a header record carrying the dataset name
// and label space:
//
//   {"dataset": "tos", "label_space": {"classes": ["clearly_fair", ...],
//    "ordinal": true, "penalty": true}}

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mleval/common.hpp"

namespace mleval {

using json = nlohmann::json;

enum class TaskKind {
  MultiLabel,
  SingleLabel,
  MultipleChoice,
  Summarization,
  QA,
  Keyphrases,
  OpenEnded,
};

inline const char* to_string(TaskKind t) {
  switch (t) {
    case TaskKind::MultiLabel: return "multi_label";
    case TaskKind::SingleLabel: return "single_label";
    case TaskKind::MultipleChoice: return "multiple_choice";
    case TaskKind::Summarization: return "summarization";
    case TaskKind::QA: return "qa";
    case TaskKind::Keyphrases: return "keyphrases";
    case TaskKind::OpenEnded: return "open_ended";
  }
  return "unknown";
}

inline std::optional<TaskKind> parse_task_kind(std::string_view s) {
  for (auto t : {TaskKind::MultiLabel, TaskKind::SingleLabel,
                 TaskKind::MultipleChoice, TaskKind::Summarization,
                 TaskKind::QA, TaskKind::Keyphrases, TaskKind::OpenEnded}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

/// Tasks scored by comparing a discrete prediction against a gold index.
inline bool is_classification(TaskKind t) {
  return t == TaskKind::SingleLabel || t == TaskKind::MultipleChoice;
}

inline bool is_generative(TaskKind t) {
  return t == TaskKind::Summarization || t == TaskKind::QA ||
         t == TaskKind::Keyphrases || t == TaskKind::OpenEnded;
}

struct LabelSpace {
  std::vector<std::string> classes;
  bool ordinal = false;
  /// Enables the three-class misclassification penalty.
  bool penalty = false;

  std::size_t size() const { return classes.size(); }
  bool operator==(const LabelSpace&) const = default;
};

/// Label index | label-index set | reference text | keyphrase list.
using Reference = std::variant<std::int64_t, std::vector<std::int64_t>,
                               std::string, std::vector<std::string>>;

struct Sample {
  std::string id;
  std::string language;
  TaskKind task = TaskKind::SingleLabel;
  std::string input;
  std::optional<std::string> context;
  std::optional<std::vector<std::string>> choices;
  Reference reference;

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::string name;
  TaskKind task = TaskKind::SingleLabel;
  std::optional<LabelSpace> label_space;
  /// Distinct language codes in order of first appearance.
  std::vector<std::string> languages;
  /// All samples in file order.
  std::vector<Sample> samples;

  std::vector<Sample> samples_for(std::string_view language) const {
    std::vector<Sample> out;
    for (const auto& s : samples) {
      if (s.language == language) out.push_back(s);
    }
    return out;
  }
  bool has_language(std::string_view language) const {
    return std::find(languages.begin(), languages.end(), language) !=
           languages.end();
  }
};

// ---------------------------------------------------------------------------
// Reference <-> JSON

inline json reference_to_json(const Reference& ref) {
  return std::visit([](const auto& v) { return json(v); }, ref);
}

inline json label_space_to_json(const LabelSpace& ls) {
  return json{{"classes", ls.classes},
              {"ordinal", ls.ordinal},
              {"penalty", ls.penalty}};
}

inline LabelSpace label_space_from_json(const json& j) {
  LabelSpace ls;
  if (!j.is_object() || !j.contains("classes") || !j["classes"].is_array()) {
    throw Error(ErrorCode::SchemaViolation, "classes must be an array",
                "label_space");
  }
  for (const auto& c : j["classes"]) {
    if (!c.is_string()) {
      throw Error(ErrorCode::SchemaViolation, "class names must be strings",
                  "label_space");
    }
    ls.classes.push_back(c.get<std::string>());
  }
  ls.ordinal = j.value("ordinal", false);
  ls.penalty = j.value("penalty", false);
  if (ls.classes.empty()) {
    throw Error(ErrorCode::SchemaViolation, "empty class list", "label_space");
  }
  std::set<std::string> seen(ls.classes.begin(), ls.classes.end());
  if (seen.size() != ls.classes.size()) {
    throw Error(ErrorCode::SchemaViolation, "duplicate class name",
                "label_space");
  }
  return ls;
}

inline Reference reference_from_json(TaskKind task, const json& j) {
  auto fail = [](const char* why) {
    throw Error(ErrorCode::SchemaViolation, why, "reference");
  };
  switch (task) {
    case TaskKind::SingleLabel:
    case TaskKind::MultipleChoice:
      if (!j.is_number_integer()) fail("expected integer");
      if (j.get<std::int64_t>() < 0) fail("index out of range");
      return j.get<std::int64_t>();
    case TaskKind::MultiLabel: {
      if (!j.is_array()) fail("expected integer array");
      std::vector<std::int64_t> out;
      for (const auto& v : j) {
        if (!v.is_number_integer()) fail("expected integer array");
        if (v.get<std::int64_t>() < 0) fail("index out of range");
        out.push_back(v.get<std::int64_t>());
      }
      return out;
    }
    case TaskKind::Summarization:
    case TaskKind::QA:
    case TaskKind::OpenEnded:
      if (!j.is_string()) fail("expected string");
      return j.get<std::string>();
    case TaskKind::Keyphrases: {
      if (!j.is_array()) fail("expected string array");
      std::vector<std::string> out;
      for (const auto& v : j) {
        if (!v.is_string()) fail("expected string array");
        out.push_back(v.get<std::string>());
      }
      return out;
    }
  }
  fail("unknown task");
  return {};
}

/// Canonical record (sorted keys, null for absent optionals).
inline json sample_to_json(const Sample& s) {
  json j;
  j["id"] = s.id;
  j["language"] = s.language;
  j["task"] = to_string(s.task);
  j["input"] = s.input;
  j["context"] = s.context ? json(*s.context) : json(nullptr);
  j["choices"] = s.choices ? json(*s.choices) : json(nullptr);
  j["reference"] = reference_to_json(s.reference);
  return j;
}

inline Sample sample_from_json(const json& j) {
  auto required_string = [&](const char* key) -> std::string {
    if (!j.contains(key)) {
      throw Error(ErrorCode::SchemaViolation, "absent", key);
    }
    if (!j[key].is_string()) {
      throw Error(ErrorCode::SchemaViolation, "expected string", key);
    }
    return j[key].get<std::string>();
  };
  Sample s;
  s.id = required_string("id");
  s.language = required_string("language");
  const std::string task = required_string("task");
  const auto kind = parse_task_kind(task);
  if (!kind) {
    throw Error(ErrorCode::SchemaViolation, "unknown task '" + task + "'",
                "task");
  }
  s.task = *kind;
  s.input = required_string("input");
  if (j.contains("context") && !j["context"].is_null()) {
    if (!j["context"].is_string()) {
      throw Error(ErrorCode::SchemaViolation, "expected string or null",
                  "context");
    }
    s.context = j["context"].get<std::string>();
  }
  if (j.contains("choices") && !j["choices"].is_null()) {
    if (!j["choices"].is_array()) {
      throw Error(ErrorCode::SchemaViolation, "expected array or null",
                  "choices");
    }
    std::vector<std::string> choices;
    for (const auto& c : j["choices"]) {
      if (!c.is_string()) {
        throw Error(ErrorCode::SchemaViolation, "expected strings",
                    "choices");
      }
      choices.push_back(c.get<std::string>());
    }
    s.choices = std::move(choices);
  }
  if (!j.contains("reference")) {
    throw Error(ErrorCode::SchemaViolation, "absent", "reference");
  }
  s.reference = reference_from_json(s.task, j["reference"]);
  return s;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  DuplicateId,
  EmptyInput,
  ReferenceShape,
  LabelOutOfRange,
  ChoiceOutOfRange,
  MissingChoices,
  TaskMismatch,
  InconsistentReference,
  InvalidLabelSpace,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::EmptyInput: return "EmptyInput";
    case ViolationKind::ReferenceShape: return "ReferenceShape";
    case ViolationKind::LabelOutOfRange: return "LabelOutOfRange";
    case ViolationKind::ChoiceOutOfRange: return "ChoiceOutOfRange";
    case ViolationKind::MissingChoices: return "MissingChoices";
    case ViolationKind::TaskMismatch: return "TaskMismatch";
    case ViolationKind::InconsistentReference: return "InconsistentReference";
    case ViolationKind::InvalidLabelSpace: return "InvalidLabelSpace";
  }
  return "Unknown";
}

struct Violation {
  std::string sample_id;
  ViolationKind kind;
  std::string reason;
};

namespace detail {

inline bool reference_matches_task(TaskKind task, const Reference& ref) {
  switch (task) {
    case TaskKind::SingleLabel:
    case TaskKind::MultipleChoice:
      return std::holds_alternative<std::int64_t>(ref);
    case TaskKind::MultiLabel:
      return std::holds_alternative<std::vector<std::int64_t>>(ref);
    case TaskKind::Summarization:
    case TaskKind::QA:
    case TaskKind::OpenEnded:
      return std::holds_alternative<std::string>(ref);
    case TaskKind::Keyphrases:
      return std::holds_alternative<std::vector<std::string>>(ref);
  }
  return false;
}

}  // namespace detail

/// Checks every Sample and Dataset invariant. Empty result means valid.
inline std::vector<Violation> validate_dataset(const Dataset& ds) {
  std::vector<Violation> out;
  if (ds.label_space) {
    std::set<std::string> names(ds.label_space->classes.begin(),
                                ds.label_space->classes.end());
    if (ds.label_space->classes.empty() ||
        names.size() != ds.label_space->classes.size()) {
      out.push_back({"", ViolationKind::InvalidLabelSpace,
                     "class list empty or not unique"});
    }
  }
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, Reference> first_reference;
  for (const auto& s : ds.samples) {
    if (s.task != ds.task) {
      out.push_back({s.id, ViolationKind::TaskMismatch,
                     std::string("sample task ") + to_string(s.task) +
                         " in " + to_string(ds.task) + " dataset"});
    }
    if (!seen.emplace(s.language, s.id).second) {
      out.push_back({s.id, ViolationKind::DuplicateId,
                     "duplicate id in language " + s.language});
    }
    if (trim(s.input).empty()) {
      out.push_back({s.id, ViolationKind::EmptyInput, "input is blank"});
    }
    if (!detail::reference_matches_task(s.task, s.reference)) {
      out.push_back({s.id, ViolationKind::ReferenceShape,
                     "reference shape does not match task"});
      continue;
    }
    const std::size_t n_classes =
        ds.label_space ? ds.label_space->size() : SIZE_MAX;
    if (s.task == TaskKind::SingleLabel) {
      const auto idx = std::get<std::int64_t>(s.reference);
      if (idx < 0 || static_cast<std::size_t>(idx) >= n_classes) {
        out.push_back({s.id, ViolationKind::LabelOutOfRange,
                       "label index out of range"});
      }
    } else if (s.task == TaskKind::MultiLabel) {
      for (auto idx : std::get<std::vector<std::int64_t>>(s.reference)) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= n_classes) {
          out.push_back({s.id, ViolationKind::LabelOutOfRange,
                         "label index out of range"});
          break;
        }
      }
    } else if (s.task == TaskKind::MultipleChoice) {
      if (!s.choices || s.choices->size() < 2) {
        out.push_back({s.id, ViolationKind::MissingChoices,
                       "multiple choice needs at least two choices"});
      } else {
        const auto idx = std::get<std::int64_t>(s.reference);
        if (idx < 0 || static_cast<std::size_t>(idx) >= s.choices->size()) {
          out.push_back({s.id, ViolationKind::ChoiceOutOfRange,
                         "index out of range"});
        }
      }
    }
    if (s.task == TaskKind::SingleLabel || s.task == TaskKind::MultiLabel ||
        s.task == TaskKind::MultipleChoice) {
      Reference normalized = s.reference;
      if (auto* v = std::get_if<std::vector<std::int64_t>>(&normalized)) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
      }
      auto [it, inserted] = first_reference.emplace(s.id, normalized);
      if (!inserted && it->second != normalized) {
        out.push_back({s.id, ViolationKind::InconsistentReference,
                       "reference differs across languages"});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading and writing

/// Parses JSONL text. `name_hint` names the dataset when no header is given.
inline Dataset parse_dataset(std::string_view text, std::string name_hint,
                             std::optional<TaskKind> expected_task = {}) {
  Dataset ds;
  ds.name = std::move(name_hint);
  std::optional<TaskKind> task;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_record = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what(), "",
                  line_no);
    }
    if (!j.is_object()) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": not an object", "",
                  line_no);
    }
    const bool is_header = first_record && !j.contains("id") &&
                           (j.contains("label_space") || j.contains("dataset"));
    first_record = false;
    if (is_header) {
      if (j.contains("dataset") && j["dataset"].is_string()) {
        ds.name = j["dataset"].get<std::string>();
      }
      if (j.contains("label_space") && !j["label_space"].is_null()) {
        ds.label_space = label_space_from_json(j["label_space"]);
      }
      continue;
    }
    Sample s;
    try {
      s = sample_from_json(j);
    } catch (const Error& e) {
      throw Error(e.code(),
                  e.reason() + " (line " + std::to_string(line_no) + ")",
                  e.field(), line_no);
    }
    if (!task) task = s.task;
    if (s.task != *task) {
      throw Error(ErrorCode::SchemaViolation, "mixed tasks in one dataset",
                  "task", line_no);
    }
    if (!ds.has_language(s.language)) ds.languages.push_back(s.language);
    ds.samples.push_back(std::move(s));
  }
  if (!task) {
    throw Error(ErrorCode::SchemaViolation, "dataset has no samples",
                "samples");
  }
  ds.task = *task;
  if (expected_task && *expected_task != ds.task) {
    throw Error(ErrorCode::TaskMismatch,
                std::string("expected ") + to_string(*expected_task) +
                    ", file holds " + to_string(ds.task),
                "task");
  }
  if (!ds.label_space && (ds.task == TaskKind::SingleLabel ||
                          ds.task == TaskKind::MultiLabel)) {
    std::int64_t max_idx = 0;
    for (const auto& s : ds.samples) {
      if (auto* i = std::get_if<std::int64_t>(&s.reference)) {
        max_idx = std::max(max_idx, *i);
      } else if (auto* v =
                     std::get_if<std::vector<std::int64_t>>(&s.reference)) {
        for (auto k : *v) max_idx = std::max(max_idx, k);
      }
    }
    LabelSpace ls;
    for (std::int64_t i = 0; i <= max_idx; ++i) {
      ls.classes.push_back(std::to_string(i));
    }
    ds.label_space = std::move(ls);
  }
  const auto violations = validate_dataset(ds);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::string field = "input";
    switch (v.kind) {
      case ViolationKind::DuplicateId: field = "id"; break;
      case ViolationKind::EmptyInput: field = "input"; break;
      case ViolationKind::MissingChoices: field = "choices"; break;
      case ViolationKind::TaskMismatch: field = "task"; break;
      case ViolationKind::InvalidLabelSpace: field = "label_space"; break;
      default: field = "reference"; break;
    }
    throw Error(ErrorCode::SchemaViolation, v.reason, field);
  }
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path,
                            std::optional<TaskKind> expected_task = {}) {
  return parse_dataset(read_file(path), path.stem().string(), expected_task);
}

/// Canonical JSONL: header line (when a label space is present) followed by
/// samples in file order.
inline std::string serialize_dataset(const Dataset& ds) {
  std::string out;
  json header{{"dataset", ds.name}};
  header["label_space"] =
      ds.label_space ? label_space_to_json(*ds.label_space) : json(nullptr);
  out += header.dump() + "\n";
  for (const auto& s : ds.samples) out += sample_to_json(s).dump() + "\n";
  return out;
}

inline void write_dataset(const Dataset& ds,
                          const std::filesystem::path& path) {
  write_file_atomic(path, serialize_dataset(ds));
}

// ---------------------------------------------------------------------------
// Sampling

enum class SamplingStrategy { FirstN, SeededRandom };

/// Returns min(n, available) samples of one language. SeededRandom draws a
/// prefix of a permutation fixed by (seed, dataset name, language).
inline std::vector<Sample> select_samples(
    const Dataset& ds, std::string_view language, std::size_t n,
    std::uint64_t seed,
    SamplingStrategy strategy = SamplingStrategy::FirstN) {
  if (!ds.has_language(language)) {
    throw Error(ErrorCode::UnknownLanguage,
                "language '" + std::string(language) + "' not in dataset " +
                    ds.name,
                "language");
  }
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1", "n");
  }
  auto pool = ds.samples_for(language);
  if (strategy == SamplingStrategy::SeededRandom) {
    Rng rng(stable_hash(seed, std::string_view(ds.name), language));
    for (std::size_t i = pool.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i));
      std::swap(pool[i - 1], pool[j]);
    }
  }
  if (pool.size() > n) pool.resize(n);
  return pool;
}

}  // namespace mleval
