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

// Prompt rendering and structured-answer extraction.
//
// Templates are UTF-8 text files with `{input}`, `{context}`, `{choices}`
// and `{label_menu}` placeholders; any other brace text is literal.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/corpus.hpp"
#include "mleval/metrics.hpp"
#include "mleval/unicode.hpp"

namespace mleval {

enum class Assertiveness { Basic, Assertive, HighlyAssertive };

inline const char* to_string(Assertiveness a) {
  switch (a) {
    case Assertiveness::Basic: return "basic";
    case Assertiveness::Assertive: return "assertive";
    case Assertiveness::HighlyAssertive: return "highly_assertive";
  }
  return "basic";
}

enum class AnswerLanguage { Target, English };

struct PromptTemplate {
  std::string id;
  TaskKind task = TaskKind::SingleLabel;
  std::optional<Assertiveness> assertiveness;
  std::string body;
  AnswerLanguage answer_language = AnswerLanguage::Target;
};

inline constexpr std::string_view kPlaceholders[] = {"input", "context",
                                                     "choices", "label_menu"};

/// Placeholder names the body references, in order of first use.
inline std::vector<std::string> placeholders_of(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t i = body.find('{'); i != std::string_view::npos;
       i = body.find('{', i + 1)) {
    const auto close = body.find('}', i);
    if (close == std::string_view::npos) break;
    const auto name = body.substr(i + 1, close - i - 1);
    for (auto known : kPlaceholders) {
      if (name == known &&
          std::find(out.begin(), out.end(), name) == out.end()) {
        out.emplace_back(name);
      }
    }
  }
  return out;
}

/// Whether every placeholder in the body can be filled for the task kind.
/// `{context}` is checked per sample at render time.
inline bool placeholders_satisfiable(const PromptTemplate& t) {
  for (const auto& p : placeholders_of(t.body)) {
    if (p == "choices" && t.task != TaskKind::MultipleChoice) return false;
    if (p == "label_menu" && t.task != TaskKind::SingleLabel &&
        t.task != TaskKind::MultiLabel) {
      return false;
    }
  }
  return true;
}

inline std::string choice_letter(std::size_t i) {
  return std::string(1, static_cast<char>('A' + i));
}

inline std::string render_label_menu(const LabelSpace& ls) {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    std::string name = ls.classes[i];
    std::replace(name.begin(), name.end(), '_', ' ');
    if (i) out += "\n";
    out += std::to_string(i) + ": " + name;
  }
  return out;
}

inline std::string render_choices(const std::vector<std::string>& choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i) out += "\n";
    out += choice_letter(i) + ". " + choices[i];
  }
  return out;
}

inline std::string render_prompt(const PromptTemplate& t, const Sample& s,
                                 const LabelSpace* label_space = nullptr) {
  if (s.task != t.task) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("template ") + t.id + " is for " +
                    to_string(t.task) + ", sample is " + to_string(s.task),
                "task");
  }
  if (!placeholders_satisfiable(t)) {
    throw Error(ErrorCode::MissingPlaceholderData,
                "template " + t.id + " uses placeholders its task cannot fill",
                "template");
  }
  std::string out;
  std::size_t cursor = 0;
  const std::string_view body = t.body;
  while (cursor < body.size()) {
    const auto open = body.find('{', cursor);
    if (open == std::string_view::npos) break;
    const auto close = body.find('}', open);
    if (close == std::string_view::npos) break;
    const auto name = body.substr(open + 1, close - open - 1);
    std::optional<std::string> value;
    if (name == "input") {
      value = s.input;
    } else if (name == "context") {
      if (!s.context) {
        throw Error(ErrorCode::MissingPlaceholderData,
                    "sample " + s.id + " has no context", "context");
      }
      value = *s.context;
    } else if (name == "choices") {
      if (!s.choices) {
        throw Error(ErrorCode::MissingPlaceholderData,
                    "sample " + s.id + " has no choices", "choices");
      }
      value = render_choices(*s.choices);
    } else if (name == "label_menu") {
      if (label_space == nullptr) {
        throw Error(ErrorCode::MissingPlaceholderData,
                    "no label space for the label menu", "label_menu");
      }
      value = render_label_menu(*label_space);
    }
    if (value) {
      out.append(body.substr(cursor, open - cursor));
      out.append(*value);
    } else {
      out.append(body.substr(cursor, close + 1 - cursor));
    }
    cursor = close + 1;
  }
  out.append(body.substr(cursor));
  if (t.answer_language == AnswerLanguage::English) {
    if (!out.empty() && out.back() != '\n') out += "\n";
    out += "Respond in English.";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Template assets

struct TemplateInfo {
  TaskKind task;
  std::optional<Assertiveness> tier;
};

/// Maps an asset file stem to its task. `tos_<tier>` files are the
/// fairness-classification prompts; other stems start with the task name.
inline std::optional<TemplateInfo> template_info(std::string_view stem) {
  if (stem == "tos_basic") {
    return TemplateInfo{TaskKind::SingleLabel, Assertiveness::Basic};
  }
  if (stem == "tos_assertive") {
    return TemplateInfo{TaskKind::SingleLabel, Assertiveness::Assertive};
  }
  if (stem == "tos_highly_assertive") {
    return TemplateInfo{TaskKind::SingleLabel,
                        Assertiveness::HighlyAssertive};
  }
  std::optional<TemplateInfo> best;
  std::size_t best_len = 0;
  for (auto t : {TaskKind::MultiLabel, TaskKind::SingleLabel,
                 TaskKind::MultipleChoice, TaskKind::Summarization,
                 TaskKind::QA, TaskKind::Keyphrases, TaskKind::OpenEnded}) {
    const std::string_view name = to_string(t);
    if (stem.substr(0, name.size()) == name && name.size() > best_len &&
        (stem.size() == name.size() || stem[name.size()] == '_')) {
      best = TemplateInfo{t, std::nullopt};
      best_len = name.size();
    }
  }
  return best;
}

inline PromptTemplate load_template(const std::filesystem::path& file) {
  const auto stem = file.stem().string();
  const auto info = template_info(stem);
  if (!info) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot tell the task of template " + stem, "template");
  }
  PromptTemplate t;
  t.id = stem;
  t.task = info->task;
  t.assertiveness = info->tier;
  t.body = read_file(file);
  while (!t.body.empty() && t.body.back() == '\n') t.body.pop_back();
  if (!placeholders_satisfiable(t)) {
    throw Error(ErrorCode::MissingPlaceholderData,
                "template " + stem + " uses placeholders its task cannot fill",
                "template");
  }
  return t;
}

/// Looks a template up by id in an asset directory (`<dir>/<id>.txt`).
inline PromptTemplate load_template(const std::filesystem::path& dir,
                                    std::string_view id) {
  return load_template(dir / (std::string(id) + ".txt"));
}

inline std::string default_template_id(TaskKind task) {
  return to_string(task);
}

// ---------------------------------------------------------------------------
// Extraction

enum class ExtractionMode { Strict, Lenient };

namespace detail {

struct IntegerToken {
  std::int64_t value;
  std::size_t offset;
};

inline bool is_word_char(char32_t c) {
  const auto cat = unicode::category(c);
  return cat == unicode::Category::Letter || cat == unicode::Category::Digit ||
         cat == unicode::Category::Mark;
}

/// ASCII digit runs that stand alone: not glued to letters or digits, not
/// part of a decimal number, not negative.
inline std::vector<IntegerToken> standalone_integers(std::string_view text) {
  const auto cps = unicode::decode(text);
  std::vector<IntegerToken> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (cps[i].value < '0' || cps[i].value > '9') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && cps[j].value >= '0' && cps[j].value <= '9') ++j;
    bool ok = true;
    if (i > 0) {
      const char32_t p = cps[i - 1].value;
      if (is_word_char(p) || p == '-' || p == 0x2212) ok = false;
      if (p == '.' && i > 1 && cps[i - 2].value >= '0' &&
          cps[i - 2].value <= '9') {
        ok = false;
      }
    }
    if (j < cps.size()) {
      const char32_t n = cps[j].value;
      if (is_word_char(n)) ok = false;
      if ((n == '.' || n == ',') && j + 1 < cps.size() &&
          cps[j + 1].value >= '0' && cps[j + 1].value <= '9') {
        ok = false;
      }
    }
    if (ok && j - i <= 18) {
      const auto digits =
          text.substr(cps[i].offset, cps[j - 1].offset + 1 - cps[i].offset);
      out.push_back({std::stoll(std::string(digits)), cps[i].offset});
    }
    i = j;
  }
  return out;
}

/// Earliest case-insensitive, word-bounded occurrence of any class name
/// (underscores also match spaces). Ties go to the longer name.
inline Label find_class_name(std::string_view response,
                             const LabelSpace& ls) {
  const std::string hay = unicode::to_lower(response);
  std::size_t best_pos = std::string::npos, best_len = 0;
  Label best;
  for (std::size_t c = 0; c < ls.size(); ++c) {
    std::vector<std::string> forms{unicode::to_lower(ls.classes[c])};
    auto spaced = forms[0];
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    if (spaced != forms[0]) forms.push_back(spaced);
    for (const auto& form : forms) {
      if (form.empty()) continue;
      for (auto pos = hay.find(form); pos != std::string::npos;
           pos = hay.find(form, pos + 1)) {
        const auto before = unicode::decode(hay.substr(0, pos));
        const auto after = unicode::decode(hay.substr(pos + form.size()));
        const bool left_ok =
            before.empty() || !is_word_char(before.back().value);
        const bool right_ok =
            after.empty() || !is_word_char(after.front().value);
        if (!left_ok || !right_ok) continue;
        if (pos < best_pos || (pos == best_pos && form.size() > best_len)) {
          best_pos = pos;
          best_len = form.size();
          best = static_cast<std::int64_t>(c);
        }
        break;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Strict: the trimmed response is exactly one in-range integer.
/// Lenient: first in-range standalone integer, else the earliest class name,
/// else Invalid (nullopt).
inline Label extract_label(std::string_view response, const LabelSpace& ls,
                           ExtractionMode mode) {
  const auto n = static_cast<std::int64_t>(ls.size());
  const auto t = trim(response);
  if (mode == ExtractionMode::Strict) {
    if (t.empty() || t.size() > 18 ||
        !std::all_of(t.begin(), t.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    const auto v = std::stoll(std::string(t));
    return v < n ? Label(v) : std::nullopt;
  }
  for (const auto& tok : detail::standalone_integers(response)) {
    if (tok.value >= 0 && tok.value < n) return tok.value;
  }
  return detail::find_class_name(response, ls);
}

/// Strict: a single letter A, B, ... within range. Lenient: the one distinct
/// standalone choice letter (two different letters are ambiguous), else a
/// unique verbatim choice-text match, else Invalid.
inline Label extract_choice(std::string_view response, std::size_t n_choices,
                            ExtractionMode mode,
                            const std::vector<std::string>* choices = nullptr) {
  if (n_choices < 2 || n_choices > 26) {
    throw Error(ErrorCode::InvalidArgument, "need 2..26 choices",
                "n_choices");
  }
  const auto t = trim(response);
  auto letter_index = [&](char32_t c) -> Label {
    if (c >= 'A' && c < 'A' + n_choices) return std::int64_t(c - 'A');
    return std::nullopt;
  };
  if (mode == ExtractionMode::Strict) {
    if (t.size() != 1) return std::nullopt;
    return letter_index(static_cast<unsigned char>(t[0]));
  }
  const auto cps = unicode::decode(response);
  std::set<std::int64_t> letters;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto idx = letter_index(cps[i].value);
    if (!idx) continue;
    const bool left_ok = i == 0 || !detail::is_word_char(cps[i - 1].value);
    const bool right_ok =
        i + 1 == cps.size() || !detail::is_word_char(cps[i + 1].value);
    if (left_ok && right_ok) letters.insert(*idx);
  }
  if (letters.size() == 1) return *letters.begin();
  if (letters.size() > 1) return std::nullopt;
  if (choices != nullptr) {
    const auto hay = unicode::to_lower(response);
    Label found;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < choices->size() && i < n_choices; ++i) {
      const auto needle = unicode::to_lower(trim((*choices)[i]));
      if (!needle.empty() && hay.find(needle) != std::string::npos) {
        found = static_cast<std::int64_t>(i);
        ++hits;
      }
    }
    if (hits == 1) return found;
  }
  return std::nullopt;
}

struct MultiLabelExtraction {
  /// Distinct labels in order of first mention; doubles as a ranking.
  std::vector<std::int64_t> labels;
  /// Pieces that named no valid class.
  std::vector<std::string> dropped;

  LabelSet as_set() const { return {labels.begin(), labels.end()}; }
};

/// Splits on commas, semicolons and newlines; each piece is an integer index
/// or a class name.
inline MultiLabelExtraction extract_multilabels(std::string_view response,
                                                const LabelSpace& ls) {
  MultiLabelExtraction out;
  std::set<std::int64_t> seen;
  std::string piece;
  auto flush = [&] {
    const auto t = std::string(trim(piece));
    piece.clear();
    if (t.empty()) return;
    Label idx;
    if (std::all_of(t.begin(), t.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      if (t.size() <= 18) {
        const auto v = std::stoll(t);
        if (v < static_cast<std::int64_t>(ls.size())) idx = v;
      }
    } else {
      const auto lowered = unicode::to_lower(t);
      for (std::size_t c = 0; c < ls.size(); ++c) {
        auto name = unicode::to_lower(ls.classes[c]);
        auto spaced = name;
        std::replace(spaced.begin(), spaced.end(), '_', ' ');
        if (lowered == name || lowered == spaced) {
          idx = static_cast<std::int64_t>(c);
          break;
        }
      }
    }
    if (!idx) {
      out.dropped.push_back(t);
    } else if (seen.insert(*idx).second) {
      out.labels.push_back(*idx);
    }
  };
  for (char c : response) {
    if (c == ',' || c == ';' || c == '\n') {
      flush();
    } else {
      piece.push_back(c);
    }
  }
  flush();
  return out;
}

/// Keyphrase list from a free-text reply: split on commas, semicolons and
/// newlines, list markers ("-", "*", "1.") stripped, case-insensitive
/// duplicates dropped.
inline std::vector<std::string> extract_keyphrases(std::string_view response) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string piece;
  auto flush = [&] {
    std::string_view t = trim(piece);
    if (!t.empty() && (t.front() == '-' || t.front() == '*')) {
      t = trim(t.substr(1));
    }
    std::size_t d = 0;
    while (d < t.size() && t[d] >= '0' && t[d] <= '9') ++d;
    if (d > 0 && d < t.size() && (t[d] == '.' || t[d] == ')')) {
      t = trim(t.substr(d + 1));
    }
    if (!t.empty() && seen.insert(unicode::to_lower(t)).second) {
      out.emplace_back(t);
    }
    piece.clear();
  };
  for (char c : response) {
    if (c == ',' || c == ';' || c == '\n') {
      flush();
    } else {
      piece.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace mleval
