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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/unicode.hpp"

namespace mleval {

/// A token with its byte span in the source text.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits on whitespace and punctuation. Runs of Han, Hiragana, Katakana and
/// Thai characters become one token per character; combining marks stay
/// attached to the character they follow.
inline std::vector<Token> tokenize_spans(std::string_view text) {
  using unicode::Category;
  std::vector<Token> tokens;
  const auto cps = unicode::decode(text);
  std::size_t start = std::string_view::npos;

  auto flush = [&](std::size_t end) {
    if (start != std::string_view::npos && end > start) {
      tokens.push_back({std::string(text.substr(start, end - start)), start,
                        end});
    }
    start = std::string_view::npos;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto& cp = cps[i];
    const Category cat = unicode::category(cp.value);
    if (cat == Category::Space || cat == Category::Punct) {
      flush(cp.offset);
      continue;
    }
    if (cat == Category::Mark) {
      if (start == std::string_view::npos) start = cp.offset;
      continue;
    }
    if (cat == Category::Letter &&
        unicode::is_unsegmented(unicode::script_of(cp.value))) {
      flush(cp.offset);
      std::size_t end = cp.offset + cp.length;
      while (i + 1 < cps.size() &&
             unicode::category(cps[i + 1].value) == Category::Mark) {
        ++i;
        end = cps[i].offset + cps[i].length;
      }
      tokens.push_back(
          {std::string(text.substr(cp.offset, end - cp.offset)), cp.offset,
           end});
      continue;
    }
    if (start == std::string_view::npos) start = cp.offset;
  }
  flush(text.size());
  return tokens;
}

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_spans(text)) out.push_back(std::move(t.text));
  return out;
}

/// Tokens lowercased for overlap metrics.
inline std::vector<std::string> metric_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize_spans(text)) {
    out.push_back(unicode::to_lower(t.text));
  }
  return out;
}

/// True when every code point is a letter or combining mark.
inline bool is_alphabetic(std::string_view token) {
  const auto cps = unicode::decode(token);
  if (cps.empty()) return false;
  for (const auto& cp : cps) {
    const auto cat = unicode::category(cp.value);
    if (cat != unicode::Category::Letter && cat != unicode::Category::Mark) {
      return false;
    }
  }
  return true;
}

/// Sentence split for summary-level ROUGE. Terminators: . ! ? ; and their
/// CJK full-width forms, plus newline. Empty sentences are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (const auto& cp : unicode::decode(text)) {
    const char32_t c = cp.value;
    const bool end = c == '.' || c == '!' || c == '?' || c == ';' ||
                     c == 0x3002 || c == 0xFF01 || c == 0xFF1F || c == '\n';
    if (end) {
      if (c != '\n') current.append(text.substr(cp.offset, cp.length));
      if (!trim(current).empty()) out.push_back(current);
      current.clear();
    } else {
      current.append(text.substr(cp.offset, cp.length));
    }
  }
  if (!trim(current).empty()) out.push_back(current);
  return out;
}

}  // namespace mleval
