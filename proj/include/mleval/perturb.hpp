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

// Seeded adversarial perturbation of sample inputs. Prompts are never
// touched; only the data placed into them.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mleval/common.hpp"
#include "mleval/corpus.hpp"
#include "mleval/http.hpp"
#include "mleval/tokenize.hpp"
#include "mleval/unicode.hpp"

namespace mleval {

/// One replacement of `original` (possibly empty) at byte `position` of the
/// unperturbed text.
struct Edit {
  std::size_t position = 0;
  std::string original;
  std::string replacement;

  bool operator==(const Edit&) const = default;
};

inline json edit_to_json(const Edit& e) {
  return json{{"position", e.position},
              {"original", e.original},
              {"replacement", e.replacement}};
}

inline Edit edit_from_json(const json& j) {
  return {j.at("position").get<std::size_t>(),
          j.at("original").get<std::string>(),
          j.at("replacement").get<std::string>()};
}

/// Replays edits (ordered by position, ties in list order) over `original`.
inline std::string apply_edits(std::string_view original,
                               const std::vector<Edit>& edits) {
  std::string out;
  out.reserve(original.size() + edits.size() * 4);
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    if (e.position < cursor || e.position > original.size() ||
        original.substr(e.position, e.original.size()) != e.original) {
      throw Error(ErrorCode::InvalidArgument,
                  "edit at " + std::to_string(e.position) +
                      " does not match the original text");
    }
    out.append(original.substr(cursor, e.position - cursor));
    out.append(e.replacement);
    cursor = e.position + e.original.size();
  }
  out.append(original.substr(cursor));
  return out;
}

struct PerturbResult {
  std::string text;
  std::vector<Edit> edits;
  /// Sites that could be perturbed, and how many the Bernoulli draw picked.
  std::size_t eligible = 0;
  std::size_t selected = 0;
};

inline void check_rate(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rate must lie in [0, 1]",
                "rate");
  }
}

/// Random character insertion. Every non-whitespace code point is a site;
/// with probability `rate` a letter from the same script (and case) is
/// inserted immediately before or after it.
inline PerturbResult insert_chars(std::string_view text, double rate,
                                  std::uint64_t seed) {
  check_rate(rate);
  PerturbResult out;
  Rng rng(seed);
  for (const auto& cp : unicode::decode(text)) {
    if (unicode::is_space(cp.value)) continue;
    ++out.eligible;
    if (!rng.bernoulli(rate)) continue;
    ++out.selected;
    const bool after = rng.bernoulli(0.5);
    const auto letters = unicode::letters_for(unicode::script_of(cp.value),
                                              unicode::is_upper(cp.value));
    const char32_t inserted = letters[rng.below(letters.size())];
    out.edits.push_back({after ? cp.offset + cp.length : cp.offset, "",
                         unicode::encode(inserted)});
  }
  out.text = apply_edits(text, out.edits);
  return out;
}

/// Proposes a replacement for `token` given its surrounding text.
class Substituter {
 public:
  virtual ~Substituter() = default;
  /// Returns a non-empty replacement; returning `token` means "no change".
  virtual std::string substitute(std::string_view token,
                                 std::string_view left,
                                 std::string_view right,
                                 std::uint64_t seed) const = 0;
};

/// Synonym table with identity fallback. Lookup is exact first, then on the
/// lowercased token; several rows for one token are chosen between by seed.
class TableSubstituter final : public Substituter {
 public:
  TableSubstituter() = default;
  explicit TableSubstituter(
      std::map<std::string, std::vector<std::string>> table)
      : table_(std::move(table)) {}

  void add(std::string token, std::string replacement) {
    if (replacement.empty()) return;
    table_[std::move(token)].push_back(std::move(replacement));
  }

  /// Two-column TSV: token<TAB>replacement. Blank lines and '#' comments
  /// are skipped.
  static TableSubstituter from_tsv(std::string_view tsv) {
    TableSubstituter t;
    std::size_t line_no = 0;
    for (const auto& raw : split(tsv, '\n')) {
      ++line_no;
      std::string_view line = raw;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (trim(line).empty() || line.front() == '#') continue;
      const auto cols = split(line, '\t');
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
        throw Error(ErrorCode::MalformedLine,
                    "synonym table line " + std::to_string(line_no) +
                        " needs two non-empty columns",
                    "", line_no);
      }
      t.add(cols[0], cols[1]);
    }
    return t;
  }

  std::string substitute(std::string_view token, std::string_view,
                         std::string_view,
                         std::uint64_t seed) const override {
    auto it = table_.find(std::string(token));
    if (it == table_.end()) it = table_.find(unicode::to_lower(token));
    if (it == table_.end() || it->second.empty()) return std::string(token);
    Rng rng(seed);
    return it->second[rng.below(it->second.size())];
  }

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

/// Adapter for a remote masked-LM service:
/// POST {token, left, right, seed} -> {replacement}.
class HttpSubstituter final : public Substituter {
 public:
  explicit HttpSubstituter(std::string url, int timeout_s = 30)
      : url_(std::move(url)), timeout_s_(timeout_s) {}

  std::string substitute(std::string_view token, std::string_view left,
                         std::string_view right,
                         std::uint64_t seed) const override {
    const json req{{"token", token},
                   {"left", left},
                   {"right", right},
                   {"seed", seed}};
    const auto res = http_post_json(url_, req.dump(), {}, timeout_s_);
    if (res.status != 200) {
      throw Error(ErrorCode::Transport,
                  "substituter returned status " +
                      std::to_string(res.status) + " " + res.error);
    }
    const auto body = json::parse(res.body, nullptr, false);
    if (!body.is_object() || !body.contains("replacement") ||
        !body["replacement"].is_string()) {
      throw Error(ErrorCode::Transport, "substituter reply lacks replacement");
    }
    auto rep = body["replacement"].get<std::string>();
    return rep.empty() ? std::string(token) : rep;
  }

 private:
  std::string url_;
  int timeout_s_;
};

class SubstituterRegistry {
 public:
  void add(std::string name, std::shared_ptr<const Substituter> s) {
    entries_[std::move(name)] = std::move(s);
  }
  const Substituter& get(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) {
      throw Error(ErrorCode::UnknownSubstituter,
                  "no substituter named '" + name + "'", "substituter");
    }
    return *it->second;
  }
  bool contains(const std::string& name) const {
    return entries_.count(name) > 0;
  }

 private:
  std::map<std::string, std::shared_ptr<const Substituter>> entries_;
};

/// Word-level substitution. Eligible tokens are purely alphabetic and at
/// least two code points long; each is picked with probability `rate`.
inline PerturbResult substitute_words(std::string_view text, double rate,
                                      const Substituter& substituter,
                                      std::uint64_t seed) {
  check_rate(rate);
  PerturbResult out;
  Rng rng(seed);
  const auto tokens = tokenize_spans(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (!is_alphabetic(tok.text) || unicode::length(tok.text) < 2) continue;
    ++out.eligible;
    if (!rng.bernoulli(rate)) continue;
    ++out.selected;
    auto rep = substituter.substitute(tok.text, text.substr(0, tok.begin),
                                      text.substr(tok.end),
                                      stable_hash(seed, std::uint64_t{i}));
    if (!rep.empty() && rep != tok.text) {
      out.edits.push_back({tok.begin, tok.text, std::move(rep)});
    }
  }
  out.text = apply_edits(text, out.edits);
  return out;
}

enum class AttackKind { CharInsert, WordSubstitute };

inline const char* to_string(AttackKind k) {
  return k == AttackKind::CharInsert ? "char-insert" : "word-subst";
}

struct PerturbationSpec {
  AttackKind kind = AttackKind::CharInsert;
  double rate = 0.0;
  std::uint64_t seed = 0;
  /// Registry key; used by WordSubstitute only.
  std::string substituter = "table";

  bool operator==(const PerturbationSpec&) const = default;
};

inline json perturbation_spec_to_json(const PerturbationSpec& s) {
  json j{{"kind", to_string(s.kind)}, {"rate", s.rate}, {"seed", s.seed}};
  j["substituter"] = s.kind == AttackKind::WordSubstitute
                         ? json(s.substituter)
                         : json(nullptr);
  return j;
}

inline PerturbationSpec perturbation_spec_from_json(const json& j) {
  PerturbationSpec s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "char-insert") {
    s.kind = AttackKind::CharInsert;
  } else if (kind == "word-subst") {
    s.kind = AttackKind::WordSubstitute;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown attack " + kind, "kind");
  }
  s.rate = j.at("rate").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("substituter") && j["substituter"].is_string()) {
    s.substituter = j["substituter"].get<std::string>();
  }
  check_rate(s.rate);
  return s;
}

/// Parses `char-insert:<rate>` or `word-subst:<rate>`.
inline PerturbationSpec parse_attack(std::string_view flag,
                                     std::uint64_t seed) {
  const auto colon = flag.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "attack must look like kind:rate", "attack");
  }
  const auto kind = flag.substr(0, colon);
  PerturbationSpec s;
  s.seed = seed;
  if (kind == "char-insert") {
    s.kind = AttackKind::CharInsert;
  } else if (kind == "word-subst") {
    s.kind = AttackKind::WordSubstitute;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown attack '" + std::string(kind) + "'", "attack");
  }
  try {
    std::size_t used = 0;
    const std::string rate(flag.substr(colon + 1));
    s.rate = std::stod(rate, &used);
    if (used != rate.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad attack rate", "attack");
  }
  check_rate(s.rate);
  return s;
}

struct PerturbedSample {
  Sample original;
  std::string perturbed_input;
  std::optional<std::string> perturbed_context;
  std::vector<Edit> edits;
  std::vector<Edit> context_edits;

  /// The sample as sent to the model: perturbed text, untouched reference.
  Sample as_sample() const {
    Sample s = original;
    s.input = perturbed_input;
    if (perturbed_context) s.context = perturbed_context;
    return s;
  }
};

inline std::uint64_t sample_seed(std::uint64_t master, std::string_view dataset,
                                 std::string_view language,
                                 std::string_view id) {
  return stable_hash(master, dataset, language, id);
}

inline PerturbResult perturb_text(std::string_view text,
                                  const PerturbationSpec& spec,
                                  const SubstituterRegistry* registry,
                                  std::uint64_t seed) {
  if (spec.kind == AttackKind::CharInsert) {
    return insert_chars(text, spec.rate, seed);
  }
  if (registry == nullptr) {
    throw Error(ErrorCode::UnknownSubstituter, "no substituter registry",
                "substituter");
  }
  return substitute_words(text, spec.rate, registry->get(spec.substituter),
                          seed);
}

/// Perturbs input and, when present, context of every sample. The seed of
/// each sample derives from (spec.seed, dataset, language, id) only.
inline std::vector<PerturbedSample> perturb_samples(
    const std::vector<Sample>& samples, const PerturbationSpec& spec,
    std::string_view dataset, const SubstituterRegistry* registry = nullptr) {
  check_rate(spec.rate);
  if (spec.kind == AttackKind::WordSubstitute) {
    if (registry == nullptr) {
      throw Error(ErrorCode::UnknownSubstituter, "no substituter registry",
                  "substituter");
    }
    registry->get(spec.substituter);
  }
  std::vector<PerturbedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const auto seed = sample_seed(spec.seed, dataset, s.language, s.id);
    PerturbedSample ps;
    ps.original = s;
    auto in = perturb_text(s.input, spec, registry, seed);
    ps.perturbed_input = std::move(in.text);
    ps.edits = std::move(in.edits);
    if (s.context) {
      auto ctx = perturb_text(*s.context, spec, registry,
                              stable_hash(seed, std::string_view("context")));
      ps.perturbed_context = std::move(ctx.text);
      ps.context_edits = std::move(ctx.edits);
    }
    out.push_back(std::move(ps));
  }
  return out;
}

}  // namespace mleval
