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

// Cross-language aggregation: min-max and clipped z-score normalization,
// typological similarity to a reference language, and correlation.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mleval/common.hpp"

namespace mleval {

/// language -> value.
using LangScores = std::map<std::string, double>;

// ---------------------------------------------------------------------------
// Score tables

struct ScoreEntry {
  std::string dataset;
  std::string model;
  std::string language;
  double score = 0.0;
};

struct ScoreTable {
  std::vector<ScoreEntry> entries;

  /// dataset -> model -> language -> score.
  std::map<std::string, std::map<std::string, LangScores>> rows() const {
    std::map<std::string, std::map<std::string, LangScores>> out;
    for (const auto& e : entries) out[e.dataset][e.model][e.language] = e.score;
    return out;
  }
};

/// CSV with header `dataset,model,language,score`; '#' lines are comments.
inline ScoreTable parse_score_csv(std::string_view text) {
  ScoreTable t;
  std::size_t line_no = 0;
  bool header = true;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (header) {
      header = false;
      if (cells.size() != 4 || trim(cells[0]) != "dataset" ||
          trim(cells[1]) != "model" || trim(cells[2]) != "language" ||
          trim(cells[3]) != "score") {
        throw Error(ErrorCode::SchemaViolation,
                    "expected header dataset,model,language,score", "header",
                    line_no);
      }
      continue;
    }
    if (cells.size() != 4) {
      throw Error(ErrorCode::MalformedLine, "expected 4 cells", "", line_no);
    }
    ScoreEntry e{std::string(trim(cells[0])), std::string(trim(cells[1])),
                 std::string(trim(cells[2])), 0.0};
    try {
      std::size_t used = 0;
      const std::string s(trim(cells[3]));
      e.score = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedLine, "score is not a number", "score",
                  line_no);
    }
    if (!std::isfinite(e.score)) {
      throw Error(ErrorCode::SchemaViolation, "score is not finite", "score",
                  line_no);
    }
    if (!seen.insert({e.dataset, e.model, e.language}).second) {
      throw Error(ErrorCode::SchemaViolation,
                  "duplicate (dataset, model, language)", "language", line_no);
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Normalization

struct NormalizedRow {
  LangScores values;
  /// Set when max == min and every language was mapped to 0.5.
  bool degenerate = false;
};

inline NormalizedRow minmax_normalize_row(const LangScores& row) {
  if (row.size() < 2) {
    throw Error(ErrorCode::TooFewLanguages,
                "min-max needs at least two languages");
  }
  double lo = row.begin()->second, hi = lo;
  for (const auto& [lang, s] : row) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  NormalizedRow out;
  out.degenerate = hi == lo;
  for (const auto& [lang, s] : row) {
    out.values[lang] = out.degenerate ? 0.5 : (s - lo) / (hi - lo);
  }
  return out;
}

struct AveragedScore {
  double mean = 0.0;
  /// Number of contributing models or datasets.
  std::size_t count = 0;
};

using LangAverages = std::map<std::string, AveragedScore>;

/// Mean over the models that scored each language.
inline LangAverages model_average(const std::vector<LangScores>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyModelSet, "no model rows");
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& row : rows) {
    for (const auto& [lang, v] : row) {
      acc[lang].first += v;
      ++acc[lang].second;
    }
  }
  LangAverages out;
  for (const auto& [lang, a] : acc) {
    out[lang] = {a.first / static_cast<double>(a.second), a.second};
  }
  return out;
}

/// dataset -> language -> per-dataset score, averaged over the datasets that
/// contain each language.
inline LangAverages language_aggregate(
    const std::map<std::string, LangScores>& per_dataset) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [dataset, row] : per_dataset) {
    for (const auto& [lang, v] : row) {
      acc[lang].first += v;
      ++acc[lang].second;
    }
  }
  LangAverages out;
  for (const auto& [lang, a] : acc) {
    out[lang] = {a.first / static_cast<double>(a.second), a.second};
  }
  return out;
}

inline double rescale_z(double z, double c) {
  return (std::clamp(z, -c, c) + c) / (2.0 * c);
}

/// Population z-scores clipped to [-c, c] and mapped onto [0, 1].
inline LangScores zscore_cell(const LangScores& row, double c = 2.0) {
  if (row.size() < 2) {
    throw Error(ErrorCode::TooFewLanguages,
                "z-scores need at least two languages");
  }
  if (!(c > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "clip bound must be positive");
  }
  std::vector<double> xs;
  for (const auto& [lang, s] : row) xs.push_back(s);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(xs.size()));
  LangScores out;
  for (const auto& [lang, s] : row) {
    out[lang] = rescale_z(sd == 0.0 ? 0.0 : (s - mean) / sd, c);
  }
  return out;
}

struct HeatmapCell {
  std::string dataset;
  std::string language;
  double z_tilde = 0.0;
  std::size_t models = 0;
};

struct AggregationResult {
  /// dataset -> language -> averaged min-max score.
  std::map<std::string, LangAverages> dataset_scores;
  LangAverages language_scores;
  std::vector<HeatmapCell> heatmap;
  std::vector<std::string> warnings;
};

/// Min-max per (dataset, model) row, model average per dataset, then the
/// per-language mean; plus z-score cells averaged over models. Rows with a
/// single language are skipped with a warning.
inline AggregationResult aggregate_scores(const ScoreTable& table,
                                          double clip = 2.0) {
  AggregationResult out;
  std::map<std::string, LangScores> per_dataset;
  for (const auto& [dataset, models] : table.rows()) {
    std::vector<LangScores> normalized;
    std::vector<LangScores> zrows;
    for (const auto& [model, row] : models) {
      if (row.size() < 2) {
        out.warnings.push_back("skipping " + dataset + "/" + model +
                               ": fewer than two languages");
        continue;
      }
      auto n = minmax_normalize_row(row);
      if (n.degenerate) {
        out.warnings.push_back("degenerate row " + dataset + "/" + model +
                               ": all scores equal, mapped to 0.5");
      }
      normalized.push_back(std::move(n.values));
      zrows.push_back(zscore_cell(row, clip));
    }
    if (normalized.empty()) continue;
    auto avg = model_average(normalized);
    for (const auto& [lang, a] : avg) per_dataset[dataset][lang] = a.mean;
    out.dataset_scores[dataset] = std::move(avg);
    for (const auto& [lang, a] : model_average(zrows)) {
      out.heatmap.push_back({dataset, lang, a.mean, a.count});
    }
  }
  out.language_scores = language_aggregate(per_dataset);
  return out;
}

// ---------------------------------------------------------------------------
// Typological similarity

inline constexpr std::array<std::string_view, 8> kWalsFeatures = {
    "81A", "85A", "86A", "87A", "88A", "89A", "12A", "50A"};

/// language -> feature id -> categorical value.
using WalsFeatureSet = std::map<std::string, std::map<std::string, std::string>>;

/// `language<TAB>feature_id<TAB>value` per line.
inline WalsFeatureSet parse_wals_tsv(std::string_view text) {
  WalsFeatureSet out;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, '\t');
    if (cells.size() != 3) {
      throw Error(ErrorCode::MalformedLine, "expected 3 tab-separated cells",
                  "", line_no);
    }
    const std::string lang(trim(cells[0])), feature(trim(cells[1]));
    if (lang == "language" && feature == "feature_id") continue;
    if (std::find(kWalsFeatures.begin(), kWalsFeatures.end(), feature) ==
        kWalsFeatures.end()) {
      throw Error(ErrorCode::SchemaViolation,
                  "feature " + feature + " is not in the fixed feature list",
                  "feature_id", line_no);
    }
    out[lang][feature] = std::string(trim(cells[2]));
  }
  return out;
}

/// Share of the fixed features on which both languages have a value and
/// agree. Features missing on either side leave the denominator.
inline double wals_similarity(const WalsFeatureSet& features,
                              const std::string& lang,
                              const std::string& reference = "en") {
  const auto a = features.find(lang);
  const auto b = features.find(reference);
  if (a == features.end()) {
    throw Error(ErrorCode::UnknownLanguage, "no WALS features for " + lang,
                lang);
  }
  if (b == features.end()) {
    throw Error(ErrorCode::UnknownLanguage,
                "no WALS features for " + reference, reference);
  }
  std::size_t compared = 0, matched = 0;
  for (auto f : kWalsFeatures) {
    const auto fa = a->second.find(std::string(f));
    const auto fb = b->second.find(std::string(f));
    if (fa == a->second.end() || fb == b->second.end()) continue;
    ++compared;
    if (fa->second == fb->second) ++matched;
  }
  if (compared == 0) {
    throw Error(ErrorCode::NoComparableFeatures,
                lang + " and " + reference + " share no feature", lang);
  }
  return static_cast<double>(matched) / static_cast<double>(compared);
}

/// kind -> language -> language -> distance.
using DistanceMatrices =
    std::map<std::string, std::map<std::string, LangScores>>;

inline void check_distance(double d, std::size_t line_no = 0) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw Error(ErrorCode::OutOfRangeDistance,
                "distance " + std::to_string(d) + " outside [0, 1]", "",
                line_no);
  }
}

/// Blocks separated by blank lines. Each block opens with a header row whose
/// first cell names the distance kind and whose other cells are language
/// codes; each following row is `language<TAB>distances...`.
inline DistanceMatrices parse_distance_tsv(std::string_view text) {
  DistanceMatrices out;
  std::string kind;
  std::vector<std::string> columns;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) {
      columns.clear();
      continue;
    }
    if (line.front() == '#') continue;
    const auto cells = split(line, '\t');
    if (columns.empty()) {
      kind = std::string(trim(cells[0]));
      if (kind.empty()) kind = "syntactic";
      for (std::size_t i = 1; i < cells.size(); ++i) {
        columns.emplace_back(trim(cells[i]));
      }
      if (columns.empty()) {
        throw Error(ErrorCode::MalformedLine, "header without languages", "",
                    line_no);
      }
      continue;
    }
    if (cells.size() != columns.size() + 1) {
      throw Error(ErrorCode::MalformedLine, "row width differs from header",
                  "", line_no);
    }
    const std::string row_lang(trim(cells[0]));
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string cell(trim(cells[i + 1]));
      if (cell.empty() || cell == "NA") continue;
      double d = 0.0;
      try {
        d = std::stod(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedLine, "distance is not a number", "",
                    line_no);
      }
      check_distance(d, line_no);
      out[kind][row_lang][columns[i]] = d;
    }
  }
  return out;
}

enum class DistanceKind { Syntactic, Averaged };

inline std::optional<double> lookup_distance(const DistanceMatrices& m,
                                             const std::string& kind,
                                             const std::string& a,
                                             const std::string& b) {
  const auto k = m.find(kind);
  if (k == m.end()) return std::nullopt;
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    const auto row = k->second.find(x);
    if (row == k->second.end()) continue;
    const auto cell = row->second.find(y);
    if (cell != row->second.end()) return cell->second;
  }
  return std::nullopt;
}

/// 1 - d for the syntactic kind, or 1 - mean(d) over every kind that has a
/// value for the pair.
inline double similarity_from_distances(const DistanceMatrices& m,
                                        const std::string& lang,
                                        DistanceKind kind,
                                        const std::string& reference = "en") {
  if (lang == reference) return 1.0;
  if (kind == DistanceKind::Syntactic) {
    const auto d = lookup_distance(m, "syntactic", lang, reference);
    if (!d) {
      throw Error(ErrorCode::UnknownLanguage,
                  "no syntactic distance for " + lang, lang);
    }
    check_distance(*d);
    return 1.0 - *d;
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [k, unused] : m) {
    if (const auto d = lookup_distance(m, k, lang, reference)) {
      check_distance(*d);
      sum += *d;
      ++n;
    }
  }
  if (n == 0) {
    throw Error(ErrorCode::UnknownLanguage, "no distance for " + lang, lang);
  }
  return 1.0 - sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Correlation

struct Correlation {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;
};

/// 1-based ranks, ties receive the mean of the ranks they span.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ConstantSeries, "a series is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Pearson and Spearman over the languages present in both maps.
inline Correlation correlate(const LangScores& scores,
                             const LangScores& similarities) {
  std::vector<double> x, y;
  for (const auto& [lang, s] : scores) {
    const auto it = similarities.find(lang);
    if (it == similarities.end()) continue;
    x.push_back(s);
    y.push_back(it->second);
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::TooFewPoints,
                "need at least three common languages, have " +
                    std::to_string(x.size()));
  }
  Correlation c;
  c.n = x.size();
  c.pearson = pearson(x, y);
  c.spearman = pearson(average_ranks(x), average_ranks(y));
  return c;
}

}  // namespace mleval
