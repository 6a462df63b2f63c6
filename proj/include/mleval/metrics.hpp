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

// Scoring functions. Everything here is pure; variances and standard
// deviations are population (1/N) statistics throughout.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/tokenize.hpp"

namespace mleval {

/// An extracted discrete prediction; nullopt marks an unparseable response.
using Label = std::optional<std::int64_t>;
using LabelSet = std::set<std::int64_t>;

struct Stats {
  double mean = 0.0;
  double sd = 0.0;
  double variance = 0.0;
};

inline Stats score_stats(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::Empty, "empty score series");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  Stats s;
  s.mean = sum / n;
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.variance = sq / n;
  s.sd = std::sqrt(s.variance);
  return s;
}

// ---------------------------------------------------------------------------
// Classification

inline double accuracy(std::span<const Label> preds,
                       std::span<const std::int64_t> golds) {
  if (preds.size() != golds.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and golds differ");
  }
  if (preds.empty()) throw Error(ErrorCode::Empty, "no predictions");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] && *preds[i] == golds[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

struct PrfSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double precision_sd = 0.0;
  double recall_sd = 0.0;
  double f1_sd = 0.0;
};

inline double harmonic_f1(double p, double r) {
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

/// Example-based precision/recall/F1 for multi-label prediction.
inline PrfSummary example_prf1(std::span<const LabelSet> preds,
                               std::span<const LabelSet> golds) {
  if (preds.size() != golds.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and golds differ");
  }
  if (preds.empty()) throw Error(ErrorCode::Empty, "no samples");
  std::vector<double> ps, rs, fs;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& pred = preds[i];
    const auto& gold = golds[i];
    std::size_t inter = 0;
    for (auto l : pred) inter += gold.count(l);
    double p;
    if (pred.empty()) {
      p = gold.empty() ? 1.0 : 0.0;
    } else {
      p = static_cast<double>(inter) / static_cast<double>(pred.size());
    }
    const double r =
        gold.empty() ? (pred.empty() ? 1.0 : 0.0)
                     : static_cast<double>(inter) /
                           static_cast<double>(gold.size());
    ps.push_back(p);
    rs.push_back(r);
    fs.push_back(harmonic_f1(p, r));
  }
  const auto sp = score_stats(ps), sr = score_stats(rs), sf = score_stats(fs);
  return {sp.mean, sr.mean, sf.mean, sp.sd, sr.sd, sf.sd};
}

/// Mean over samples of |top-k(ranking) ∩ gold| / k with k = |gold|.
inline double mean_r_precision(
    std::span<const std::vector<std::int64_t>> rankings,
    std::span<const LabelSet> golds) {
  if (rankings.size() != golds.size()) {
    throw Error(ErrorCode::LengthMismatch, "rankings and golds differ");
  }
  if (rankings.empty()) throw Error(ErrorCode::Empty, "no samples");
  double total = 0.0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto& gold = golds[i];
    if (gold.empty()) {
      throw Error(ErrorCode::EmptyGold,
                  "sample " + std::to_string(i) + " has no gold labels");
    }
    const std::size_t k = gold.size();
    std::size_t hits = 0;
    LabelSet counted;
    for (std::size_t r = 0; r < k && r < rankings[i].size(); ++r) {
      const auto l = rankings[i][r];
      if (gold.count(l) && counted.insert(l).second) ++hits;
    }
    total += static_cast<double>(hits) / static_cast<double>(k);
  }
  return total / static_cast<double>(rankings.size());
}

/// Ordinal misclassification cost on the three-class fairness scale:
/// 0 correct, 0.5 adjacent class, 1.0 two classes away or unparseable.
inline double penalty_rating(Label pred, std::int64_t gold,
                             std::size_t n_ordinal_classes = 3) {
  if (n_ordinal_classes != 3) {
    throw Error(ErrorCode::OutOfRange,
                "penalty rating is defined for three ordinal classes only");
  }
  if (gold < 0 || gold > 2) {
    throw Error(ErrorCode::OutOfRange, "gold label outside 0..2");
  }
  if (!pred) return 1.0;
  if (*pred < 0 || *pred > 2) {
    throw Error(ErrorCode::OutOfRange, "predicted label outside 0..2");
  }
  const auto dist = *pred > gold ? *pred - gold : gold - *pred;
  return static_cast<double>(dist) / 2.0;
}

// ---------------------------------------------------------------------------
// Text overlap

struct OverlapScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline OverlapScore overlap_from_counts(double hits, double n_gen,
                                        double n_ref) {
  if (n_gen <= 0.0 || n_ref <= 0.0) return {};
  const double p = hits / n_gen;
  const double r = hits / n_ref;
  return {p, r, harmonic_f1(p, r)};
}

namespace detail {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

inline NgramCounts ngram_counts(const std::vector<std::string>& tokens,
                                std::size_t n) {
  NgramCounts out;
  if (n == 0 || tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i,
                                   tokens.begin() + i + n)];
  }
  return out;
}

inline std::size_t clipped_overlap(const NgramCounts& gen,
                                   const NgramCounts& ref) {
  std::size_t hits = 0;
  for (const auto& [gram, count] : gen) {
    const auto it = ref.find(gram);
    if (it != ref.end()) hits += std::min(count, it->second);
  }
  return hits;
}

inline std::size_t total(const NgramCounts& c) {
  std::size_t t = 0;
  for (const auto& [_, n] : c) t += n;
  return t;
}

}  // namespace detail

inline OverlapScore rouge_n(std::string_view candidate,
                            std::string_view reference, int n) {
  if (n != 1 && n != 2) {
    throw Error(ErrorCode::InvalidArgument, "rouge_n supports n = 1 or 2");
  }
  const auto gen = detail::ngram_counts(metric_tokens(candidate),
                                        static_cast<std::size_t>(n));
  const auto ref = detail::ngram_counts(metric_tokens(reference),
                                        static_cast<std::size_t>(n));
  return overlap_from_counts(
      static_cast<double>(detail::clipped_overlap(gen, ref)),
      static_cast<double>(detail::total(gen)),
      static_cast<double>(detail::total(ref)));
}

/// Dynamic-programming LCS table; row i, column j holds LCS(a[:i], b[:j]).
inline std::vector<std::vector<std::size_t>> lcs_table(
    const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(
      a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1
                                     : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t;
}

inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  return lcs_table(a, b)[a.size()][b.size()];
}

/// Indices into `ref` of one longest common subsequence with `gen`.
inline std::vector<std::size_t> lcs_ref_indices(
    const std::vector<std::string>& ref, const std::vector<std::string>& gen) {
  const auto t = lcs_table(ref, gen);
  std::vector<std::size_t> out;
  std::size_t i = ref.size(), j = gen.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == gen[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[i - 1][j] >= t[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

enum class RougeLMode { Flat, SentenceSum };

inline OverlapScore rouge_l_tokens(const std::vector<std::string>& gen,
                                   const std::vector<std::string>& ref) {
  return overlap_from_counts(static_cast<double>(lcs_length(ref, gen)),
                             static_cast<double>(gen.size()),
                             static_cast<double>(ref.size()));
}

/// Flat: LCS over whole token sequences. SentenceSum: union-LCS summed over
/// reference sentences, with hits clipped by token counts on both sides.
inline OverlapScore rouge_l(std::string_view candidate,
                            std::string_view reference,
                            RougeLMode mode = RougeLMode::Flat) {
  if (mode == RougeLMode::Flat) {
    return rouge_l_tokens(metric_tokens(candidate), metric_tokens(reference));
  }
  std::vector<std::vector<std::string>> gen_sents, ref_sents;
  std::map<std::string, std::size_t> gen_counts, ref_counts;
  std::size_t n_gen = 0, n_ref = 0;
  for (const auto& s : split_sentences(candidate)) {
    auto toks = metric_tokens(s);
    for (const auto& t : toks) ++gen_counts[t];
    n_gen += toks.size();
    if (!toks.empty()) gen_sents.push_back(std::move(toks));
  }
  for (const auto& s : split_sentences(reference)) {
    auto toks = metric_tokens(s);
    for (const auto& t : toks) ++ref_counts[t];
    n_ref += toks.size();
    if (!toks.empty()) ref_sents.push_back(std::move(toks));
  }
  if (n_gen == 0 || n_ref == 0) return {};
  std::size_t hits = 0;
  for (const auto& r : ref_sents) {
    std::set<std::size_t> united;
    for (const auto& g : gen_sents) {
      for (auto idx : lcs_ref_indices(r, g)) united.insert(idx);
    }
    for (auto idx : united) {
      const auto& tok = r[idx];
      auto& gc = gen_counts[tok];
      auto& rc = ref_counts[tok];
      if (gc > 0 && rc > 0) {
        ++hits;
        --gc;
        --rc;
      }
    }
  }
  return overlap_from_counts(static_cast<double>(hits),
                             static_cast<double>(n_gen),
                             static_cast<double>(n_ref));
}

/// Sentence BLEU against one reference. Orders with zero clipped matches
/// above unigrams use add-one smoothing; orders longer than the candidate
/// are left out of the geometric mean.
inline double bleu(std::string_view candidate, std::string_view reference,
                   int max_n = 4) {
  if (max_n < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_n must be >= 1");
  }
  const auto gen = metric_tokens(candidate);
  const auto ref = metric_tokens(reference);
  if (gen.empty() || ref.empty()) return 0.0;
  const std::size_t orders =
      std::min(static_cast<std::size_t>(max_n), gen.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const auto g = detail::ngram_counts(gen, n);
    const auto r = detail::ngram_counts(ref, n);
    const double matches = static_cast<double>(detail::clipped_overlap(g, r));
    const double totals = static_cast<double>(detail::total(g));
    double p;
    if (matches > 0.0) {
      p = matches / totals;
    } else if (n == 1) {
      return 0.0;
    } else {
      p = 1.0 / (totals + 1.0);
    }
    log_sum += std::log(p);
  }
  const double geo = std::exp(log_sum / static_cast<double>(orders));
  const double bp =
      gen.size() < ref.size()
          ? std::exp(1.0 - static_cast<double>(ref.size()) /
                               static_cast<double>(gen.size()))
          : 1.0;
  return geo * bp;
}

/// Exact-match METEOR: unigram alignment, recall-weighted harmonic mean and
/// a fragmentation penalty; no stemming or synonym stages.
inline double meteor_lite(std::string_view candidate,
                          std::string_view reference) {
  const auto gen = metric_tokens(candidate);
  const auto ref = metric_tokens(reference);
  if (gen.empty() || ref.empty()) return 0.0;
  constexpr std::size_t kNone = SIZE_MAX;
  std::vector<bool> used(ref.size(), false);
  std::vector<std::size_t> aligned;  // reference index per gen token
  std::size_t prev = kNone;
  for (const auto& tok : gen) {
    std::size_t pick = kNone;
    if (prev != kNone && prev + 1 < ref.size() && !used[prev + 1] &&
        ref[prev + 1] == tok) {
      pick = prev + 1;
    } else {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && ref[j] == tok) {
          pick = j;
          break;
        }
      }
    }
    // An unmatched generated token breaks the current chunk.
    if (pick != kNone) used[pick] = true;
    aligned.push_back(pick);
    prev = pick;
  }
  std::size_t matches = 0, chunks = 0;
  std::size_t last = kNone;
  for (auto idx : aligned) {
    if (idx != kNone) {
      ++matches;
      if (last == kNone || idx != last + 1) ++chunks;
    }
    last = idx;
  }
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(gen.size());
  const double r = m / static_cast<double>(ref.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

// ---------------------------------------------------------------------------
// Embeddings

inline double cosine_similarity(std::span<const double> a,
                                std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vectors must share a positive dimension");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine of an all-zero vector");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

/// Source of text embeddings for cosine similarity.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Signed feature hashing of lowercase tokens. Offline stand-in for a
/// neural sentence encoder.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dimension = 512) : dim_(dimension) {}

  std::vector<double> embed(std::string_view text) const override {
    std::vector<double> v(dim_, 0.0);
    for (const auto& tok : metric_tokens(text)) {
      const auto h = stable_hash(std::string_view(tok));
      v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
    return v;
  }

 private:
  std::size_t dim_;
};

// ---------------------------------------------------------------------------
// Run-level uncertainty

/// Per-class prediction counts for one sample across repeated runs.
class ClassDistribution {
 public:
  ClassDistribution() = default;
  explicit ClassDistribution(std::vector<std::uint64_t> counts)
      : counts_(std::move(counts)) {}

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t num_classes() const { return counts_.size(); }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

  std::vector<double> probabilities() const {
    const double n = static_cast<double>(total());
    std::vector<double> p;
    p.reserve(counts_.size());
    for (auto c : counts_) p.push_back(static_cast<double>(c) / n);
    return p;
  }

  std::uint64_t max_count() const {
    return counts_.empty() ? 0
                           : *std::max_element(counts_.begin(), counts_.end());
  }

 private:
  std::vector<std::uint64_t> counts_;
};

struct UncertaintyProfile {
  double entropy = 0.0;  // bits
  double gini = 0.0;
  double margin = 0.0;
};

inline UncertaintyProfile uncertainty_profile(const ClassDistribution& d) {
  if (d.num_classes() == 0 || d.total() == 0) {
    throw Error(ErrorCode::InvalidDistribution,
                "distribution needs at least one class and one run");
  }
  const auto p = d.probabilities();
  UncertaintyProfile out;
  double sq = 0.0;
  for (double pj : p) {
    if (pj > 0.0) out.entropy -= pj * std::log2(pj);
    sq += pj * pj;
  }
  out.entropy = std::max(0.0, out.entropy);
  out.gini = std::max(0.0, 1.0 - sq);
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  out.margin = sorted.size() >= 2 ? sorted[0] - sorted[1] : sorted[0];
  return out;
}

/// Share of runs that agree with the most common prediction.
inline double consistency(const ClassDistribution& d) {
  if (d.total() == 0) {
    throw Error(ErrorCode::InvalidDistribution, "no runs");
  }
  return static_cast<double>(d.max_count()) / static_cast<double>(d.total());
}

/// Mean over samples of the population variance of integer-coded labels.
inline double inter_run_variance(
    std::span<const std::vector<std::int64_t>> label_sequences) {
  if (label_sequences.empty()) throw Error(ErrorCode::Empty, "no samples");
  const std::size_t n = label_sequences.front().size();
  if (n < 2) {
    throw Error(ErrorCode::RaggedRuns, "need at least two runs per sample");
  }
  double total = 0.0;
  for (const auto& seq : label_sequences) {
    if (seq.size() != n) {
      throw Error(ErrorCode::RaggedRuns, "samples have unequal run counts");
    }
    std::vector<double> xs(seq.begin(), seq.end());
    total += score_stats(xs).variance;
  }
  return total / static_cast<double>(label_sequences.size());
}

}  // namespace mleval
