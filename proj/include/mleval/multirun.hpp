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

// Repeated-run bookkeeping: per-sample tallies, majority votes, stability
// summaries and confusion matrices.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/metrics.hpp"

namespace mleval {

/// Extracted predictions, one row per sample, one column per run.
class RunMatrix {
 public:
  RunMatrix(std::vector<std::string> sample_ids,
            std::vector<std::vector<Label>> cells)
      : ids_(std::move(sample_ids)), cells_(std::move(cells)) {
    if (ids_.size() != cells_.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "sample ids and rows differ in length");
    }
    if (cells_.empty()) throw Error(ErrorCode::Empty, "no samples");
    const auto n = cells_.front().size();
    if (n == 0) throw Error(ErrorCode::RaggedRuns, "zero runs");
    for (const auto& row : cells_) {
      if (row.size() != n) {
        throw Error(ErrorCode::RaggedRuns, "samples have unequal run counts");
      }
    }
  }

  std::size_t num_samples() const { return cells_.size(); }
  std::size_t num_runs() const { return cells_.front().size(); }
  const std::vector<std::string>& sample_ids() const { return ids_; }
  const std::vector<Label>& row(std::size_t i) const { return cells_[i]; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<Label>> cells_;
};

/// Valid-run counts per class plus the number of Invalid runs.
struct RunTally {
  ClassDistribution valid;
  std::uint64_t invalid = 0;

  bool all_invalid() const { return valid.total() == 0; }
};

inline RunTally tally_row(std::span<const Label> row,
                          std::size_t num_classes) {
  std::vector<std::uint64_t> counts(num_classes, 0);
  RunTally t;
  for (const auto& p : row) {
    if (!p) {
      ++t.invalid;
      continue;
    }
    if (*p < 0 || static_cast<std::size_t>(*p) >= num_classes) {
      throw Error(ErrorCode::OutOfRange,
                  "label " + std::to_string(*p) + " outside label space");
    }
    ++counts[static_cast<std::size_t>(*p)];
  }
  t.valid = ClassDistribution(std::move(counts));
  return t;
}

inline std::vector<RunTally> tally_runs(const RunMatrix& m,
                                        std::size_t num_classes) {
  std::vector<RunTally> out;
  out.reserve(m.num_samples());
  for (std::size_t i = 0; i < m.num_samples(); ++i) {
    out.push_back(tally_row(m.row(i), num_classes));
  }
  return out;
}

/// Most frequent class; ties go to the lowest index.
inline std::int64_t majority_vote(const ClassDistribution& d) {
  if (d.total() == 0) {
    throw Error(ErrorCode::NoValidRuns, "no valid run to vote on");
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < d.num_classes(); ++c) {
    if (d.counts()[c] > d.counts()[best]) best = c;
  }
  return static_cast<std::int64_t>(best);
}

/// Majority label per sample; Invalid when every run was Invalid.
inline std::vector<Label> majority_labels(std::span<const RunTally> tallies) {
  std::vector<Label> out;
  out.reserve(tallies.size());
  for (const auto& t : tallies) {
    out.push_back(t.all_invalid() ? Label{} : Label{majority_vote(t.valid)});
  }
  return out;
}

struct StabilityReport {
  std::size_t num_samples = 0;
  std::size_t num_runs = 0;
  /// Mean over every (sample, run) cell; Invalid counts as wrong.
  double accuracy = 0.0;
  /// Population sd across samples of per-sample mean correctness.
  double correctness_sd = 0.0;
  double majority_accuracy = 0.0;
  /// The following average over samples with at least one valid run,
  /// using probabilities renormalized over valid runs.
  double mean_consistency = 0.0;
  double mean_entropy = 0.0;
  double mean_gini = 0.0;
  double mean_margin = 0.0;
  double inter_run_variance = 0.0;
  std::uint64_t invalid_cells = 0;
  std::vector<std::string> excluded_samples;
  /// A single run makes every run-level statistic trivial.
  bool degenerate = false;
};

inline StabilityReport stability_report(const RunMatrix& m,
                                        std::span<const std::int64_t> golds,
                                        std::size_t num_classes) {
  if (golds.size() != m.num_samples()) {
    throw Error(ErrorCode::LengthMismatch,
                "golds do not align with the run matrix");
  }
  StabilityReport r;
  r.num_samples = m.num_samples();
  r.num_runs = m.num_runs();
  r.degenerate = r.num_runs == 1;
  const auto tallies = tally_runs(m, num_classes);

  std::uint64_t correct_cells = 0;
  std::vector<double> per_sample;
  std::size_t majority_correct = 0;
  std::uint64_t sum_max = 0, sum_total = 0, first_total = 0;
  bool equal_totals = true;
  std::vector<double> consistencies;
  double entropy = 0.0, gini = 0.0, margin = 0.0, variance = 0.0;
  std::size_t included = 0;
  for (std::size_t i = 0; i < m.num_samples(); ++i) {
    std::uint64_t c = 0;
    for (const auto& p : m.row(i)) {
      if (p && *p == golds[i]) ++c;
    }
    correct_cells += c;
    per_sample.push_back(static_cast<double>(c) /
                         static_cast<double>(r.num_runs));
    const auto& t = tallies[i];
    r.invalid_cells += t.invalid;
    if (t.all_invalid()) {
      r.excluded_samples.push_back(m.sample_ids()[i]);
      continue;
    }
    if (majority_vote(t.valid) == golds[i]) ++majority_correct;
    if (included > 0 && t.valid.total() != first_total) equal_totals = false;
    if (included == 0) first_total = t.valid.total();
    ++included;
    sum_max += t.valid.max_count();
    sum_total += t.valid.total();
    consistencies.push_back(consistency(t.valid));
    const auto u = uncertainty_profile(t.valid);
    entropy += u.entropy;
    gini += u.gini;
    margin += u.margin;
    std::vector<double> xs;
    for (const auto& p : m.row(i)) {
      if (p) xs.push_back(static_cast<double>(*p));
    }
    variance += score_stats(xs).variance;
  }
  const double n_cells =
      static_cast<double>(r.num_samples) * static_cast<double>(r.num_runs);
  r.accuracy = static_cast<double>(correct_cells) / n_cells;
  r.correctness_sd = score_stats(per_sample).sd;
  r.majority_accuracy = static_cast<double>(majority_correct) /
                        static_cast<double>(r.num_samples);
  if (included > 0) {
    const double k = static_cast<double>(included);
    if (equal_totals) {
      // Exact when every sample has the same number of valid runs.
      r.mean_consistency =
          static_cast<double>(sum_max) / static_cast<double>(sum_total);
    } else {
      double s = 0.0;
      for (double c : consistencies) s += c;
      r.mean_consistency = s / k;
    }
    r.mean_entropy = entropy / k;
    r.mean_gini = gini / k;
    r.mean_margin = margin / k;
    r.inter_run_variance = variance / k;
  }
  return r;
}

/// Rows are gold classes; columns are predicted classes plus a final
/// Invalid column.
struct ConfusionMatrix {
  std::size_t num_classes = 0;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold][pred];
  }
  std::uint64_t invalid(std::size_t gold) const {
    return counts[gold][num_classes];
  }
  std::uint64_t invalid_total() const {
    std::uint64_t n = 0;
    for (const auto& row : counts) n += row[num_classes];
    return n;
  }
  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& row : counts) {
      for (auto c : row) n += c;
    }
    return n;
  }
};

inline ConfusionMatrix confusion_matrix(std::span<const Label> preds,
                                        std::span<const std::int64_t> golds,
                                        std::size_t num_classes) {
  if (preds.size() != golds.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and golds differ");
  }
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(num_classes, std::vector<std::uint64_t>(num_classes + 1));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto g = golds[i];
    if (g < 0 || static_cast<std::size_t>(g) >= num_classes) {
      throw Error(ErrorCode::OutOfRange, "gold label outside label space");
    }
    const auto& p = preds[i];
    std::size_t col = num_classes;
    if (p && *p >= 0 && static_cast<std::size_t>(*p) < num_classes) {
      col = static_cast<std::size_t>(*p);
    }
    ++cm.counts[static_cast<std::size_t>(g)][col];
  }
  return cm;
}

}  // namespace mleval
