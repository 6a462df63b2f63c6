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


#include "mleval/multirun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace mleval {
namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

// One row holding `counts[c]` copies of class c, in class order.
std::vector<Label> row_from_counts(const std::vector<int>& counts) {
  std::vector<Label> row;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (int k = 0; k < counts[c]; ++k) {
      row.push_back(static_cast<std::int64_t>(c));
    }
  }
  return row;
}

TEST(RunMatrix, ShapeChecks) {
  EXPECT_THROW(RunMatrix(ids(2), {{0}}), Error);
  EXPECT_THROW(RunMatrix({}, {}), Error);
  try {
    RunMatrix(ids(2), {{0, 1}, {0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RaggedRuns);
  }
}

TEST(Tally, CountsAndInvalid) {
  const std::vector<Label> a{0, 0, 1};
  const auto t = tally_row(a, 3);
  EXPECT_EQ(t.valid.counts(), (std::vector<std::uint64_t>{2, 1, 0}));
  const std::vector<Label> b{0, std::nullopt, 0};
  const auto u = tally_row(b, 3);
  EXPECT_EQ(u.valid.counts(), (std::vector<std::uint64_t>{2, 0, 0}));
  EXPECT_EQ(u.invalid, 1u);
  EXPECT_DOUBLE_EQ(u.valid.probabilities()[0], 1.0);
  const std::vector<Label> c{std::nullopt, std::nullopt};
  EXPECT_TRUE(tally_row(c, 3).all_invalid());
  const std::vector<Label> d{5};
  EXPECT_THROW(tally_row(d, 3), Error);
}

TEST(Majority, ArgmaxWithLowestIndexTies) {
  EXPECT_EQ(majority_vote(ClassDistribution({2, 1})), 0);
  EXPECT_EQ(majority_vote(ClassDistribution({5, 5})), 0);
  EXPECT_EQ(majority_vote(ClassDistribution({0, 3})), 1);
  EXPECT_EQ(majority_vote(ClassDistribution({0, 4, 4})), 1);
  EXPECT_THROW(majority_vote(ClassDistribution({0, 0})), Error);
}

TEST(Majority, InvariantUnderScaling) {
  std::mt19937 gen(2);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::uint64_t> c(2 + gen() % 5);
    for (auto& x : c) x = gen() % 7;
    c[0] += 1;
    auto scaled = c;
    const auto k = 1 + gen() % 9;
    for (auto& x : scaled) x *= k;
    ASSERT_EQ(majority_vote(ClassDistribution(c)),
              majority_vote(ClassDistribution(scaled)));
  }
}

TEST(Stability, AllCorrect) {
  RunMatrix m(ids(3), {{0, 0}, {1, 1}, {2, 2}});
  const std::vector<std::int64_t> g{0, 1, 2};
  const auto r = stability_report(m, g, 3);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.correctness_sd, 0.0);
  EXPECT_EQ(r.mean_consistency, 1.0);
  EXPECT_EQ(r.mean_entropy, 0.0);
  EXPECT_EQ(r.inter_run_variance, 0.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Stability, SeventeenFiveThree) {
  const auto row = row_from_counts({17, 5, 3});
  RunMatrix m(ids(4), {row, row, row, row});
  const std::vector<std::int64_t> g{0, 0, 0, 0};
  const auto r = stability_report(m, g, 3);
  EXPECT_EQ(r.mean_consistency, 0.68);
  const double p[] = {0.68, 0.20, 0.12};
  double h = 0;
  for (double x : p) h -= x * std::log2(x);
  EXPECT_NEAR(r.mean_entropy, h, 1e-9);
  EXPECT_NEAR(r.accuracy, 0.68, 1e-12);
  EXPECT_EQ(r.majority_accuracy, 1.0);
  // Labels 0 x17, 1 x5, 2 x3: mean 0.44, E[x^2] = (5 + 12) / 25.
  EXPECT_NEAR(r.inter_run_variance, 17.0 / 25 - 0.44 * 0.44, 1e-12);
}

TEST(Stability, ConstantMatrixIsPerfectlyStableEvenWhenWrong) {
  RunMatrix m(ids(2), {{1, 1, 1}, {2, 2, 2}});
  const std::vector<std::int64_t> g{0, 0};
  const auto r = stability_report(m, g, 3);
  EXPECT_EQ(r.accuracy, 0.0);
  EXPECT_EQ(r.mean_consistency, 1.0);
  EXPECT_EQ(r.mean_entropy, 0.0);
  EXPECT_EQ(r.inter_run_variance, 0.0);
}

TEST(Stability, SingleRunIsDegenerate) {
  RunMatrix m(ids(2), {{1}, {2}});
  const std::vector<std::int64_t> g{1, 0};
  const auto r = stability_report(m, g, 3);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.mean_consistency, 1.0);
  EXPECT_EQ(r.mean_entropy, 0.0);
  EXPECT_EQ(r.accuracy, 0.5);
}

TEST(Stability, InvalidCellsCountWrongAndAreRenormalizedAway) {
  // s0: [0,0,Inv,1] gold 0; s1: all Invalid gold 1.
  RunMatrix m(ids(2), {{0, 0, std::nullopt, 1},
                       {std::nullopt, std::nullopt, std::nullopt,
                        std::nullopt}});
  const std::vector<std::int64_t> g{0, 1};
  const auto r = stability_report(m, g, 2);
  EXPECT_DOUBLE_EQ(r.accuracy, 2.0 / 8);
  EXPECT_EQ(r.invalid_cells, 5u);
  EXPECT_EQ(r.excluded_samples, (std::vector<std::string>{"s1"}));
  EXPECT_DOUBLE_EQ(r.mean_consistency, 2.0 / 3);
  const double h = -(2.0 / 3 * std::log2(2.0 / 3) + 1.0 / 3 * std::log2(1.0 / 3));
  EXPECT_NEAR(r.mean_entropy, h, 1e-12);
  // Per-sample correctness 0.5 and 0: population sd 0.25.
  EXPECT_DOUBLE_EQ(r.correctness_sd, 0.25);
  EXPECT_DOUBLE_EQ(r.majority_accuracy, 0.5);
}

TEST(Stability, MisalignedGolds) {
  RunMatrix m(ids(2), {{0}, {1}});
  const std::vector<std::int64_t> g{0};
  EXPECT_THROW(stability_report(m, g, 2), Error);
}

TEST(Confusion, Examples) {
  const std::vector<Label> p{0, 1, 2};
  const std::vector<std::int64_t> g{0, 1, 2};
  const auto d = confusion_matrix(p, g, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d.at(i, j), i == j ? 1u : 0u);
  }
  const std::vector<Label> ones{1, 1, 1};
  const auto c = confusion_matrix(ones, g, 3);
  EXPECT_EQ(c.at(0, 1) + c.at(1, 1) + c.at(2, 1), 3u);
  EXPECT_EQ(c.total(), 3u);
  const std::vector<Label> inv{0, std::nullopt, 2};
  const auto e = confusion_matrix(inv, g, 3);
  EXPECT_EQ(e.invalid(1), 1u);
  EXPECT_EQ(e.invalid_total(), 1u);
  EXPECT_THROW(confusion_matrix(inv, std::vector<std::int64_t>{0}, 3), Error);
}

TEST(Confusion, RowSumsEqualGoldCounts) {
  std::mt19937 gen(8);
  std::vector<Label> p;
  std::vector<std::int64_t> g;
  std::vector<std::uint64_t> per_gold(4, 0);
  for (int i = 0; i < 300; ++i) {
    p.push_back(gen() % 5 == 0 ? Label{} : Label(gen() % 4));
    g.push_back(gen() % 4);
    ++per_gold[static_cast<std::size_t>(g.back())];
  }
  const auto cm = confusion_matrix(p, g, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    std::uint64_t s = 0;
    for (auto x : cm.counts[r]) s += x;
    EXPECT_EQ(s, per_gold[r]);
  }
}

}  // namespace
}  // namespace mleval
