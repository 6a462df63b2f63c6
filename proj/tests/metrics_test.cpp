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


#include "mleval/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace mleval {
namespace {

using Tokens = std::vector<std::string>;

// Oracle: longest subsequence of `a` (by exhaustive mask enumeration) that
// is also a subsequence of `b`.
std::size_t brute_lcs(const Tokens& a, const Tokens& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Tokens sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    std::size_t j = 0;
    for (const auto& t : b) {
      if (j < sub.size() && sub[j] == t) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

std::string join(const Tokens& t) {
  std::string s;
  for (const auto& x : t) s += (s.empty() ? "" : " ") + x;
  return s;
}

TEST(Stats, PopulationMoments) {
  const std::vector<double> a{3, 5};
  EXPECT_DOUBLE_EQ(score_stats(a).mean, 4.0);
  EXPECT_DOUBLE_EQ(score_stats(a).sd, 1.0);
  const std::vector<double> b{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(score_stats(b).variance, 1.25);
  const std::vector<double> c{7, 7, 7};
  EXPECT_DOUBLE_EQ(score_stats(c).variance, 0.0);
  EXPECT_THROW(score_stats(std::vector<double>{}), Error);
}

TEST(Accuracy, InvalidNeverMatches) {
  const std::vector<Label> p1{0, 1, 2};
  const std::vector<std::int64_t> g1{0, 1, 2};
  EXPECT_DOUBLE_EQ(accuracy(p1, g1), 1.0);
  const std::vector<Label> p2{std::nullopt, 1};
  const std::vector<std::int64_t> g2{0, 1};
  EXPECT_DOUBLE_EQ(accuracy(p2, g2), 0.5);
  EXPECT_THROW(accuracy(p2, g1), Error);
  EXPECT_THROW(accuracy(std::vector<Label>{}, std::vector<std::int64_t>{}),
               Error);
}

TEST(Prf, ExampleBased) {
  const std::vector<LabelSet> pred{{0, 1}, {}, {0}};
  const std::vector<LabelSet> gold{{1, 2}, {1}, {0}};
  const auto r = example_prf1(pred, gold);
  EXPECT_DOUBLE_EQ(r.precision, (0.5 + 0 + 1) / 3);
  EXPECT_DOUBLE_EQ(r.recall, (0.5 + 0 + 1) / 3);
  EXPECT_DOUBLE_EQ(r.f1, (0.5 + 0 + 1) / 3);
  const double m = 0.5;
  EXPECT_NEAR(r.f1_sd,
              std::sqrt(((0.5 - m) * (0.5 - m) + m * m + m * m) / 3), 1e-12);
}

TEST(Mrp, MissingSlotsAreMisses) {
  const std::vector<std::vector<std::int64_t>> rk{{0, 2}, {0, 1, 2}, {0}};
  const std::vector<LabelSet> gold{{0, 1}, {0, 1}, {0, 1}};
  EXPECT_DOUBLE_EQ(mean_r_precision(rk, gold), (0.5 + 1.0 + 0.5) / 3);
  const std::vector<LabelSet> empty{{0}, {}, {1}};
  try {
    mean_r_precision(rk, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGold);
  }
}

TEST(Penalty, ThreeClassTable) {
  EXPECT_EQ(penalty_rating(1, 2), 0.5);
  EXPECT_EQ(penalty_rating(0, 2), 1.0);
  EXPECT_EQ(penalty_rating(2, 2), 0.0);
  EXPECT_EQ(penalty_rating(std::nullopt, 1), 1.0);
  EXPECT_THROW(penalty_rating(3, 1), Error);
  EXPECT_THROW(penalty_rating(1, 1, 4), Error);
}

TEST(Rouge, NgramExamples) {
  const auto r = rouge_n("a b c", "a b d", 1);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 / 3);
  EXPECT_EQ(rouge_n("the cat sat", "the dog ran", 2).f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_n("same words here", "same words here", 1).f1, 1.0);
  // Multiset clipping: "the" appears once in the reference.
  EXPECT_DOUBLE_EQ(rouge_n("the the", "the cat", 1).precision, 0.5);
  EXPECT_THROW(rouge_n("a", "a", 3), Error);
}

TEST(Rouge, LcsExamples) {
  EXPECT_DOUBLE_EQ(rouge_l("the cat sat", "the dog sat").f1, 2.0 / 3);
  EXPECT_EQ(rouge_l("", "x").f1, 0.0);
  EXPECT_DOUBLE_EQ(rouge_l("One two. Three four!", "One two. Three four!",
                           RougeLMode::SentenceSum)
                       .f1,
                   1.0);
}

TEST(Rouge, SentenceSumUsesUnionLcs) {
  // Reference sentence "a b c d"; candidate sentences "a b" and "c d" each
  // cover half; their union covers all four tokens.
  const auto lsum = rouge_l("a b. c d.", "a b c d.", RougeLMode::SentenceSum);
  EXPECT_DOUBLE_EQ(lsum.recall, 1.0);
  EXPECT_DOUBLE_EQ(lsum.precision, 1.0);
  const auto flat = rouge_l("c d. a b.", "a b c d.");
  EXPECT_DOUBLE_EQ(flat.recall, 0.5);
}

TEST(Rouge, FlatMatchesBruteForceOracle) {
  // Every pair of sequences of length <= 5 over {a,b,c}.
  std::vector<Tokens> seqs{{}};
  for (std::size_t len = 1; len <= 5; ++len) {
    std::vector<Tokens> next;
    for (const auto& s : seqs) {
      if (s.size() != len - 1) continue;
      for (const char* c : {"a", "b", "c"}) {
        auto t = s;
        t.push_back(c);
        next.push_back(t);
      }
    }
    seqs.insert(seqs.end(), next.begin(), next.end());
  }
  for (const auto& x : seqs) {
    for (const auto& y : seqs) {
      ASSERT_EQ(lcs_length(x, y), brute_lcs(x, y)) << join(x) << "|" << join(y);
    }
  }
  // Random pairs up to length 8.
  std::mt19937 gen(5);
  for (int i = 0; i < 500; ++i) {
    Tokens x(gen() % 9), y(gen() % 9);
    for (auto& t : x) t = std::string(1, static_cast<char>('a' + gen() % 3));
    for (auto& t : y) t = std::string(1, static_cast<char>('a' + gen() % 3));
    const auto r = rouge_l(join(x), join(y));
    const double hits = static_cast<double>(brute_lcs(x, y));
    if (x.empty() || y.empty()) {
      EXPECT_EQ(r.f1, 0.0);
      continue;
    }
    EXPECT_NEAR(r.precision, hits / x.size(), 1e-12);
    EXPECT_NEAR(r.recall, hits / y.size(), 1e-12);
  }
}

TEST(Bleu, Examples) {
  EXPECT_DOUBLE_EQ(bleu("a quick brown fox jumps", "a quick brown fox jumps"),
                   1.0);
  EXPECT_EQ(bleu("", "x"), 0.0);
  EXPECT_EQ(bleu("zzz", "the cat"), 0.0);
}

TEST(Bleu, RepeatedTokenClippingValue) {
  // Clipped unigram precision is 1/3. Bigrams: 0 of 2 -> 1/3 smoothed.
  // Trigrams: 0 of 1 -> 1/2 smoothed. Equal lengths, so no brevity penalty.
  const auto u = rouge_n("the the the", "the cat sat", 1);
  EXPECT_DOUBLE_EQ(u.precision, 1.0 / 3);
  const double oracle = std::cbrt((1.0 / 3) * (1.0 / 3) * (1.0 / 2));
  EXPECT_NEAR(bleu("the the the", "the cat sat"), oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.3816, 1e-4);
}

TEST(Bleu, BrevityPenalty) {
  // Candidate is a prefix: every precision is 1, only the penalty bites.
  EXPECT_NEAR(bleu("a b c d", "a b c d e f g h"), std::exp(1.0 - 2.0), 1e-12);
}

TEST(Meteor, ClosedForms) {
  const double m = 4;
  EXPECT_NEAR(meteor_lite("w x y z", "w x y z"),
              1.0 - 0.5 * std::pow(1.0 / m, 3), 1e-12);
  EXPECT_EQ(meteor_lite("a b", "c d"), 0.0);
  EXPECT_DOUBLE_EQ(meteor_lite("a b", "b a"), 0.5);
  // P = 1/2, R = 1 -> Fmean = 10*0.5/(1+4.5); one chunk of one match.
  EXPECT_NEAR(meteor_lite("a q", "a"), (5.0 / 5.5) * (1 - 0.5), 1e-12);
}

TEST(Cosine, Examples) {
  const std::vector<double> v{1, 2, 3};
  EXPECT_NEAR(cosine_similarity(v, v), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{1, 0},
                                     std::vector<double>{0, 1}),
                   0.0);
  EXPECT_NEAR(cosine_similarity(std::vector<double>{1, 1},
                                std::vector<double>{1, 0}),
              1 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(cosine_similarity(std::vector<double>{0, 0},
                                 std::vector<double>{1, 0}),
               Error);
  EXPECT_THROW(
      cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 0}),
      Error);
}

TEST(Cosine, HashingEmbedderIdentityAndOverlap) {
  HashingEmbedder e;
  const auto a = e.embed("The treaty covers trade");
  EXPECT_NEAR(cosine_similarity(a, e.embed("the TREATY covers trade")), 1.0,
              1e-12);
  EXPECT_LT(cosine_similarity(a, e.embed("apples and pears")), 0.5);
}

TEST(Uncertainty, Examples) {
  const auto u = uncertainty_profile(ClassDistribution({10, 10, 10}));
  EXPECT_NEAR(u.entropy, std::log2(3.0), 1e-12);
  EXPECT_NEAR(u.gini, 2.0 / 3, 1e-12);
  EXPECT_NEAR(u.margin, 0.0, 1e-12);
  const auto d = uncertainty_profile(ClassDistribution({5, 0, 0}));
  EXPECT_EQ(d.entropy, 0.0);
  EXPECT_EQ(d.gini, 0.0);
  EXPECT_EQ(d.margin, 1.0);
  const auto h = uncertainty_profile(ClassDistribution({20, 10, 0}));
  const double p = 2.0 / 3, q = 1.0 / 3;
  EXPECT_NEAR(h.entropy, -(p * std::log2(p) + q * std::log2(q)), 1e-12);
  EXPECT_NEAR(h.entropy, 0.918, 1e-3);
  EXPECT_NEAR(h.gini, 1 - p * p - q * q, 1e-12);
  EXPECT_NEAR(h.margin, 1.0 / 3, 1e-12);
  EXPECT_THROW(uncertainty_profile(ClassDistribution({0, 0})), Error);
}

TEST(Uncertainty, BoundsAndPermutationInvariance) {
  std::mt19937 gen(11);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t c = 2 + gen() % 5;
    std::vector<std::uint64_t> counts(c);
    for (auto& x : counts) x = gen() % 6;
    counts[gen() % c] += 1;
    const auto u = uncertainty_profile(ClassDistribution(counts));
    ASSERT_GE(u.entropy, 0.0);
    ASSERT_LE(u.entropy, std::log2(static_cast<double>(c)) + 1e-12);
    ASSERT_LE(u.gini, 1.0 - 1.0 / c + 1e-12);
    ASSERT_GE(u.margin, 0.0);
    ASSERT_LE(u.margin, 1.0);
    std::shuffle(counts.begin(), counts.end(), gen);
    const auto v = uncertainty_profile(ClassDistribution(counts));
    ASSERT_NEAR(u.entropy, v.entropy, 1e-12);
    ASSERT_NEAR(u.gini, v.gini, 1e-12);
    ASSERT_NEAR(u.margin, v.margin, 1e-12);
  }
}

TEST(Consistency, Examples) {
  EXPECT_EQ(consistency(ClassDistribution({25})), 1.0);
  EXPECT_EQ(consistency(ClassDistribution({17, 5, 3})), 0.68);
  EXPECT_DOUBLE_EQ(consistency(ClassDistribution({10, 10, 10})), 1.0 / 3);
}

TEST(InterRunVariance, Examples) {
  const std::vector<std::vector<std::int64_t>> one{{0, 0, 1, 1}};
  EXPECT_DOUBLE_EQ(inter_run_variance(one), 0.25);
  const std::vector<std::vector<std::int64_t>> two{{0, 2}, {1, 1}};
  EXPECT_DOUBLE_EQ(inter_run_variance(two), 0.5);
  const std::vector<std::vector<std::int64_t>> ragged{{0, 2}, {1}};
  EXPECT_THROW(inter_run_variance(ragged), Error);
  const std::vector<std::vector<std::int64_t>> single{{0}};
  EXPECT_THROW(inter_run_variance(single), Error);
}

TEST(Properties, OverlapScoresStayInUnitIntervalAndF1Between) {
  std::mt19937 gen(3);
  const Tokens vocab{"a", "b", "c", "d", "e"};
  for (int i = 0; i < 1000; ++i) {
    Tokens x(1 + gen() % 7), y(1 + gen() % 7);
    for (auto& t : x) t = vocab[gen() % vocab.size()];
    for (auto& t : y) t = vocab[gen() % vocab.size()];
    const auto c = join(x), r = join(y);
    for (const auto& s : {rouge_n(c, r, 1), rouge_n(c, r, 2), rouge_l(c, r),
                          rouge_l(c, r, RougeLMode::SentenceSum)}) {
      ASSERT_GE(s.f1, 0.0);
      ASSERT_LE(s.f1, 1.0);
      if (s.precision > 0 && s.recall > 0) {
        ASSERT_GE(s.f1, std::min(s.precision, s.recall) - 1e-12);
        ASSERT_LE(s.f1, std::max(s.precision, s.recall) + 1e-12);
      }
    }
    const double b = bleu(c, r), m = meteor_lite(c, r);
    ASSERT_GE(b, 0.0);
    ASSERT_LE(b, 1.0 + 1e-12);
    ASSERT_GE(m, 0.0);
    ASSERT_LE(m, 1.0);
  }
}

TEST(Properties, JointShuffleLeavesAggregatesUnchanged) {
  std::mt19937 gen(9);
  std::vector<Label> preds;
  std::vector<std::int64_t> golds;
  std::vector<LabelSet> ps, gs;
  for (int i = 0; i < 50; ++i) {
    preds.push_back(gen() % 4 == 0 ? Label{} : Label(gen() % 3));
    golds.push_back(gen() % 3);
    ps.push_back({static_cast<std::int64_t>(gen() % 3)});
    gs.push_back({static_cast<std::int64_t>(gen() % 3), 1});
  }
  const double acc = accuracy(preds, golds);
  const auto prf = example_prf1(ps, gs);
  std::vector<std::size_t> idx(50);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  std::vector<Label> p2;
  std::vector<std::int64_t> g2;
  std::vector<LabelSet> ps2, gs2;
  for (auto i : idx) {
    p2.push_back(preds[i]);
    g2.push_back(golds[i]);
    ps2.push_back(ps[i]);
    gs2.push_back(gs[i]);
  }
  EXPECT_DOUBLE_EQ(accuracy(p2, g2), acc);
  const auto prf2 = example_prf1(ps2, gs2);
  EXPECT_NEAR(prf2.f1, prf.f1, 1e-12);
  EXPECT_NEAR(prf2.f1_sd, prf.f1_sd, 1e-12);
}

}  // namespace
}  // namespace mleval
