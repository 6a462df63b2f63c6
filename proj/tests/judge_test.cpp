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


#include "mleval/judge.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "judge_fixture.hpp"

namespace mleval {
namespace {

namespace fs = std::filesystem;

const fs::path kRubrics = fs::path(MLEVAL_ASSET_DIR) / "rubrics";

ModelEndpoint judge_endpoint() {
  ModelEndpoint e;
  e.name = "judge";
  e.provider = "mock";
  e.model_id = "judge-mock";
  e.max_requests_per_minute = 1e6;
  return e;
}

Sample keyphrase_sample() {
  return {"k1", "de", TaskKind::Keyphrases, "Ein Vertrag über Handel.", {}, {},
          std::vector<std::string>{"Handel", "Vertrag"}};
}

TEST(JudgeParse, CannedFixture) {
  for (const auto& c : testing::judge_cases()) {
    EXPECT_EQ(parse_judge_score(c.response), c.expected) << c.response;
  }
}

TEST(JudgeParse, IdempotentOnRenderedScores) {
  for (int s = 1; s <= 5; ++s) {
    EXPECT_EQ(parse_judge_score(std::to_string(s)), s);
  }
}

TEST(JudgeRubrics, GenerativeTasksOnly) {
  for (auto t : {TaskKind::Summarization, TaskKind::QA, TaskKind::Keyphrases,
                 TaskKind::OpenEnded}) {
    const auto c = load_judge_config(kRubrics, t);
    EXPECT_NE(c.rubric.find(kJudgeInstruction), std::string::npos);
  }
  EXPECT_THROW(load_judge_config(kRubrics, TaskKind::SingleLabel), Error);
}

TEST(JudgeRubrics, RubricWithoutInstructionRejected) {
  const auto dir = fs::temp_directory_path() / "mleval_judge_bad_rubric";
  fs::create_directories(dir);
  write_file_atomic(dir / "qa.txt", "Rate it.\n");
  EXPECT_THROW(load_judge_config(dir, TaskKind::QA), Error);
  fs::remove_all(dir);
}

TEST(JudgePrompt, KeyphrasesEmbedReferenceAndInstruction) {
  const auto c = load_judge_config(kRubrics, TaskKind::Keyphrases);
  const auto p = render_judge_prompt(c, keyphrase_sample(), "Handel, Zoll");
  EXPECT_NE(p.find("Handel; Vertrag"), std::string::npos);
  EXPECT_NE(p.find("Handel, Zoll"), std::string::npos);
  EXPECT_NE(p.find("Ein Vertrag über Handel."), std::string::npos);
  EXPECT_NE(p.find("Respond with a single integer from 1 to 5"),
            std::string::npos);
}

TEST(JudgePrompt, QaEmbedsContextGoldAndAnswer) {
  const auto c = load_judge_config(kRubrics, TaskKind::QA);
  Sample s{"q", "fr", TaskKind::QA, "Où?", std::string("Le texte dit Paris."),
           {}, std::string("Paris")};
  const auto p = render_judge_prompt(c, s, "À Paris");
  EXPECT_NE(p.find("Le texte dit Paris."), std::string::npos);
  EXPECT_NE(p.find("Paris"), std::string::npos);
  EXPECT_NE(p.find("À Paris"), std::string::npos);
  s.context.reset();
  EXPECT_THROW(render_judge_prompt(c, s, "x"), Error);
  EXPECT_THROW(render_judge_prompt(c, keyphrase_sample(), "  "), Error);
}

TEST(JudgeCall, EmptyPredictionSkipsTheModel) {
  auto mock = std::make_shared<MockTransport>(MockScript{"3", {}, {}});
  ModelClient client(judge_endpoint(), mock, nullptr,
                     std::make_shared<VirtualClock>());
  const auto c = load_judge_config(kRubrics, TaskKind::Keyphrases);
  const auto v = judge_prediction(client, c, keyphrase_sample(), " ");
  EXPECT_EQ(v.score, 1);
  EXPECT_EQ(v.reason, "empty");
  EXPECT_EQ(v.attempts, 0);
  EXPECT_EQ(mock->calls(), 0u);
}

TEST(JudgeCall, RetriesOnceWithSuffixThenMissing) {
  const auto c = load_judge_config(kRubrics, TaskKind::Keyphrases);
  const auto prompt = render_judge_prompt(c, keyphrase_sample(), "Handel");
  MockScript script;
  script.default_response = "no idea";
  script.by_prompt_hash[sha256_hex(prompt + std::string(kJudgeRetrySuffix))] =
      {"4"};
  auto mock = std::make_shared<MockTransport>(script);
  ModelClient client(judge_endpoint(), mock, nullptr,
                     std::make_shared<VirtualClock>());
  const auto v = judge_prediction(client, c, keyphrase_sample(), "Handel");
  EXPECT_EQ(v.score, 4);
  EXPECT_EQ(v.attempts, 2);
  EXPECT_EQ(v.reason, "judged");

  auto never = std::make_shared<MockTransport>(MockScript{"nope", {}, {}});
  ModelClient c2(judge_endpoint(), never, nullptr,
                 std::make_shared<VirtualClock>());
  const auto m = judge_prediction(c2, c, keyphrase_sample(), "Handel");
  EXPECT_FALSE(m.score);
  EXPECT_EQ(m.reason, "unparseable");
  EXPECT_EQ(never->calls(), 2u);
}

TEST(JudgeCall, ReplayFromReadOnlyCacheIsIdentical) {
  const auto dir = fs::temp_directory_path() / "mleval_judge_cache";
  fs::remove_all(dir);
  auto cache = std::make_shared<ResponseCache>(dir);
  const auto c = load_judge_config(kRubrics, TaskKind::Keyphrases);
  ModelClient live(judge_endpoint(),
                   std::make_shared<MockTransport>(MockScript{"5", {}, {}}),
                   cache, std::make_shared<VirtualClock>());
  const auto a = judge_prediction(live, c, keyphrase_sample(), "Handel");
  auto silent = std::make_shared<MockTransport>(MockScript{"1", {}, {}});
  ModelClient replay(judge_endpoint(), silent, cache,
                     std::make_shared<VirtualClock>());
  const auto b = judge_prediction(replay, c, keyphrase_sample(), "Handel",
                                  CachePolicy::ReadOnly);
  EXPECT_EQ(a, b);
  EXPECT_EQ(silent->calls(), 0u);
  fs::remove_all(dir);
}

TEST(JudgeAggregate, Examples) {
  const std::vector<std::optional<int>> a{3, 5};
  const auto s = judge_aggregate(a);
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_DOUBLE_EQ(s.sd, 1.0);
  EXPECT_EQ(s.missing, 0u);
  const std::vector<std::optional<int>> b{4, std::nullopt, 4};
  EXPECT_DOUBLE_EQ(judge_aggregate(b).mean, 4.0);
  EXPECT_EQ(judge_aggregate(b).missing, 1u);
  const std::vector<std::optional<int>> none{std::nullopt};
  try {
    judge_aggregate(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllMissing);
  }
}

TEST(JudgeAggregate, MeanAndSdBounds) {
  std::mt19937 gen(4);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::optional<int>> xs(1 + gen() % 20);
    for (auto& x : xs) x = 1 + static_cast<int>(gen() % 5);
    const auto s = judge_aggregate(xs);
    ASSERT_GE(s.mean, 1.0);
    ASSERT_LE(s.mean, 5.0);
    ASSERT_GE(s.sd, 0.0);
    ASSERT_LE(s.sd, 2.0);
  }
}

}  // namespace
}  // namespace mleval
