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


#include "mleval/prompting.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

namespace mleval {
namespace {

const std::filesystem::path kTemplates =
    std::filesystem::path(MLEVAL_ASSET_DIR) / "templates";

const LabelSpace kTos{{"clearly_fair", "potentially_unfair", "clearly_unfair"}};

Sample single(std::string input) {
  return {"s1", "en", TaskKind::SingleLabel, std::move(input), {}, {},
          std::int64_t{0}};
}

TEST(Render, FillsPlaceholdersAndLeavesOtherBracesAlone) {
  PromptTemplate t{"x", TaskKind::SingleLabel, {},
                   "{input} | {label_menu} | {json}"};
  EXPECT_EQ(render_prompt(t, single("clause"), &kTos),
            "clause | 0: clearly fair\n1: potentially unfair\n2: clearly "
            "unfair | {json}");
}

TEST(Render, ChoicesAreLettered) {
  PromptTemplate t{"mc", TaskKind::MultipleChoice, {}, "{input}\n{choices}"};
  Sample s{"q", "en", TaskKind::MultipleChoice, "Q?", {},
           std::vector<std::string>{"red", "blue"}, std::int64_t{1}};
  EXPECT_EQ(render_prompt(t, s), "Q?\nA. red\nB. blue");
}

TEST(Render, MissingDataAndWrongTask) {
  PromptTemplate ctx{"c", TaskKind::SingleLabel, {}, "{context} {input}"};
  try {
    render_prompt(ctx, single("x"), &kTos);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingPlaceholderData);
    EXPECT_EQ(e.field(), "context");
  }
  PromptTemplate menu{"m", TaskKind::SingleLabel, {}, "{label_menu}"};
  EXPECT_THROW(render_prompt(menu, single("x")), Error);
  PromptTemplate bad{"b", TaskKind::QA, {}, "{choices}"};
  EXPECT_FALSE(placeholders_satisfiable(bad));
  PromptTemplate qa{"q", TaskKind::QA, {}, "{input}"};
  EXPECT_THROW(render_prompt(qa, single("x")), Error);
}

TEST(Render, EnglishAnswerInstructionAppended) {
  PromptTemplate t{"x", TaskKind::SingleLabel, {}, "{input}"};
  t.answer_language = AnswerLanguage::English;
  EXPECT_EQ(render_prompt(t, single("Bonjour")),
            "Bonjour\nRespond in English.");
}

TEST(Templates, EveryAssetLoadsAndRenders) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kTemplates)) {
    const auto t = load_template(entry.path());
    EXPECT_TRUE(placeholders_satisfiable(t)) << t.id;
    ++n;
  }
  EXPECT_GE(n, 10u);
  EXPECT_EQ(load_template(kTemplates, "single_label_pair").task,
            TaskKind::SingleLabel);
}

TEST(Templates, AssertivenessTiersShareTheLabelBlock) {
  const auto basic = load_template(kTemplates, "tos_basic");
  const auto assertive = load_template(kTemplates, "tos_assertive");
  const auto highly = load_template(kTemplates, "tos_highly_assertive");
  EXPECT_EQ(basic.assertiveness, Assertiveness::Basic);
  EXPECT_EQ(assertive.assertiveness, Assertiveness::Assertive);
  EXPECT_EQ(highly.assertiveness, Assertiveness::HighlyAssertive);
  for (const auto* t : {&basic, &assertive, &highly}) {
    EXPECT_NE(t->body.find("0: clearly fair\n1: potentially unfair\n2: "
                           "clearly unfair"),
              std::string::npos)
        << t->id;
  }
  // Each tier adds instructions on top of the previous one.
  EXPECT_LT(basic.body.size(), assertive.body.size());
  EXPECT_LT(assertive.body.size(), highly.body.size());
}

TEST(Templates, StemToTask) {
  EXPECT_EQ(template_info("multi_label")->task, TaskKind::MultiLabel);
  EXPECT_EQ(template_info("single_label_pair")->task, TaskKind::SingleLabel);
  EXPECT_EQ(template_info("qa_short")->task, TaskKind::QA);
  EXPECT_FALSE(template_info("qanda"));
  EXPECT_FALSE(template_info("misc"));
}

TEST(ExtractLabel, StrictNeedsTheBareInteger) {
  EXPECT_EQ(extract_label(" 2\n", kTos, ExtractionMode::Strict), 2);
  EXPECT_EQ(extract_label("3", kTos, ExtractionMode::Strict), std::nullopt);
  EXPECT_EQ(extract_label("Label: 1", kTos, ExtractionMode::Strict),
            std::nullopt);
  EXPECT_EQ(extract_label("", kTos, ExtractionMode::Strict), std::nullopt);
}

TEST(ExtractLabel, LenientTakesFirstInRangeInteger) {
  EXPECT_EQ(extract_label("Label: 1", kTos, ExtractionMode::Lenient), 1);
  EXPECT_EQ(extract_label("7 or maybe 2", kTos, ExtractionMode::Lenient), 2);
  // Decimals, negatives and glued digits are not labels.
  EXPECT_EQ(extract_label("0.5", kTos, ExtractionMode::Lenient), std::nullopt);
  EXPECT_EQ(extract_label("-1", kTos, ExtractionMode::Lenient), std::nullopt);
  EXPECT_EQ(extract_label("x1", kTos, ExtractionMode::Lenient), std::nullopt);
}

TEST(ExtractLabel, LenientFallsBackToClassNames) {
  EXPECT_EQ(extract_label("This clause is Clearly Unfair.", kTos,
                          ExtractionMode::Lenient),
            2);
  EXPECT_EQ(extract_label("potentially_unfair", kTos, ExtractionMode::Lenient),
            1);
  EXPECT_EQ(extract_label("no idea", kTos, ExtractionMode::Lenient),
            std::nullopt);
  const LabelSpace nli{{"entailment", "neutral", "contradiction"}};
  EXPECT_EQ(extract_label("neutralize", nli, ExtractionMode::Lenient),
            std::nullopt);
}

TEST(ExtractChoice, StrictAndLenient) {
  EXPECT_EQ(extract_choice("B", 4, ExtractionMode::Strict), 1);
  EXPECT_EQ(extract_choice("E", 4, ExtractionMode::Strict), std::nullopt);
  EXPECT_EQ(extract_choice("B.", 4, ExtractionMode::Strict), std::nullopt);
  EXPECT_EQ(extract_choice("The answer is C.", 4, ExtractionMode::Lenient), 2);
  EXPECT_EQ(extract_choice("A or B", 4, ExtractionMode::Lenient),
            std::nullopt);
  const std::vector<std::string> ch{"Paris", "Rome"};
  EXPECT_EQ(extract_choice("it is rome", 2, ExtractionMode::Lenient, &ch), 1);
  EXPECT_THROW(extract_choice("A", 1, ExtractionMode::Lenient), Error);
}

TEST(ExtractMultiLabel, IndicesNamesAndDrops) {
  const LabelSpace ls{{"finance", "trade", "agri_food"}};
  const auto r = extract_multilabels("2, trade;\nAgri Food, 9, banana, 1", ls);
  EXPECT_EQ(r.labels, (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(r.dropped, (std::vector<std::string>{"9", "banana"}));
  EXPECT_EQ(r.as_set(), (LabelSet{1, 2}));
}

TEST(ExtractKeyphrases, StripsMarkersAndDuplicates) {
  EXPECT_EQ(extract_keyphrases("- Data Protection\n* consumer rights\n"
                               "1. data protection; 2) fines, ,"),
            (std::vector<std::string>{"Data Protection", "consumer rights",
                                      "fines"}));
}

}  // namespace
}  // namespace mleval
