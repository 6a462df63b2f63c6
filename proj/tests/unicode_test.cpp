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

#include <gtest/gtest.h>

#include "mleval/tokenize.hpp"
#include "mleval/unicode.hpp"

namespace mleval {
namespace {

using Strings = std::vector<std::string>;

TEST(Decode, OffsetsAndLengthsFollowUtf8) {
  const auto cps = unicode::decode("aé中😀");
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[1].value, U'é');
  EXPECT_EQ(cps[1].offset, 1u);
  EXPECT_EQ(cps[1].length, 2u);
  EXPECT_EQ(cps[2].length, 3u);
  EXPECT_EQ(cps[3].value, U'😀');
  EXPECT_EQ(cps[3].length, 4u);
}

TEST(Decode, MalformedBytesBecomeReplacementPerByte) {
  const auto cps = unicode::decode("a\xff\xfe" "b");
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[1].value, unicode::kReplacement);
  EXPECT_EQ(cps[2].value, unicode::kReplacement);
  EXPECT_EQ(cps[3].value, U'b');
}

TEST(Encode, RoundTripsEveryPlane) {
  for (char32_t c : {U'a', U'ß', U'ก', U'中', U'😀'}) {
    const auto s = unicode::encode(c);
    const auto cps = unicode::decode(s);
    ASSERT_EQ(cps.size(), 1u);
    EXPECT_EQ(cps[0].value, c);
  }
}

TEST(Scripts, DetectsMajorScripts) {
  using unicode::Script;
  EXPECT_EQ(unicode::script_of(U'a'), Script::Latin);
  EXPECT_EQ(unicode::script_of(U'λ'), Script::Greek);
  EXPECT_EQ(unicode::script_of(U'ж'), Script::Cyrillic);
  EXPECT_EQ(unicode::script_of(U'ب'), Script::Arabic);
  EXPECT_EQ(unicode::script_of(U'ก'), Script::Thai);
  EXPECT_EQ(unicode::script_of(U'中'), Script::Han);
  EXPECT_EQ(unicode::script_of(U'1'), Script::Common);
}

TEST(Lowercase, HandlesLatinGreekCyrillic) {
  EXPECT_EQ(unicode::to_lower("ÄBC Σ Ж"), "äbc σ ж");
}

TEST(Tokenize, SplitsOnWhitespaceAndPunctuation) {
  EXPECT_EQ(tokenize("Hello, world! It's 3.5"),
            (Strings{"Hello", "world", "It", "s", "3", "5"}));
}

TEST(Tokenize, UnsegmentedScriptsGiveOneTokenPerCharacter) {
  EXPECT_EQ(tokenize("我爱你"), (Strings{"我", "爱", "你"}));
  EXPECT_EQ(tokenize("abc中文def"), (Strings{"abc", "中", "文", "def"}));
}

TEST(Tokenize, ThaiMarksStayWithTheirBase) {
  // "กิน": ก + SARA I (combining) + น.
  EXPECT_EQ(tokenize("กิน"), (Strings{"กิ", "น"}));
}

TEST(Tokenize, SpansPointIntoTheSource) {
  const std::string text = "  über  alles";
  for (const auto& t : tokenize_spans(text)) {
    EXPECT_EQ(text.substr(t.begin, t.end - t.begin), t.text);
  }
}

TEST(Tokenize, MetricTokensAreLowercase) {
  EXPECT_EQ(metric_tokens("The CAT"), (Strings{"the", "cat"}));
}

TEST(Tokenize, AlphabeticTest) {
  EXPECT_TRUE(is_alphabetic("Straße"));
  EXPECT_TRUE(is_alphabetic("กิน"));
  EXPECT_FALSE(is_alphabetic("abc1"));
  EXPECT_FALSE(is_alphabetic(""));
}

TEST(Sentences, SplitOnTerminatorsAndNewlines) {
  EXPECT_EQ(split_sentences("One. Two! Three?\nFour"),
            (Strings{"One.", " Two!", " Three?", "Four"}));
  EXPECT_EQ(split_sentences("第一句。第二句！"),
            (Strings{"第一句。", "第二句！"}));
  EXPECT_TRUE(split_sentences(" \n ").empty());
}

}  // namespace
}  // namespace mleval
