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


// Canned judge replies with hand-assigned expected scores.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mleval::testing {

struct JudgeCase {
  std::string response;
  std::optional<int> expected;
};

inline const std::vector<JudgeCase>& judge_cases() {
  static const std::vector<JudgeCase> cases = {
      {"4", 4},
      {"1", 1},
      {" 5\n", 5},
      {"Score: 5/5 - excellent", 5},
      {"I would rate this a 3.", 3},
      {"**2**", 2},
      {"Rating: [4]", 4},
      {"score=3", 3},
      {"The summary deserves 4 out of 5.", 4},
      {"0", std::nullopt},
      {"6", std::nullopt},
      {"10/10", std::nullopt},
      {"seven", std::nullopt},
      {"", std::nullopt},
      {"N/A", std::nullopt},
      {"3.5", std::nullopt},
      {"-2", std::nullopt},
      {"8, then on reflection 2", 2},
      {"A4 paper", std::nullopt},
      {"Bewertung: 5", 5},
  };
  return cases;
}

}  // namespace mleval::testing
