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

#include "mleval/common.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

namespace mleval {
namespace {

TEST(Strings, TrimAndSplit) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split("", ','), (std::vector<std::string>{""}));
}

TEST(Hashing, StableAcrossCallsAndSensitiveToFieldBoundaries) {
  const auto a = stable_hash(std::string_view("ab"), std::string_view("c"));
  EXPECT_EQ(a, stable_hash(std::string_view("ab"), std::string_view("c")));
  // Length prefixes keep ("ab","c") and ("a","bc") apart.
  EXPECT_NE(a, stable_hash(std::string_view("a"), std::string_view("bc")));
  EXPECT_NE(stable_hash(std::uint64_t{1}), stable_hash(std::uint64_t{2}));
}

TEST(Hashing, HexIsSixteenLowercaseDigits) {
  EXPECT_EQ(to_hex(0xabcULL), "0000000000000abc");
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = r.below(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, Uniform01IsHalfOpenAndCentred) {
  Rng r(11);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Files, AtomicWriteThenRead) {
  const auto dir = std::filesystem::temp_directory_path() / "mleval_common";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "x.txt", "hello\n");
  EXPECT_EQ(read_file(dir / "x.txt"), "hello\n");
  write_file_atomic(dir / "x.txt", "again");
  EXPECT_EQ(read_file(dir / "x.txt"), "again");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir),
                          std::filesystem::directory_iterator()),
            1);
  std::filesystem::remove_all(dir);
}

TEST(Files, MissingFileIsIoFailure) {
  try {
    read_file("/nonexistent/mleval/file");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}

TEST(Errors, CarryCodeFieldAndLine) {
  const Error e(ErrorCode::SchemaViolation, "absent", "input", 4);
  EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  EXPECT_EQ(e.field(), "input");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_NE(std::string(e.what()).find("absent"), std::string::npos);
}

}  // namespace
}  // namespace mleval
