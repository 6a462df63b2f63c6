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

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mleval {

inline constexpr const char* kToolVersion = "0.3.0";

enum class ErrorCode {
  MalformedLine,
  SchemaViolation,
  TaskMismatch,
  UnknownLanguage,
  UnknownSubstituter,
  Exhausted,
  CacheMiss,
  AuthMissing,
  Transport,
  MissingPlaceholderData,
  LengthMismatch,
  Empty,
  EmptyGold,
  ZeroVector,
  DimensionMismatch,
  OutOfRange,
  InvalidDistribution,
  RaggedRuns,
  AllMissing,
  NoValidRuns,
  TooFewLanguages,
  EmptyModelSet,
  NoComparableFeatures,
  OutOfRangeDistance,
  TooFewPoints,
  ConstantSeries,
  DirectoryExists,
  IoFailure,
  Corrupt,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::TaskMismatch: return "TaskMismatch";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::UnknownSubstituter: return "UnknownSubstituter";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::CacheMiss: return "CacheMiss";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::MissingPlaceholderData: return "MissingPlaceholderData";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::RaggedRuns: return "RaggedRuns";
    case ErrorCode::AllMissing: return "AllMissing";
    case ErrorCode::NoValidRuns: return "NoValidRuns";
    case ErrorCode::TooFewLanguages: return "TooFewLanguages";
    case ErrorCode::EmptyModelSet: return "EmptyModelSet";
    case ErrorCode::NoComparableFeatures: return "NoComparableFeatures";
    case ErrorCode::OutOfRangeDistance: return "OutOfRangeDistance";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::DirectoryExists: return "DirectoryExists";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::Corrupt: return "Corrupt";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as an Error carrying a code plus
/// optional structured context (offending field, line number).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {},
        std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        field_(std::move(field)),
        reason_(std::move(message)),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string field_;
  std::string reason_;
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Stable hashing. FNV-1a over length-prefixed fields, finished with a
// splitmix64 avalanche so that nearby inputs give unrelated seeds.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class StableHasher {
 public:
  StableHasher& add(std::string_view bytes) {
    add_raw_u64(bytes.size());
    for (unsigned char c : bytes) mix(c);
    return *this;
  }
  StableHasher& add(std::uint64_t value) {
    add_raw_u64(8);
    add_raw_u64(value);
    return *this;
  }
  std::uint64_t digest() const { return splitmix64(state_); }

 private:
  void mix(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  void add_raw_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

template <typename... Parts>
std::uint64_t stable_hash(const Parts&... parts) {
  StableHasher h;
  (h.add(parts), ...);
  return h.digest();
}

// ---------------------------------------------------------------------------
// Deterministic random source. The engine is std::mt19937_64 (its output
// sequence is fixed by the standard); the conversions below are our own so
// results do not depend on a particular standard library's distributions.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Small text helpers shared across modules.

inline std::string_view trim(std::string_view s) {
  const auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  std::size_t b = 0, e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string to_hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string(),
                path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string(),
                  tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw Error(ErrorCode::IoFailure, "short write to " + tmp.string(),
                  tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::IoFailure,
                "rename to " + path.string() + " failed: " + ec.message(),
                path.string());
  }
}

}  // namespace mleval
