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

// Minimal UTF-8 and character-class support. Covers the scripts of the
// evaluated languages (Latin, Greek, Cyrillic, Arabic, Thai, CJK) plus a few
// neighbours; it is not a general Unicode database.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mleval::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset in the source string
  std::size_t length;  // encoded length in bytes
};

/// Decodes UTF-8. Malformed bytes decode one at a time to U+FFFD, so offsets
/// always tile the input exactly.
inline std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = kReplacement;
    std::size_t len = 1;
    auto cont = [&](std::size_t k) {
      return i + k < s.size() &&
             (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && b0 >= 0xC2 && cont(1)) {
      cp = (char32_t(b0 & 0x1F) << 6) | (s[i + 1] & 0x3F);
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
      cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(s[i + 1] & 0x3F) << 6) |
           (s[i + 2] & 0x3F);
      if (cp >= 0x800 && (cp < 0xD800 || cp > 0xDFFF)) {
        len = 3;
      } else {
        cp = kReplacement;
      }
    } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
      cp = (char32_t(b0 & 0x07) << 18) | (char32_t(s[i + 1] & 0x3F) << 12) |
           (char32_t(s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
      if (cp >= 0x10000 && cp <= 0x10FFFF) {
        len = 4;
      } else {
        cp = kReplacement;
      }
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(char32_t cp) {
  std::string s;
  append_utf8(s, cp);
  return s;
}

enum class Category { Space, Punct, Digit, Mark, Letter };

namespace detail {

inline bool in(char32_t c, char32_t lo, char32_t hi) {
  return c >= lo && c <= hi;
}

inline bool is_space(char32_t c) {
  return c == ' ' || in(c, 0x09, 0x0D) || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || in(c, 0x2000, 0x200A) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

inline bool is_mark(char32_t c) {
  return in(c, 0x0300, 0x036F) || in(c, 0x0483, 0x0489) ||
         in(c, 0x0591, 0x05BD) || c == 0x05BF || in(c, 0x05C1, 0x05C2) ||
         in(c, 0x05C4, 0x05C5) || c == 0x05C7 || in(c, 0x0610, 0x061A) ||
         in(c, 0x064B, 0x065F) || c == 0x0670 || in(c, 0x06D6, 0x06DC) ||
         in(c, 0x06DF, 0x06E4) || in(c, 0x06E7, 0x06E8) ||
         in(c, 0x06EA, 0x06ED) || in(c, 0x0900, 0x0903) ||
         (in(c, 0x093A, 0x094F) && c != 0x093D) || in(c, 0x0951, 0x0957) ||
         in(c, 0x0962, 0x0963) || c == 0x0E31 || in(c, 0x0E34, 0x0E3A) ||
         in(c, 0x0E47, 0x0E4E) || in(c, 0x1AB0, 0x1AFF) ||
         in(c, 0x1DC0, 0x1DFF) || in(c, 0x20D0, 0x20FF) ||
         in(c, 0x3099, 0x309A) || in(c, 0xFE20, 0xFE2F) || c == 0x200C ||
         c == 0x200D;
}

inline bool is_digit(char32_t c) {
  return in(c, '0', '9') || in(c, 0x0660, 0x0669) || in(c, 0x06F0, 0x06F9) ||
         in(c, 0x0966, 0x096F) || in(c, 0x0E50, 0x0E59) ||
         in(c, 0xFF10, 0xFF19);
}

inline bool is_punct(char32_t c) {
  if (c < 0x80) {
    return c < 0x20 || c == 0x7F || in(c, '!', '/') || in(c, ':', '@') ||
           in(c, '[', '`') || in(c, '{', '~');
  }
  if (in(c, 0x80, 0x9F)) return true;
  if (in(c, 0xA1, 0xBF)) return c != 0xAA && c != 0xB5 && c != 0xBA;
  return c == 0xD7 || c == 0xF7 || c == 0x037E || c == 0x0387 ||
         in(c, 0x055A, 0x055F) || c == 0x0589 || c == 0x05BE ||
         c == 0x05C0 || c == 0x05C3 || c == 0x05C6 || in(c, 0x05F3, 0x05F4) ||
         c == 0x060C || c == 0x061B || c == 0x061F || in(c, 0x066A, 0x066D) ||
         c == 0x06D4 || in(c, 0x0964, 0x0965) || in(c, 0x0E5A, 0x0E5B) ||
         c == 0x0E3F || in(c, 0x2010, 0x2027) || in(c, 0x2030, 0x205E) ||
         in(c, 0x20A0, 0x20CF) || in(c, 0x2100, 0x214F) ||
         in(c, 0x2190, 0x2BFF) || in(c, 0x3001, 0x3003) ||
         in(c, 0x3008, 0x3011) || in(c, 0x3014, 0x301F) ||
         in(c, 0xFF01, 0xFF0F) || in(c, 0xFF1A, 0xFF20) ||
         in(c, 0xFF3B, 0xFF40) || in(c, 0xFF5B, 0xFF65) || c == 0xFFFD ||
         c == 0xFEFF || in(c, 0x1F000, 0x1FAFF);
}

}  // namespace detail

inline Category category(char32_t c) {
  if (detail::is_space(c)) return Category::Space;
  if (detail::is_mark(c)) return Category::Mark;
  if (detail::is_digit(c)) return Category::Digit;
  if (detail::is_punct(c)) return Category::Punct;
  if (c < 0x80) {
    return (detail::in(c, 'A', 'Z') || detail::in(c, 'a', 'z'))
               ? Category::Letter
               : Category::Punct;
  }
  return Category::Letter;
}

inline bool is_space(char32_t c) { return category(c) == Category::Space; }
inline bool is_letter(char32_t c) { return category(c) == Category::Letter; }

enum class Script {
  Common,
  Latin,
  Greek,
  Cyrillic,
  Armenian,
  Hebrew,
  Arabic,
  Devanagari,
  Thai,
  Georgian,
  Hangul,
  Hiragana,
  Katakana,
  Han,
};

inline Script script_of(char32_t c) {
  using detail::in;
  if (category(c) != Category::Letter && category(c) != Category::Mark) {
    return Script::Common;
  }
  if (c < 0x80 || in(c, 0xC0, 0x024F) || in(c, 0x1E00, 0x1EFF) ||
      c == 0xAA || c == 0xBA) {
    return Script::Latin;
  }
  if (in(c, 0x0370, 0x03FF) || in(c, 0x1F00, 0x1FFF)) return Script::Greek;
  if (in(c, 0x0400, 0x052F)) return Script::Cyrillic;
  if (in(c, 0x0530, 0x058F)) return Script::Armenian;
  if (in(c, 0x0590, 0x05FF)) return Script::Hebrew;
  if (in(c, 0x0600, 0x06FF) || in(c, 0x0750, 0x077F)) return Script::Arabic;
  if (in(c, 0x0900, 0x097F)) return Script::Devanagari;
  if (in(c, 0x0E00, 0x0E7F)) return Script::Thai;
  if (in(c, 0x10A0, 0x10FF)) return Script::Georgian;
  if (in(c, 0xAC00, 0xD7A3) || in(c, 0x1100, 0x11FF) ||
      in(c, 0x3130, 0x318F)) {
    return Script::Hangul;
  }
  if (in(c, 0x3040, 0x309F)) return Script::Hiragana;
  if (in(c, 0x30A0, 0x30FF)) return Script::Katakana;
  if (in(c, 0x4E00, 0x9FFF) || in(c, 0x3400, 0x4DBF) ||
      in(c, 0xF900, 0xFAFF) || in(c, 0x20000, 0x2A6DF)) {
    return Script::Han;
  }
  return Script::Common;
}

/// Scripts written without spaces between words; tokenised per character.
inline bool is_unsegmented(Script s) {
  return s == Script::Han || s == Script::Hiragana || s == Script::Katakana ||
         s == Script::Thai;
}

inline bool is_upper(char32_t c) {
  using detail::in;
  return in(c, 'A', 'Z') || (in(c, 0xC0, 0xDE) && c != 0xD7) ||
         in(c, 0x0391, 0x03A9) || in(c, 0x0400, 0x042F);
}

/// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and
/// Cyrillic. Other characters are returned unchanged.
inline char32_t to_lower(char32_t c) {
  using detail::in;
  if (in(c, 'A', 'Z')) return c + 32;
  if (c < 0x80) return c;
  if (in(c, 0xC0, 0xDE) && c != 0xD7) return c + 32;
  if ((in(c, 0x0100, 0x0137) || in(c, 0x014A, 0x0177)) && c % 2 == 0) {
    return c + 1;
  }
  if ((in(c, 0x0139, 0x0148) || in(c, 0x0179, 0x017E)) && c % 2 == 1) {
    return c + 1;
  }
  if (c == 0x0178) return 0xFF;
  if (in(c, 0x0391, 0x03A9) && c != 0x03A2) return c + 32;
  if (c == 0x0386) return 0x03AC;
  if (in(c, 0x0388, 0x038A)) return c + 37;
  if (c == 0x038C) return 0x03CC;
  if (in(c, 0x038E, 0x038F)) return c + 63;
  if (in(c, 0x0410, 0x042F)) return c + 32;
  if (in(c, 0x0400, 0x040F)) return c + 80;
  return c;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const auto& cp : decode(s)) {
    if (cp.value == kReplacement) {
      out.append(s.substr(cp.offset, cp.length));
    } else {
      append_utf8(out, to_lower(cp.value));
    }
  }
  return out;
}

/// Letters used when inserting noise next to a character of the given script
/// and case. Unknown scripts fall back to lowercase Latin.
inline std::vector<char32_t> letters_for(Script script, bool upper) {
  std::vector<char32_t> out;
  auto range = [&](char32_t lo, char32_t hi) {
    for (char32_t c = lo; c <= hi; ++c) out.push_back(c);
  };
  switch (script) {
    case Script::Greek:
      if (upper) {
        range(0x0391, 0x03A1);
        range(0x03A3, 0x03A9);
      } else {
        range(0x03B1, 0x03C1);
        range(0x03C3, 0x03C9);
      }
      break;
    case Script::Cyrillic:
      upper ? range(0x0410, 0x042F) : range(0x0430, 0x044F);
      break;
    case Script::Armenian:
      upper ? range(0x0531, 0x0556) : range(0x0561, 0x0586);
      break;
    case Script::Hebrew: range(0x05D0, 0x05EA); break;
    case Script::Arabic: range(0x0628, 0x063A); range(0x0641, 0x064A); break;
    case Script::Devanagari: range(0x0915, 0x0939); break;
    case Script::Thai: range(0x0E01, 0x0E2E); break;
    case Script::Georgian: range(0x10D0, 0x10F0); break;
    case Script::Hangul: range(0xAC00, 0xAC00 + 399); break;
    case Script::Hiragana: range(0x3041, 0x3096); break;
    case Script::Katakana: range(0x30A1, 0x30FA); break;
    case Script::Han: range(0x4E00, 0x4E00 + 499); break;
    case Script::Latin:
    case Script::Common:
      upper ? range('A', 'Z') : range('a', 'z');
      break;
  }
  return out;
}

inline std::size_t length(std::string_view s) { return decode(s).size(); }

}  // namespace mleval::unicode
