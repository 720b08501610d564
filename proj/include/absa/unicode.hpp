// Copyright 2026 The Absa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small UTF-8 layer: decoding, Latin character classification, case
// mapping and a composition pass for the combining marks that occur in
// French text. Deliberately not a full Unicode implementation.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

// Decodes the codepoint starting at byte offset `pos` and advances `pos`
// past it. Invalid bytes are consumed one at a time and returned verbatim
// so that malformed input never stalls a scan.
inline char32_t decode_utf8(std::string_view s, size_t& pos) {
  const auto byte = [&](size_t i) { return static_cast<unsigned char>(s[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    pos += 1;
    return b0;
  }
  auto cont = [&](size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(pos + 1) & 0x3F);
    pos += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = (char32_t(b0 & 0x0F) << 12) |
                  (char32_t(byte(pos + 1) & 0x3F) << 6) |
                  (byte(pos + 2) & 0x3F);
    pos += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = (char32_t(b0 & 0x07) << 18) |
                  (char32_t(byte(pos + 1) & 0x3F) << 12) |
                  (char32_t(byte(pos + 2) & 0x3F) << 6) |
                  (byte(pos + 3) & 0x3F);
    pos += 4;
    return cp;
  }
  pos += 1;
  return b0;
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

inline std::string encode_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

inline std::vector<char32_t> codepoints(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  for (size_t pos = 0; pos < s.size();) cps.push_back(decode_utf8(s, pos));
  return cps;
}

inline std::string from_codepoints(const std::vector<char32_t>& cps,
                                   size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end && i < cps.size(); ++i) append_utf8(out, cps[i]);
  return out;
}

inline bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x00A0 ||
         (cp >= 0x2000 && cp <= 0x200B) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x3000;
}

inline bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// Latin script only: ASCII, Latin-1 Supplement, Latin Extended-A. The
// Extended-A block alternates upper/lower in three runs.
inline bool is_upper_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE))
    return true;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2) == 0;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2) == 1;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2) == 0;
  if (cp == 0x0178 || cp == 0x0179 || cp == 0x017B || cp == 0x017D) return true;
  return false;
}

inline bool is_lower_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  if ((cp >= 0x00DF && cp <= 0x00F6) || (cp >= 0x00F8 && cp <= 0x00FF))
    return true;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2) == 1;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2) == 0;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2) == 1;
  if (cp == 0x017A || cp == 0x017C || cp == 0x017E || cp == 0x017F) return true;
  return false;
}

inline bool is_letter_cp(char32_t cp) {
  return is_upper_cp(cp) || is_lower_cp(cp);
}

inline bool is_punct_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'!' && cp <= U'/') || (cp >= U':' && cp <= U'@') ||
           (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
  }
  if (cp == 0x00A1 || cp == 0x00AB || cp == 0x00BB || cp == 0x00BF)
    return true;
  if ((cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E))
    return true;
  return false;
}

inline bool is_apostrophe_cp(char32_t cp) {
  return cp == U'\'' || cp == 0x2019;
}

inline char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE))
    return cp + 0x20;
  if (cp == 0x0178) return 0x00FF;
  if (is_upper_cp(cp) && cp >= 0x0100 && cp <= 0x017D) return cp + 1;
  return cp;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t pos = 0; pos < s.size();)
    append_utf8(out, to_lower_cp(decode_utf8(s, pos)));
  return out;
}

// Composes base letter + combining mark pairs into their precomposed
// Latin-1 forms (the compositions that occur in French). Unknown pairs
// pass through untouched.
inline char32_t compose_pair(char32_t base, char32_t mark) {
  struct Entry {
    char32_t base;
    char32_t mark;
    char32_t composed;
  };
  static constexpr Entry kTable[] = {
      {U'A', 0x0300, 0x00C0}, {U'A', 0x0301, 0x00C1}, {U'A', 0x0302, 0x00C2},
      {U'A', 0x0303, 0x00C3}, {U'A', 0x0308, 0x00C4}, {U'C', 0x0327, 0x00C7},
      {U'E', 0x0300, 0x00C8}, {U'E', 0x0301, 0x00C9}, {U'E', 0x0302, 0x00CA},
      {U'E', 0x0308, 0x00CB}, {U'I', 0x0300, 0x00CC}, {U'I', 0x0301, 0x00CD},
      {U'I', 0x0302, 0x00CE}, {U'I', 0x0308, 0x00CF}, {U'N', 0x0303, 0x00D1},
      {U'O', 0x0300, 0x00D2}, {U'O', 0x0301, 0x00D3}, {U'O', 0x0302, 0x00D4},
      {U'O', 0x0303, 0x00D5}, {U'O', 0x0308, 0x00D6}, {U'U', 0x0300, 0x00D9},
      {U'U', 0x0301, 0x00DA}, {U'U', 0x0302, 0x00DB}, {U'U', 0x0308, 0x00DC},
      {U'Y', 0x0301, 0x00DD}, {U'Y', 0x0308, 0x0178}, {U'a', 0x0300, 0x00E0},
      {U'a', 0x0301, 0x00E1}, {U'a', 0x0302, 0x00E2}, {U'a', 0x0303, 0x00E3},
      {U'a', 0x0308, 0x00E4}, {U'c', 0x0327, 0x00E7}, {U'e', 0x0300, 0x00E8},
      {U'e', 0x0301, 0x00E9}, {U'e', 0x0302, 0x00EA}, {U'e', 0x0308, 0x00EB},
      {U'i', 0x0300, 0x00EC}, {U'i', 0x0301, 0x00ED}, {U'i', 0x0302, 0x00EE},
      {U'i', 0x0308, 0x00EF}, {U'n', 0x0303, 0x00F1}, {U'o', 0x0300, 0x00F2},
      {U'o', 0x0301, 0x00F3}, {U'o', 0x0302, 0x00F4}, {U'o', 0x0303, 0x00F5},
      {U'o', 0x0308, 0x00F6}, {U'u', 0x0300, 0x00F9}, {U'u', 0x0301, 0x00FA},
      {U'u', 0x0302, 0x00FB}, {U'u', 0x0308, 0x00FC}, {U'y', 0x0301, 0x00FD},
      {U'y', 0x0308, 0x00FF},
  };
  for (const auto& e : kTable)
    if (e.base == base && e.mark == mark) return e.composed;
  return 0;
}

inline std::string nfc(std::string_view s) {
  std::vector<char32_t> cps = codepoints(s);
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i];
    while (i + 1 < cps.size()) {
      char32_t composed = compose_pair(cp, cps[i + 1]);
      if (composed == 0) break;
      cp = composed;
      ++i;
    }
    append_utf8(out, cp);
  }
  return out;
}

// Canonical form for matching annotator-written strings against each
// other: compose marks, lowercase, collapse runs of whitespace to one
// space, trim.
inline std::string normalize_key(std::string_view s) {
  std::string lowered = to_lower(nfc(s));
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (size_t pos = 0; pos < lowered.size();) {
    char32_t cp = decode_utf8(lowered, pos);
    if (is_space_cp(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, cp);
  }
  return out;
}

inline std::string trim(std::string_view s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end) {
    size_t p = begin;
    if (!is_space_cp(decode_utf8(s, p))) break;
    begin = p;
  }
  // scan from the front to find the last non-space boundary
  size_t last_end = begin;
  for (size_t pos = begin; pos < end;) {
    size_t p = pos;
    char32_t cp = decode_utf8(s, p);
    if (!is_space_cp(cp)) last_end = p;
    pos = p;
  }
  return std::string(s.substr(begin, last_end - begin));
}

}  // namespace absa
