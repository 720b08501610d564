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

// Domain model for annotated review corpora: tokens, opinions, sentences,
// reviews, plus sentence segmentation, tokenization, target-span
// resolution and the IOB codec.

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "absa/unicode.hpp"

namespace absa {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

struct Token {
  std::string surface;
  std::string pos = "UNK";
  int index = 0;

  bool operator==(const Token&) const = default;
};

// The aspect inventory for book reviews, with an escape hatch for
// annotator-invented strings that are preserved verbatim.
class Category {
 public:
  enum Value {
    Presentation,
    Problematic,
    ScientificContext,
    ScientificMethod,
    Arguments,
    Organization,
    Judgment,
    Other,
  };

  Category() : value_(Other) {}
  Category(Value v) : value_(v) {}  // NOLINT: implicit by design
  static Category other(std::string raw) {
    Category c(Other);
    c.raw_ = std::move(raw);
    return c;
  }

  Value value() const { return value_; }
  const std::string& raw() const { return raw_; }

  bool operator==(const Category& o) const {
    return value_ == o.value_ && (value_ != Other || raw_ == o.raw_);
  }

 private:
  Value value_;
  std::string raw_;  // only meaningful for Other
};

// Canonical attribute strings, one per named category.
inline std::string category_to_string(const Category& c) {
  switch (c.value()) {
    case Category::Presentation: return "presentation";
    case Category::Problematic: return "problematic";
    case Category::ScientificContext: return "scientific_context";
    case Category::ScientificMethod: return "scientific_method";
    case Category::Arguments: return "arguments";
    case Category::Organization: return "organization";
    case Category::Judgment: return "judgment";
    case Category::Other: return c.raw();
  }
  return "";
}

// Accepts the canonical strings plus common annotator spellings; anything
// else becomes Other(raw).
inline Category parse_category(std::string_view raw) {
  std::string trimmed = trim(raw);
  std::string key;
  for (size_t pos = 0; pos < trimmed.size();) {
    char32_t cp = to_lower_cp(decode_utf8(trimmed, pos));
    if (cp == U' ' || cp == U'_' || cp == U'-' || cp == U'\'') continue;
    append_utf8(key, cp);
  }
  if (key == "presentation" || key == "bookpresentation")
    return Category::Presentation;
  if (key == "problematic" || key == "problematique")
    return Category::Problematic;
  if (key == "scientificcontext" || key == "context")
    return Category::ScientificContext;
  if (key == "scientificmethod" || key == "method")
    return Category::ScientificMethod;
  if (key == "arguments" || key == "argument" || key == "authorsarguments")
    return Category::Arguments;
  if (key == "organization" || key == "organisation" ||
      key == "bookorganization")
    return Category::Organization;
  if (key == "judgment" || key == "judgement" || key == "jugement")
    return Category::Judgment;
  return Category::other(std::move(trimmed));
}

enum class Polarity { Positive, Negative, Neutral };

inline std::string polarity_to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
  }
  return "";
}

// French and English surface forms; nullopt for anything unrecognized.
inline std::optional<Polarity> parse_polarity(std::string_view raw) {
  std::string key = to_lower(trim(raw));
  if (key == "positive" || key == "positif" || key == "pos")
    return Polarity::Positive;
  if (key == "negative" || key == "negatif" || key == "négatif" ||
      key == "neg")
    return Polarity::Negative;
  if (key == "neutral" || key == "neutre" || key == "neu")
    return Polarity::Neutral;
  return std::nullopt;
}

struct Opinion {
  std::string target;  // "NULL" for target-less category annotations
  Category category;
  std::optional<Polarity> polarity;
  std::vector<std::string> polarity_terms;
  int occurrence = 1;

  bool has_target() const { return target != "NULL" && !target.empty(); }
  bool operator==(const Opinion&) const = default;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<Opinion> opinions;

  bool operator==(const Sentence&) const = default;
};

struct Review {
  std::string id;
  std::vector<Sentence> sentences;

  bool operator==(const Review&) const = default;
};

struct Corpus {
  std::vector<Review> reviews;
  std::optional<std::string> annotator_id;

  bool operator==(const Corpus&) const = default;

  size_t sentence_count() const {
    size_t n = 0;
    for (const auto& r : reviews) n += r.sentences.size();
    return n;
  }
  size_t opinion_count() const {
    size_t n = 0;
    for (const auto& r : reviews)
      for (const auto& s : r.sentences) n += s.opinions.size();
    return n;
  }
};

enum class IobTag : int { O = 0, B = 1, I = 2 };
inline constexpr int kNumIobTags = 3;

inline char iob_to_char(IobTag t) {
  switch (t) {
    case IobTag::O: return 'O';
    case IobTag::B: return 'B';
    case IobTag::I: return 'I';
  }
  return '?';
}

inline std::optional<IobTag> iob_from_char(char c) {
  switch (c) {
    case 'O': return IobTag::O;
    case 'B': return IobTag::B;
    case 'I': return IobTag::I;
    default: return std::nullopt;
  }
}

struct TargetSpan {
  int start = 0;
  int end = 0;  // inclusive

  bool operator==(const TargetSpan&) const = default;
  auto operator<=>(const TargetSpan&) const = default;
};

inline const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kAbbrevs = {"M.", "Mme.", "cf.", "p.",
                                                    "éd."};
  return kAbbrevs;
}

// Splits raw review text into sentences. A split happens after '.', '!',
// '?' or '…' when whitespace and then an uppercase letter (or end of
// text) follows, unless the dot terminates a known abbreviation.
inline std::vector<std::string> segment_review(
    std::string_view raw_text,
    const std::vector<std::string>& abbreviations = default_abbreviations()) {
  std::vector<std::string> sentences;
  std::vector<char32_t> cps = codepoints(raw_text);
  // byte offset of each codepoint, plus the end offset
  std::vector<size_t> offsets;
  offsets.reserve(cps.size() + 1);
  {
    size_t pos = 0;
    while (pos < raw_text.size()) {
      offsets.push_back(pos);
      decode_utf8(raw_text, pos);
    }
    offsets.push_back(raw_text.size());
  }

  auto is_terminator = [](char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x2026;
  };
  auto is_abbreviation = [&](size_t dot_index) {
    // word = run of non-space codepoints ending at the dot, with leading
    // punctuation (quotes, brackets) stripped
    size_t begin = dot_index;
    while (begin > 0 && !is_space_cp(cps[begin - 1])) --begin;
    while (begin < dot_index && is_punct_cp(cps[begin]) &&
           !is_apostrophe_cp(cps[begin]))
      ++begin;
    std::string word = from_codepoints(cps, begin, dot_index + 1);
    return std::find(abbreviations.begin(), abbreviations.end(), word) !=
           abbreviations.end();
  };

  size_t start = 0;  // codepoint index of current sentence start
  for (size_t i = 0; i < cps.size(); ++i) {
    if (!is_terminator(cps[i])) continue;
    if (cps[i] == U'.' && is_abbreviation(i)) continue;
    size_t j = i + 1;
    while (j < cps.size() && is_space_cp(cps[j])) ++j;
    if (j == i + 1 && j < cps.size()) continue;  // no whitespace after
    if (j < cps.size() && !is_upper_cp(cps[j])) continue;
    std::string sentence =
        trim(raw_text.substr(offsets[start], offsets[i + 1] - offsets[start]));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    start = j;
  }
  if (start < cps.size()) {
    std::string tail = trim(raw_text.substr(offsets[start]));
    if (!tail.empty()) sentences.push_back(std::move(tail));
  }
  return sentences;
}

namespace detail {

inline const std::vector<std::string>& clitic_prefixes() {
  // apostrophe-elided forms; compared lowercase, without the apostrophe
  static const std::vector<std::string> kClitics = {
      "c", "d", "j", "l", "m", "n", "s", "t",
      "qu", "jusqu", "lorsqu", "puisqu", "quoiqu", "quelqu"};
  return kClitics;
}

inline void split_chunk(const std::vector<char32_t>& cps, size_t begin,
                        size_t end, std::vector<std::string>& out) {
  if (begin >= end) return;
  if (end - begin == 1) {
    out.push_back(from_codepoints(cps, begin, end));
    return;
  }
  char32_t front = cps[begin];
  if (is_punct_cp(front) && !is_apostrophe_cp(front)) {
    out.push_back(encode_utf8(front));
    split_chunk(cps, begin + 1, end, out);
    return;
  }
  char32_t back = cps[end - 1];
  if (is_punct_cp(back) && !is_apostrophe_cp(back)) {
    split_chunk(cps, begin, end - 1, out);
    out.push_back(encode_utf8(back));
    return;
  }
  for (size_t k = begin; k < end; ++k) {
    if (!is_apostrophe_cp(cps[k])) continue;
    std::string prefix;
    for (size_t i = begin; i < k; ++i) append_utf8(prefix, to_lower_cp(cps[i]));
    const auto& clitics = clitic_prefixes();
    if (std::find(clitics.begin(), clitics.end(), prefix) != clitics.end() &&
        k + 1 < end) {
      out.push_back(from_codepoints(cps, begin, k + 1));
      split_chunk(cps, k + 1, end, out);
      return;
    }
    break;  // only the first apostrophe is a candidate split point
  }
  out.push_back(from_codepoints(cps, begin, end));
}

}  // namespace detail

// Whitespace tokenization, then leading/trailing punctuation peeled into
// tokens of their own and apostrophe-elided clitics split after the
// apostrophe. POS stays "UNK" unless supplied externally.
inline std::vector<Token> tokenize(std::string_view sentence_text) {
  std::vector<std::string> surfaces;
  std::vector<char32_t> cps = codepoints(sentence_text);
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space_cp(cps[i])) ++i;
    size_t begin = i;
    while (i < cps.size() && !is_space_cp(cps[i])) ++i;
    if (i > begin) detail::split_chunk(cps, begin, i, surfaces);
  }
  std::vector<Token> tokens;
  tokens.reserve(surfaces.size());
  for (size_t k = 0; k < surfaces.size(); ++k)
    tokens.push_back(Token{std::move(surfaces[k]), "UNK", static_cast<int>(k)});
  return tokens;
}

// Matching form used for target resolution and agreement keys.
inline std::string match_form(std::string_view surface) {
  return to_lower(nfc(surface));
}

// All start indices where the target token sequence matches the sentence
// tokens case-insensitively, in left-to-right order.
inline std::vector<int> target_match_starts(const std::vector<Token>& tokens,
                                            const std::vector<Token>& target) {
  std::vector<int> starts;
  if (target.empty() || target.size() > tokens.size()) return starts;
  std::vector<std::string> norm(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) norm[i] = match_form(tokens[i].surface);
  std::vector<std::string> tnorm(target.size());
  for (size_t i = 0; i < target.size(); ++i) tnorm[i] = match_form(target[i].surface);
  for (size_t s = 0; s + tnorm.size() <= norm.size(); ++s) {
    bool ok = true;
    for (size_t k = 0; k < tnorm.size(); ++k) {
      if (norm[s + k] != tnorm[k]) {
        ok = false;
        break;
      }
    }
    if (ok) starts.push_back(static_cast<int>(s));
  }
  return starts;
}

// Token span of the occurrence-th case-insensitive match of the tokenized
// target; nullopt when fewer matches exist.
inline std::optional<TargetSpan> resolve_target_span(const Sentence& sentence,
                                                     const Opinion& opinion) {
  if (!opinion.has_target() || opinion.occurrence < 1) return std::nullopt;
  std::vector<Token> target_tokens = tokenize(opinion.target);
  std::vector<int> starts = target_match_starts(sentence.tokens, target_tokens);
  if (static_cast<size_t>(opinion.occurrence) > starts.size())
    return std::nullopt;
  int start = starts[opinion.occurrence - 1];
  return TargetSpan{start, start + static_cast<int>(target_tokens.size()) - 1};
}

struct IobResult {
  std::vector<IobTag> tags;
  std::vector<std::string> warnings;  // one per skipped annotation
};

// B at each resolved span start, I inside, O elsewhere. Unresolvable
// targets are skipped with a warning; overlapping spans are an error.
inline IobResult to_iob(const Sentence& sentence) {
  IobResult result;
  result.tags.assign(sentence.tokens.size(), IobTag::O);
  struct Resolved {
    TargetSpan span;
    const Opinion* opinion;
  };
  std::vector<Resolved> resolved;
  for (const Opinion& op : sentence.opinions) {
    if (!op.has_target()) continue;
    std::optional<TargetSpan> span = resolve_target_span(sentence, op);
    if (!span) {
      result.warnings.push_back("sentence " + sentence.id + ": target \"" +
                                op.target + "\" occurrence " +
                                std::to_string(op.occurrence) +
                                " not found; annotation skipped");
      continue;
    }
    resolved.push_back({*span, &op});
  }
  std::sort(resolved.begin(), resolved.end(),
            [](const Resolved& a, const Resolved& b) { return a.span < b.span; });
  for (size_t i = 0; i + 1 < resolved.size(); ++i) {
    if (resolved[i].span.end >= resolved[i + 1].span.start) {
      throw Error("sentence " + sentence.id + ": overlapping targets \"" +
                  resolved[i].opinion->target + "\" and \"" +
                  resolved[i + 1].opinion->target + "\"");
    }
  }
  for (const Resolved& r : resolved) {
    result.tags[r.span.start] = IobTag::B;
    for (int i = r.span.start + 1; i <= r.span.end; ++i)
      result.tags[i] = IobTag::I;
  }
  return result;
}

// Inverse of to_iob on valid sequences; an I with no open span (at the
// start or after O) is repaired to B.
inline std::vector<TargetSpan> from_iob(const std::vector<IobTag>& tags) {
  std::vector<TargetSpan> spans;
  int open = -1;
  for (size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case IobTag::O:
        if (open >= 0) spans.push_back({open, static_cast<int>(i) - 1});
        open = -1;
        break;
      case IobTag::B:
        if (open >= 0) spans.push_back({open, static_cast<int>(i) - 1});
        open = static_cast<int>(i);
        break;
      case IobTag::I:
        if (open < 0) open = static_cast<int>(i);  // repair: orphan I
        break;
    }
  }
  if (open >= 0) spans.push_back({open, static_cast<int>(tags.size()) - 1});
  return spans;
}

// Gold spans for evaluation: every resolvable annotation span, skipped
// ones reported through `warnings`.
inline std::vector<TargetSpan> gold_spans(const Sentence& sentence,
                                          std::vector<std::string>* warnings) {
  IobResult iob = to_iob(sentence);
  if (warnings)
    warnings->insert(warnings->end(), iob.warnings.begin(), iob.warnings.end());
  return from_iob(iob.tags);
}

}  // namespace absa
