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

// Feature templates for the target tagger. Three groups per token:
//   (a) unigram attribute values: every family over the window -2..+2,
//       word and pos additionally at +-3;
//   (b) bigrams of successive values over -2..+2 for word, pos, shape
//       and type;
//   (c) trigrams over -1..+1 for pos and word.
// Positions outside the sentence contribute __BOS__/__EOS__ sentinels, so
// the per-token feature count is a constant (34 + 16 + 2 with all
// families enabled).

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absa/corpus.hpp"

namespace absa {

struct TokenAttributes {
  std::string word;   // lowercased surface
  std::string pos;
  std::string shape;  // X/x/d/p/s per codepoint
  std::string wtype;  // upper | digit | symbol | combination
  std::vector<std::string> prefixes;  // lengths 1..min(4, len)
  std::vector<std::string> suffixes;
};

inline TokenAttributes token_attributes(const Token& token) {
  TokenAttributes attrs;
  attrs.word = to_lower(token.surface);
  attrs.pos = token.pos;
  std::vector<char32_t> cps = codepoints(token.surface);
  bool has_letter = false;
  bool all_letters_upper = true;
  bool all_digits = true;
  bool all_symbols = true;
  for (char32_t cp : cps) {
    char shape;
    if (is_upper_cp(cp)) {
      shape = 'X';
      has_letter = true;
    } else if (is_lower_cp(cp)) {
      shape = 'x';
      has_letter = true;
      all_letters_upper = false;
    } else if (is_digit_cp(cp)) {
      shape = 'd';
    } else if (is_punct_cp(cp)) {
      shape = 'p';
    } else {
      shape = 's';
    }
    attrs.shape.push_back(shape);
    if (shape != 'd') all_digits = false;
    if (shape != 'p' && shape != 's') all_symbols = false;
  }
  if (has_letter && all_letters_upper) attrs.wtype = "upper";
  else if (!cps.empty() && all_digits) attrs.wtype = "digit";
  else if (!cps.empty() && all_symbols) attrs.wtype = "symbol";
  else attrs.wtype = "combination";

  size_t max_affix = std::min<size_t>(4, cps.size());
  for (size_t k = 1; k <= max_affix; ++k) {
    attrs.prefixes.push_back(from_codepoints(cps, 0, k));
    attrs.suffixes.push_back(from_codepoints(cps, cps.size() - k, cps.size()));
  }
  return attrs;
}

// Which attribute families participate; mirrors the ablation rows of the
// extraction experiments.
struct FeatureTemplates {
  bool word = true;
  bool pos = true;
  bool shape = true;
  bool wtype = true;
  bool prefix = true;
  bool suffix = true;

  static FeatureTemplates all() { return {}; }
  static FeatureTemplates word_only() {
    return {true, false, false, false, false, false};
  }
  static FeatureTemplates word_pos() {
    return {true, true, false, false, false, false};
  }
  static FeatureTemplates word_pos_type_shape() {
    return {true, true, true, true, false, false};
  }
  // recognized names: word | word+pos | word+pos+type+shape | all
  static FeatureTemplates from_name(std::string_view name) {
    if (name == "word") return word_only();
    if (name == "word+pos") return word_pos();
    if (name == "word+pos+type+shape") return word_pos_type_shape();
    if (name == "all") return all();
    throw Error("unknown feature set \"" + std::string(name) +
                "\" (expected word, word+pos, word+pos+type+shape or all)");
  }
};

inline constexpr std::string_view kBosSentinel = "__BOS__";
inline constexpr std::string_view kEosSentinel = "__EOS__";

namespace detail {

// attribute families addressable by template code
enum class Family { Word, Pos, Shape, Wtype, Prefix, Suffix };

inline std::string_view family_code(Family f) {
  switch (f) {
    case Family::Word: return "w";
    case Family::Pos: return "pos";
    case Family::Shape: return "shape";
    case Family::Wtype: return "type";
    case Family::Prefix: return "pre";
    case Family::Suffix: return "suf";
  }
  return "";
}

inline std::string family_value(const TokenAttributes& attrs, Family f) {
  switch (f) {
    case Family::Word: return attrs.word;
    case Family::Pos: return attrs.pos;
    case Family::Shape: return attrs.shape;
    case Family::Wtype: return attrs.wtype;
    case Family::Prefix:
    case Family::Suffix: {
      const auto& list = f == Family::Prefix ? attrs.prefixes : attrs.suffixes;
      std::string joined;
      for (size_t i = 0; i < list.size(); ++i) {
        if (i) joined += '|';
        joined += list[i];
      }
      return joined;
    }
  }
  return "";
}

}  // namespace detail

// Feature strings for position i: "<template>:<joined values>"; template
// ids carry the family code and the offsets, e.g. "w[-1]", "pos[0,1]".
inline std::vector<std::string> extract_features(
    std::span<const Token> tokens, size_t i,
    const FeatureTemplates& templates = {}) {
  using detail::Family;
  const int n = static_cast<int>(tokens.size());
  const int pos = static_cast<int>(i);

  // per-token attributes for the +-3 window
  std::unordered_map<int, TokenAttributes> window;
  for (int off = -3; off <= 3; ++off) {
    int j = pos + off;
    if (j >= 0 && j < n) window.emplace(off, token_attributes(tokens[j]));
  }
  auto value_at = [&](Family f, int off) -> std::string {
    int j = pos + off;
    if (j < 0) return std::string(kBosSentinel);
    if (j >= n) return std::string(kEosSentinel);
    return detail::family_value(window.at(off), f);
  };
  auto enabled = [&](Family f) {
    switch (f) {
      case Family::Word: return templates.word;
      case Family::Pos: return templates.pos;
      case Family::Shape: return templates.shape;
      case Family::Wtype: return templates.wtype;
      case Family::Prefix: return templates.prefix;
      case Family::Suffix: return templates.suffix;
    }
    return false;
  };

  std::vector<std::string> features;
  auto emit = [&](std::string_view code, std::string_view offsets,
                  std::string_view value) {
    std::string feature;
    feature.reserve(code.size() + offsets.size() + value.size() + 3);
    feature += code;
    feature += '[';
    feature += offsets;
    feature += "]:";
    feature += value;
    features.push_back(std::move(feature));
  };

  // group (a): unigram values
  static constexpr Family kAllFamilies[] = {Family::Word,  Family::Pos,
                                            Family::Shape, Family::Wtype,
                                            Family::Prefix, Family::Suffix};
  for (Family f : kAllFamilies) {
    if (!enabled(f)) continue;
    for (int off = -2; off <= 2; ++off)
      emit(detail::family_code(f), std::to_string(off), value_at(f, off));
  }
  for (Family f : {Family::Word, Family::Pos}) {
    if (!enabled(f)) continue;
    for (int off : {-3, 3})
      emit(detail::family_code(f), std::to_string(off), value_at(f, off));
  }

  // group (b): successive pairs over -2..+2
  static constexpr Family kPairFamilies[] = {Family::Word, Family::Pos,
                                             Family::Shape, Family::Wtype};
  for (Family f : kPairFamilies) {
    if (!enabled(f)) continue;
    for (int off = -2; off <= 1; ++off) {
      std::string offsets = std::to_string(off) + "," + std::to_string(off + 1);
      emit(detail::family_code(f), offsets,
           value_at(f, off) + "|" + value_at(f, off + 1));
    }
  }

  // group (c): trigrams over -1..+1 for pos and word
  for (Family f : {Family::Pos, Family::Word}) {
    if (!enabled(f)) continue;
    emit(detail::family_code(f), "-1,0,1",
         value_at(f, -1) + "|" + value_at(f, 0) + "|" + value_at(f, 1));
  }
  return features;
}

// Dense string-to-id mapping; frozen after the build phase so prediction
// never grows it.
class FeatureIndex {
 public:
  int add(const std::string& feature) {
    auto it = ids_.find(feature);
    if (it != ids_.end()) return it->second;
    if (frozen_) return -1;
    int id = static_cast<int>(names_.size());
    ids_.emplace(feature, id);
    names_.push_back(feature);
    return id;
  }
  int lookup(const std::string& feature) const {
    auto it = ids_.find(feature);
    return it == ids_.end() ? -1 : it->second;
  }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  size_t size() const { return names_.size(); }
  const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

// One sentence, ready for the tagger: feature ids per position plus the
// gold labels (empty when only decoding).
struct IndexedSequence {
  std::vector<std::vector<int>> features;
  std::vector<IobTag> labels;
};

struct IndexedDataset {
  FeatureIndex index;
  std::vector<IndexedSequence> sequences;
  std::vector<std::string> warnings;  // skipped annotations
};

// Features for every token of a sentence, indexed against `index`.
// Unknown features (frozen index) are dropped.
inline std::vector<std::vector<int>> index_sentence(
    const Sentence& sentence, const FeatureTemplates& templates,
    FeatureIndex& index) {
  std::vector<std::vector<int>> ids(sentence.tokens.size());
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    for (const std::string& feature :
         extract_features(sentence.tokens, i, templates)) {
      int id = index.add(feature);
      if (id >= 0) ids[i].push_back(id);
    }
  }
  return ids;
}

// Builds the frozen feature index and the labeled training sequences for
// a set of sentences. Every observed feature gets an id (no cutoff).
inline IndexedDataset index_dataset(std::span<const Sentence> sentences,
                                    const FeatureTemplates& templates = {}) {
  IndexedDataset dataset;
  for (const Sentence& sentence : sentences) {
    IobResult iob = to_iob(sentence);
    dataset.warnings.insert(dataset.warnings.end(), iob.warnings.begin(),
                            iob.warnings.end());
    IndexedSequence seq;
    seq.features = index_sentence(sentence, templates, dataset.index);
    seq.labels = std::move(iob.tags);
    if (!seq.labels.empty()) dataset.sequences.push_back(std::move(seq));
  }
  dataset.index.freeze();
  return dataset;
}

// Debug dump, one token per line: gold tag first, then the feature
// strings, tab-separated; blank line between sentences.
inline void dump_features(std::ostream& out, std::span<const Sentence> sentences,
                          const FeatureTemplates& templates = {}) {
  for (const Sentence& sentence : sentences) {
    IobResult iob = to_iob(sentence);
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << iob_to_char(iob.tags[i]);
      for (const std::string& feature :
           extract_features(sentence.tokens, i, templates))
        out << '\t' << feature;
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace absa
