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

// Token-per-line corpus format (CoNLL-like): `surface<TAB>pos` lines,
// blank line between sentences, `#review <id>` / `#sentence <id>` headers.
// `#text`, `#opinion` and `#annotator` comment lines carry the rest of
// the annotation so conversion against the XML format is lossless.

#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "absa/corpus.hpp"

namespace absa {

namespace detail {

inline std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  size_t begin = 0;
  for (;;) {
    size_t tab = line.find('\t', begin);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(begin));
      return fields;
    }
    fields.emplace_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
}

}  // namespace detail

inline Corpus read_conll(std::string_view bytes) {
  Corpus corpus;
  Review* review = nullptr;
  Sentence* sentence = nullptr;
  bool sentence_open = false;
  size_t line_no = 0;

  auto close_sentence = [&]() {
    if (sentence_open && sentence) {
      if (sentence->text.empty()) {
        std::string joined;
        for (const Token& t : sentence->tokens) {
          if (!joined.empty()) joined += ' ';
          joined += t.surface;
        }
        sentence->text = joined;
      }
      sentence = nullptr;
    }
    sentence_open = false;
  };
  auto require_sentence = [&]() -> Sentence& {
    if (!review) {
      corpus.reviews.push_back(Review{std::to_string(corpus.reviews.size() + 1), {}});
      review = &corpus.reviews.back();
    }
    if (!sentence) {
      review->sentences.push_back(
          Sentence{std::to_string(review->sentences.size() + 1), "", {}, {}});
      sentence = &review->sentences.back();
      sentence_open = true;
    }
    return *sentence;
  };

  std::istringstream in{std::string(bytes)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      close_sentence();
      continue;
    }
    if (line[0] == '#') {
      std::string_view rest(line);
      rest.remove_prefix(1);
      size_t space = rest.find(' ');
      std::string_view keyword = rest.substr(0, space);
      std::string_view value =
          space == std::string_view::npos ? std::string_view() : rest.substr(space + 1);
      if (keyword == "annotator") {
        corpus.annotator_id = trim(value);
      } else if (keyword == "review") {
        close_sentence();
        corpus.reviews.push_back(Review{trim(value), {}});
        review = &corpus.reviews.back();
      } else if (keyword == "sentence") {
        close_sentence();
        if (!review) {
          corpus.reviews.push_back(
              Review{std::to_string(corpus.reviews.size() + 1), {}});
          review = &corpus.reviews.back();
        }
        review->sentences.push_back(Sentence{trim(value), "", {}, {}});
        sentence = &review->sentences.back();
        sentence_open = true;
      } else if (keyword == "text") {
        require_sentence().text = std::string(value);
      } else if (keyword == "opinion") {
        std::vector<std::string> fields = detail::split_tabs(value);
        if (fields.size() != 5)
          throw ParseError("line " + std::to_string(line_no) +
                           ": #opinion needs 5 tab-separated fields, got " +
                           std::to_string(fields.size()));
        Opinion op;
        op.target = trim(fields[0]);
        if (op.target.empty()) op.target = "NULL";
        op.category = fields[1].empty() ? Category::other("")
                                        : parse_category(fields[1]);
        std::string pol = trim(fields[2]);
        if (!pol.empty() && pol != "-") {
          op.polarity = parse_polarity(pol);
          if (!op.polarity)
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown polarity \"" + pol + "\"");
        }
        {
          // reuse the XML splitting rule for the terms field
          std::string terms = trim(fields[3]);
          size_t begin = 0;
          if (!terms.empty() && terms != "NULL") {
            while (begin <= terms.size()) {
              size_t semi = terms.find(';', begin);
              std::string term = trim(std::string_view(terms).substr(
                  begin,
                  semi == std::string::npos ? std::string::npos : semi - begin));
              if (!term.empty()) op.polarity_terms.push_back(std::move(term));
              if (semi == std::string::npos) break;
              begin = semi + 1;
            }
          }
        }
        try {
          op.occurrence = std::stoi(fields[4]);
        } catch (const std::exception&) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": occurrence is not an integer: \"" + fields[4] +
                           "\"");
        }
        if (op.occurrence < 1)
          throw ParseError("line " + std::to_string(line_no) +
                           ": occurrence must be >= 1");
        require_sentence().opinions.push_back(std::move(op));
      }
      // unknown comment lines are ignored
      continue;
    }
    std::vector<std::string> fields = detail::split_tabs(line);
    if (fields[0].empty())
      throw ParseError("line " + std::to_string(line_no) +
                       ": empty token surface");
    Sentence& s = require_sentence();
    Token token;
    token.surface = fields[0];
    token.pos = fields.size() > 1 && !fields[1].empty() ? fields[1] : "UNK";
    token.index = static_cast<int>(s.tokens.size());
    s.tokens.push_back(std::move(token));
  }
  close_sentence();
  return corpus;
}

inline std::string write_conll(const Corpus& corpus) {
  std::string out;
  if (corpus.annotator_id) {
    out += "#annotator ";
    out += *corpus.annotator_id;
    out += '\n';
  }
  for (const Review& review : corpus.reviews) {
    out += "#review ";
    out += review.id;
    out += '\n';
    for (const Sentence& sentence : review.sentences) {
      out += "#sentence ";
      out += sentence.id;
      out += '\n';
      out += "#text ";
      out += sentence.text;
      out += '\n';
      for (const Opinion& op : sentence.opinions) {
        out += "#opinion ";
        out += op.target;
        out += '\t';
        if (!(op.category.value() == Category::Other && op.category.raw().empty()))
          out += category_to_string(op.category);
        out += '\t';
        out += op.polarity ? polarity_to_string(*op.polarity) : "-";
        out += '\t';
        if (op.polarity_terms.empty()) {
          out += "NULL";
        } else {
          for (size_t i = 0; i < op.polarity_terms.size(); ++i) {
            if (i) out += " ; ";
            out += op.polarity_terms[i];
          }
        }
        out += '\t';
        out += std::to_string(op.occurrence);
        out += '\n';
      }
      for (const Token& token : sentence.tokens) {
        out += token.surface;
        out += '\t';
        out += token.pos;
        out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace absa
