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

// Reader/writer for the annotated-review XML format:
//
//   <reviews>                       (or a single <review> root)
//     <review id="1">
//       <sentences>
//         <sentence id="1">
//           <text>...</text>
//           <Opinions>
//             <Opinion target="..." category="..." polarity="..."
//                      polarityterms="..." occurrence="1"/>
//           </Opinions>
//         </sentence>
//       </sentences>
//     </review>
//   </reviews>

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/xml.hpp"

namespace absa {

namespace detail {

inline std::vector<std::string> split_polarity_terms(std::string_view raw) {
  std::vector<std::string> terms;
  std::string trimmed = trim(raw);
  if (trimmed.empty() || trimmed == "NULL") return terms;
  size_t begin = 0;
  while (begin <= trimmed.size()) {
    size_t semi = trimmed.find(';', begin);
    std::string term = trim(std::string_view(trimmed).substr(
        begin, semi == std::string::npos ? std::string::npos : semi - begin));
    if (!term.empty()) terms.push_back(std::move(term));
    if (semi == std::string::npos) break;
    begin = semi + 1;
  }
  return terms;
}

inline Opinion parse_opinion(const xml::Node& node,
                             const std::string& sentence_id) {
  auto required = [&](std::string_view key) -> const std::string& {
    const std::string* value = node.attr(key);
    if (!value)
      throw ValidationError("sentence " + sentence_id +
                            ": Opinion missing required attribute '" +
                            std::string(key) + "'");
    return *value;
  };
  Opinion op;
  op.target = trim(required("target"));
  if (op.target.empty()) op.target = "NULL";
  const std::string* category = node.attr("category");
  op.category = category ? parse_category(*category) : Category::other("");
  if (const std::string* polarity = node.attr("polarity")) {
    std::string trimmed = trim(*polarity);
    if (!trimmed.empty() && trimmed != "NULL") {
      op.polarity = parse_polarity(trimmed);
      if (!op.polarity)
        throw ValidationError("sentence " + sentence_id +
                              ": unknown polarity \"" + trimmed + "\"");
    }
  }
  if (const std::string* terms = node.attr("polarityterms"))
    op.polarity_terms = split_polarity_terms(*terms);
  const std::string& occurrence = required("occurrence");
  try {
    size_t consumed = 0;
    op.occurrence = std::stoi(trim(occurrence), &consumed);
    if (consumed != trim(occurrence).size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ValidationError("sentence " + sentence_id +
                          ": occurrence is not an integer: \"" + occurrence +
                          "\"");
  }
  if (op.occurrence < 1)
    throw ValidationError("sentence " + sentence_id +
                          ": occurrence must be >= 1, got " +
                          std::to_string(op.occurrence));
  return op;
}

inline Sentence parse_sentence(const xml::Node& node, size_t ordinal) {
  Sentence sentence;
  const std::string* id = node.attr("id");
  sentence.id = id ? *id : std::to_string(ordinal + 1);
  const xml::Node* text = node.child("text");
  if (!text)
    throw ValidationError("sentence " + sentence.id +
                          ": missing <text> element");
  sentence.text = trim(text->text);
  sentence.tokens = tokenize(sentence.text);
  if (const xml::Node* opinions = node.child("Opinions")) {
    for (const xml::Node& child : opinions->children) {
      if (child.name != "Opinion")
        throw ValidationError("sentence " + sentence.id +
                              ": unexpected element <" + child.name +
                              "> inside <Opinions>");
      sentence.opinions.push_back(parse_opinion(child, sentence.id));
    }
  }
  return sentence;
}

inline Review parse_review(const xml::Node& node, size_t ordinal) {
  Review review;
  const std::string* id = node.attr("id");
  review.id = id ? *id : std::to_string(ordinal + 1);
  const xml::Node* sentences = node.child("sentences");
  if (sentences) {
    size_t i = 0;
    for (const xml::Node& child : sentences->children) {
      if (child.name != "sentence")
        throw ValidationError("review " + review.id + ": unexpected element <" +
                              child.name + "> inside <sentences>");
      review.sentences.push_back(parse_sentence(child, i++));
    }
  }
  for (size_t i = 0; i < review.sentences.size(); ++i)
    for (size_t j = i + 1; j < review.sentences.size(); ++j)
      if (review.sentences[i].id == review.sentences[j].id)
        throw ValidationError("review " + review.id + ": duplicate sentence id \"" +
                              review.sentences[i].id + "\"");
  return review;
}

}  // namespace detail

inline Corpus parse_corpus_xml(std::string_view bytes) {
  xml::Node root = xml::parse(bytes);
  Corpus corpus;
  if (const std::string* annotator = root.attr("annotator"))
    corpus.annotator_id = *annotator;
  if (root.name == "review") {
    corpus.reviews.push_back(detail::parse_review(root, 0));
  } else if (root.name == "reviews") {
    size_t i = 0;
    for (const xml::Node& child : root.children) {
      if (child.name != "review")
        throw ValidationError("unexpected element <" + child.name +
                              "> inside <reviews>");
      corpus.reviews.push_back(detail::parse_review(child, i++));
    }
  } else {
    throw ValidationError("unexpected root element <" + root.name +
                          ">, expected <reviews> or <review>");
  }
  for (size_t i = 0; i < corpus.reviews.size(); ++i)
    for (size_t j = i + 1; j < corpus.reviews.size(); ++j)
      if (corpus.reviews[i].id == corpus.reviews[j].id)
        throw ValidationError("duplicate review id \"" + corpus.reviews[i].id +
                              "\"");
  return corpus;
}

inline std::string join_polarity_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "NULL";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " ; ";
    out += terms[i];
  }
  return out;
}

inline std::string write_corpus_xml(const Corpus& corpus) {
  xml::Node root;
  root.name = "reviews";
  if (corpus.annotator_id)
    root.attrs.emplace_back("annotator", *corpus.annotator_id);
  for (const Review& review : corpus.reviews) {
    xml::Node review_node;
    review_node.name = "review";
    review_node.attrs.emplace_back("id", review.id);
    xml::Node sentences_node;
    sentences_node.name = "sentences";
    for (const Sentence& sentence : review.sentences) {
      xml::Node sentence_node;
      sentence_node.name = "sentence";
      sentence_node.attrs.emplace_back("id", sentence.id);
      xml::Node text_node;
      text_node.name = "text";
      text_node.text = sentence.text;
      sentence_node.children.push_back(std::move(text_node));
      xml::Node opinions_node;
      opinions_node.name = "Opinions";
      for (const Opinion& op : sentence.opinions) {
        xml::Node op_node;
        op_node.name = "Opinion";
        op_node.attrs.emplace_back("target", op.target);
        if (!(op.category.value() == Category::Other &&
              op.category.raw().empty()))
          op_node.attrs.emplace_back("category",
                                     category_to_string(op.category));
        if (op.polarity)
          op_node.attrs.emplace_back("polarity",
                                     polarity_to_string(*op.polarity));
        op_node.attrs.emplace_back("polarityterms",
                                   join_polarity_terms(op.polarity_terms));
        op_node.attrs.emplace_back("occurrence",
                                   std::to_string(op.occurrence));
        opinions_node.children.push_back(std::move(op_node));
      }
      sentence_node.children.push_back(std::move(opinions_node));
      sentences_node.children.push_back(std::move(sentence_node));
    }
    review_node.children.push_back(std::move(sentences_node));
    root.children.push_back(std::move(review_node));
  }
  return xml::serialize(root);
}

}  // namespace absa
