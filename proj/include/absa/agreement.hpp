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

// Inter-annotator agreement counting. Per annotator: how many targets,
// categories and polarities were annotated. Per annotator subset: how
// many annotations coincide on the key (review id, sentence id,
// normalized target, occurrence), and of those how many also agree on
// category / polarity.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absa/corpus.hpp"

namespace absa {

struct AnnotatorCounts {
  std::string annotator;
  long targets = 0;
  long categories = 0;
  long polarities = 0;
};

struct SubsetCounts {
  std::vector<std::string> annotators;
  long common_targets = 0;
  long common_categories = 0;
  long common_polarities = 0;
};

struct AgreementReport {
  std::vector<AnnotatorCounts> per_annotator;
  std::vector<SubsetCounts> subsets;  // every subset of size >= 2
};

namespace detail {

using TargetKey = std::tuple<std::string, std::string, std::string, int>;

struct KeyedOpinion {
  Category category;
  std::optional<Polarity> polarity;
};

struct AnnotationView {
  std::string annotator;
  std::map<TargetKey, KeyedOpinion> keyed;  // first occurrence wins
  std::set<std::string> review_ids;
};

}  // namespace detail

inline AgreementReport agreement_stats(
    const std::vector<std::pair<std::string, Corpus>>& corpora) {
  if (corpora.empty()) throw Error("agreement: no corpora given");
  for (size_t i = 0; i < corpora.size(); ++i)
    for (size_t j = i + 1; j < corpora.size(); ++j)
      if (corpora[i].first == corpora[j].first)
        throw Error("agreement: duplicate annotator id \"" +
                    corpora[i].first + "\"");

  AgreementReport report;
  std::vector<detail::AnnotationView> views;
  for (const auto& [annotator, corpus] : corpora) {
    AnnotatorCounts counts;
    counts.annotator = annotator;
    detail::AnnotationView view;
    view.annotator = annotator;
    for (const Review& review : corpus.reviews) {
      view.review_ids.insert(review.id);
      for (const Sentence& sentence : review.sentences) {
        for (const Opinion& op : sentence.opinions) {
          if (op.has_target()) ++counts.targets;
          if (!(op.category.value() == Category::Other &&
                op.category.raw().empty()))
            ++counts.categories;
          if (op.polarity) ++counts.polarities;
          if (!op.has_target()) continue;
          detail::TargetKey key{review.id, sentence.id,
                                normalize_key(op.target), op.occurrence};
          view.keyed.emplace(std::move(key),
                             detail::KeyedOpinion{op.category, op.polarity});
        }
      }
    }
    report.per_annotator.push_back(counts);
    views.push_back(std::move(view));
  }

  // all subsets of size >= 2, ordered by size then by member indices
  const size_t n = views.size();
  std::vector<std::vector<size_t>> subsets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<size_t> members;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(i);
    if (members.size() >= 2) subsets.push_back(std::move(members));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<size_t>& a, const std::vector<size_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  for (const std::vector<size_t>& members : subsets) {
    SubsetCounts counts;
    for (size_t i : members) counts.annotators.push_back(views[i].annotator);
    const detail::AnnotationView& first = views[members[0]];
    for (const auto& [key, keyed] : first.keyed) {
      bool common = true;
      bool category_agrees = true;
      bool polarity_agrees = keyed.polarity.has_value();
      for (size_t mi = 1; mi < members.size() && common; ++mi) {
        const detail::AnnotationView& other = views[members[mi]];
        auto it = other.keyed.find(key);
        if (it == other.keyed.end()) {
          common = false;
          break;
        }
        if (!(it->second.category == keyed.category)) category_agrees = false;
        if (!it->second.polarity || !keyed.polarity ||
            *it->second.polarity != *keyed.polarity)
          polarity_agrees = false;
      }
      if (!common) continue;
      ++counts.common_targets;
      if (category_agrees) ++counts.common_categories;
      if (polarity_agrees) ++counts.common_polarities;
    }
    report.subsets.push_back(std::move(counts));
  }
  return report;
}

}  // namespace absa
