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

// Evaluation machinery: exact-match span precision/recall/F1, seeded
// k-fold plans (review-level for extraction, example-level for polarity),
// cross-validation drivers and the Z-threshold grid search.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/crf.hpp"
#include "absa/polarity.hpp"

namespace absa {

struct SpanMetrics {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  double precision() const {
    return tp + fp == 0 ? 1.0
                        : static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 1.0
                        : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  double f1() const {
    double p = precision();
    double r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  SpanMetrics& operator+=(const SpanMetrics& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct SentenceSpans {
  std::string sentence_uid;  // unique across the corpus, e.g. "review/sentence"
  std::vector<TargetSpan> spans;
};

// Exact-match comparison by (sentence, start, end). Both sides must cover
// the same sentence set.
inline SpanMetrics span_prf(std::span<const SentenceSpans> gold,
                            std::span<const SentenceSpans> predicted) {
  std::map<std::string, std::set<TargetSpan>> gold_map, pred_map;
  for (const SentenceSpans& s : gold)
    gold_map[s.sentence_uid].insert(s.spans.begin(), s.spans.end());
  for (const SentenceSpans& s : predicted)
    pred_map[s.sentence_uid].insert(s.spans.begin(), s.spans.end());
  if (gold_map.size() != pred_map.size())
    throw Error("span_prf: gold and predicted sentence sets differ");
  SpanMetrics metrics;
  for (const auto& [uid, gold_spans] : gold_map) {
    auto it = pred_map.find(uid);
    if (it == pred_map.end())
      throw Error("span_prf: sentence \"" + uid + "\" missing from predictions");
    for (const TargetSpan& span : gold_spans) {
      if (it->second.count(span)) ++metrics.tp;
      else ++metrics.fn;
    }
    for (const TargetSpan& span : it->second)
      if (!gold_spans.count(span)) ++metrics.fp;
  }
  return metrics;
}

struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // item index -> fold id
  uint64_t seed = 0;

  std::vector<size_t> members(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(i);
    return out;
  }
};

// Seeded shuffle + round-robin assignment; fold sizes differ by at most
// one. The Fisher-Yates walk uses the raw engine so the plan is identical
// across standard library implementations.
inline FoldPlan kfold(size_t n, int k, uint64_t seed) {
  if (k < 2) throw Error("kfold: k must be >= 2");
  if (n < static_cast<size_t>(k))
    throw Error("kfold: need at least k items, got " + std::to_string(n));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 engine(seed);
  for (size_t i = n - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(engine() % (i + 1));
    std::swap(order[i], order[j]);
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.resize(n);
  for (size_t position = 0; position < n; ++position)
    plan.assignments[order[position]] = static_cast<int>(position % static_cast<size_t>(k));
  return plan;
}

struct PolarityCvResult {
  std::vector<std::optional<double>> fold_accuracy;  // one slot per fold
  double mean_accuracy = 0.0;
  int folds_evaluated = 0;
  std::vector<std::string> warnings;
};

// Per fold: featurizer, Z table and classifier are fit on the training
// folds only, then scored on the held-out fold. Folds whose training side
// misses a class are skipped with a warning.
inline PolarityCvResult cross_validate_polarity(
    std::span<const PolarityExample> examples, const PolarityConfig& config,
    int k, uint64_t seed) {
  FoldPlan plan = kfold(examples.size(), k, seed);
  PolarityCvResult result;
  result.fold_accuracy.assign(static_cast<size_t>(k), std::nullopt);
  double sum = 0.0;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<PolarityExample> train;
    std::vector<const PolarityExample*> test;
    for (size_t i = 0; i < examples.size(); ++i) {
      if (plan.assignments[i] == fold) test.push_back(&examples[i]);
      else train.push_back(examples[i]);
    }
    try {
      PolarityModel model = train_polarity(train, config);
      long correct = 0;
      for (const PolarityExample* ex : test)
        if (predict_polarity(model, *ex).first == ex->label) ++correct;
      double accuracy = test.empty()
                            ? 1.0
                            : static_cast<double>(correct) /
                                  static_cast<double>(test.size());
      result.fold_accuracy[static_cast<size_t>(fold)] = accuracy;
      sum += accuracy;
      ++result.folds_evaluated;
    } catch (const Error& e) {
      result.warnings.push_back("fold " + std::to_string(fold) +
                                " skipped: " + e.what());
    }
  }
  if (result.folds_evaluated == 0)
    throw Error("cross-validation: every fold was skipped");
  result.mean_accuracy = sum / result.folds_evaluated;
  return result;
}

struct GridResult {
  std::vector<std::pair<double, double>> accuracy_by_threshold;  // ascending
  double best_threshold = 0.0;
  double best_accuracy = 0.0;
  std::vector<std::string> warnings;
};

// The default search range: -2.0 to 5.0 in steps of 0.5 (15 values).
inline std::vector<double> default_z_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 14; ++i) grid.push_back(-2.0 + 0.5 * i);
  return grid;
}

// Cross-validates once per threshold; the best is the argmax accuracy,
// ties resolving toward the smaller threshold.
inline GridResult grid_search_z(std::span<const PolarityExample> examples,
                                std::vector<double> thresholds,
                                const PolarityConfig& base_config, int k,
                                uint64_t seed) {
  if (thresholds.empty()) throw Error("grid search: no thresholds");
  std::sort(thresholds.begin(), thresholds.end());
  GridResult result;
  bool first = true;
  for (double threshold : thresholds) {
    PolarityConfig config = base_config;
    config.use_z = true;
    config.z.threshold = threshold;
    PolarityCvResult cv = cross_validate_polarity(examples, config, k, seed);
    result.accuracy_by_threshold.emplace_back(threshold, cv.mean_accuracy);
    result.warnings.insert(result.warnings.end(), cv.warnings.begin(),
                           cv.warnings.end());
    if (first || cv.mean_accuracy > result.best_accuracy) {
      result.best_accuracy = cv.mean_accuracy;
      result.best_threshold = threshold;
      first = false;
    }
  }
  return result;
}

struct ExtractionCvResult {
  SpanMetrics micro;                  // pooled tp/fp/fn across folds
  std::vector<SpanMetrics> per_fold;
  std::vector<std::string> warnings;  // skipped annotations etc.
};

// Review-level k-fold cross-validation of the target tagger: no review is
// split across folds, and each fold's feature index is built on its
// training reviews only.
inline ExtractionCvResult evaluate_target_extraction(
    const Corpus& corpus, int k, uint64_t seed,
    const FeatureTemplates& templates = {},
    const TrainConfig& train_config = {}) {
  FoldPlan plan = kfold(corpus.reviews.size(), k, seed);
  ExtractionCvResult result;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<Sentence> train_sentences;
    std::vector<std::pair<std::string, const Sentence*>> test_sentences;
    for (size_t r = 0; r < corpus.reviews.size(); ++r) {
      const Review& review = corpus.reviews[r];
      for (const Sentence& sentence : review.sentences) {
        if (sentence.tokens.empty()) continue;
        if (plan.assignments[r] == fold)
          test_sentences.emplace_back(review.id + "/" + sentence.id, &sentence);
        else
          train_sentences.push_back(sentence);
      }
    }
    IndexedDataset dataset = index_dataset(train_sentences, templates);
    result.warnings.insert(result.warnings.end(), dataset.warnings.begin(),
                           dataset.warnings.end());
    CrfModel model = train_crf(dataset.sequences, dataset.index, train_config);

    std::vector<SentenceSpans> gold, predicted;
    for (const auto& [uid, sentence] : test_sentences) {
      gold.push_back({uid, gold_spans(*sentence, &result.warnings)});
      std::vector<std::vector<int>> features =
          index_sentence(*sentence, templates, model.feature_index);
      predicted.push_back({uid, from_iob(viterbi(model, features))});
    }
    SpanMetrics fold_metrics = span_prf(gold, predicted);
    result.per_fold.push_back(fold_metrics);
    result.micro += fold_metrics;
  }
  return result;
}

}  // namespace absa
