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

// Target-polarity classification: word n-gram presence features, the five
// Z-score features over class-conditional term statistics, and a
// one-vs-rest L1-regularized logistic regression trained by cyclic
// coordinate descent with a trust region.
//
// The per-class objective is
//     f(w) = (1/n) sum_i log(1 + exp(-y_i w.x_i)) + lambda ||w||_1
// i.e. the loss is averaged, so duplicating the training set leaves the
// minimizer unchanged.

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/features.hpp"  // FeatureIndex

namespace absa {

struct PolarityExample {
  std::vector<std::string> context_tokens;  // the sentence, lowercased
  std::string target;
  Polarity label = Polarity::Neutral;
};

// canonical class order
inline constexpr std::array<Polarity, 3> kPolarityOrder = {
    Polarity::Positive, Polarity::Negative, Polarity::Neutral};

inline int polarity_class(Polarity p) {
  switch (p) {
    case Polarity::Positive: return 0;
    case Polarity::Negative: return 1;
    case Polarity::Neutral: return 2;
  }
  return 2;
}

struct ZConfig {
  double threshold = -0.5;
};

// Standardized deviation of each term's class-conditional frequency from
// its expectation under the token-level class priors:
//   z(w,c) = (a(w,c) - n_w P(c)) / sqrt(n_w P(c) (1 - P(c)))
struct ZScoreTable {
  std::array<double, 3> class_priors{};  // token-mass share per class
  std::unordered_map<std::string, std::array<double, 3>> scores;
};

inline ZScoreTable build_zscore_table(std::span<const PolarityExample> examples,
                                      int min_count = 3) {
  std::unordered_map<std::string, std::array<long, 3>> counts;
  std::array<long, 3> class_tokens{};
  for (const PolarityExample& ex : examples) {
    int c = polarity_class(ex.label);
    for (const std::string& token : ex.context_tokens) {
      counts[token][static_cast<size_t>(c)] += 1;
      class_tokens[static_cast<size_t>(c)] += 1;
    }
  }
  long total = class_tokens[0] + class_tokens[1] + class_tokens[2];
  if (total == 0) throw Error("z-score: no tokens in the training examples");

  ZScoreTable table;
  for (int c = 0; c < 3; ++c) {
    table.class_priors[static_cast<size_t>(c)] =
        static_cast<double>(class_tokens[static_cast<size_t>(c)]) /
        static_cast<double>(total);
    double p = table.class_priors[static_cast<size_t>(c)];
    if (p <= 0.0 || p >= 1.0)
      throw Error("z-score: class \"" +
                  polarity_to_string(kPolarityOrder[static_cast<size_t>(c)]) +
                  "\" has degenerate prior " + std::to_string(p));
  }
  for (const auto& [term, per_class] : counts) {
    long n_w = per_class[0] + per_class[1] + per_class[2];
    if (n_w < min_count) continue;
    std::array<double, 3> z;
    for (size_t c = 0; c < 3; ++c) {
      double p = table.class_priors[c];
      z[c] = (static_cast<double>(per_class[c]) -
              static_cast<double>(n_w) * p) /
             std::sqrt(static_cast<double>(n_w) * p * (1.0 - p));
    }
    table.scores.emplace(term, z);
  }
  return table;
}

// The five features: per-class counts of context tokens whose z exceeds
// the threshold, then the max and min of those three counts. Tokens
// absent from the table contribute to no count.
inline std::array<double, 5> z_features(
    std::span<const std::string> context_tokens, const ZScoreTable& table,
    const ZConfig& config) {
  std::array<double, 5> features{};
  for (const std::string& token : context_tokens) {
    auto it = table.scores.find(token);
    if (it == table.scores.end()) continue;
    for (size_t c = 0; c < 3; ++c)
      if (it->second[c] > config.threshold) features[c] += 1.0;
  }
  features[3] = std::max({features[0], features[1], features[2]});
  features[4] = std::min({features[0], features[1], features[2]});
  return features;
}

// Contiguous 1-, 2- and 3-grams joined with '_', duplicates preserved.
inline std::vector<std::string> extract_ngrams(
    std::span<const std::string> context_tokens) {
  std::vector<std::string> grams;
  const size_t n = context_tokens.size();
  grams.reserve(n * 3);
  for (size_t i = 0; i < n; ++i) {
    grams.push_back(context_tokens[i]);
    if (i + 1 < n) grams.push_back(context_tokens[i] + "_" + context_tokens[i + 1]);
    if (i + 2 < n)
      grams.push_back(context_tokens[i] + "_" + context_tokens[i + 1] + "_" +
                      context_tokens[i + 2]);
  }
  return grams;
}

using SparseVector = std::vector<std::pair<int, double>>;  // sorted by id

struct L1Options {
  double lambda = 0.01;
  int max_sweeps = 1000;
  double tolerance = 1e-6;  // max KKT violation of the mean-loss objective
};

namespace polarity_detail {

// Upper bound on the second derivative of log(1+exp(-r)) within a ball of
// radius delta around r.
inline double curvature_bound(double r, double delta) {
  r = std::fabs(r);
  if (r <= delta) return 0.25;
  double s = std::exp(r - delta);
  return 1.0 / (2.0 + s + 1.0 / s);
}

inline double sigmoid(double x) {
  if (x >= 0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace polarity_detail

// Binary L1-regularized logistic regression on the mean loss; labels are
// +-1. Cyclic coordinate descent with per-coordinate trust regions;
// deterministic, and inactive coordinates stay exactly zero.
inline std::vector<double> train_l1_logistic(std::span<const SparseVector> x,
                                             std::span<const int> y, size_t dim,
                                             const L1Options& options = {}) {
  const size_t n = x.size();
  if (n == 0 || y.size() != n) throw Error("l1 trainer: bad inputs");
  // column view
  std::vector<std::vector<std::pair<int, double>>> columns(dim);
  for (size_t i = 0; i < n; ++i)
    for (const auto& [j, value] : x[i])
      columns[static_cast<size_t>(j)].emplace_back(static_cast<int>(i), value);

  std::vector<double> w(dim, 0.0);
  std::vector<double> margin(n, 0.0);  // w . x_i
  std::vector<double> delta(dim, 1.0);
  const double lambda = options.lambda;
  const double inv_n = 1.0 / static_cast<double>(n);

  auto column_gradient = [&](size_t j) {
    double g = 0.0;
    for (const auto& [i, value] : columns[j]) {
      double yi = static_cast<double>(y[static_cast<size_t>(i)]);
      g -= yi * value *
           polarity_detail::sigmoid(-yi * margin[static_cast<size_t>(i)]);
    }
    return g * inv_n;
  };

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    for (size_t j = 0; j < dim; ++j) {
      if (columns[j].empty()) continue;
      double g = column_gradient(j);
      double h = 0.0;
      for (const auto& [i, value] : columns[j]) {
        double yi = static_cast<double>(y[static_cast<size_t>(i)]);
        h += value * value *
             polarity_detail::curvature_bound(
                 yi * margin[static_cast<size_t>(i)],
                 delta[j] * std::fabs(value));
      }
      h = std::max(h * inv_n, 1e-12);

      double step;
      if (w[j] > 0.0) {
        step = -(g + lambda) / h;
        if (w[j] + step < 0.0) step = -w[j];
      } else if (w[j] < 0.0) {
        step = -(g - lambda) / h;
        if (w[j] + step > 0.0) step = -w[j];
      } else if (g + lambda < 0.0) {
        step = -(g + lambda) / h;
      } else if (g - lambda > 0.0) {
        step = -(g - lambda) / h;
      } else {
        step = 0.0;
      }
      if (step > delta[j]) step = delta[j];
      if (step < -delta[j]) step = -delta[j];
      if (step != 0.0) {
        w[j] += step;
        for (const auto& [i, value] : columns[j])
          margin[static_cast<size_t>(i)] += step * value;
      }
      delta[j] = std::max(2.0 * std::fabs(step), delta[j] / 2.0);
    }

    // exact optimality check on the mean-loss gradient
    double violation = 0.0;
    for (size_t j = 0; j < dim; ++j) {
      if (columns[j].empty()) continue;
      double g = column_gradient(j);
      double v = w[j] != 0.0
                     ? std::fabs(g + (w[j] > 0 ? lambda : -lambda))
                     : std::max(0.0, std::fabs(g) - lambda);
      violation = std::max(violation, v);
    }
    if (violation < options.tolerance) break;
  }
  return w;
}

struct PolarityConfig {
  bool use_z = true;
  ZConfig z{};
  int min_ngram_count = 3;  // n-grams seen fewer times are dropped
  double l1_c = 1.0;        // inverse regularization strength
  int max_sweeps = 1000;
  double tolerance = 1e-6;

  // mean-loss L1 coefficient corresponding to l1_c
  double lambda() const { return 0.01 / l1_c; }
};

// Maps examples onto the combined n-gram + Z + bias feature space. Fit on
// training data only; the index freezes afterwards.
class PolarityFeaturizer {
 public:
  static PolarityFeaturizer fit(std::span<const PolarityExample> examples,
                                const PolarityConfig& config) {
    PolarityFeaturizer featurizer;
    featurizer.use_z_ = config.use_z;
    featurizer.z_config_ = config.z;

    std::unordered_map<std::string, long> counts;
    for (const PolarityExample& ex : examples)
      for (const std::string& gram : extract_ngrams(ex.context_tokens))
        counts[gram] += 1;
    for (const PolarityExample& ex : examples) {
      std::set<std::string> seen;
      for (const std::string& gram : extract_ngrams(ex.context_tokens)) {
        if (counts[gram] < config.min_ngram_count) continue;
        if (seen.insert(gram).second) featurizer.ngram_index_.add(gram);
      }
    }
    featurizer.ngram_index_.freeze();
    if (config.use_z) featurizer.z_table_ = build_zscore_table(examples);
    return featurizer;
  }

  SparseVector transform(const PolarityExample& example) const {
    std::set<int> ngram_ids;
    for (const std::string& gram : extract_ngrams(example.context_tokens)) {
      int id = ngram_index_.lookup(gram);
      if (id >= 0) ngram_ids.insert(id);
    }
    SparseVector features;
    features.reserve(ngram_ids.size() + 6);
    for (int id : ngram_ids) features.emplace_back(id, 1.0);
    if (use_z_) {
      std::array<double, 5> z =
          z_features(example.context_tokens, z_table_, z_config_);
      for (size_t k = 0; k < 5; ++k)
        if (z[k] != 0.0)
          features.emplace_back(static_cast<int>(ngram_index_.size() + k), z[k]);
    }
    features.emplace_back(static_cast<int>(bias_id()), 1.0);
    return features;
  }

  size_t dim() const { return bias_id() + 1; }
  size_t bias_id() const { return ngram_index_.size() + (use_z_ ? 5 : 0); }
  const FeatureIndex& ngram_index() const { return ngram_index_; }
  bool uses_z() const { return use_z_; }
  const ZScoreTable& z_table() const { return z_table_; }
  const ZConfig& z_config() const { return z_config_; }

  // for model (de)serialization
  static PolarityFeaturizer restore(FeatureIndex ngrams, bool use_z,
                                    ZConfig z_config, ZScoreTable table) {
    PolarityFeaturizer featurizer;
    featurizer.ngram_index_ = std::move(ngrams);
    featurizer.use_z_ = use_z;
    featurizer.z_config_ = z_config;
    featurizer.z_table_ = std::move(table);
    return featurizer;
  }

 private:
  FeatureIndex ngram_index_;
  bool use_z_ = true;
  ZConfig z_config_{};
  ZScoreTable z_table_;
};

struct PolarityModel {
  PolarityFeaturizer featurizer;
  std::array<std::vector<double>, 3> class_weights;  // canonical class order
  PolarityConfig config;
};

// One-vs-rest training over the featurized examples.
inline PolarityModel train_polarity(std::span<const PolarityExample> examples,
                                    const PolarityConfig& config = {}) {
  if (examples.empty()) throw Error("polarity: no training examples");
  std::array<long, 3> per_class{};
  for (const PolarityExample& ex : examples) {
    if (ex.context_tokens.empty())
      throw Error("polarity: example with empty context");
    per_class[static_cast<size_t>(polarity_class(ex.label))] += 1;
  }
  int present = 0;
  for (long c : per_class) present += c > 0 ? 1 : 0;
  if (present < 2)
    throw Error("polarity: training needs examples from at least 2 classes");

  PolarityModel model;
  model.config = config;
  model.featurizer = PolarityFeaturizer::fit(examples, config);
  std::vector<SparseVector> x;
  x.reserve(examples.size());
  for (const PolarityExample& ex : examples)
    x.push_back(model.featurizer.transform(ex));

  L1Options options;
  options.lambda = config.lambda();
  options.max_sweeps = config.max_sweeps;
  options.tolerance = config.tolerance;
  for (int c = 0; c < 3; ++c) {
    std::vector<int> y;
    y.reserve(examples.size());
    for (const PolarityExample& ex : examples)
      y.push_back(polarity_class(ex.label) == c ? 1 : -1);
    model.class_weights[static_cast<size_t>(c)] =
        train_l1_logistic(x, y, model.featurizer.dim(), options);
  }
  return model;
}

// Argmax of the per-class decision scores (ties to the earlier class in
// canonical order) plus sigmoid-normalized per-class probabilities.
inline std::pair<Polarity, std::array<double, 3>> predict_polarity(
    const PolarityModel& model, const PolarityExample& example) {
  SparseVector x = model.featurizer.transform(example);
  std::array<double, 3> scores{};
  for (size_t c = 0; c < 3; ++c)
    for (const auto& [j, value] : x)
      scores[c] += model.class_weights[c][static_cast<size_t>(j)] * value;
  int winner = 0;
  for (int c = 1; c < 3; ++c)
    if (scores[static_cast<size_t>(c)] > scores[static_cast<size_t>(winner)])
      winner = c;
  std::array<double, 3> probabilities;
  double total = 0.0;
  for (size_t c = 0; c < 3; ++c) {
    probabilities[c] = polarity_detail::sigmoid(scores[c]);
    total += probabilities[c];
  }
  for (double& p : probabilities) p /= total;
  return {kPolarityOrder[static_cast<size_t>(winner)], probabilities};
}

// Examples from an annotated corpus: one per opinion carrying a polarity;
// the context is the containing sentence, lowercased.
inline std::vector<PolarityExample> polarity_examples(const Corpus& corpus) {
  std::vector<PolarityExample> examples;
  for (const Review& review : corpus.reviews) {
    for (const Sentence& sentence : review.sentences) {
      if (sentence.tokens.empty()) continue;
      std::vector<std::string> context;
      context.reserve(sentence.tokens.size());
      for (const Token& t : sentence.tokens) context.push_back(to_lower(t.surface));
      for (const Opinion& op : sentence.opinions) {
        if (!op.polarity) continue;
        PolarityExample ex;
        ex.context_tokens = context;
        ex.target = op.target;
        ex.label = *op.polarity;
        examples.push_back(std::move(ex));
      }
    }
  }
  return examples;
}

// Tab-separated inspection dump: term, z_pos, z_neg, z_neu; sorted by term.
inline std::string z_table_tsv(const ZScoreTable& table) {
  std::map<std::string, std::array<double, 3>> sorted(table.scores.begin(),
                                                      table.scores.end());
  std::string out = "term\tz_pos\tz_neg\tz_neu\n";
  char buffer[64];
  for (const auto& [term, z] : sorted) {
    out += term;
    for (double value : z) {
      std::snprintf(buffer, sizeof(buffer), "\t%.6f", value);
      out += buffer;
    }
    out += '\n';
  }
  return out;
}

}  // namespace absa
