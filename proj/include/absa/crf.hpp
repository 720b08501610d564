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

// Linear-chain CRF over the IOB label set: maximum-likelihood training
// with L2 regularization through the quasi-Newton minimizer, log-space
// forward-backward, Viterbi decoding and posterior marginals.
//
// Parameters are packed as [num_features x 3] state weights followed by
// the [3 x 3] transition matrix (from-label major), label order O, B, I.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "absa/features.hpp"
#include "absa/lbfgs.hpp"

namespace absa {

struct TrainConfig {
  double l2_sigma = 1.0;       // regularizer ||w||^2 / (2 sigma^2)
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  uint64_t seed = 0;  // reserved; training is deterministic

  void validate() const {
    if (l2_sigma <= 0 || max_iterations <= 0 || gradient_tolerance <= 0)
      throw Error("train config: all parameters must be positive");
  }
};

struct TrainLog {
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective;  // value after each accepted iteration
};

struct CrfModel {
  FeatureIndex feature_index;
  std::vector<double> state_weights;              // [F * 3], f-major
  std::array<double, 9> transition_weights{};     // [from * 3 + to]

  size_t num_features() const { return feature_index.size(); }
  double state(int feature, int label) const {
    return state_weights[static_cast<size_t>(feature) * 3 +
                         static_cast<size_t>(label)];
  }
  double transition(int from, int to) const {
    return transition_weights[static_cast<size_t>(from) * 3 +
                              static_cast<size_t>(to)];
  }
};

namespace crf_detail {

inline double logsumexp3(double a, double b, double c) {
  double m = std::max(a, std::max(b, c));
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

// State log-potentials for one sequence under packed weights.
struct Lattice {
  std::vector<std::array<double, 3>> state;  // [T][3]
  const double* transitions;                 // [9]

  double transition(int from, int to) const {
    return transitions[from * 3 + to];
  }
};

inline Lattice build_lattice(const double* state_weights,
                             const double* transition_weights,
                             std::span<const std::vector<int>> features) {
  Lattice lattice;
  lattice.transitions = transition_weights;
  lattice.state.assign(features.size(), {0.0, 0.0, 0.0});
  for (size_t t = 0; t < features.size(); ++t)
    for (int f : features[t])
      for (int y = 0; y < 3; ++y)
        lattice.state[t][y] += state_weights[static_cast<size_t>(f) * 3 + y];
  return lattice;
}

struct ForwardBackward {
  std::vector<std::array<double, 3>> alpha;
  std::vector<std::array<double, 3>> beta;
  double log_z = 0.0;
};

inline ForwardBackward forward_backward(const Lattice& lattice) {
  const size_t T = lattice.state.size();
  ForwardBackward fb;
  fb.alpha.assign(T, {});
  fb.beta.assign(T, {});
  fb.alpha[0] = lattice.state[0];
  for (size_t t = 1; t < T; ++t)
    for (int y = 0; y < 3; ++y)
      fb.alpha[t][y] = lattice.state[t][y] +
                       logsumexp3(fb.alpha[t - 1][0] + lattice.transition(0, y),
                                  fb.alpha[t - 1][1] + lattice.transition(1, y),
                                  fb.alpha[t - 1][2] + lattice.transition(2, y));
  fb.log_z = logsumexp3(fb.alpha[T - 1][0], fb.alpha[T - 1][1],
                        fb.alpha[T - 1][2]);
  fb.beta[T - 1] = {0.0, 0.0, 0.0};
  for (size_t t = T - 1; t-- > 0;)
    for (int y = 0; y < 3; ++y)
      fb.beta[t][y] = logsumexp3(
          lattice.transition(y, 0) + lattice.state[t + 1][0] + fb.beta[t + 1][0],
          lattice.transition(y, 1) + lattice.state[t + 1][1] + fb.beta[t + 1][1],
          lattice.transition(y, 2) + lattice.state[t + 1][2] + fb.beta[t + 1][2]);
  return fb;
}

}  // namespace crf_detail

// Unnormalized log-score of a tag sequence: state weights of the active
// features at each position's tag plus transition weights between
// successive tags.
inline double score_sequence(const CrfModel& model,
                             std::span<const std::vector<int>> features,
                             std::span<const IobTag> tags) {
  if (features.size() != tags.size() || tags.empty())
    throw Error("score_sequence: feature/tag length mismatch");
  double score = 0.0;
  for (size_t t = 0; t < tags.size(); ++t) {
    int y = static_cast<int>(tags[t]);
    for (int f : features[t]) score += model.state(f, y);
    if (t > 0)
      score += model.transition(static_cast<int>(tags[t - 1]), y);
  }
  return score;
}

// Negative log-likelihood of the dataset plus the L2 term, and its
// gradient, under packed weights [F*3 state | 9 transition].
inline double crf_nll_and_gradient(const std::vector<double>& weights,
                                   std::span<const IndexedSequence> dataset,
                                   size_t num_features, double l2_sigma,
                                   std::vector<double>& grad) {
  const size_t state_size = num_features * 3;
  if (weights.size() != state_size + 9)
    throw Error("crf: weight vector has the wrong size");
  grad.assign(weights.size(), 0.0);
  const double* state_w = weights.data();
  const double* trans_w = weights.data() + state_size;

  double nll = 0.0;
  for (const IndexedSequence& seq : dataset) {
    const size_t T = seq.features.size();
    if (T == 0 || seq.labels.size() != T)
      throw Error("crf: sequence without labels");
    crf_detail::Lattice lattice =
        crf_detail::build_lattice(state_w, trans_w, seq.features);
    crf_detail::ForwardBackward fb = crf_detail::forward_backward(lattice);

    // gold score and empirical counts
    double gold = 0.0;
    for (size_t t = 0; t < T; ++t) {
      int y = static_cast<int>(seq.labels[t]);
      gold += lattice.state[t][y];
      for (int f : seq.features[t]) grad[static_cast<size_t>(f) * 3 + y] -= 1.0;
      if (t > 0) {
        int prev = static_cast<int>(seq.labels[t - 1]);
        gold += lattice.transition(prev, y);
        grad[state_size + static_cast<size_t>(prev) * 3 + y] -= 1.0;
      }
    }
    nll += fb.log_z - gold;

    // expected counts from posteriors
    for (size_t t = 0; t < T; ++t) {
      std::array<double, 3> marginal;
      for (int y = 0; y < 3; ++y)
        marginal[y] = std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
      for (int f : seq.features[t])
        for (int y = 0; y < 3; ++y)
          grad[static_cast<size_t>(f) * 3 + y] += marginal[y];
      if (t > 0) {
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            grad[state_size + static_cast<size_t>(i) * 3 + j] +=
                std::exp(fb.alpha[t - 1][i] + lattice.transition(i, j) +
                         lattice.state[t][j] + fb.beta[t][j] - fb.log_z);
      }
    }
    if (!std::isfinite(nll))
      throw Error("crf: non-finite objective");
  }

  const double inv_sigma2 = 1.0 / (l2_sigma * l2_sigma);
  for (size_t i = 0; i < weights.size(); ++i) {
    nll += 0.5 * weights[i] * weights[i] * inv_sigma2;
    grad[i] += weights[i] * inv_sigma2;
  }
  return nll;
}

// Maximum-likelihood training. Deterministic for identical inputs.
inline CrfModel train_crf(std::span<const IndexedSequence> dataset,
                          FeatureIndex index, const TrainConfig& config = {},
                          TrainLog* log = nullptr) {
  config.validate();
  if (dataset.empty()) throw Error("crf: empty training set");
  if (!index.frozen()) throw Error("crf: feature index must be frozen");
  const size_t state_size = index.size() * 3;

  LbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  LbfgsResult result = lbfgs_minimize(
      [&](const std::vector<double>& w, std::vector<double>& g) {
        return crf_nll_and_gradient(w, dataset, index.size(), config.l2_sigma,
                                    g);
      },
      std::vector<double>(state_size + 9, 0.0), options);

  if (log) {
    log->iterations = result.iterations;
    log->converged = result.converged;
    log->objective = result.objective_trace;
  }
  CrfModel model;
  model.feature_index = std::move(index);
  model.state_weights.assign(result.x.begin(),
                             result.x.begin() + static_cast<long>(state_size));
  for (size_t i = 0; i < 9; ++i)
    model.transition_weights[i] = result.x[state_size + i];
  return model;
}

// Highest-scoring tag sequence; score ties resolve toward the earlier
// label in the canonical order O < B < I at every backtrack step.
inline std::vector<IobTag> viterbi(const CrfModel& model,
                                   std::span<const std::vector<int>> features) {
  const size_t T = features.size();
  if (T == 0) return {};
  crf_detail::Lattice lattice = crf_detail::build_lattice(
      model.state_weights.data(), model.transition_weights.data(), features);

  std::vector<std::array<double, 3>> best(T);
  std::vector<std::array<int, 3>> back(T);
  best[0] = lattice.state[0];
  for (size_t t = 1; t < T; ++t) {
    for (int y = 0; y < 3; ++y) {
      double best_score = best[t - 1][0] + lattice.transition(0, y);
      int best_prev = 0;
      for (int prev = 1; prev < 3; ++prev) {
        double score = best[t - 1][prev] + lattice.transition(prev, y);
        if (score > best_score) {
          best_score = score;
          best_prev = prev;
        }
      }
      best[t][y] = lattice.state[t][y] + best_score;
      back[t][y] = best_prev;
    }
  }
  int label = 0;
  for (int y = 1; y < 3; ++y)
    if (best[T - 1][y] > best[T - 1][label]) label = y;
  std::vector<IobTag> tags(T);
  for (size_t t = T; t-- > 0;) {
    tags[t] = static_cast<IobTag>(label);
    if (t > 0) label = back[t][label];
  }
  return tags;
}

// Posterior label distribution per position; each row sums to 1.
inline std::vector<std::array<double, 3>> marginals(
    const CrfModel& model, std::span<const std::vector<int>> features) {
  const size_t T = features.size();
  if (T == 0) return {};
  crf_detail::Lattice lattice = crf_detail::build_lattice(
      model.state_weights.data(), model.transition_weights.data(), features);
  crf_detail::ForwardBackward fb = crf_detail::forward_backward(lattice);
  std::vector<std::array<double, 3>> result(T);
  for (size_t t = 0; t < T; ++t) {
    for (int y = 0; y < 3; ++y)
      result[t][y] = std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
    double sum = result[t][0] + result[t][1] + result[t][2];
    for (int y = 0; y < 3; ++y) result[t][y] /= sum;
  }
  return result;
}

// Log-partition of one sequence (exposed for the test oracles).
inline double log_partition(const CrfModel& model,
                            std::span<const std::vector<int>> features) {
  crf_detail::Lattice lattice = crf_detail::build_lattice(
      model.state_weights.data(), model.transition_weights.data(), features);
  return crf_detail::forward_backward(lattice).log_z;
}

}  // namespace absa
