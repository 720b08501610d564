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

// Limited-memory quasi-Newton minimizer (two-loop recursion, Armijo
// backtracking line search). Deterministic: no randomness anywhere.

#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "absa/corpus.hpp"  // Error

namespace absa {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;  // on ||g|| / max(1, ||x||)
  int max_linesearch = 50;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // value after each accepted step
};

class TrainingDivergence : public Error {
 public:
  explicit TrainingDivergence(const std::string& what) : Error(what) {}
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

// eval(x, grad) fills grad and returns the objective value.
inline LbfgsResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& eval,
    std::vector<double> x, const LbfgsOptions& options = {}) {
  const size_t n = x.size();
  std::vector<double> grad(n, 0.0);
  double value = eval(x, grad);

  LbfgsResult result;
  result.objective_trace.push_back(value);

  struct Correction {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Correction> history;

  std::vector<double> direction(n), x_new(n), grad_new(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double gnorm = detail::norm2(grad);
    if (gnorm / std::max(1.0, detail::norm2(x)) < options.gradient_tolerance) {
      result.converged = true;
      break;
    }

    // two-loop recursion
    direction = grad;
    std::vector<double> alphas(history.size());
    for (size_t h = history.size(); h-- > 0;) {
      const Correction& c = history[h];
      alphas[h] = c.rho * detail::dot(c.s, direction);
      for (size_t i = 0; i < n; ++i) direction[i] -= alphas[h] * c.y[i];
    }
    if (!history.empty()) {
      const Correction& last = history.back();
      double gamma = detail::dot(last.s, last.y) / detail::dot(last.y, last.y);
      for (double& d : direction) d *= gamma;
    }
    for (size_t h = 0; h < history.size(); ++h) {
      const Correction& c = history[h];
      double beta = c.rho * detail::dot(c.y, direction);
      for (size_t i = 0; i < n; ++i) direction[i] += c.s[i] * (alphas[h] - beta);
    }
    for (double& d : direction) d = -d;

    double dg = detail::dot(direction, grad);
    if (dg >= 0.0) {  // not a descent direction; restart from steepest descent
      history.clear();
      for (size_t i = 0; i < n; ++i) direction[i] = -grad[i];
      dg = -gnorm * gnorm;
    }

    double step = history.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    bool accepted = false;
    double value_new = value;
    for (int ls = 0; ls < options.max_linesearch; ++ls) {
      for (size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * direction[i];
      value_new = eval(x_new, grad_new);
      if (std::isfinite(value_new) &&
          value_new <= value + options.armijo_c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= options.backtrack;
    }
    if (!accepted) {
      // at a flat spot the line search cannot improve: accept convergence
      if (gnorm / std::max(1.0, detail::norm2(x)) <
          std::sqrt(options.gradient_tolerance)) {
        result.converged = true;
        break;
      }
      std::string trace = "objective trace:";
      for (double v : result.objective_trace) trace += " " + std::to_string(v);
      throw TrainingDivergence(
          "line search failed to find a decrease at iteration " +
          std::to_string(iter) + "; " + trace);
    }

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = grad_new[i] - grad[i];
    }
    double sy = detail::dot(c.s, c.y);
    if (sy > 1e-12) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (history.size() > static_cast<size_t>(options.memory))
        history.pop_front();
    }

    x.swap(x_new);
    grad.swap(grad_new);
    value = value_new;
    result.objective_trace.push_back(value);
    result.iterations = iter + 1;
  }

  result.x = std::move(x);
  result.value = value;
  return result;
}

}  // namespace absa
