// Copyright 2026 The newsrep Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "newsrep/ingest.hpp"

namespace newsrep {

enum class FeatureMode { U, UT, T };

std::string to_string(FeatureMode m);
FeatureMode feature_mode_from_string(std::string_view s);

/// Column layout: user columns first, then word columns, each block sorted
/// by external id / token.
struct FeatureSpace {
  FeatureMode mode = FeatureMode::UT;
  std::map<std::string, std::uint32_t, std::less<>> user_index;
  std::map<std::string, std::uint32_t, std::less<>> word_index;

  std::size_t dimension() const { return user_index.size() + word_index.size(); }
};

/// Binary presence vector: strictly increasing column list, value 1 each.
struct SparseVector {
  std::vector<std::uint32_t> columns;
};

struct LRHyper {
  double l2_strength = 1.0;
  int max_iters = 1000;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

struct ClassWeights {
  double hoax = 1.0;
  double nonhoax = 1.0;

  double of(Label l) const { return l == Label::hoax ? hoax : nonhoax; }
};

/// weight_c = N / (2 N_c). Throws DataError unless both classes occur.
ClassWeights class_weights(std::span<const Label> labels);

/// Words of an item's title and description after removing mentions of the
/// item's own site and its aliases.
std::vector<std::string> item_words(const NewsItem& item, const AliasMap& aliases);

FeatureSpace build_feature_space(const Dataset& train, FeatureMode mode, const AliasMap& aliases = {});

/// Unknown users and tokens are dropped.
SparseVector featurize(const NewsItem& item, std::span<const std::string> sharers, const FeatureSpace& fs,
                       const AliasMap& aliases = {});

/// Weighted logistic problem: minimize
///   sum_i w_i * log(1 + exp(-y_i (x_i . beta + b))) + l2/2 * |beta|^2
/// with y = +1 for hoax. The bias is not regularized.
struct LogisticProblem {
  std::vector<SparseVector> rows;
  std::vector<Label> labels;
  std::vector<double> sample_weights;
  std::size_t dimension = 0;
  double l2 = 1.0;
};

/// Objective value; fills the gradient when the outputs are non-null.
double logistic_objective(const LogisticProblem& p, std::span<const double> weights, double bias,
                          std::vector<double>* grad_weights = nullptr, double* grad_bias = nullptr);

struct LogisticFit {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> loss_trace;  // objective after each accepted step, starting at the initial point
};

/// Full-batch L-BFGS with Armijo backtracking, started from zero. Converged
/// once both the largest parameter change of a step and the largest gradient
/// entry are below the tolerance; a failed line search ends the run
/// unconverged.
LogisticFit fit_logistic(const LogisticProblem& p, const LRHyper& hyper);

struct LRModel {
  FeatureSpace features;
  std::vector<double> weights;
  double bias = 0.0;
  LRHyper hyper;
  bool converged = false;
  int iterations = 0;
  std::vector<double> loss_trace;
};

/// Class-weighted training on a labeled dataset. Examples are ordered by
/// item id first, so the result does not depend on dataset order.
LRModel train_lr(const Dataset& train, FeatureMode mode, const LRHyper& hyper = {}, const AliasMap& aliases = {});

struct Prediction {
  double score = 0.5;  // P(hoax)
  Label label = Label::nonhoax;
};

double decision_value(const LRModel& model, const SparseVector& x);
Prediction predict_lr(const LRModel& model, const SparseVector& x);
Prediction predict_lr(const LRModel& model, const NewsItem& item, std::span<const std::string> sharers,
                      const AliasMap& aliases = {});

/// Writes `lr_model.json` (header), `lr_weights.f64` (little-endian doubles)
/// and `feature_space.tsv` (kind, key, column) into `dir`.
void save_lr_model(const LRModel& model, const std::filesystem::path& dir);
LRModel load_lr_model(const std::filesystem::path& dir);

}  // namespace newsrep
