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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "newsrep/ingest.hpp"
#include "newsrep/lrmodel.hpp"

namespace newsrep {

// ---------------------------------------------------------------------------
// Corpus: one document per item, its sharing users as words.

struct Document {
  std::string item_id;
  std::vector<std::uint32_t> tokens;  // vocabulary indices, one per tweet
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> vocabulary;  // index -> user id, sorted
  std::map<std::string, std::uint32_t, std::less<>> index;
  int min_count = 5;
  std::vector<std::string> dropped_items;  // emptied by the min_count filter

  std::size_t token_count() const;
};

/// Union of the datasets' items (first occurrence of an item id wins). A user
/// contributes one token per tweet; users with fewer than `min_count` tokens
/// overall are removed, and documents left empty are dropped and listed.
Corpus build_corpus(std::span<const Dataset* const> datasets, int min_count = 5);

/// In-vocabulary token bags for every item of `ds`, indexed by ItemIndex.
/// Unknown users are skipped, so a bag may be empty.
std::vector<std::vector<std::uint32_t>> document_bags(const Dataset& ds, const Corpus& corpus);

// ---------------------------------------------------------------------------
// LDA

struct LdaConfig {
  int topics = 100;
  /// Document-topic prior; a non-positive value means 50 / topics.
  double alpha = 0.0;
  double eta = 0.01;
  int gibbs_iters = 200;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha > 0 ? alpha : 50.0 / topics; }
};

struct TopicModel {
  int topics = 0;
  double alpha = 0.0;
  double eta = 0.0;
  int gibbs_iters = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocabulary;
  std::vector<double> topic_word;  // topics x vocabulary, row-major, rows sum to 1

  std::size_t vocab_size() const { return vocabulary.size(); }
  double phi(int k, std::uint32_t w) const { return topic_word[static_cast<std::size_t>(k) * vocab_size() + w]; }
};

using TopicVector = std::vector<double>;

/// Collapsed Gibbs sampler state. Exposed so callers can observe sweeps.
class GibbsSampler {
 public:
  GibbsSampler(const Corpus& corpus, const LdaConfig& cfg);

  void sweep();
  int sweeps() const { return sweeps_; }
  /// Sum of the per-topic totals; equals the corpus token count.
  std::size_t assigned_tokens() const;
  /// Sum of the document-topic counts.
  std::size_t document_topic_total() const;
  TopicModel model() const;

 private:
  const Corpus& corpus_;
  LdaConfig cfg_;
  double alpha_;
  std::size_t vocab_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> assignment_;  // per document, per token
  std::vector<std::int64_t> doc_topic_;       // documents x topics
  std::vector<std::int64_t> topic_word_;      // topics x vocabulary
  std::vector<std::int64_t> topic_total_;
  std::vector<double> weights_;
  int sweeps_ = 0;
};

/// Runs `gibbs_iters` sweeps. Throws UsageError for topics < 2 and DataError
/// for an empty corpus or more topics than vocabulary entries.
TopicModel fit_lda(const Corpus& corpus, const LdaConfig& cfg,
                   const std::function<void(const GibbsSampler&)>& after_sweep = {});

/// Fold-in Gibbs inference with topic_word held fixed: assignment counts are
/// averaged over the sweeps after burn-in and smoothed by alpha. An empty or
/// fully out-of-vocabulary document gets the uniform vector.
TopicVector infer_topics(const TopicModel& model, std::span<const std::uint32_t> bag, std::uint64_t seed,
                         int iters = 50, int burn_in = 10);

void save_topic_model(const TopicModel& model, const std::filesystem::path& dir);
TopicModel load_topic_model(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// One-hidden-layer classifier over topic vectors

struct NNHyper {
  int hidden = 100;
  int epochs = 50;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  /// Inverse class-size weights are computed from the labels when unset.
  std::optional<ClassWeights> class_weights;
};

struct NNModel {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
  NNHyper hyper;
};

struct NNGradient {
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;
};

/// He-initialized hidden layer, zero biases, small output weights.
NNModel init_nn(std::size_t inputs, const NNHyper& hyper);

/// ReLU hidden layer then sigmoid output: returns the output logit.
double nn_logit(const NNModel& model, std::span<const double> x);

/// Weighted binary cross-entropy averaged by total sample weight; fills the
/// gradient when non-null.
double nn_loss(const NNModel& model, std::span<const std::vector<double>> xs, std::span<const Label> labels,
               std::span<const double> sample_weights, NNGradient* grad = nullptr);

struct NNTrainResult {
  NNModel model;
  std::vector<double> loss_trace;  // full-data loss after each epoch
};

/// Adam on seeded shuffled mini-batches for a fixed number of epochs.
/// Throws DataError if the loss turns NaN.
NNTrainResult train_nn(std::span<const std::vector<double>> xs, std::span<const Label> labels, const NNHyper& hyper);

/// Throws UsageError when the vector length differs from the model input size.
Prediction predict_nn(const NNModel& model, std::span<const double> x);

/// `nn.json` (shape manifest) plus `nn_params.f64` (w1, b1, w2, b2 in order).
void save_nn(const NNModel& model, const std::filesystem::path& dir);
NNModel load_nn(const std::filesystem::path& dir);

}  // namespace newsrep
