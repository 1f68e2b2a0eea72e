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
#include <set>
#include <string>
#include <vector>

#include "newsrep/ingest.hpp"
#include "newsrep/sharegraph.hpp"

namespace newsrep {

/// Beta-distribution parameters of a node; q in [-1, 1] is its reputation.
struct NodeBelief {
  double alpha = 0.0;
  double beta = 0.0;

  double q() const { return (alpha - beta) / (alpha + beta); }
};

struct HarmonicConfig {
  double c = 0.02;
  int iterations = 4;
  int pos_factor = 1;
  std::uint64_t seed = 0;
  /// Worker threads per half-step. The result does not depend on it.
  unsigned threads = 1;

  void validate() const;
};

/// Item ids known to be fake (I_F) and reliable (I_N).
struct LabelSeed {
  std::set<std::string> fake;
  std::set<std::string> reliable;
};

struct HarmonicResult {
  std::vector<NodeBelief> items;  // by ItemIndex
  std::vector<NodeBelief> users;  // by UserIndex
};

enum class HalfStep { users, items };

/// Called after every half-step with the 1-based iteration number.
using HarmonicObserver = std::function<void(int iteration, HalfStep step, const HarmonicResult& state)>;

/// Uniform seeded sample of factor * n_negatives ids. When there are too few
/// candidates all of them are returned and a warning is appended.
std::vector<std::string> subsample_positives(std::vector<std::string> candidates, std::size_t n_negatives, int factor,
                                             std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

/// Harmonic label propagation. Seed items start at q = -1 (fake) or +1
/// (reliable), every other item at q = 0 (alpha = beta = c). Each iteration
/// recomputes all users from the current item values, then all non-seed
/// items from the new user values:
///   alpha_v = c + sum of positive neighbor q,  beta_v = c - sum of negative neighbor q.
/// Seed items keep their values and keep contributing them to their users.
HarmonicResult propagate(const ShareGraph& graph, const LabelSeed& seeds, const HarmonicConfig& cfg,
                         const HarmonicObserver& observer = {});

/// Fake iff q < 0.
Label classify_harmonic(const HarmonicResult& beliefs, const ShareGraph& graph, std::string_view item_id);
inline Label classify_q(double q) { return q < 0 ? Label::hoax : Label::nonhoax; }

/// `q_items.tsv` and `q_users.tsv`: id, q, alpha, beta per line.
void write_beliefs(const HarmonicResult& beliefs, const ShareGraph& graph, const std::filesystem::path& dir);

}  // namespace newsrep
