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

// Small constructed inputs shared by the unit tests and the acceptance run.

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "newsrep/lrmodel.hpp"
#include "newsrep/sharegraph.hpp"
#include "newsrep/topicmodel.hpp"
#include "oracles/lr_oracle.hpp"
#include "test_support.hpp"

namespace newsrep::testing {

/// One user sharing i1 and i2 (and i3 when asked).
inline ShareGraph two_item_graph(bool second_fake_item = false) {
  ShareGraph g;
  const Timestamp t{std::chrono::seconds{0}};
  auto item = [](const std::string& id) { return NewsItem{id, "https://s.com/" + id, "s.com", "", "", Date{}}; };
  g.add_share(item("i1"), {"u", "u"}, t);
  g.add_share(item("i2"), {"u", "u"}, t);
  if (second_fake_item) g.add_share(item("i3"), {"u", "u"}, t);
  g.freeze();
  return g;
}

// Random sparse problem plus its dense twin for the oracle.
struct RandomLrInstance {
  LogisticProblem sparse;
  std::vector<oracle::DenseExample> dense;
};

inline RandomLrInstance random_lr_instance(std::mt19937_64& rng, std::size_t dim, std::size_t rows, double l2) {
  RandomLrInstance r;
  r.sparse.dimension = dim;
  r.sparse.l2 = l2;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    SparseVector v;
    oracle::DenseExample ex{std::vector<double>(dim, 0.0), unit(rng) < 0.3, 0.2 + 2 * unit(rng)};
    for (std::uint32_t c = 0; c < dim; ++c)
      if (unit(rng) < 0.4) {
        v.columns.push_back(c);
        ex.x[c] = 1.0;
      }
    r.sparse.rows.push_back(v);
    r.sparse.labels.push_back(ex.hoax ? Label::hoax : Label::nonhoax);
    r.sparse.sample_weights.push_back(ex.weight);
    r.dense.push_back(std::move(ex));
  }
  return r;
}

// Documents drawn from one of two disjoint user communities ("a*" / "b*").
inline Dataset planted_partition(std::uint64_t seed, int docs = 200, int community = 30) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(5, 10), member(0, community - 1);
  std::vector<ItemSpec> specs;
  for (int d = 0; d < docs; ++d) {
    const char side = d % 2 ? 'a' : 'b';
    ItemSpec s{"doc" + std::to_string(d), "x.com", "", {}, d % 2 ? Label::hoax : Label::nonhoax};
    std::set<int> picked;
    const int n = std::min(len(rng), community);
    while (static_cast<int>(picked.size()) < n) picked.insert(member(rng));
    for (int m : picked) s.users.push_back(std::string(1, side) + std::to_string(m));
    specs.push_back(std::move(s));
  }
  return make_dataset(specs);
}

/// Fraction of a topic's top-n tokens that come from its majority
/// community, and which community that is.
struct TopicPurity {
  double purity = 0;
  char owner = '?';
};

inline std::vector<std::uint32_t> top_tokens(const TopicModel& m, int k, std::size_t n) {
  std::vector<std::uint32_t> idx(m.vocab_size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return m.phi(k, a) > m.phi(k, b); });
  idx.resize(std::min(n, idx.size()));
  return idx;
}

inline TopicPurity topic_purity(const TopicModel& m, int k, std::size_t n = 20) {
  const auto top = top_tokens(m, k, n);
  std::size_t a = 0;
  for (auto w : top) a += m.vocabulary[w][0] == 'a';
  return {std::max(a, top.size() - a) / static_cast<double>(top.size()), a * 2 > top.size() ? 'a' : 'b'};
}

}  // namespace newsrep::testing
