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

#include "newsrep/harmonic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

namespace newsrep {
namespace {

// Recomputes dst[v] for v in [0, n) from the neighbors' current q values.
template <typename NeighborsFn>
void harmonic_half_step(std::size_t n, const std::vector<NodeBelief>& src, std::vector<NodeBelief>& dst, double c,
                        const std::vector<char>* clamped, NeighborsFn neighbors, unsigned threads) {
  std::vector<double> q(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) q[k] = src[k].q();
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      if (clamped && (*clamped)[v]) continue;
      double a = c, b = c;
      for (auto nb : neighbors(v)) {
        const double x = q[nb];
        if (x > 0)
          a += x;
        else if (x < 0)
          b -= x;
      }
      dst[v] = {a, b};
    }
  };
  if (threads <= 1 || n < 4096) {
    work(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(work, begin, std::min(n, begin + chunk));
}

}  // namespace

void HarmonicConfig::validate() const {
  if (!(c > 0)) throw UsageError("harmonic: c must be positive");
  if (iterations < 1) throw UsageError("harmonic: iterations must be >= 1");
  if (pos_factor < 1) throw UsageError("harmonic: pos_factor must be >= 1");
}

std::vector<std::string> subsample_positives(std::vector<std::string> candidates, std::size_t n_negatives, int factor,
                                             std::uint64_t seed, std::vector<std::string>* warnings) {
  if (factor < 1) throw UsageError("subsample factor must be >= 1");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const std::size_t want = static_cast<std::size_t>(factor) * n_negatives;
  if (candidates.size() <= want) {
    if (candidates.size() < want && warnings)
      warnings->push_back("positive subsampling wanted " + std::to_string(want) + " items but only " +
                          std::to_string(candidates.size()) + " candidates exist; using all of them");
    return candidates;
  }
  std::vector<std::string> out;
  out.reserve(want);
  std::mt19937_64 rng(seed);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(out), want, rng);
  return out;
}

HarmonicResult propagate(const ShareGraph& graph, const LabelSeed& seeds, const HarmonicConfig& cfg,
                         const HarmonicObserver& observer) {
  cfg.validate();
  for (const auto& id : seeds.fake)
    if (seeds.reliable.count(id)) throw UsageError("item '" + id + "' is seeded both fake and reliable");

  HarmonicResult r;
  r.items.assign(graph.item_count(), {cfg.c, cfg.c});
  r.users.assign(graph.user_count(), {cfg.c, cfg.c});
  std::vector<char> clamped(graph.item_count(), 0);
  for (const auto& id : seeds.fake) {
    const ItemIndex i = graph.item_index(id);
    r.items[i] = {0.0, 1.0};
    clamped[i] = 1;
  }
  for (const auto& id : seeds.reliable) {
    const ItemIndex i = graph.item_index(id);
    r.items[i] = {1.0, 0.0};
    clamped[i] = 1;
  }

  for (int it = 1; it <= cfg.iterations; ++it) {
    harmonic_half_step(graph.user_count(), r.items, r.users, cfg.c, nullptr,
                       [&](std::size_t u) { return graph.user_neighbors(static_cast<UserIndex>(u)); }, cfg.threads);
    if (observer) observer(it, HalfStep::users, r);
    // Items read user values only, so updating r.items in place is safe.
    harmonic_half_step(graph.item_count(), r.users, r.items, cfg.c, &clamped,
                       [&](std::size_t i) { return graph.item_neighbors(static_cast<ItemIndex>(i)); }, cfg.threads);
    if (observer) observer(it, HalfStep::items, r);
  }
  return r;
}

Label classify_harmonic(const HarmonicResult& beliefs, const ShareGraph& graph, std::string_view item_id) {
  return classify_q(beliefs.items.at(graph.item_index(item_id)).q());
}

void write_beliefs(const HarmonicResult& beliefs, const ShareGraph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto dump = [](const std::filesystem::path& path, auto count, auto id_of, const std::vector<NodeBelief>& b) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    char buf[96];
    for (std::size_t k = 0; k < count; ++k) {
      std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g\t%.17g\n", b[k].q(), b[k].alpha, b[k].beta);
      out << id_of(k) << buf;
    }
  };
  dump(dir / "q_items.tsv", graph.item_count(), [&](std::size_t k) { return graph.item(static_cast<ItemIndex>(k)).item_id; },
       beliefs.items);
  dump(dir / "q_users.tsv", graph.user_count(), [&](std::size_t k) { return graph.user(static_cast<UserIndex>(k)).user_id; },
       beliefs.users);
}

}  // namespace newsrep
