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

// Naive reference for harmonic propagation: string-keyed maps, neighborhoods
// recomputed by scanning the whole share list, no dense indices.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace newsrep::oracle {

struct HarmonicOracleResult {
  std::map<std::string, double> item_q;
  std::map<std::string, double> user_q;
};

inline HarmonicOracleResult naive_harmonic(const std::vector<std::string>& items, const std::vector<std::string>& users,
                                           const std::vector<std::pair<std::string, std::string>>& shares,
                                           const std::set<std::string>& fake, const std::set<std::string>& reliable,
                                           double c, int iterations) {
  const std::set<std::pair<std::string, std::string>> T(shares.begin(), shares.end());
  HarmonicOracleResult r;
  for (const auto& i : items) r.item_q[i] = fake.count(i) ? -1.0 : reliable.count(i) ? 1.0 : 0.0;
  for (const auto& u : users) r.user_q[u] = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::map<std::string, double> new_user;
    for (const auto& u : users) {
      double alpha = c, beta = c;
      for (const auto& [i, v] : T) {
        if (v != u) continue;
        if (r.item_q[i] > 0) alpha += r.item_q[i];
        if (r.item_q[i] < 0) beta -= r.item_q[i];
      }
      new_user[u] = (alpha - beta) / (alpha + beta);
    }
    r.user_q = new_user;
    std::map<std::string, double> new_item = r.item_q;
    for (const auto& i : items) {
      if (fake.count(i) || reliable.count(i)) continue;
      double alpha = c, beta = c;
      for (const auto& [j, u] : T) {
        if (j != i) continue;
        if (r.user_q[u] > 0) alpha += r.user_q[u];
        if (r.user_q[u] < 0) beta -= r.user_q[u];
      }
      new_item[i] = (alpha - beta) / (alpha + beta);
    }
    r.item_q = new_item;
  }
  return r;
}

}  // namespace newsrep::oracle
