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

// Glue between the modules: snapshots on disk, named splits, method runs and
// their reports.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "newsrep/eval.hpp"
#include "newsrep/harmonic.hpp"
#include "newsrep/ingest.hpp"
#include "newsrep/lrmodel.hpp"
#include "newsrep/topicmodel.hpp"

namespace newsrep {

enum class Method { lr_u, lr_ut, lr_t, topics, harmonic };
std::string to_string(Method m);
/// Throws UsageError for names outside lr-u, lr-ut, lr-t, topics, harmonic.
Method method_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Snapshots

struct IngestSummary {
  std::size_t records = 0;
  std::size_t items = 0;
  std::size_t users = 0;
  std::size_t edges = 0;
  std::vector<Rejection> rejections;

  nlohmann::json to_json() const;
};

/// Ingests a records file into a snapshot directory (graph files plus
/// manifest.json). Throws DataError when no record is usable.
IngestSummary ingest_to_snapshot(const std::filesystem::path& records, const std::filesystem::path& snapshot,
                                 const CanonicalizeOptions& opts = {});

/// Splits live at <snapshot>/splits/<name>.json.
void save_split(const std::filesystem::path& snapshot, const SplitSpec& spec);
SplitSpec load_split(const std::filesystem::path& snapshot, std::string_view name);

// ---------------------------------------------------------------------------
// Runs

struct RunConfig {
  Method method = Method::harmonic;
  LRHyper lr;
  HarmonicConfig harmonic;
  LdaConfig lda;
  NNHyper nn;
  int min_count = 5;
  std::size_t site_min_urls = 20;
  double cross_threshold_pct = 5.0;
  std::size_t cross_min_urls = 20;

  /// Sets every component seed.
  void set_seed(std::uint64_t seed);
  nlohmann::json to_json() const;
};

struct RunInputs {
  const ShareGraph* graph = nullptr;  // everything ingested; harmonic propagates over it
  const Dataset* train = nullptr;
  const Dataset* test = nullptr;
  const GroundTruth* gt = nullptr;
  const GroundTruth* gt2 = nullptr;  // optional second list
  const AliasMap* aliases = nullptr;  // optional
};

struct RunOutput {
  std::vector<ScoredItem> scored;  // one per test item, in test item order
  std::optional<LRModel> lr;
  std::optional<TopicModel> topics;
  std::optional<NNModel> nn;
  std::optional<HarmonicResult> beliefs;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> warnings;
};

RunOutput run_method(const RunInputs& in, const RunConfig& cfg);

/// Slices at 1/2/5/10 shares, the per-site table, and the cross list block
/// when a second list is given and the test set has items only it lists.
EvalReport evaluate_run(const RunOutput& out, const RunInputs& in, const RunConfig& cfg);

/// report.json, report.txt, per_site.csv, predictions.tsv and the method's
/// model or belief files under `dir`.
void write_run(const std::filesystem::path& dir, const EvalReport& report, const RunOutput& out,
               const RunInputs& in);

}  // namespace newsrep
