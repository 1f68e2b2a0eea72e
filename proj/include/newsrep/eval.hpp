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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "newsrep/ingest.hpp"
#include "newsrep/sharegraph.hpp"

namespace newsrep {

/// One evaluated item: ground truth next to the method's output.
struct ScoredItem {
  std::string item_id;
  std::string site;
  std::size_t share_count = 0;
  Label truth = Label::nonhoax;
  Label predicted = Label::nonhoax;
  double score = 0.0;
};

struct Confusion {
  std::size_t tp = 0;  // hoax predicted hoax
  std::size_t fn = 0;  // hoax predicted nonhoax
  std::size_t fp = 0;  // nonhoax predicted hoax
  std::size_t tn = 0;  // nonhoax predicted nonhoax

  std::size_t total() const { return tp + fn + fp + tn; }
  void add(Label truth, Label predicted);
};

/// Percentages in [0, 100]; nullopt when the denominator is zero.
struct Metrics {
  std::size_t min_shares = 1;
  Confusion counts;
  std::optional<double> hoax_recall;
  std::optional<double> nonhoax_recall;
  std::optional<double> hoax_precision;
};

std::optional<double> percent(std::size_t num, std::size_t den);
Metrics metrics_from(const Confusion& c, std::size_t min_shares = 1);

/// Restricted to items with share_count >= min_shares.
Metrics score_metrics(std::span<const ScoredItem> items, std::size_t min_shares = 1);

inline constexpr std::size_t kDefaultSlices[] = {1, 2, 5, 10};
std::vector<Metrics> score_slices(std::span<const ScoredItem> items,
                                  std::span<const std::size_t> thresholds = kDefaultSlices);

struct SiteRow {
  std::string site;
  std::size_t n_urls = 0;
  std::size_t flagged = 0;
  double pct = 0.0;
};

/// Sites with at least `min_urls` items, by item count descending, then name.
std::vector<SiteRow> per_site_table(std::span<const ScoredItem> items, std::size_t min_urls = 1);

struct CrossGtResult {
  std::size_t items = 0;  // items whose site is listed only in the other list
  std::size_t flagged_items = 0;
  std::optional<double> direct_url_pct;
  std::size_t qualifying_sites = 0;  // other-only sites with >= min_urls items
  std::size_t detected_sites = 0;
  std::optional<double> site_detect_pct;
  std::size_t items_in_detected_sites = 0;
  std::optional<double> suspicious_url_pct;
  std::vector<SiteRow> sites;  // qualifying sites
  std::vector<std::string> detected;
  double site_threshold_pct = 5.0;
  std::size_t min_urls = 20;
};

/// How well a method trained on `train_gt` flags items of sites that only
/// `other_gt` lists. A site counts as detected when its flagged share
/// strictly exceeds the threshold. Throws DataError when no item comes from
/// an other-only site.
CrossGtResult cross_gt_detect(const GroundTruth& train_gt, const GroundTruth& other_gt,
                              std::span<const ScoredItem> items, double site_threshold_pct = 5.0,
                              std::size_t min_urls = 20);

/// Cosine similarity of the per-user tweet-count vectors of two sites.
/// Throws NotFound for a site with no items in the graph.
double site_correlation(const ShareGraph& graph, std::string_view site_a, std::string_view site_b);

/// Symmetric matrix over `sites`, computed in one pass over the edges.
std::vector<std::vector<double>> site_correlation_matrix(const ShareGraph& graph, std::span<const std::string> sites);

struct EvalReport {
  std::string method;
  std::string dataset;
  nlohmann::json config;
  std::vector<Metrics> slices;
  std::vector<SiteRow> per_site;
  std::optional<CrossGtResult> cross_gt;
};

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const CrossGtResult& r);
nlohmann::json to_json(const EvalReport& r);
std::string to_text(const EvalReport& r);
/// Columns: site, method, gt, pct, n_urls, flagged.
std::string per_site_csv(std::span<const SiteRow> rows, std::string_view method, std::string_view gt);

}  // namespace newsrep
