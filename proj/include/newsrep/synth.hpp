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
#include <string>
#include <vector>

#include "json.hpp"

#include "newsrep/common.hpp"
#include "newsrep/ingest.hpp"
#include "newsrep/sharegraph.hpp"

namespace newsrep {

struct SynthConfig {
  int n_sites_good = 40;
  int n_sites_bad = 12;
  int n_hidden_bad = 6;  // bad sites left out of the primary list
  int n_users = 5000;
  int items_good_min = 300;
  int items_good_max = 500;
  int items_bad_min = 180;
  int items_bad_max = 260;

  double hoax_prone_fraction = 0.12;
  double p_bad = 0.8;              // fraction of bad-item tweets made by hoax-prone users
  double p_good_from_prone = 0.01;  // fraction of good-item tweets made by hoax-prone users
  double activity_exponent = 1.0;   // Zipf exponent of user activity within a pool

  double share_exponent = 2.0;  // P(k distinct sharers) ~ k^-exponent
  int max_shares = 300;
  double repeat_tweet_prob = 0.03;
  double mean_delay_hours = 18.0;

  int vocab_common = 400;
  int vocab_class = 120;
  int title_words_min = 6;
  int title_words_max = 12;
  double class_word_prob = 0.25;
  double site_mention_prob = 0.15;
  double og_url_prob = 0.8;

  Date start = parse_date("2017-09-01");
  Date end = parse_date("2017-11-26");
  std::uint64_t seed = 1;

  /// Throws UsageError for out-of-range values or an infeasible mix.
  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults.
  static SynthConfig from_json(const nlohmann::json& j);
};

enum class SiteKind { good, bad, hidden_bad };
std::string to_string(SiteKind k);

struct SynthSite {
  std::string domain;
  SiteKind kind = SiteKind::good;
  std::string display_name;
};

struct SynthCorpus {
  SynthConfig config;
  std::vector<SynthSite> sites;
  std::vector<RawRecord> records;  // ordered by timestamp
  GroundTruth primary;             // listed bad sites
  GroundTruth secondary;           // all bad sites
  AliasMap aliases;
  std::vector<std::string> hoax_prone_users;  // sorted
  ShareGraph graph;                            // the records run through ingest

  SiteKind kind_of(std::string_view site) const;
};

SynthCorpus generate(const SynthConfig& cfg);

/// Writes records.jsonl, gt_primary.csv, gt_secondary.csv, aliases.json and
/// synth_manifest.json into `dir`.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace newsrep
