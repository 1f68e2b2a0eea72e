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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "newsrep/common.hpp"
#include "newsrep/sharegraph.hpp"

namespace newsrep {

// ---------------------------------------------------------------------------
// URLs and sites

struct CanonicalizeOptions {
  /// Query parameters removed during normalization. A trailing `*` matches
  /// any parameter name with that prefix.
  std::vector<std::string> strip_params{"utm_*", "fbclid", "gclid"};
};

/// Lowercases scheme and host, drops the fragment and the configured
/// tracking parameters, and removes trailing slashes from the path.
/// Throws DataError for strings that are not absolute `scheme://host` URLs.
std::string normalize_url(std::string_view url, const CanonicalizeOptions& opts = {});

/// Host part of an absolute URL (lowercased, port and brackets removed).
std::string url_host(std::string_view url);

/// Public suffix rules in the publicsuffix.org file syntax: one rule per
/// line, `//` comments, `*.` wildcards and `!` exceptions.
class PublicSuffixList {
 public:
  static PublicSuffixList from_text(std::string_view text);
  static PublicSuffixList from_file(const std::filesystem::path& path);
  /// Compact built-in rule set covering common gTLDs, the usual two-level
  /// ccTLD registries (co.uk, com.au, ...) and a few hosting suffixes such
  /// as blogspot.com and github.io.
  static const PublicSuffixList& builtin();

  /// Public suffix of a lowercase host name (`*` applies when nothing matches).
  std::string public_suffix(std::string_view host) const;
  /// Registered domain: public suffix plus one label. A host that is itself
  /// a public suffix, or an IP literal, is returned unchanged.
  std::string registered_domain(std::string_view host) const;

 private:
  std::set<std::string, std::less<>> rules_;
  std::set<std::string, std::less<>> wildcards_;   // "ck" for "*.ck"
  std::set<std::string, std::less<>> exceptions_;  // "www.ck" for "!www.ck"
};

bool is_ip_literal(std::string_view host);

/// Registered domain of the URL's host.
std::string extract_site(std::string_view canonical_url,
                         const PublicSuffixList& psl = PublicSuffixList::builtin());

// ---------------------------------------------------------------------------
// Text

/// Lowercased words split at every code point that is not a letter, digit or
/// combining mark; tokens shorter than two code points are dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Removes, case-insensitively and as whole words, the site string (bare or
/// as a URL), its registrable name without the public suffix, and every
/// alias (aliases may span several words). Whitespace is collapsed.
std::string scrub_site_mentions(std::string_view text, std::string_view site,
                                const std::vector<std::string>& aliases);

using AliasMap = std::map<std::string, std::vector<std::string>, std::less<>>;

/// JSON object mapping site -> list of alias strings.
AliasMap load_aliases(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Records

struct RawRecord {
  std::string tweet_id;
  std::string user_id;
  std::string username;
  Timestamp timestamp{};
  std::string raw_url;
  std::optional<std::string> og_url;
  std::optional<std::string> og_title;
  std::optional<std::string> og_description;
};

/// Parses one JSON-lines record. Throws DataError naming the problem.
RawRecord parse_record(std::string_view json_line);
nlohmann::json record_to_json(const RawRecord& r);

/// og:url wins when present and parseable, otherwise the raw URL; either is
/// passed through normalize_url so the result is idempotent.
std::string canonicalize(const RawRecord& record, const CanonicalizeOptions& opts = {});

struct Rejection {
  std::size_t line;
  std::string reason;
};

struct IngestResult {
  ShareGraph graph;  // frozen
  std::size_t records = 0;
  std::vector<Rejection> rejections;
};

/// Builds the share graph from JSON-lines records. Item ids are canonical
/// URLs; each item takes its title and description from its earliest record
/// carrying them and its first_seen date from its earliest tweet. Bad lines
/// are counted as rejections rather than aborting the load.
IngestResult ingest_records(std::istream& in, const CanonicalizeOptions& opts = {},
                            const PublicSuffixList& psl = PublicSuffixList::builtin());
IngestResult ingest_records(const std::filesystem::path& path, const CanonicalizeOptions& opts = {},
                            const PublicSuffixList& psl = PublicSuffixList::builtin());

// ---------------------------------------------------------------------------
// Ground truth

struct GroundTruth {
  std::string name;
  std::set<std::string, std::less<>> sites;

  bool contains(std::string_view site) const { return sites.find(site) != sites.end(); }
};

/// Loads a `site,type` CSV (further columns are read as extra types, a
/// `site` header row is skipped). With a filter, only rows with at least one
/// matching type are kept. Sites are normalized to registered domains.
GroundTruth load_ground_truth(const std::filesystem::path& path,
                              const std::optional<std::set<std::string>>& type_filter = std::nullopt,
                              std::string name = {});
GroundTruth parse_ground_truth(std::istream& in, const std::optional<std::set<std::string>>& type_filter,
                               std::string name);

/// Sites present in both lists.
std::set<std::string> overlap(const GroundTruth& a, const GroundTruth& b);

// ---------------------------------------------------------------------------
// Splits

enum class Label { nonhoax = 0, hoax = 1 };

struct SplitSpec {
  std::string name = "split";
  Date start{};
  Date end{};
  std::optional<Timestamp> tweet_cutoff;
  int day_stride = 1;
  int day_offset = 0;
  std::vector<Date> explicit_days;
  int min_shares = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static SplitSpec from_json(const nlohmann::json& j);
};

/// A labeled slice of the share graph.
struct Dataset {
  std::string name;
  SplitSpec spec;
  ShareGraph graph;           // restricted to the slice, frozen
  std::vector<Label> labels;  // indexed by ItemIndex of `graph`
  std::vector<std::string> warnings;

  std::size_t count(Label l) const;
  nlohmann::json manifest() const;
};

/// Keeps items first seen inside [start, end] on a selected day (explicit
/// list, or every `day_stride`-th day counted from start + offset), keeps
/// only tweets strictly before the cutoff, drops items left with fewer than
/// `min_shares` distinct sharers, and labels by site membership in `gt`.
Dataset build_split(const ShareGraph& graph, const SplitSpec& spec, const GroundTruth& gt);

/// Labels every item of `graph` by ground-truth membership of its site.
std::vector<Label> label_items(const ShareGraph& graph, const GroundTruth& gt);

}  // namespace newsrep
