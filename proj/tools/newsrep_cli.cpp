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

// newsrep command-line front end. Talks to the library only through the
// C API in newsrep/newsrep.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "newsrep/newsrep.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int exit_code(nr_status s) {
  switch (s) {
    case NR_OK: return 0;
    case NR_ERR_USAGE:
    case NR_ERR_NOT_FOUND: return kExitUsage;
    default: return kExitData;
  }
}

int report_failure(const char* cmd, nr_status s) {
  std::cerr << "newsrep " << cmd << ": " << nr_status_name(s) << ": " << nr_last_error() << "\n";
  return exit_code(s);
}

// Owns a string handed out by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { nr_free_string(p); }
  json parse() const { return p ? json::parse(p) : json(); }
};

struct Snapshot {
  nr_snapshot* h = nullptr;
  ~Snapshot() { nr_snapshot_close(h); }
};

struct IngestArgs {
  std::string records, out, strip;
  bool strip_set = false;
};

struct SplitArgs {
  std::string snapshot, name, start, end, cutoff, gt;
  std::vector<std::string> days;
  int day_stride = 1, day_offset = 0, min_shares = 1;
};

struct RunArgs {
  std::string snapshot, method, split, test_split, gt, gt2, aliases, out;
  std::optional<int> min_shares, iters, topics_k, gibbs_iters, min_count, epochs, site_min_urls;
  std::optional<double> c, pos_factor, l2;
  std::optional<std::uint64_t> seed;
};

struct CorrelateArgs {
  std::string snapshot, out;
  std::vector<std::string> sites;
};

struct SynthArgs {
  std::string out, config;
  std::optional<std::uint64_t> seed;
  std::optional<int> users;
};

int cmd_ingest(const IngestArgs& a) {
  LibString summary;
  const nr_status s =
      nr_ingest(a.records.c_str(), a.out.c_str(), a.strip_set ? a.strip.c_str() : nullptr, &summary.p);
  if (s != NR_OK) return report_failure("ingest", s);
  const json j = summary.parse();
  std::cout << j.dump(2) << "\n";
  const auto rejected = j.value("rejected", std::size_t{0});
  if (rejected > 0) std::cerr << "warning: " << rejected << " record(s) rejected, see manifest.json\n";
  return 0;
}

int cmd_split(const SplitArgs& a) {
  json spec = {{"name", a.name},
               {"start", a.start},
               {"end", a.end},
               {"day_stride", a.day_stride},
               {"day_offset", a.day_offset},
               {"min_shares", a.min_shares},
               {"explicit_days", a.days}};
  if (!a.cutoff.empty()) spec["tweet_cutoff"] = a.cutoff;

  Snapshot snap;
  nr_status s = nr_snapshot_open(a.snapshot.c_str(), &snap.h);
  if (s != NR_OK) return report_failure("split", s);
  LibString summary;
  s = nr_split_save(snap.h, spec.dump().c_str(), a.gt.empty() ? nullptr : a.gt.c_str(), &summary.p);
  if (s != NR_OK) return report_failure("split", s);
  std::cout << summary.parse().dump(2) << "\n";
  return 0;
}

int cmd_run(const RunArgs& a) {
  json req = {{"method", a.method}, {"split", a.split}, {"test_split", a.test_split}, {"gt", a.gt}};
  if (!a.gt2.empty()) req["gt2"] = a.gt2;
  if (!a.aliases.empty()) req["aliases"] = a.aliases;
  auto put = [&](const char* key, const auto& opt) {
    if (opt) req[key] = *opt;
  };
  put("min_shares", a.min_shares);
  put("seed", a.seed);
  put("c", a.c);
  put("iters", a.iters);
  put("pos_factor", a.pos_factor);
  put("l2", a.l2);
  put("topics_k", a.topics_k);
  put("gibbs_iters", a.gibbs_iters);
  put("min_count", a.min_count);
  put("epochs", a.epochs);
  put("site_min_urls", a.site_min_urls);

  Snapshot snap;
  nr_status s = nr_snapshot_open(a.snapshot.c_str(), &snap.h);
  if (s != NR_OK) return report_failure("run", s);
  s = nr_run(snap.h, req.dump().c_str(), a.out.c_str(), nullptr);
  if (s != NR_OK) return report_failure("run", s);

  std::ifstream text(fs::path(a.out) / "report.txt");
  std::cout << text.rdbuf();
  return 0;
}

int cmd_correlate(const CorrelateArgs& a) {
  Snapshot snap;
  nr_status s = nr_snapshot_open(a.snapshot.c_str(), &snap.h);
  if (s != NR_OK) return report_failure("correlate", s);

  const std::size_t n = a.sites.size();
  std::vector<const char*> names;
  for (const auto& site : a.sites) names.push_back(site.c_str());
  std::vector<double> m(n * n);
  s = nr_correlate(snap.h, names.data(), n, m.data());
  if (s != NR_OK) return report_failure("correlate", s);

  fs::create_directories(a.out);
  const fs::path path = fs::path(a.out) / "correlation.csv";
  std::ofstream f(path);
  f << "site";
  for (const auto& site : a.sites) f << "," << site;
  f << "\n";
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    f << a.sites[i];
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.6f", m[i * n + j]);
      f << "," << buf;
    }
    f << "\n";
  }
  if (!f) {
    std::cerr << "newsrep correlate: cannot write " << path << "\n";
    return kExitData;
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_synth(const SynthArgs& a) {
  json cfg = json::object();
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    try {
      cfg = json::parse(f);
    } catch (const json::exception& e) {
      std::cerr << "newsrep synth: bad config " << a.config << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (a.seed) cfg["seed"] = *a.seed;
  if (a.users) cfg["n_users"] = *a.users;

  LibString summary;
  const nr_status s = nr_synth(cfg.dump().c_str(), a.out.c_str(), &summary.p);
  if (s != NR_OK) return report_failure("synth", s);
  std::cout << summary.parse().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newsrep: reputation scoring for news URLs shared on social networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nr_version()));

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Build a share-graph snapshot from a JSONL records file");
  ingest->add_option("--records", ia.records, "records file (JSON lines)")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ia.out, "snapshot directory")->required();
  auto* strip = ingest->add_option("--strip-params", ia.strip, "comma-separated query parameters to drop (glob)");

  SplitArgs sa;
  auto* split = app.add_subcommand("split", "Save a named split definition into a snapshot");
  split->add_option("--snapshot", sa.snapshot)->required()->check(CLI::ExistingDirectory);
  split->add_option("--name", sa.name)->required();
  split->add_option("--start", sa.start, "first day, YYYY-MM-DD")->required();
  split->add_option("--end", sa.end, "last day, YYYY-MM-DD")->required();
  split->add_option("--tweet-cutoff", sa.cutoff, "ignore tweets at or after this ISO timestamp");
  split->add_option("--day-stride", sa.day_stride)->check(CLI::PositiveNumber);
  split->add_option("--day-offset", sa.day_offset)->check(CLI::NonNegativeNumber);
  split->add_option("--days", sa.days, "explicit day list (overrides stride)");
  split->add_option("--min-shares", sa.min_shares)->check(CLI::PositiveNumber);
  split->add_option("--gt", sa.gt, "ground truth list, to print label counts")->check(CLI::ExistingFile);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Train or propagate, score the test split, and write reports");
  run->add_option("--snapshot", ra.snapshot)->required()->check(CLI::ExistingDirectory);
  run->add_option("--method", ra.method, "lr-u | lr-ut | lr-t | topics | harmonic")->required();
  run->add_option("--split", ra.split, "training split name")->required();
  run->add_option("--test-split", ra.test_split, "test split name")->required();
  run->add_option("--gt", ra.gt)->required()->check(CLI::ExistingFile);
  run->add_option("--gt2", ra.gt2, "second ground truth for cross-list detection")->check(CLI::ExistingFile);
  run->add_option("--aliases", ra.aliases)->check(CLI::ExistingFile);
  run->add_option("--out", ra.out)->required();
  run->add_option("--min-shares", ra.min_shares, "override the training split's minimum sharers");
  run->add_option("--seed", ra.seed);
  run->add_option("--c", ra.c, "harmonic regularization");
  run->add_option("--iters", ra.iters, "harmonic iterations");
  run->add_option("--pos-factor", ra.pos_factor, "harmonic reliable-to-fake seed ratio");
  run->add_option("--l2", ra.l2, "logistic regression L2 strength");
  run->add_option("--topics-k", ra.topics_k);
  run->add_option("--gibbs-iters", ra.gibbs_iters);
  run->add_option("--min-count", ra.min_count, "minimum tweets per user in the topic vocabulary");
  run->add_option("--epochs", ra.epochs);
  run->add_option("--site-min-urls", ra.site_min_urls);

  CorrelateArgs ca;
  auto* corr = app.add_subcommand("correlate", "Write the sharer-overlap correlation matrix for sites");
  corr->add_option("--snapshot", ca.snapshot)->required()->check(CLI::ExistingDirectory);
  corr->add_option("--sites", ca.sites)->required()->expected(1, -1);
  corr->add_option("--out", ca.out)->required();

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted site classes");
  synth->add_option("--out", ya.out)->required();
  synth->add_option("--config", ya.config, "JSON config; missing keys keep defaults")->check(CLI::ExistingFile);
  synth->add_option("--seed", ya.seed);
  synth->add_option("--users", ya.users);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) {
      ia.strip_set = strip->count() > 0;
      return cmd_ingest(ia);
    }
    if (*split) return cmd_split(sa);
    if (*run) return cmd_run(ra);
    if (*corr) return cmd_correlate(ca);
    if (*synth) return cmd_synth(ya);
  } catch (const std::exception& e) {
    std::cerr << "newsrep: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
