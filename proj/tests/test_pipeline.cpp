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


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "newsrep/pipeline.hpp"
#include "newsrep/synth.hpp"

namespace fs = std::filesystem;
using namespace newsrep;

namespace {

SynthConfig small_config(std::uint64_t seed = 7) {
  SynthConfig c;
  c.n_sites_good = 8;
  c.n_sites_bad = 4;
  c.n_hidden_bad = 2;
  c.n_users = 900;
  c.items_good_min = 60;
  c.items_good_max = 90;
  c.items_bad_min = 40;
  c.items_bad_max = 60;
  c.seed = seed;
  return c;
}

struct Fixture {
  fs::path root;
  fs::path snapshot;
  SynthCorpus corpus;
  ShareGraph graph;
  SplitSpec train_spec, test_spec;
  IngestSummary summary;
};

// Built once: synth corpus written to disk, ingested into a snapshot, two
// splits saved.
const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.root = fs::temp_directory_path() / "newsrep_pipeline_test";
    fs::remove_all(x.root);
    x.corpus = generate(small_config());
    write_corpus(x.corpus, x.root / "corpus");
    x.snapshot = x.root / "snap";
    x.summary = ingest_to_snapshot(x.root / "corpus" / "records.jsonl", x.snapshot);
    x.graph = read_snapshot(x.snapshot);
    x.train_spec.name = "train";
    x.train_spec.start = parse_date("2017-09-01");
    x.train_spec.end = parse_date("2017-10-31");
    x.train_spec.tweet_cutoff = parse_timestamp("2017-11-01T00:00:00Z");
    x.test_spec.name = "test";
    x.test_spec.start = parse_date("2017-11-01");
    x.test_spec.end = parse_date("2017-11-26");
    save_split(x.snapshot, x.train_spec);
    save_split(x.snapshot, x.test_spec);
    return x;
  }();
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

struct Run {
  Dataset train, test;
  GroundTruth gt, gt2;
  RunOutput out;
  EvalReport report;
};

RunConfig quick_config(Method m) {
  RunConfig cfg;
  cfg.method = m;
  cfg.lda.topics = 8;
  cfg.lda.gibbs_iters = 30;
  cfg.nn.hidden = 16;
  cfg.nn.epochs = 5;
  cfg.site_min_urls = 10;
  return cfg;
}

Run run_once(const RunConfig& cfg, const SplitSpec& train_spec, const fs::path& dir = {}) {
  const auto& f = fixture();
  Run r;
  r.gt = f.corpus.primary;
  r.gt2 = f.corpus.secondary;
  r.train = build_split(f.graph, train_spec, r.gt);
  r.test = build_split(f.graph, f.test_spec, r.gt);
  RunInputs in{&f.graph, &r.train, &r.test, &r.gt, &r.gt2, &f.corpus.aliases};
  r.out = run_method(in, cfg);
  r.report = evaluate_run(r.out, in, cfg);
  if (!dir.empty()) write_run(dir, r.report, r.out, in);
  return r;
}

constexpr Method kAllMethods[] = {Method::lr_u, Method::lr_ut, Method::lr_t, Method::topics, Method::harmonic};

}  // namespace

TEST_CASE("method names round trip and unknown names are usage errors") {
  for (auto m : kAllMethods) CHECK(method_from_string(to_string(m)) == m);
  CHECK(to_string(Method::lr_ut) == "lr-ut");
  CHECK_THROWS_AS(method_from_string("lr_u"), UsageError);
  CHECK_THROWS_AS(method_from_string(""), UsageError);
}

TEST_CASE("snapshot holds what was ingested") {
  const auto& f = fixture();
  CHECK(f.summary.rejections.empty());
  CHECK(f.summary.records == f.corpus.records.size());
  CHECK(f.graph.item_count() == f.corpus.graph.item_count());
  CHECK(f.graph.user_count() == f.corpus.graph.user_count());
  CHECK(f.graph.edges().size() == f.corpus.graph.edges().size());
  const auto manifest = nlohmann::json::parse(slurp(f.snapshot / "manifest.json"));
  CHECK(manifest.at("records").get<std::size_t>() == f.corpus.records.size());
  CHECK(manifest.at("rejected").get<std::size_t>() == 0);
}

TEST_CASE("ingesting the same records twice gives byte-identical snapshots") {
  const auto& f = fixture();
  const auto again = f.root / "snap_again";
  ingest_to_snapshot(f.root / "corpus" / "records.jsonl", again);
  auto a = dir_contents(f.snapshot);
  auto b = dir_contents(again);
  a.erase("splits/train.json");
  a.erase("splits/test.json");
  CHECK(a == b);
}

TEST_CASE("ingest rejects an input with no usable records") {
  const auto& f = fixture();
  const auto empty = f.root / "empty.jsonl";
  std::ofstream(empty) << "";
  CHECK_THROWS_AS(ingest_to_snapshot(empty, f.root / "snap_empty"), DataError);

  const auto broken = f.root / "broken.jsonl";
  std::ofstream(broken) << "{not json\n";
  CHECK_THROWS_AS(ingest_to_snapshot(broken, f.root / "snap_broken"), DataError);
}

TEST_CASE("splits round trip through the snapshot") {
  const auto& f = fixture();
  const auto back = load_split(f.snapshot, "train");
  CHECK(back.to_json() == f.train_spec.to_json());
  CHECK_THROWS_AS(load_split(f.snapshot, "missing"), NotFound);
}

TEST_CASE("every method scores every test item") {
  const auto& f = fixture();
  for (auto m : kAllMethods) {
    CAPTURE(to_string(m));
    const auto r = run_once(quick_config(m), f.train_spec);
    REQUIRE(r.out.scored.size() == r.test.graph.item_count());
    for (std::size_t i = 0; i < r.out.scored.size(); ++i) {
      const auto& s = r.out.scored[i];
      CHECK(s.item_id == r.test.graph.item(static_cast<ItemIndex>(i)).item_id);
      CHECK(s.score >= 0.0);
      CHECK(s.score <= 1.0);
      CHECK(s.truth == r.test.labels[i]);
    }
    REQUIRE(r.report.slices.size() == 4);
    for (std::size_t k = 1; k < r.report.slices.size(); ++k)
      CHECK(r.report.slices[k].counts.total() <= r.report.slices[k - 1].counts.total());
    CHECK(r.report.slices[0].counts.total() == r.out.scored.size());
    CHECK(r.report.method == to_string(m));
  }
}

TEST_CASE("thresholds: LR and topics flag at score >= 0.5, harmonic flags q < 0") {
  const auto& f = fixture();
  for (auto m : kAllMethods) {
    CAPTURE(to_string(m));
    const auto r = run_once(quick_config(m), f.train_spec);
    for (const auto& s : r.out.scored) {
      if (m == Method::harmonic) {
        CHECK((s.predicted == Label::hoax) == (1.0 - 2.0 * s.score < 0.0));
      } else {
        CHECK((s.predicted == Label::hoax) == (s.score >= 0.5));
      }
    }
  }
}

TEST_CASE("the report is tagged with the training split it came from") {
  const auto& f = fixture();
  auto min2 = f.train_spec;
  min2.name = "train-min2";
  min2.min_shares = 2;
  const auto r = run_once(quick_config(Method::lr_ut), min2);
  CHECK(r.report.config.at("train_split").at("name") == "train-min2");
  CHECK(r.report.config.at("train_split").at("min_shares") == 2);
  CHECK(r.report.config.at("test_split").at("name") == "test");
  for (std::size_t i = 0; i < r.train.graph.item_count(); ++i)
    CHECK(r.train.graph.share_count(static_cast<ItemIndex>(i)) >= 2);
}

TEST_CASE("runs carry the full resolved configuration") {
  const auto& f = fixture();
  auto cfg = quick_config(Method::harmonic);
  cfg.harmonic.c = 0.05;
  const auto r = run_once(cfg, f.train_spec);
  const auto& c = r.report.config;
  CHECK(c.at("method") == "harmonic");
  CHECK(c.at("harmonic").at("c").get<double>() == doctest::Approx(0.05));
  CHECK_FALSE(c.contains("lr"));
  CHECK(c.contains("gt"));
  CHECK(c.contains("gt2"));
}

TEST_CASE("cross-list block appears when the second list names extra sites") {
  const auto& f = fixture();
  const auto r = run_once(quick_config(Method::harmonic), f.train_spec);
  REQUIRE(r.report.cross_gt.has_value());
  std::size_t hidden = 0;
  for (const auto& s : r.out.scored)
    if (f.corpus.kind_of(s.site) == SiteKind::hidden_bad) ++hidden;
  CHECK(r.report.cross_gt->items == hidden);
}

TEST_CASE("write_run produces the stable file set") {
  const auto& f = fixture();
  for (auto m : kAllMethods) {
    CAPTURE(to_string(m));
    const auto dir = f.root / ("files_" + to_string(m));
    run_once(quick_config(m), f.train_spec, dir);
    for (const char* name : {"report.json", "report.txt", "per_site.csv", "predictions.tsv"})
      CHECK(fs::exists(dir / name));
    if (m == Method::harmonic) {
      CHECK(fs::exists(dir / "q_items.tsv"));
      CHECK(fs::exists(dir / "q_users.tsv"));
      std::istringstream q(slurp(dir / "q_items.tsv"));
      std::string line;
      while (std::getline(q, line)) CHECK(std::count(line.begin(), line.end(), '\t') == 3);
    } else {
      CHECK(fs::exists(dir / "model"));
    }
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j.at("slices").size() == 4);
  }
}

TEST_CASE("every method is bit-reproducible under a fixed seed") {
  const auto& f = fixture();
  for (auto m : kAllMethods) {
    CAPTURE(to_string(m));
    auto cfg = quick_config(m);
    cfg.set_seed(11);
    const auto a = f.root / ("det_a_" + to_string(m));
    const auto b = f.root / ("det_b_" + to_string(m));
    run_once(cfg, f.train_spec, a);
    run_once(cfg, f.train_spec, b);
    CHECK(dir_contents(a) == dir_contents(b));
  }
}

TEST_CASE("different seeds move the stochastic methods") {
  const auto& f = fixture();
  for (auto m : {Method::topics, Method::harmonic}) {
    CAPTURE(to_string(m));
    auto c1 = quick_config(m);
    auto c2 = c1;
    c1.set_seed(1);
    c2.set_seed(2);
    const auto r1 = run_once(c1, f.train_spec);
    const auto r2 = run_once(c2, f.train_spec);
    bool differ = false;
    for (std::size_t i = 0; i < r1.out.scored.size(); ++i) differ |= r1.out.scored[i].score != r2.out.scored[i].score;
    CHECK(differ);
  }
}
