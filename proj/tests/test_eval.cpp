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
#include <cmath>
#include <random>

#include "doctest.h"
#include "newsrep/eval.hpp"
#include "oracles/eval_oracle.hpp"

using namespace newsrep;

namespace {

std::vector<ScoredItem> from_confusion(std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
  std::vector<ScoredItem> v;
  auto push = [&](std::size_t n, Label t, Label p) {
    for (std::size_t i = 0; i < n; ++i) v.push_back({"i" + std::to_string(v.size()), "s.com", 1, t, p, 0});
  };
  push(tp, Label::hoax, Label::hoax);
  push(fn, Label::hoax, Label::nonhoax);
  push(fp, Label::nonhoax, Label::hoax);
  push(tn, Label::nonhoax, Label::nonhoax);
  return v;
}

std::vector<ScoredItem> site_items(const std::string& site, std::size_t n, std::size_t flagged) {
  std::vector<ScoredItem> v;
  for (std::size_t i = 0; i < n; ++i)
    v.push_back({site + "/" + std::to_string(i), site, 1, Label::hoax, i < flagged ? Label::hoax : Label::nonhoax, 0});
  return v;
}

ShareGraph graph_of(const std::vector<std::tuple<std::string, std::string>>& tweets) {
  ShareGraph g;
  const Timestamp t = parse_timestamp("2017-10-01");
  int n = 0;
  for (const auto& [user, site] : tweets) {
    NewsItem it{site + "/" + std::to_string(n % 3), "https://" + site + "/" + std::to_string(n % 3), site, "", "",
                day_of(t)};
    ++n;
    g.add_share(it, {user, user}, t);
  }
  g.freeze();
  return g;
}

}  // namespace

TEST_CASE("metrics arithmetic") {
  auto items = from_confusion(9, 1, 3, 87);
  auto m = score_metrics(items);
  CHECK(m.counts.total() == 100);
  CHECK(*m.hoax_recall == doctest::Approx(90.0));
  CHECK(*m.nonhoax_recall == doctest::Approx(96.6667).epsilon(1e-5));
  CHECK(*m.hoax_precision == doctest::Approx(75.0));

  auto perfect = score_metrics(from_confusion(5, 0, 0, 5));
  CHECK(*perfect.hoax_recall == 100.0);
  CHECK(*perfect.nonhoax_recall == 100.0);
  CHECK(*perfect.hoax_precision == 100.0);

  auto none = score_metrics(from_confusion(0, 0, 2, 8));
  CHECK_FALSE(none.hoax_recall.has_value());
  CHECK(*none.nonhoax_recall == doctest::Approx(80.0));
  CHECK(*none.hoax_precision == 0.0);
  auto j = to_json(none);
  CHECK(j["hoax_recall"].is_null());
  CHECK(j["counts"]["fp"] == 2);
}

TEST_CASE("share-count slices are nested and order-free") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> shares(1, 15);
  std::bernoulli_distribution coin(0.3);
  std::vector<ScoredItem> items;
  for (int i = 0; i < 400; ++i)
    items.push_back({"i" + std::to_string(i), "s" + std::to_string(i % 7) + ".com", shares(rng),
                     coin(rng) ? Label::hoax : Label::nonhoax, coin(rng) ? Label::hoax : Label::nonhoax, 0});
  auto slices = score_slices(items);
  REQUIRE(slices.size() == 4);
  CHECK(slices[0].counts.total() == 400);
  for (std::size_t s = 1; s < 4; ++s) {
    const auto &a = slices[s - 1].counts, &b = slices[s].counts;
    CHECK(b.tp <= a.tp);
    CHECK(b.fn <= a.fn);
    CHECK(b.fp <= a.fp);
    CHECK(b.tn <= a.tn);
  }
  for (const auto& m : slices) {
    std::size_t n = 0;
    for (const auto& it : items) n += it.share_count >= m.min_shares;
    CHECK(m.counts.total() == n);
    for (auto v : {m.hoax_recall, m.nonhoax_recall, m.hoax_precision})
      if (v) CHECK((*v >= 0 && *v <= 100));
  }
  auto shuffled = items;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto again = score_slices(shuffled);
  for (std::size_t s = 0; s < 4; ++s) CHECK(to_json(again[s]) == to_json(slices[s]));
}

TEST_CASE("per-site table") {
  auto items = site_items("big.com", 200, 4);
  auto small = site_items("small.com", 3, 3);
  auto mid = site_items("mid.com", 50, 10);
  items.insert(items.end(), small.begin(), small.end());
  items.insert(items.end(), mid.begin(), mid.end());
  auto rows = per_site_table(items, 20);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].site == "big.com");
  CHECK(rows[0].pct == doctest::Approx(2.0));
  CHECK(rows[1].site == "mid.com");
  CHECK(rows[1].pct == doctest::Approx(20.0));
  CHECK(per_site_table(items, 1000).empty());
  for (const auto& r : per_site_table(items))
    CHECK(r.pct == doctest::Approx(100.0 * static_cast<double>(r.flagged) / static_cast<double>(r.n_urls)));

  auto csv = per_site_csv(rows, "harmonic", "primary");
  CHECK(csv == "site,method,gt,pct,n_urls,flagged\nbig.com,harmonic,primary,2.00,200,4\n"
               "mid.com,harmonic,primary,20.00,50,10\n");
}

TEST_CASE("cross ground truth thresholds") {
  GroundTruth train{"train", {"known.com"}};
  GroundTruth other{"other", {"known.com", "a.com", "b.com", "c.com"}};
  auto items = site_items("a.com", 25, 2);  // 8% > 5%
  auto b = site_items("b.com", 19, 19);     // too few urls
  auto c = site_items("c.com", 40, 2);      // 5% is not above 5%
  auto k = site_items("known.com", 30, 30);
  for (auto* v : {&b, &c, &k}) items.insert(items.end(), v->begin(), v->end());
  auto r = cross_gt_detect(train, other, items);
  CHECK(r.items == 84);
  CHECK(r.flagged_items == 23);
  CHECK(r.qualifying_sites == 2);
  CHECK(r.detected == std::vector<std::string>{"a.com"});
  CHECK(*r.site_detect_pct == doctest::Approx(50.0));
  CHECK(*r.suspicious_url_pct == doctest::Approx(100.0 * 25 / 84));
  CHECK(*r.direct_url_pct == doctest::Approx(100.0 * 23 / 84));

  auto only_small = site_items("b.com", 19, 19);
  auto r2 = cross_gt_detect(train, other, only_small);
  CHECK_FALSE(r2.site_detect_pct.has_value());
  CHECK_FALSE(r2.suspicious_url_pct.has_value());
  CHECK(*r2.direct_url_pct == 100.0);

  CHECK_THROWS_AS(cross_gt_detect(train, other, k), DataError);
}

TEST_CASE("cross ground truth matches an independent recount") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::set<std::string> train, other;
    std::vector<std::string> sites;
    for (int s = 0; s < 12; ++s) {
      const std::string name = "site" + std::to_string(s) + ".net";
      sites.push_back(name);
      const int kind = static_cast<int>(rng() % 4);  // 0 neither, 1 train only, 2 other only, 3 both
      if (kind & 1) train.insert(name);
      if (kind & 2) other.insert(name);
    }
    other.insert(sites[0]);
    train.erase(sites[0]);
    std::vector<ScoredItem> items;
    std::vector<oracle::RecountItem> plain;
    std::uniform_int_distribution<int> n_items(5, 60);
    for (const auto& s : sites) {
      const double rate = static_cast<double>(rng() % 100) / 400.0;
      std::bernoulli_distribution flag(rate);
      for (int i = n_items(rng); i > 0; --i) {
        const bool f = flag(rng);
        items.push_back({s + std::to_string(i), s, 1, Label::hoax, f ? Label::hoax : Label::nonhoax, 0});
        plain.push_back({s, f});
      }
    }
    auto r = cross_gt_detect({"t", {train.begin(), train.end()}}, {"o", {other.begin(), other.end()}}, items);
    auto ref = oracle::recount_cross(plain, train, other, 5.0, 20);
    CHECK(*r.direct_url_pct == doctest::Approx(ref.direct).epsilon(1e-12));
    if (std::isnan(ref.sites)) {
      CHECK_FALSE(r.site_detect_pct.has_value());
    } else {
      CHECK(*r.site_detect_pct == doctest::Approx(ref.sites).epsilon(1e-12));
      CHECK(*r.suspicious_url_pct == doctest::Approx(ref.suspicious).epsilon(1e-12));
    }
  }
}

TEST_CASE("site correlation") {
  std::vector<std::tuple<std::string, std::string>> tweets{
      {"u1", "a.com"}, {"u1", "a.com"}, {"u2", "a.com"}, {"u1", "b.com"}, {"u3", "b.com"}, {"u4", "c.com"}};
  auto g = graph_of(tweets);
  CHECK(site_correlation(g, "a.com", "b.com") == doctest::Approx(2.0 / (std::sqrt(5.0) * std::sqrt(2.0))));
  CHECK(site_correlation(g, "a.com", "b.com") == doctest::Approx(0.6325).epsilon(1e-4));
  CHECK(site_correlation(g, "a.com", "c.com") == 0.0);
  CHECK(site_correlation(g, "b.com", "b.com") == doctest::Approx(1.0));
  CHECK_THROWS_AS(site_correlation(g, "a.com", "zzz.com"), NotFound);

  auto same = graph_of({{"u1", "x.com"}, {"u2", "x.com"}, {"u1", "y.com"}, {"u2", "y.com"}});
  CHECK(site_correlation(same, "x.com", "y.com") == doctest::Approx(1.0));
}

TEST_CASE("correlation matrix agrees with brute force and is symmetric") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::tuple<std::string, std::string>> tweets;
    std::vector<std::string> sites{"a.com", "b.com", "c.com", "d.com"};
    for (const auto& s : sites) tweets.emplace_back("seed", s);
    for (int t = 0; t < 60; ++t) tweets.emplace_back("u" + std::to_string(rng() % 10), sites[rng() % 4]);
    auto g = graph_of(tweets);
    auto m = site_correlation_matrix(g, sites);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        CHECK(m[a][b] == m[b][a]);
        CHECK((m[a][b] >= 0 && m[a][b] <= 1));
        CHECK(m[a][b] == doctest::Approx(oracle::brute_cosine(tweets, sites[a], sites[b])).epsilon(1e-12));
      }
    for (std::size_t a = 0; a < 4; ++a) CHECK(m[a][a] == doctest::Approx(1.0));
  }
}

TEST_CASE("report rendering") {
  EvalReport r;
  r.method = "lr-u";
  r.dataset = "test";
  r.config = {{"l2", 1.0}};
  auto items = from_confusion(9, 1, 3, 87);
  r.slices = score_slices(items);
  r.per_site = per_site_table(items);
  auto j = to_json(r);
  CHECK(j["slices"].size() == 4);
  CHECK(j["cross_gt"].is_null());
  CHECK(j["config"]["l2"] == 1.0);
  auto text = to_text(r);
  CHECK(text.find(" 90.00 (n=10)") != std::string::npos);
  CHECK(text.find("s.com") != std::string::npos);
  r.slices = {score_metrics(from_confusion(0, 0, 1, 1))};
  CHECK(to_text(r).find("n/a (n=0)") != std::string::npos);
}
