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

#include "newsrep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace newsrep {

void SynthConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string("synth: ") + name + " must lie in [0, 1]");
  };
  fraction(hoax_prone_fraction, "hoax_prone_fraction");
  fraction(p_bad, "p_bad");
  fraction(p_good_from_prone, "p_good_from_prone");
  fraction(repeat_tweet_prob, "repeat_tweet_prob");
  fraction(class_word_prob, "class_word_prob");
  fraction(site_mention_prob, "site_mention_prob");
  fraction(og_url_prob, "og_url_prob");
  if (n_sites_good < 0 || n_sites_bad < 0 || n_hidden_bad < 0) throw UsageError("synth: site counts must be >= 0");
  if (n_sites_good + n_sites_bad + n_hidden_bad == 0) throw UsageError("synth: no sites to generate");
  if (n_users < 1) throw UsageError("synth: n_users must be >= 1");
  if (items_good_min < 0 || items_good_max < items_good_min || items_bad_min < 0 || items_bad_max < items_bad_min)
    throw UsageError("synth: invalid items-per-site range");
  if (max_shares < 1) throw UsageError("synth: max_shares must be >= 1");
  if (share_exponent < 0) throw UsageError("synth: share_exponent must be >= 0");
  if (vocab_common < 1 || vocab_class < 1) throw UsageError("synth: vocabulary sizes must be >= 1");
  if (title_words_min < 1 || title_words_max < title_words_min) throw UsageError("synth: invalid title length range");
  if (mean_delay_hours <= 0) throw UsageError("synth: mean_delay_hours must be positive");
  if (start > end) throw UsageError("synth: start after end");

  const int prone = static_cast<int>(std::lround(hoax_prone_fraction * n_users));
  const bool has_bad = n_sites_bad + n_hidden_bad > 0 && items_bad_max > 0;
  const bool has_good = n_sites_good > 0 && items_good_max > 0;
  const bool need_prone = (has_bad && p_bad > 0) || (has_good && p_good_from_prone > 0);
  const bool need_normal = (has_bad && p_bad < 1) || (has_good && p_good_from_prone < 1);
  if (need_prone && prone == 0) throw UsageError("synth: no hoax-prone users to share with");
  if (need_normal && n_users - prone == 0) throw UsageError("synth: no ordinary users to share with");
}

nlohmann::json SynthConfig::to_json() const {
  return {{"n_sites_good", n_sites_good},
          {"n_sites_bad", n_sites_bad},
          {"n_hidden_bad", n_hidden_bad},
          {"n_users", n_users},
          {"items_good_min", items_good_min},
          {"items_good_max", items_good_max},
          {"items_bad_min", items_bad_min},
          {"items_bad_max", items_bad_max},
          {"hoax_prone_fraction", hoax_prone_fraction},
          {"p_bad", p_bad},
          {"p_good_from_prone", p_good_from_prone},
          {"activity_exponent", activity_exponent},
          {"share_exponent", share_exponent},
          {"max_shares", max_shares},
          {"repeat_tweet_prob", repeat_tweet_prob},
          {"mean_delay_hours", mean_delay_hours},
          {"vocab_common", vocab_common},
          {"vocab_class", vocab_class},
          {"title_words_min", title_words_min},
          {"title_words_max", title_words_max},
          {"class_word_prob", class_word_prob},
          {"site_mention_prob", site_mention_prob},
          {"og_url_prob", og_url_prob},
          {"start", format_date(start)},
          {"end", format_date(end)},
          {"seed", seed}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  try {
    get("n_sites_good", c.n_sites_good);
    get("n_sites_bad", c.n_sites_bad);
    get("n_hidden_bad", c.n_hidden_bad);
    get("n_users", c.n_users);
    get("items_good_min", c.items_good_min);
    get("items_good_max", c.items_good_max);
    get("items_bad_min", c.items_bad_min);
    get("items_bad_max", c.items_bad_max);
    get("hoax_prone_fraction", c.hoax_prone_fraction);
    get("p_bad", c.p_bad);
    get("p_good_from_prone", c.p_good_from_prone);
    get("activity_exponent", c.activity_exponent);
    get("share_exponent", c.share_exponent);
    get("max_shares", c.max_shares);
    get("repeat_tweet_prob", c.repeat_tweet_prob);
    get("mean_delay_hours", c.mean_delay_hours);
    get("vocab_common", c.vocab_common);
    get("vocab_class", c.vocab_class);
    get("title_words_min", c.title_words_min);
    get("title_words_max", c.title_words_max);
    get("class_word_prob", c.class_word_prob);
    get("site_mention_prob", c.site_mention_prob);
    get("og_url_prob", c.og_url_prob);
    get("seed", c.seed);
    if (j.contains("start")) c.start = parse_date(j.at("start").get<std::string>());
    if (j.contains("end")) c.end = parse_date(j.at("end").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("synth config: ") + e.what());
  }
  return c;
}

std::string to_string(SiteKind k) {
  switch (k) {
    case SiteKind::good: return "good";
    case SiteKind::bad: return "bad";
    case SiteKind::hidden_bad: return "hidden_bad";
  }
  return "good";
}

SiteKind SynthCorpus::kind_of(std::string_view site) const {
  for (const auto& s : sites)
    if (s.domain == site) return s.kind;
  throw NotFound("not a generated site: " + std::string(site));
}

namespace {

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                   "br", "dr", "st", "tr", "pl", "gr", "sh", "ch", "cl", "fr"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou", "io"};
constexpr const char* kCodas[] = {"", "", "n", "r", "s", "t", "l", "m", "nd", "st", "rk"};

template <std::size_t N>
const char* pick(std::mt19937_64& rng, const char* const (&arr)[N]) {
  return arr[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

// Distinct pronounceable words, none repeated across calls on the same set.
std::vector<std::string> make_words(std::mt19937_64& rng, int n, std::set<std::string>& taken, int syllables_min,
                                    int syllables_max) {
  std::vector<std::string> out;
  std::uniform_int_distribution<int> syl(syllables_min, syllables_max);
  while (static_cast<int>(out.size()) < n) {
    std::string w;
    for (int s = syl(rng); s > 0; --s) w += std::string(pick(rng, kOnsets)) + pick(rng, kVowels);
    w += pick(rng, kCodas);
    if (w.size() >= 3 && taken.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Ranks 1..n in shuffled order, weight rank^-s.
std::discrete_distribution<std::size_t> zipf_over(std::size_t n, double s, std::mt19937_64& rng) {
  std::vector<double> w(n);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i + 1;
  std::shuffle(rank.begin(), rank.end(), rng);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(rank[i]), -s);
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

struct Tweet {
  Timestamp ts;
  std::size_t user;
  std::size_t item;
};

struct Item {
  std::size_t site;
  std::string path;
  std::string title;
  std::string description;
};

}  // namespace

SynthCorpus generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SynthCorpus out;
  out.config = cfg;

  // Sites: two-word names, a few under co.uk.
  std::set<std::string> taken;
  const int n_sites = cfg.n_sites_good + cfg.n_sites_bad + cfg.n_hidden_bad;
  auto stems = make_words(rng, 2 * n_sites, taken, 1, 2);
  const char* tlds[] = {"com", "com", "com", "net", "org", "co.uk"};
  for (int s = 0; s < n_sites; ++s) {
    SynthSite site;
    site.kind = s < cfg.n_sites_good ? SiteKind::good
                : s < cfg.n_sites_good + cfg.n_sites_bad ? SiteKind::bad
                                                         : SiteKind::hidden_bad;
    const auto& a = stems[2 * s];
    const auto& b = stems[2 * s + 1];
    site.domain = a + b + "." + pick(rng, tlds);
    site.display_name = capitalize(a) + " " + capitalize(b);
    out.aliases[site.domain] = {site.display_name};
    out.sites.push_back(std::move(site));
  }
  out.primary.name = "primary";
  out.secondary.name = "secondary";
  for (const auto& s : out.sites) {
    if (s.kind == SiteKind::bad) out.primary.sites.insert(s.domain);
    if (s.kind != SiteKind::good) out.secondary.sites.insert(s.domain);
  }

  // Vocabulary: shared background plus one word list per class.
  const auto common = make_words(rng, cfg.vocab_common, taken, 1, 3);
  const auto good_words = make_words(rng, cfg.vocab_class, taken, 2, 3);
  const auto bad_words = make_words(rng, cfg.vocab_class, taken, 2, 3);

  // Users: a seeded subset is hoax-prone; activity is Zipf within each pool.
  std::vector<std::size_t> order(static_cast<std::size_t>(cfg.n_users));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_prone = static_cast<std::size_t>(std::lround(cfg.hoax_prone_fraction * cfg.n_users));
  std::vector<std::size_t> prone(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_prone));
  std::vector<std::size_t> normal(order.begin() + static_cast<std::ptrdiff_t>(n_prone), order.end());
  std::sort(prone.begin(), prone.end());
  std::sort(normal.begin(), normal.end());
  auto prone_pick = zipf_over(std::max<std::size_t>(prone.size(), 1), cfg.activity_exponent, rng);
  auto normal_pick = zipf_over(std::max<std::size_t>(normal.size(), 1), cfg.activity_exponent, rng);
  auto user_id = [](std::size_t u) { return std::to_string(100000000 + u); };
  for (auto u : prone) out.hoax_prone_users.push_back(user_id(u));
  std::sort(out.hoax_prone_users.begin(), out.hoax_prone_users.end());

  std::vector<double> share_w(static_cast<std::size_t>(cfg.max_shares));
  for (std::size_t k = 0; k < share_w.size(); ++k) share_w[k] = std::pow(static_cast<double>(k + 1), -cfg.share_exponent);
  std::discrete_distribution<int> share_count(share_w.begin(), share_w.end());

  const auto t_start = Timestamp(cfg.start);
  const auto span_s = static_cast<double>(((cfg.end - cfg.start).count() + 1) * 86400);
  std::exponential_distribution<double> delay(1.0 / (cfg.mean_delay_hours * 3600.0));
  std::uniform_int_distribution<int> title_len(cfg.title_words_min, cfg.title_words_max);

  std::vector<Item> items;
  std::vector<Tweet> tweets;
  for (std::size_t s = 0; s < out.sites.size(); ++s) {
    const auto& site = out.sites[s];
    const bool bad = site.kind != SiteKind::good;
    const int n_items = bad ? std::uniform_int_distribution<int>(cfg.items_bad_min, cfg.items_bad_max)(rng)
                            : std::uniform_int_distribution<int>(cfg.items_good_min, cfg.items_good_max)(rng);
    const auto& cls = bad ? bad_words : good_words;
    const double p_prone = bad ? cfg.p_bad : cfg.p_good_from_prone;
    for (int n = 0; n < n_items; ++n) {
      const auto published = t_start + std::chrono::seconds(static_cast<std::int64_t>(unit(rng) * span_s));
      Item item;
      item.site = s;
      // title and description
      std::string title, desc;
      for (int w = title_len(rng); w > 0; --w) {
        const auto& list = unit(rng) < cfg.class_word_prob ? cls : common;
        title += (title.empty() ? "" : " ") +
                 list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
      }
      for (int w = 2 * title_len(rng); w > 0; --w) {
        const auto& list = unit(rng) < cfg.class_word_prob ? cls : common;
        desc += (desc.empty() ? "" : " ") + list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
      }
      if (unit(rng) < cfg.site_mention_prob) title += " - " + site.display_name;
      if (unit(rng) < cfg.site_mention_prob) desc += " Read more at " + site.domain + ".";
      item.title = capitalize(title);
      item.description = capitalize(desc);
      const auto day = std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(published));
      std::ostringstream path;
      path << '/' << static_cast<int>(day.year()) << '/' << static_cast<unsigned>(day.month()) << '/'
           << title.substr(0, title.find(' ')) << '-' << items.size();
      item.path = path.str();
      const std::size_t idx = items.size();
      items.push_back(std::move(item));

      // sharers
      const int k = share_count(rng) + 1;
      std::set<std::size_t> chosen;
      for (int j = 0; j < k; ++j) {
        // The pool is fixed per share so collisions do not skew the mix.
        const bool from_prone = (unit(rng) < p_prone && !prone.empty()) || normal.empty();
        std::size_t u = 0;
        bool fresh = false;
        for (int attempt = 0; attempt < 50 && !fresh; ++attempt) {
          u = from_prone ? prone[prone_pick(rng)] : normal[normal_pick(rng)];
          fresh = chosen.insert(u).second;
        }
        if (!fresh) continue;
        const auto ts = j == 0 ? published : published + std::chrono::seconds(static_cast<std::int64_t>(delay(rng)));
        tweets.push_back({ts, u, idx});
        if (unit(rng) < cfg.repeat_tweet_prob)
          tweets.push_back({ts + std::chrono::seconds(static_cast<std::int64_t>(delay(rng)) + 1), u, idx});
      }
    }
  }
  std::stable_sort(tweets.begin(), tweets.end(), [](const Tweet& a, const Tweet& b) { return a.ts < b.ts; });

  const char* trackers[] = {"?utm_source=twitter", "?utm_medium=social&utm_campaign=feed", "?fbclid=IwAR0x",
                            "#comments", "/"};
  for (std::size_t t = 0; t < tweets.size(); ++t) {
    const auto& tw = tweets[t];
    const auto& item = items[tw.item];
    const auto& site = out.sites[item.site];
    RawRecord r;
    r.tweet_id = std::to_string(900000000000 + t);
    r.user_id = user_id(tw.user);
    r.username = "user_" + std::to_string(tw.user);
    r.timestamp = tw.ts;
    const std::string canonical = "https://www." + site.domain + item.path;
    std::string raw = unit(rng) < 0.3 ? "https://WWW." + site.domain + item.path : canonical;
    if (unit(rng) < 0.5) raw += pick(rng, trackers);
    r.raw_url = raw;
    if (unit(rng) < cfg.og_url_prob) {
      r.og_url = canonical;
      r.og_title = item.title;
      r.og_description = item.description;
    }
    out.records.push_back(std::move(r));
  }

  std::stringstream jsonl;
  for (const auto& r : out.records) jsonl << record_to_json(r).dump() << '\n';
  auto ingested = ingest_records(jsonl);
  if (!ingested.rejections.empty())
    throw DataError("generated record rejected: " + ingested.rejections.front().reason);
  out.graph = std::move(ingested.graph);
  return out;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "records.jsonl");
    if (!f) throw IoError("cannot write " + (dir / "records.jsonl").string());
    for (const auto& r : corpus.records) f << record_to_json(r).dump() << '\n';
  }
  for (const auto* gt : {&corpus.primary, &corpus.secondary}) {
    std::ofstream f(dir / ("gt_" + gt->name + ".csv"));
    f << "site,type\n";
    for (const auto& s : gt->sites) f << s << ",fake\n";
  }
  nlohmann::json aliases = nlohmann::json::object();
  for (const auto& [site, names] : corpus.aliases) aliases[site] = names;
  std::ofstream(dir / "aliases.json") << aliases.dump(2) << '\n';

  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : corpus.sites)
    sites.push_back({{"site", s.domain}, {"kind", to_string(s.kind)}, {"name", s.display_name}});
  nlohmann::json manifest = {{"config", corpus.config.to_json()},
                             {"records", corpus.records.size()},
                             {"items", corpus.graph.item_count()},
                             {"users", corpus.graph.user_count()},
                             {"sites", sites},
                             {"hoax_prone_users", corpus.hoax_prone_users}};
  std::ofstream(dir / "synth_manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace newsrep
