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

#include "newsrep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace newsrep {

void Confusion::add(Label truth, Label predicted) {
  if (truth == Label::hoax)
    ++(predicted == Label::hoax ? tp : fn);
  else
    ++(predicted == Label::hoax ? fp : tn);
}

std::optional<double> percent(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

Metrics metrics_from(const Confusion& c, std::size_t min_shares) {
  Metrics m;
  m.min_shares = min_shares;
  m.counts = c;
  m.hoax_recall = percent(c.tp, c.tp + c.fn);
  m.nonhoax_recall = percent(c.tn, c.tn + c.fp);
  m.hoax_precision = percent(c.tp, c.tp + c.fp);
  return m;
}

Metrics score_metrics(std::span<const ScoredItem> items, std::size_t min_shares) {
  Confusion c;
  for (const auto& it : items)
    if (it.share_count >= min_shares) c.add(it.truth, it.predicted);
  return metrics_from(c, min_shares);
}

std::vector<Metrics> score_slices(std::span<const ScoredItem> items, std::span<const std::size_t> thresholds) {
  std::vector<Metrics> out;
  for (auto t : thresholds) out.push_back(score_metrics(items, t));
  return out;
}

namespace {

std::vector<SiteRow> tally(std::span<const ScoredItem> items, auto keep) {
  std::map<std::string, SiteRow, std::less<>> rows;
  for (const auto& it : items) {
    if (!keep(it)) continue;
    auto& r = rows[it.site];
    r.site = it.site;
    ++r.n_urls;
    r.flagged += it.predicted == Label::hoax;
  }
  std::vector<SiteRow> out;
  for (auto& [_, r] : rows) {
    r.pct = 100.0 * static_cast<double>(r.flagged) / static_cast<double>(r.n_urls);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const SiteRow& a, const SiteRow& b) { return a.n_urls > b.n_urls; });
  return out;
}

}  // namespace

std::vector<SiteRow> per_site_table(std::span<const ScoredItem> items, std::size_t min_urls) {
  auto rows = tally(items, [](const ScoredItem&) { return true; });
  std::erase_if(rows, [&](const SiteRow& r) { return r.n_urls < min_urls; });
  return rows;
}

CrossGtResult cross_gt_detect(const GroundTruth& train_gt, const GroundTruth& other_gt,
                              std::span<const ScoredItem> items, double site_threshold_pct, std::size_t min_urls) {
  CrossGtResult r;
  r.site_threshold_pct = site_threshold_pct;
  r.min_urls = min_urls;
  auto other_only = [&](const ScoredItem& it) { return other_gt.contains(it.site) && !train_gt.contains(it.site); };
  auto rows = tally(items, other_only);
  if (rows.empty())
    throw DataError("no evaluated item comes from a site listed only in " + other_gt.name);
  for (const auto& row : rows) {
    r.items += row.n_urls;
    r.flagged_items += row.flagged;
    if (row.n_urls < min_urls) continue;
    ++r.qualifying_sites;
    r.sites.push_back(row);
    if (row.pct > site_threshold_pct) {
      ++r.detected_sites;
      r.items_in_detected_sites += row.n_urls;
      r.detected.push_back(row.site);
    }
  }
  r.direct_url_pct = percent(r.flagged_items, r.items);
  r.site_detect_pct = percent(r.detected_sites, r.qualifying_sites);
  if (r.qualifying_sites > 0) r.suspicious_url_pct = percent(r.items_in_detected_sites, r.items);
  return r;
}

std::vector<std::vector<double>> site_correlation_matrix(const ShareGraph& graph, std::span<const std::string> sites) {
  std::unordered_map<std::string_view, std::size_t> slot;
  std::vector<std::size_t> of(sites.size());
  for (std::size_t s = 0; s < sites.size(); ++s) of[s] = slot.emplace(sites[s], slot.size()).first->second;
  const std::size_t n = slot.size();
  std::vector<std::size_t> item_slot(graph.item_count(), SIZE_MAX);
  std::vector<bool> present(n, false);
  for (ItemIndex i = 0; i < graph.item_count(); ++i) {
    auto it = slot.find(graph.item(i).site);
    if (it == slot.end()) continue;
    item_slot[i] = it->second;
    present[it->second] = true;
  }
  for (std::size_t s = 0; s < sites.size(); ++s)
    if (!present[of[s]]) throw NotFound("site not in graph: " + sites[s]);

  // per user, tweet counts per site
  std::vector<std::map<std::size_t, double>> counts(graph.user_count());
  for (const auto& e : graph.edges())
    if (item_slot[e.item] != SIZE_MAX) counts[e.user][item_slot[e.item]] += 1.0;

  std::vector<std::vector<double>> dot(n, std::vector<double>(n, 0.0));
  for (const auto& row : counts)
    for (const auto& [a, ta] : row)
      for (const auto& [b, tb] : row) dot[a][b] += ta * tb;
  std::vector<std::vector<double>> out(sites.size(), std::vector<double>(sites.size(), 0.0));
  for (std::size_t a = 0; a < sites.size(); ++a)
    for (std::size_t b = 0; b < sites.size(); ++b) {
      const std::size_t x = of[a], y = of[b];
      const double den = std::sqrt(dot[x][x] * dot[y][y]);
      out[a][b] = den > 0 ? std::min(1.0, dot[x][y] / den) : 0.0;
    }
  return out;
}

double site_correlation(const ShareGraph& graph, std::string_view site_a, std::string_view site_b) {
  const std::string sites[] = {std::string(site_a), std::string(site_b)};
  return site_correlation_matrix(graph, sites)[0][1];
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json to_json(const SiteRow& r) {
  return {{"site", r.site}, {"n_urls", r.n_urls}, {"flagged", r.flagged}, {"pct", r.pct}};
}

std::string fmt_pct(const std::optional<double>& v, std::size_t den) {
  char buf[64];
  if (v)
    std::snprintf(buf, sizeof buf, "%6.2f", *v);
  else
    std::snprintf(buf, sizeof buf, "   n/a");
  return std::string(buf) + " (n=" + std::to_string(den) + ")";
}

}  // namespace

nlohmann::json to_json(const Metrics& m) {
  const auto& c = m.counts;
  return {{"min_shares", m.min_shares},
          {"counts", {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}, {"tn", c.tn}, {"total", c.total()}}},
          {"hoax_recall", opt(m.hoax_recall)},
          {"nonhoax_recall", opt(m.nonhoax_recall)},
          {"hoax_precision", opt(m.hoax_precision)}};
}

nlohmann::json to_json(const CrossGtResult& r) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : r.sites) sites.push_back(to_json(s));
  return {{"site_threshold_pct", r.site_threshold_pct},
          {"min_urls", r.min_urls},
          {"items", r.items},
          {"flagged_items", r.flagged_items},
          {"direct_url_pct", opt(r.direct_url_pct)},
          {"qualifying_sites", r.qualifying_sites},
          {"detected_sites", r.detected_sites},
          {"site_detect_pct", opt(r.site_detect_pct)},
          {"items_in_detected_sites", r.items_in_detected_sites},
          {"suspicious_url_pct", opt(r.suspicious_url_pct)},
          {"detected", r.detected},
          {"sites", sites}};
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& m : r.slices) slices.push_back(to_json(m));
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : r.per_site) sites.push_back(to_json(s));
  nlohmann::json j = {{"method", r.method},
                      {"dataset", r.dataset},
                      {"config", r.config},
                      {"slices", slices},
                      {"per_site", sites}};
  j["cross_gt"] = r.cross_gt ? to_json(*r.cross_gt) : nlohmann::json(nullptr);
  return j;
}

std::string to_text(const EvalReport& r) {
  std::ostringstream out;
  out << "method  " << r.method << "\ndataset " << r.dataset << "\n\n";
  out << "shares   items   hoax recall          nonhoax recall       hoax precision\n";
  for (const auto& m : r.slices) {
    const auto& c = m.counts;
    char head[32];
    std::snprintf(head, sizeof head, ">=%-5zu %6zu   ", m.min_shares, c.total());
    char cells[96];
    std::snprintf(cells, sizeof cells, "%-21s%-21s%s", fmt_pct(m.hoax_recall, c.tp + c.fn).c_str(),
                  fmt_pct(m.nonhoax_recall, c.tn + c.fp).c_str(), fmt_pct(m.hoax_precision, c.tp + c.fp).c_str());
    out << head << cells << '\n';
  }
  if (!r.per_site.empty()) {
    std::size_t w = 4;
    for (const auto& s : r.per_site) w = std::max(w, s.site.size());
    out << "\n" << std::string("site") << std::string(w - 4 + 2, ' ') << "  urls  flagged      pct\n";
    for (const auto& s : r.per_site) {
      char row[96];
      std::snprintf(row, sizeof row, "%6zu  %7zu  %6.2f%%", s.n_urls, s.flagged, s.pct);
      out << s.site << std::string(w - s.site.size() + 2, ' ') << row << '\n';
    }
  }
  if (r.cross_gt) {
    const auto& x = *r.cross_gt;
    out << "\ncross ground truth (threshold " << x.site_threshold_pct << "%, min " << x.min_urls << " urls)\n";
    out << "  urls flagged      " << fmt_pct(x.direct_url_pct, x.items) << '\n';
    out << "  sites detected    " << fmt_pct(x.site_detect_pct, x.qualifying_sites) << '\n';
    out << "  suspicious urls   " << fmt_pct(x.suspicious_url_pct, x.items) << '\n';
  }
  return out.str();
}

std::string per_site_csv(std::span<const SiteRow> rows, std::string_view method, std::string_view gt) {
  std::ostringstream out;
  out << "site,method,gt,pct,n_urls,flagged\n";
  for (const auto& r : rows) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.2f", r.pct);
    out << r.site << ',' << method << ',' << gt << ',' << pct << ',' << r.n_urls << ',' << r.flagged << '\n';
  }
  return out.str();
}

}  // namespace newsrep
