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
#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "newsrep/ingest.hpp"

namespace newsrep {
namespace {

std::optional<std::string> opt_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string id_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw DataError(std::string("missing field '") + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw DataError(std::string("field '") + key + "' is neither a string nor an integer");
}

std::string lower_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Minimal RFC 4180 field splitter (quoted fields, doubled quotes).
std::vector<std::string> split_csv(std::string_view line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(lineno) + ": unbalanced quote");
  fields.push_back(trim(cur));
  return fields;
}

std::string normalize_site(std::string_view raw, std::size_t lineno) {
  std::string s = lower_ascii(std::string(raw));
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw DataError("line " + std::to_string(lineno) + ": site '" + std::string(raw) + "' contains whitespace");
  if (s.find("://") == std::string::npos) s = "http://" + s;
  try {
    return extract_site(s);
  } catch (const DataError&) {
    throw DataError("line " + std::to_string(lineno) + ": bad site '" + std::string(raw) + "'");
  }
}

}  // namespace

RawRecord parse_record(std::string_view json_line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record is not a JSON object");
  RawRecord r;
  r.tweet_id = id_field(j, "tweet_id");
  r.user_id = id_field(j, "user_id");
  r.username = opt_string(j, "username").value_or(r.user_id);
  const auto ts = opt_string(j, "timestamp");
  if (!ts) throw DataError("missing field 'timestamp'");
  r.timestamp = parse_timestamp(*ts);
  r.raw_url = opt_string(j, "raw_url").value_or("");
  r.og_url = opt_string(j, "og_url");
  if (r.og_url && r.og_url->empty()) r.og_url.reset();
  r.og_title = opt_string(j, "og_title");
  r.og_description = opt_string(j, "og_description");
  if (r.raw_url.empty() && !r.og_url) throw DataError("record has neither raw_url nor og_url");
  if (r.user_id.empty()) throw DataError("empty user_id");
  return r;
}

nlohmann::json record_to_json(const RawRecord& r) {
  nlohmann::json j = {{"tweet_id", r.tweet_id},
                      {"user_id", r.user_id},
                      {"username", r.username},
                      {"timestamp", format_timestamp(r.timestamp)},
                      {"raw_url", r.raw_url}};
  j["og_url"] = r.og_url ? nlohmann::json(*r.og_url) : nlohmann::json(nullptr);
  j["og_title"] = r.og_title ? nlohmann::json(*r.og_title) : nlohmann::json(nullptr);
  j["og_description"] = r.og_description ? nlohmann::json(*r.og_description) : nlohmann::json(nullptr);
  return j;
}

std::string canonicalize(const RawRecord& record, const CanonicalizeOptions& opts) {
  if (record.og_url) {
    try {
      return normalize_url(*record.og_url, opts);
    } catch (const DataError&) {
      if (record.raw_url.empty()) throw;
    }
  }
  return normalize_url(record.raw_url, opts);
}

IngestResult ingest_records(std::istream& in, const CanonicalizeOptions& opts, const PublicSuffixList& psl) {
  struct Parsed {
    RawRecord rec;
    std::string url;
  };
  struct Meta {
    NewsItem item;
    Timestamp title_ts = Timestamp::max();
    Timestamp desc_ts = Timestamp::max();
    Timestamp first = Timestamp::max();
  };

  IngestResult result;
  std::vector<Parsed> parsed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++result.records;
    try {
      RawRecord r = parse_record(line);
      std::string url = canonicalize(r, opts);
      parsed.push_back({std::move(r), std::move(url)});
    } catch (const DataError& e) {
      result.rejections.push_back({lineno, e.what()});
    }
  }

  std::vector<std::string> order;
  std::unordered_map<std::string, Meta> meta;
  for (const Parsed& p : parsed) {
    auto [it, inserted] = meta.try_emplace(p.url);
    Meta& m = it->second;
    if (inserted) {
      order.push_back(p.url);
      m.item.item_id = p.url;
      m.item.canonical_url = p.url;
      m.item.site = psl.registered_domain(url_host(p.url));
    }
    m.first = std::min(m.first, p.rec.timestamp);
    // Earliest record wins; ties keep file order.
    if (p.rec.og_title && !p.rec.og_title->empty() && p.rec.timestamp < m.title_ts) {
      m.item.title = *p.rec.og_title;
      m.title_ts = p.rec.timestamp;
    }
    if (p.rec.og_description && !p.rec.og_description->empty() && p.rec.timestamp < m.desc_ts) {
      m.item.description = *p.rec.og_description;
      m.desc_ts = p.rec.timestamp;
    }
  }
  for (const std::string& url : order) {
    Meta& m = meta[url];
    m.item.first_seen = day_of(m.first);
    result.graph.add_item(m.item);
  }
  for (const Parsed& p : parsed) {
    const UserIndex u = result.graph.add_user({p.rec.user_id, p.rec.username});
    result.graph.add_share(result.graph.item_index(p.url), u, p.rec.timestamp);
  }
  result.graph.freeze();
  return result;
}

IngestResult ingest_records(const std::filesystem::path& path, const CanonicalizeOptions& opts,
                            const PublicSuffixList& psl) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read records file " + path.string());
  return ingest_records(in, opts, psl);
}

GroundTruth parse_ground_truth(std::istream& in, const std::optional<std::set<std::string>>& type_filter,
                               std::string name) {
  std::set<std::string> filter;
  if (type_filter)
    for (const std::string& t : *type_filter) filter.insert(lower_ascii(t));

  GroundTruth gt;
  gt.name = std::move(name);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_csv(t, lineno);
    if (fields[0].empty()) throw DataError("line " + std::to_string(lineno) + ": empty site field");
    if (lineno == 1 && lower_ascii(fields[0]) == "site") continue;
    if (type_filter) {
      bool keep = false;
      for (std::size_t k = 1; k < fields.size() && !keep; ++k) keep = filter.count(lower_ascii(fields[k])) > 0;
      if (!keep) continue;
    }
    gt.sites.insert(normalize_site(fields[0], lineno));
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path,
                              const std::optional<std::set<std::string>>& type_filter, std::string name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read ground-truth file " + path.string());
  if (name.empty()) name = path.stem().string();
  try {
    return parse_ground_truth(in, type_filter, std::move(name));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::set<std::string> overlap(const GroundTruth& a, const GroundTruth& b) {
  std::set<std::string> out;
  for (const auto& s : a.sites)
    if (b.contains(s)) out.insert(s);
  return out;
}

void SplitSpec::validate() const {
  if (start > end) throw UsageError("split '" + name + "': start after end");
  if (day_stride < 1) throw UsageError("split '" + name + "': day_stride must be >= 1");
  if (day_offset < 0) throw UsageError("split '" + name + "': day_offset must be >= 0");
  if (min_shares < 1) throw UsageError("split '" + name + "': min_shares must be >= 1");
}

nlohmann::json SplitSpec::to_json() const {
  nlohmann::json j = {{"name", name},
                      {"start", format_date(start)},
                      {"end", format_date(end)},
                      {"day_stride", day_stride},
                      {"day_offset", day_offset},
                      {"min_shares", min_shares}};
  j["tweet_cutoff"] = tweet_cutoff ? nlohmann::json(format_timestamp(*tweet_cutoff)) : nlohmann::json(nullptr);
  nlohmann::json days = nlohmann::json::array();
  for (Date d : explicit_days) days.push_back(format_date(d));
  j["explicit_days"] = days;
  return j;
}

SplitSpec SplitSpec::from_json(const nlohmann::json& j) {
  SplitSpec s;
  try {
    s.name = j.value("name", "split");
    s.start = parse_date(j.at("start").get<std::string>());
    s.end = parse_date(j.at("end").get<std::string>());
    if (j.contains("tweet_cutoff") && !j["tweet_cutoff"].is_null())
      s.tweet_cutoff = parse_timestamp(j["tweet_cutoff"].get<std::string>());
    s.day_stride = j.value("day_stride", 1);
    s.day_offset = j.value("day_offset", 0);
    s.min_shares = j.value("min_shares", 1);
    if (j.contains("explicit_days"))
      for (const auto& d : j["explicit_days"]) s.explicit_days.push_back(parse_date(d.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad split spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::size_t Dataset::count(Label l) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l)); }

nlohmann::json Dataset::manifest() const {
  return {{"name", name},
          {"spec", spec.to_json()},
          {"items", graph.item_count()},
          {"users", graph.user_count()},
          {"tweets", graph.edge_count()},
          {"labels", {{"hoax", count(Label::hoax)}, {"nonhoax", count(Label::nonhoax)}}},
          {"warnings", warnings}};
}

std::vector<Label> label_items(const ShareGraph& graph, const GroundTruth& gt) {
  std::vector<Label> labels;
  labels.reserve(graph.item_count());
  for (const NewsItem& it : graph.items()) labels.push_back(gt.contains(it.site) ? Label::hoax : Label::nonhoax);
  return labels;
}

Dataset build_split(const ShareGraph& graph, const SplitSpec& spec, const GroundTruth& gt) {
  spec.validate();
  if (!graph.frozen()) throw UsageError("build_split needs a frozen graph");

  auto day_selected = [&](Date d) {
    if (d < spec.start || d > spec.end) return false;
    if (!spec.explicit_days.empty())
      return std::find(spec.explicit_days.begin(), spec.explicit_days.end(), d) != spec.explicit_days.end();
    const long idx = (d - spec.start).count() - spec.day_offset;
    return idx >= 0 && idx % spec.day_stride == 0;
  };
  auto edge_kept = [&](const ShareEdge& e) { return !spec.tweet_cutoff || e.ts < *spec.tweet_cutoff; };

  std::vector<char> in_window(graph.item_count(), 0);
  for (ItemIndex i = 0; i < graph.item_count(); ++i) in_window[i] = day_selected(graph.item(i).first_seen);

  // Distinct sharers after the cutoff filter.
  std::vector<std::vector<UserIndex>> sharers(graph.item_count());
  for (const ShareEdge& e : graph.edges())
    if (in_window[e.item] && edge_kept(e)) sharers[e.item].push_back(e.user);
  std::vector<char> keep(graph.item_count(), 0);
  for (ItemIndex i = 0; i < graph.item_count(); ++i) {
    if (!in_window[i]) continue;
    auto& s = sharers[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    keep[i] = static_cast<long>(s.size()) >= spec.min_shares;
  }

  Dataset ds;
  ds.name = spec.name;
  ds.spec = spec;
  for (ItemIndex i = 0; i < graph.item_count(); ++i)
    if (keep[i]) ds.graph.add_item(graph.item(i));
  for (const ShareEdge& e : graph.edges()) {
    if (!keep[e.item] || !edge_kept(e)) continue;
    const UserIndex u = ds.graph.add_user(graph.user(e.user));
    ds.graph.add_share(ds.graph.item_index(graph.item(e.item).item_id), u, e.ts);
  }
  ds.graph.freeze();
  ds.labels = label_items(ds.graph, gt);
  if (ds.graph.item_count() == 0)
    ds.warnings.push_back("split '" + spec.name + "' selected no items (window " + format_date(spec.start) + " .. " +
                          format_date(spec.end) + ")");
  return ds;
}

}  // namespace newsrep
