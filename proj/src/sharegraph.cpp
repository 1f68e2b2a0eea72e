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

#include "newsrep/sharegraph.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace newsrep {
namespace {

template <typename T>
bool insert_sorted(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

}  // namespace

void ShareGraph::require_mutable() const {
  if (frozen_) throw UsageError("share graph is frozen");
}

ItemIndex ShareGraph::add_item(const NewsItem& item) {
  require_mutable();
  if (item.canonical_url.empty()) throw DataError("item '" + item.item_id + "' has an empty canonical URL");
  if (item.item_id.empty()) throw DataError("item with URL '" + item.canonical_url + "' has an empty id");
  auto [it, inserted] = item_ids_.try_emplace(item.item_id, static_cast<ItemIndex>(items_.size()));
  if (inserted) {
    items_.push_back(item);
    item_adj_.emplace_back();
  }
  return it->second;
}

UserIndex ShareGraph::add_user(const UserNode& user) {
  require_mutable();
  if (user.user_id.empty()) throw DataError("user with an empty id");
  auto [it, inserted] = user_ids_.try_emplace(user.user_id, static_cast<UserIndex>(users_.size()));
  if (inserted) {
    users_.push_back(user);
    user_adj_.emplace_back();
  }
  return it->second;
}

void ShareGraph::add_share(const NewsItem& item, const UserNode& user, Timestamp ts) {
  const ItemIndex i = add_item(item);
  const UserIndex u = add_user(user);
  add_share(i, u, ts);
}

void ShareGraph::add_share(ItemIndex i, UserIndex u, Timestamp ts) {
  require_mutable();
  if (i >= items_.size() || u >= users_.size()) throw NotFound("share references an unknown node");
  edges_.push_back({i, u, ts});
  if (insert_sorted(item_adj_[i], u)) {
    insert_sorted(user_adj_[u], i);
    ++pairs_;
  }
}

std::optional<ItemIndex> ShareGraph::find_item(std::string_view item_id) const {
  auto it = item_ids_.find(std::string(item_id));
  if (it == item_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<UserIndex> ShareGraph::find_user(std::string_view user_id) const {
  auto it = user_ids_.find(std::string(user_id));
  if (it == user_ids_.end()) return std::nullopt;
  return it->second;
}

ItemIndex ShareGraph::item_index(std::string_view item_id) const {
  if (auto i = find_item(item_id)) return *i;
  throw NotFound("unknown item '" + std::string(item_id) + "'");
}

UserIndex ShareGraph::user_index(std::string_view user_id) const {
  if (auto u = find_user(user_id)) return *u;
  throw NotFound("unknown user '" + std::string(user_id) + "'");
}

std::vector<std::string> ShareGraph::neighborhood_item(std::string_view item_id) const {
  std::vector<std::string> out;
  for (UserIndex u : item_neighbors(item_index(item_id))) out.push_back(users_[u].user_id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ShareGraph::neighborhood_user(std::string_view user_id) const {
  std::vector<std::string> out;
  for (ItemIndex i : user_neighbors(user_index(user_id))) out.push_back(items_[i].item_id);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ShareGraph::share_count(std::string_view item_id) const {
  return share_count(item_index(item_id));
}

void write_snapshot(const ShareGraph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / kItemsFile);
    if (!out) throw IoError("cannot write " + (dir / kItemsFile).string());
    for (const NewsItem& it : graph.items()) {
      nlohmann::json j = {{"item_id", it.item_id},         {"canonical_url", it.canonical_url},
                          {"site", it.site},               {"title", it.title},
                          {"description", it.description}, {"first_seen", format_date(it.first_seen)}};
      out << j.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / kUsersFile);
    if (!out) throw IoError("cannot write " + (dir / kUsersFile).string());
    for (const UserNode& u : graph.users()) out << u.user_id << '\t' << u.username << '\n';
  }
  std::ofstream out(dir / kEdgesFile);
  if (!out) throw IoError("cannot write " + (dir / kEdgesFile).string());
  for (const ShareEdge& e : graph.edges())
    out << graph.item(e.item).item_id << '\t' << graph.user(e.user).user_id << '\t'
        << format_timestamp(e.ts) << '\n';
}

ShareGraph read_snapshot(const std::filesystem::path& dir) {
  ShareGraph g;
  std::ifstream items(dir / kItemsFile);
  if (!items) throw IoError("cannot read " + (dir / kItemsFile).string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(items, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      NewsItem it;
      it.item_id = j.at("item_id").get<std::string>();
      it.canonical_url = j.at("canonical_url").get<std::string>();
      it.site = j.at("site").get<std::string>();
      it.title = j.value("title", "");
      it.description = j.value("description", "");
      it.first_seen = parse_date(j.at("first_seen").get<std::string>());
      g.add_item(it);
    } catch (const nlohmann::json::exception& e) {
      throw DataError((dir / kItemsFile).string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }

  if (std::ifstream users(dir / kUsersFile); users) {
    lineno = 0;
    while (std::getline(users, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0)
        throw DataError((dir / kUsersFile).string() + ":" + std::to_string(lineno) + ": expected user_id<TAB>username");
      g.add_user({line.substr(0, tab), line.substr(tab + 1)});
    }
  }

  std::ifstream edges(dir / kEdgesFile);
  if (!edges) throw IoError("cannot read " + (dir / kEdgesFile).string());
  lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const std::string where = (dir / kEdgesFile).string() + ":" + std::to_string(lineno) + ": ";
    if (t2 == std::string::npos) throw DataError(where + "expected item_id<TAB>user_id<TAB>timestamp");
    const auto item = g.find_item(std::string_view(line).substr(0, t1));
    if (!item) throw DataError(where + "edge references an item missing from " + std::string(kItemsFile));
    const std::string user_id = line.substr(t1 + 1, t2 - t1 - 1);
    UserIndex u;
    if (auto found = g.find_user(user_id)) {
      u = *found;
    } else {
      u = g.add_user({user_id, user_id});
    }
    try {
      g.add_share(*item, u, parse_timestamp(std::string_view(line).substr(t2 + 1)));
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  g.freeze();
  return g;
}

}  // namespace newsrep
