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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newsrep/common.hpp"

namespace newsrep {

using ItemIndex = std::uint32_t;
using UserIndex = std::uint32_t;

struct NewsItem {
  std::string item_id;
  std::string canonical_url;
  std::string site;
  std::string title;
  std::string description;
  Date first_seen{};
};

struct UserNode {
  std::string user_id;
  std::string username;
};

/// One tweet of an item by a user. Repeats are kept; neighborhoods are not.
struct ShareEdge {
  ItemIndex item;
  UserIndex user;
  Timestamp ts;
};

/// Bipartite items x users share graph.
///
/// Nodes get dense indices in insertion order; external ids live in side maps.
/// Neighborhoods hold distinct neighbors, sorted by index, while the raw edge
/// list keeps every tweet (tweet multiplicity matters for site correlation and
/// topic-model document bags). Mutation is single-writer; once `freeze()` has
/// been called the graph rejects further writes and may be read concurrently.
class ShareGraph {
 public:
  /// Inserts the item if its id is new; an existing item keeps its metadata.
  ItemIndex add_item(const NewsItem& item);
  UserIndex add_user(const UserNode& user);

  void add_share(const NewsItem& item, const UserNode& user, Timestamp ts);
  void add_share(ItemIndex item, UserIndex user, Timestamp ts);

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  std::size_t item_count() const noexcept { return items_.size(); }
  std::size_t user_count() const noexcept { return users_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t pair_count() const noexcept { return pairs_; }

  const NewsItem& item(ItemIndex i) const { return items_.at(i); }
  const UserNode& user(UserIndex u) const { return users_.at(u); }
  std::span<const NewsItem> items() const noexcept { return items_; }
  std::span<const UserNode> users() const noexcept { return users_; }
  std::span<const ShareEdge> edges() const noexcept { return edges_; }

  std::optional<ItemIndex> find_item(std::string_view item_id) const;
  std::optional<UserIndex> find_user(std::string_view user_id) const;
  /// Throwing lookups.
  ItemIndex item_index(std::string_view item_id) const;
  UserIndex user_index(std::string_view user_id) const;

  std::span<const UserIndex> item_neighbors(ItemIndex i) const { return item_adj_.at(i); }
  std::span<const ItemIndex> user_neighbors(UserIndex u) const { return user_adj_.at(u); }
  std::size_t share_count(ItemIndex i) const { return item_adj_.at(i).size(); }

  /// Distinct sharers of an item as external ids, sorted.
  std::vector<std::string> neighborhood_item(std::string_view item_id) const;
  std::vector<std::string> neighborhood_user(std::string_view user_id) const;
  std::size_t share_count(std::string_view item_id) const;

 private:
  void require_mutable() const;

  std::vector<NewsItem> items_;
  std::vector<UserNode> users_;
  std::vector<ShareEdge> edges_;
  std::vector<std::vector<UserIndex>> item_adj_;
  std::vector<std::vector<ItemIndex>> user_adj_;
  std::unordered_map<std::string, ItemIndex> item_ids_;
  std::unordered_map<std::string, UserIndex> user_ids_;
  std::size_t pairs_ = 0;
  bool frozen_ = false;
};

/// Snapshot files written under one directory.
inline constexpr std::string_view kEdgesFile = "edges.tsv";
inline constexpr std::string_view kItemsFile = "items.jsonl";
inline constexpr std::string_view kUsersFile = "users.tsv";

/// Writes `edges.tsv` (item_id, user_id, ISO-8601 timestamp), `items.jsonl`
/// and `users.tsv` (user_id, username).
void write_snapshot(const ShareGraph& graph, const std::filesystem::path& dir);
/// Reads a snapshot back; the result is frozen. `users.tsv` is optional.
ShareGraph read_snapshot(const std::filesystem::path& dir);

}  // namespace newsrep
