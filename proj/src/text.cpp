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

#include <fstream>

#include "newsrep/ingest.hpp"

namespace newsrep {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at `pos`; advances `pos`. Malformed
// input yields kInvalid and consumes a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len;
  char32_t cp;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + len > s.size()) {
    ++pos;
    return kInvalid;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Letters, digits and combining marks. Outside ASCII this is a block-level
// approximation: punctuation, symbol, emoji and private-use blocks separate
// words, everything else is treated as a letter.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp == kInvalid) return false;
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xE000 && cp <= 0xF8FF) return false;
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;
  return true;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

std::string lower_utf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = next_code_point(s, pos);
    if (cp == kInvalid)
      out.append(s.substr(start, pos - start));
    else
      append_utf8(out, to_lower(cp));
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Lowercased word with surrounding punctuation and a possessive 's removed.
std::string mention_key(std::string_view word) {
  std::string w = lower_utf8(word);
  auto edge = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && !std::isalnum(u);
  };
  std::size_t b = 0, e = w.size();
  while (b < e && edge(w[b])) ++b;
  while (e > b && edge(w[e - 1])) --e;
  w = w.substr(b, e - b);
  for (std::string_view poss : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
    if (w.size() > poss.size() && std::string_view(w).substr(w.size() - poss.size()) == poss) {
      w.resize(w.size() - poss.size());
      break;
    }
  }
  return w;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// True for the site itself, a subdomain of it, or a URL/path on it.
bool mentions_site(std::string_view key, std::string_view site) {
  if (site.empty()) return false;
  std::string_view host = key;
  if (auto p = host.find("://"); p != std::string_view::npos) host = host.substr(p + 3);
  host = host.substr(0, host.find_first_of("/?#"));
  if (host == site) return true;
  return host.size() > site.size() && ends_with(host, site) && host[host.size() - site.size() - 1] == '.';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  std::size_t cur_len = 0;
  auto flush = [&] {
    if (cur_len >= 2) tokens.push_back(cur);
    cur.clear();
    cur_len = 0;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = next_code_point(text, pos);
    if (is_word_char(cp)) {
      append_utf8(cur, to_lower(cp));
      ++cur_len;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string scrub_site_mentions(std::string_view text, std::string_view site,
                                const std::vector<std::string>& aliases) {
  const std::string site_key = lower_utf8(site);
  std::vector<std::vector<std::string>> patterns;
  if (!site_key.empty()) {
    const auto& psl = PublicSuffixList::builtin();
    const std::string suffix = psl.public_suffix(site_key);
    if (site_key.size() > suffix.size() + 1) {
      const std::string stem = site_key.substr(0, site_key.size() - suffix.size() - 1);
      patterns.push_back({stem});
    }
  }
  for (const std::string& alias : aliases) {
    std::vector<std::string> words;
    for (std::string_view w : split_ws(alias)) {
      std::string k = mention_key(w);
      if (!k.empty()) words.push_back(std::move(k));
    }
    if (!words.empty()) patterns.push_back(std::move(words));
  }

  const auto words = split_ws(text);
  std::vector<std::string> keys;
  keys.reserve(words.size());
  for (std::string_view w : words) keys.push_back(mention_key(w));

  std::string out;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t drop = 0;
    if (mentions_site(keys[i], site_key)) drop = 1;
    for (const auto& pat : patterns) {
      if (pat.size() <= drop || i + pat.size() > words.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < pat.size() && match; ++k) match = keys[i + k] == pat[k];
      if (match) drop = pat.size();
    }
    if (drop > 0) {
      i += drop;
      continue;
    }
    if (!out.empty()) out += ' ';
    out += words[i];
    ++i;
  }
  return out;
}

AliasMap load_aliases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read alias file " + path.string());
  AliasMap out;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw DataError(path.string() + ": expected a JSON object site -> [aliases]");
    for (const auto& [site, list] : j.items()) {
      auto& dst = out[lower_utf8(site)];
      for (const auto& a : list) dst.push_back(a.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace newsrep
