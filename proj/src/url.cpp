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
#include <sstream>

#include "newsrep/ingest.hpp"

namespace newsrep {
namespace {

struct UrlParts {
  std::string scheme;
  std::string host;
  std::string port;
  std::string path;
  std::string query;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad_url(std::string_view url, const char* why) {
  throw DataError("unparseable URL '" + std::string(url) + "': " + why);
}

UrlParts split_url(std::string_view url) {
  UrlParts p;
  const auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) bad_url(url, "missing scheme");
  const std::string_view scheme = url.substr(0, sep);
  if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) bad_url(url, "bad scheme");
  for (char c : scheme)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      bad_url(url, "bad scheme");
  for (char c : url)
    if (std::isspace(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) < 0x20)
      bad_url(url, "contains whitespace");
  p.scheme = lower(scheme);

  std::string_view rest = url.substr(sep + 3);
  const auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);

  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) bad_url(url, "unterminated IPv6 literal");
    p.host = lower(authority.substr(0, close + 1));
    const std::string_view tail = authority.substr(close + 1);
    if (!tail.empty()) {
      if (tail.front() != ':') bad_url(url, "bad authority");
      p.port = std::string(tail.substr(1));
    }
  } else {
    const auto colon = authority.rfind(':');
    p.host = lower(authority.substr(0, colon));
    if (colon != std::string_view::npos) p.port = std::string(authority.substr(colon + 1));
    while (!p.host.empty() && p.host.back() == '.') p.host.pop_back();
    for (unsigned char c : p.host)
      if (!(std::isalnum(c) || c == '-' || c == '.' || c == '_' || c >= 0x80)) bad_url(url, "bad host");
  }
  if (p.host.empty()) bad_url(url, "empty host");
  for (char c : p.port)
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_url(url, "bad port");

  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    p.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  p.path = std::string(rest);
  return p;
}

bool param_stripped(std::string_view key, const CanonicalizeOptions& opts) {
  const std::string k = lower(key);
  for (const std::string& pat : opts.strip_params) {
    if (!pat.empty() && pat.back() == '*') {
      if (std::string_view(k).substr(0, pat.size() - 1) == std::string_view(pat).substr(0, pat.size() - 1))
        return true;
    } else if (k == pat) {
      return true;
    }
  }
  return false;
}

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t pos = 0;
  while (pos <= host.size()) {
    const auto dot = host.find('.', pos);
    labels.push_back(host.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return labels;
}

// Suffix made of the last n labels.
std::string_view last_labels(std::string_view host, const std::vector<std::string_view>& labels,
                             std::size_t n) {
  if (n >= labels.size()) return host;
  const std::string_view first = labels[labels.size() - n];
  return host.substr(static_cast<std::size_t>(first.data() - host.data()));
}

constexpr std::string_view kBuiltinRules = R"(// generic
com
net
org
edu
gov
mil
int
info
biz
name
pro
io
co
me
tv
ly
news
blog
online
site
xyz
us
eu
// two-level registries
uk
co.uk
org.uk
ac.uk
gov.uk
ltd.uk
plc.uk
me.uk
net.uk
au
com.au
net.au
org.au
edu.au
gov.au
jp
co.jp
ne.jp
or.jp
ac.jp
nz
co.nz
org.nz
net.nz
br
com.br
in
co.in
za
co.za
cn
com.cn
mx
com.mx
ar
com.ar
de
fr
it
es
ca
ru
nl
ch
se
ie
il
co.il
*.ck
!www.ck
// hosting
blogspot.com
wordpress.com
tumblr.com
github.io
herokuapp.com
substack.com
)";

}  // namespace

std::string normalize_url(std::string_view url, const CanonicalizeOptions& opts) {
  UrlParts p = split_url(url);
  std::string out = p.scheme + "://" + p.host;
  if (!p.port.empty()) out += ":" + p.port;
  while (!p.path.empty() && p.path.back() == '/') p.path.pop_back();
  out += p.path;

  std::string query;
  std::size_t pos = 0;
  while (pos <= p.query.size() && !p.query.empty()) {
    const auto amp = p.query.find('&', pos);
    const std::string_view param =
        std::string_view(p.query).substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    if (!param.empty() && !param_stripped(param.substr(0, param.find('=')), opts)) {
      if (!query.empty()) query += '&';
      query += param;
    }
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  if (!query.empty()) out += "?" + query;
  return out;
}

std::string url_host(std::string_view url) {
  std::string host = split_url(url).host;
  if (host.size() > 1 && host.front() == '[') host = host.substr(1, host.size() - 2);
  return host;
}

bool is_ip_literal(std::string_view host) {
  if (host.find(':') != std::string_view::npos) return true;  // IPv6
  const auto labels = split_labels(host);
  if (labels.size() != 4) return false;
  for (std::string_view l : labels) {
    if (l.empty() || l.size() > 3) return false;
    for (char c : l)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    if (std::stoi(std::string(l)) > 255) return false;
  }
  return true;
}

PublicSuffixList PublicSuffixList::from_text(std::string_view text) {
  PublicSuffixList psl;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    // A rule ends at the first whitespace.
    const auto end = line.find_first_of(" \t\r");
    std::string rule = lower(line.substr(0, end));
    if (rule.empty() || rule.rfind("//", 0) == 0) continue;
    if (rule[0] == '!') {
      psl.exceptions_.insert(rule.substr(1));
    } else if (rule.rfind("*.", 0) == 0) {
      psl.wildcards_.insert(rule.substr(2));
    } else {
      psl.rules_.insert(rule);
    }
  }
  return psl;
}

PublicSuffixList PublicSuffixList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read public suffix list " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

const PublicSuffixList& PublicSuffixList::builtin() {
  static const PublicSuffixList psl = from_text(kBuiltinRules);
  return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view host) const {
  const auto labels = split_labels(host);
  // Longest matching rule; an exception rule's suffix is the rule minus its
  // leftmost label.
  for (std::size_t n = labels.size(); n >= 1; --n) {
    const std::string_view cand = last_labels(host, labels, n);
    if (exceptions_.count(cand)) return std::string(last_labels(host, labels, n - 1));
    if (rules_.count(cand)) return std::string(cand);
    if (n >= 2 && wildcards_.count(last_labels(host, labels, n - 1))) return std::string(cand);
  }
  return std::string(labels.back());
}

std::string PublicSuffixList::registered_domain(std::string_view host) const {
  if (is_ip_literal(host)) return std::string(host);
  const std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return std::string(host);
  const auto labels = split_labels(host);
  const auto suffix_labels = split_labels(suffix).size();
  return std::string(last_labels(host, labels, suffix_labels + 1));
}

std::string extract_site(std::string_view canonical_url, const PublicSuffixList& psl) {
  return psl.registered_domain(url_host(canonical_url));
}

}  // namespace newsrep
