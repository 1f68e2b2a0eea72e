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

#include "newsrep/common.hpp"

#include <cctype>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace newsrep {
namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) throw DataError("truncated timestamp: '" + std::string(text) + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw DataError("bad timestamp: '" + std::string(text) + "'");
    v = v * 10 + (text[i] - '0');
  }
  return v;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c)
    throw DataError("bad timestamp: '" + std::string(text) + "'");
}

}  // namespace

Date parse_date(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 10) throw DataError("bad date: '" + std::string(text) + "'");
  const int y = read_digits(text, 0, 4);
  expect(text, 4, '-');
  const int m = read_digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = read_digits(text, 8, 2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw DataError("invalid calendar date: '" + std::string(text) + "'");
  return sys_days{ymd};
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const Date d = parse_date(text);
  if (text.size() == 10) return Timestamp{d};
  if (text[10] != 'T' && text[10] != ' ') throw DataError("bad timestamp: '" + std::string(text) + "'");
  const int hh = read_digits(text, 11, 2);
  expect(text, 13, ':');
  const int mm = read_digits(text, 14, 2);
  expect(text, 16, ':');
  const int ss = read_digits(text, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) throw DataError("bad time of day: '" + std::string(text) + "'");
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  const std::string_view zone = text.substr(pos);
  if (!(zone.empty() || zone == "Z" || zone == "+00:00" || zone == "+0000"))
    throw DataError("non-UTC timestamp: '" + std::string(text) + "'");
  return Timestamp{d} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const Date d = day_of(ts);
  const hh_mm_ss tod{ts - d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(d).c_str(),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_f64(const std::filesystem::path& path, std::span<const double> values) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts need byte swapping here");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<double> read_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot read " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % sizeof(double) != 0) throw DataError(path.string() + ": size is not a multiple of 8 bytes");
  std::vector<double> values(bytes / sizeof(double));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
  return values;
}

}  // namespace newsrep
