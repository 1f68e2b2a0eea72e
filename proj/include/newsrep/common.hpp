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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>
#include <stdexcept>
#include <string>
#include <string_view>

namespace newsrep {

/// Failure categories; the C API maps each one onto a status code.
enum class ErrorKind { usage, data, not_found, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error(ErrorKind::not_found, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

/// Accepts `YYYY-MM-DDTHH:MM:SS` with an optional `Z`, `+00:00` suffix or
/// fractional seconds, and the bare date `YYYY-MM-DD` (midnight UTC).
Timestamp parse_timestamp(std::string_view text);
Date parse_date(std::string_view text);
std::string format_timestamp(Timestamp ts);
std::string format_date(Date d);

inline Date day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

/// 64-bit FNV-1a, used for report fingerprints and seed derivation.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Raw little-endian float64 arrays, the binary side of model files.
void write_f64(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_f64(const std::filesystem::path& path);

}  // namespace newsrep
