// Copyright (c) 2026 The uncerank Authors. All Rights Reserved.
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
//------------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace uncerank::io {

/// Shortest round-trip decimal representation.
std::string fmt(double v);
std::string fmt(long long v);
inline std::string fmt(int v) { return fmt(static_cast<long long>(v)); }
inline std::string fmt(long v) { return fmt(static_cast<long long>(v)); }
inline std::string fmt(bool v) { return v ? "1" : "0"; }

/// Writes via a temporary file and rename. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);
void ensure_dir(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Builds CSV text row by row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header, std::string_view comment = {});

  template <typename... Ts>
  void row(const Ts&... cells) {
    std::size_t i = 0;
    ((out_ += (i++ ? "," : "") + cell(cells)), ...);
    out_ += '\n';
  }
  void raw_row(const std::vector<std::string>& cells);

  const std::string& str() const { return out_; }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <typename T>
  static std::string cell(const T& v) {
    return fmt(v);
  }
  std::string out_;
};

/// Parsed CSV: header plus string cells. Lines starting with '#' are kept
/// as comments.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws DataError
};

CsvTable read_csv(const std::filesystem::path& path);

double to_double(const std::string& s);
long long to_int(const std::string& s);

}  // namespace uncerank::io
