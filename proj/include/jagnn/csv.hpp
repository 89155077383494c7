// Copyright 2026 The JA-GNN Authors
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
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace jagnn::csv {

// Minimal reader for the comma-separated graph files: header row required,
// '#' comment lines and blank lines skipped, no quoting.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  // Advances to the next data row; false at end of file.
  bool next();
  const std::vector<std::string>& fields() const { return fields_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

  // Throws GraphError with "<file>:<line>: <what>".
  [[noreturn]] void fail(std::string_view what) const;

  std::int64_t as_int(std::size_t column) const;
  double as_double(std::size_t column) const;

 private:
  bool read_row(std::vector<std::string>& out);

  std::ifstream in_;
  std::string path_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace jagnn::csv
