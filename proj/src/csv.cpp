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

#include "jagnn/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "jagnn/graphstore.hpp"

namespace jagnn::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    const auto piece = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
    out.emplace_back(trim(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Reader::Reader(const std::filesystem::path& path) : in_(path), path_(path.string()) {
  if (!in_) throw GraphError("cannot open " + path_);
  if (!read_row(header_)) fail("missing header row");
}

bool Reader::read_row(std::vector<std::string>& out) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    const auto body = trim(raw);
    if (body.empty() || body.front() == '#') continue;
    out = split(body);
    return true;
  }
  return false;
}

bool Reader::next() { return read_row(fields_); }

void Reader::fail(std::string_view what) const {
  throw GraphError(path_ + ":" + std::to_string(line_) + ": " + std::string(what));
}

std::int64_t Reader::as_int(std::size_t column) const {
  if (column >= fields_.size()) fail("missing column " + std::to_string(column));
  const std::string& s = fields_[column];
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail("malformed integer '" + s + "'");
  return value;
}

double Reader::as_double(std::size_t column) const {
  if (column >= fields_.size()) fail("missing column " + std::to_string(column));
  const std::string& s = fields_[column];
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) fail("malformed number '" + s + "'");
  if (!std::isfinite(value)) fail("non-finite number '" + s + "'");
  return value;
}

}  // namespace jagnn::csv
