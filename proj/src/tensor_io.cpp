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

#include "jagnn/tensor_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace jagnn {

const Tensor& TensorBundle::get(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw NumericError("tensor bundle has no entry '" + name + "'");
}

bool TensorBundle::contains(const std::string& name) const {
  for (const auto& entry : tensors) {
    if (entry.first == name) return true;
  }
  return false;
}

std::string encode_hex_double(double value) {
  if (!std::isfinite(value)) throw NumericError("cannot encode non-finite value");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double decode_hex_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw NumericError("malformed hex-float value '" + text + "'");
  }
  return v;
}

nlohmann::json bundle_to_json(const TensorBundle& bundle) {
  nlohmann::json doc;
  doc["format"] = "jagnn-tensors";
  doc["version"] = kTensorFormatVersion;
  doc["header"] = bundle.header;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, t] : bundle.tensors) {
    nlohmann::json data = nlohmann::json::array();
    for (double x : t.data()) data.push_back(encode_hex_double(x));
    list.push_back({{"name", name}, {"shape", t.shape()}, {"data", std::move(data)}});
  }
  doc["tensors"] = std::move(list);
  return doc;
}

TensorBundle bundle_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "jagnn-tensors") {
    throw NumericError("not a jagnn tensor file");
  }
  const int version = doc.value("version", -1);
  if (version != kTensorFormatVersion) {
    throw NumericError("unsupported tensor format version " + std::to_string(version));
  }
  TensorBundle bundle;
  bundle.header = doc.at("header");
  for (const auto& entry : doc.at("tensors")) {
    auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    std::vector<double> data;
    for (const auto& x : entry.at("data")) data.push_back(decode_hex_double(x.get<std::string>()));
    bundle.tensors.emplace_back(entry.at("name").get<std::string>(),
                                Tensor(std::move(shape), std::move(data)));
  }
  return bundle;
}

void save_tensors(const std::filesystem::path& path, const TensorBundle& bundle) {
  std::ofstream out(path);
  if (!out) throw NumericError("cannot write " + path.string());
  out << bundle_to_json(bundle).dump(1) << '\n';
  if (!out) throw NumericError("write failed for " + path.string());
}

TensorBundle load_tensors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NumericError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw NumericError(path.string() + ": " + e.what());
  }
  try {
    return bundle_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw NumericError(path.string() + ": " + e.what());
  }
}

}  // namespace jagnn
