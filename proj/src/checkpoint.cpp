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

#include "jagnn/checkpoint.hpp"

#include <stdexcept>

#include "jagnn/tensor_io.hpp"

namespace jagnn {

nlohmann::json manifest_of(const ModelConfig& cfg) {
  return {{"layers", cfg.layers},
          {"relations", cfg.num_relations},
          {"heads", cfg.heads},
          {"feature_dim", cfg.feature_dim},
          {"width", cfg.width},
          {"jump_depth", cfg.jump_depth},
          {"jump_aggregation", to_string(cfg.aggregation)},
          {"variant", to_string(cfg.variant)},
          {"leaky_slope", encode_hex_double(cfg.leaky_slope)}};
}

namespace {

Tensor from_eigen(const Eigen::MatrixXd& m) {
  Tensor t = Tensor::matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  }
  return t;
}

Eigen::MatrixXd to_eigen(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = t(i, j);
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  TensorBundle b;
  b.header["kind"] = "jagnn-checkpoint";
  b.header["manifest"] = manifest_of(ckpt.params.config);
  b.header["config"] = ckpt.config.to_json();
  b.header["threshold"] = encode_hex_double(ckpt.threshold);
  b.header["best_epoch"] = ckpt.best_epoch;
  nlohmann::json cov = nlohmann::json::array();
  for (std::size_t r = 0; r < ckpt.covariances.relations.size(); ++r) {
    const RelationCovariance& c = ckpt.covariances.relations[r];
    cov.push_back({{"ridge", encode_hex_double(c.ridge)},
                   {"population", c.population},
                   {"identity_fallback", c.identity_fallback}});
    b.tensors.emplace_back("cov" + std::to_string(r) + ".mean", from_eigen(c.mean));
    b.tensors.emplace_back("cov" + std::to_string(r) + ".covariance", from_eigen(c.covariance));
    b.tensors.emplace_back("cov" + std::to_string(r) + ".inverse", from_eigen(c.inverse));
  }
  b.header["covariances"] = cov;
  b.tensors.emplace_back("scaler.mean", Tensor::vector(ckpt.scaler.mean));
  b.tensors.emplace_back("scaler.scale", Tensor::vector(ckpt.scaler.scale));
  for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
    b.tensors.emplace_back("param." + ckpt.params.names[i], ckpt.params.tensors[i]);
  }
  save_tensors(path, b);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const TensorBundle b = load_tensors(path);
  try {
    if (b.header.value("kind", "") != "jagnn-checkpoint") {
      throw NumericError(path.string() + " is not a checkpoint");
    }
    Checkpoint c;
    c.config = TrainConfig::from_json(b.header.at("config"));
    const nlohmann::json& m = b.header.at("manifest");
    ModelConfig mc = c.config.model_config(m.at("feature_dim").get<std::size_t>(),
                                           m.at("relations").get<std::size_t>(),
                                           m.at("jump_depth").get<std::size_t>());
    if (manifest_of(mc) != m) {
      throw NumericError(path.string() + ": manifest does not match the stored config");
    }
    c.params = init_params(mc, InitScheme::kZeros, 0);
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      const Tensor& t = b.get("param." + c.params.names[i]);
      if (!t.same_shape(c.params.tensors[i])) {
        throw NumericError(path.string() + ": parameter " + c.params.names[i] + " has shape " +
                           shape_string(t.shape()) + ", manifest implies " +
                           shape_string(c.params.tensors[i].shape()));
      }
      c.params.tensors[i] = t;
    }
    const nlohmann::json& cov = b.header.at("covariances");
    for (std::size_t r = 0; r < cov.size(); ++r) {
      RelationCovariance rc;
      rc.mean = to_eigen(b.get("cov" + std::to_string(r) + ".mean"));
      rc.covariance = to_eigen(b.get("cov" + std::to_string(r) + ".covariance"));
      rc.inverse = to_eigen(b.get("cov" + std::to_string(r) + ".inverse"));
      rc.ridge = decode_hex_double(cov[r].at("ridge").get<std::string>());
      rc.population = cov[r].at("population").get<std::size_t>();
      rc.identity_fallback = cov[r].at("identity_fallback").get<bool>();
      c.covariances.relations.push_back(std::move(rc));
    }
    const Tensor& sm = b.get("scaler.mean");
    const Tensor& ss = b.get("scaler.scale");
    c.scaler.mean.assign(sm.data().begin(), sm.data().end());
    c.scaler.scale.assign(ss.data().begin(), ss.data().end());
    c.threshold = decode_hex_double(b.header.at("threshold").get<std::string>());
    c.best_epoch = b.header.at("best_epoch").get<std::size_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw NumericError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw NumericError(path.string() + ": " + e.what());
  }
}

}  // namespace jagnn
