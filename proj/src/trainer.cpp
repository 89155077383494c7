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

#include "jagnn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "jagnn/adam.hpp"
#include "jagnn/kernels.hpp"

namespace jagnn {

nlohmann::json EpochLog::to_json() const {
  return {{"epoch", epoch},
          {"train_loss", train_loss},
          {"val_auc", val_auc},
          {"val_recall", val_recall},
          {"elapsed_ms", elapsed_ms}};
}

nlohmann::json EvalReport::to_json() const {
  return {{"auc", auc},     {"recall", recall}, {"f1", f1},
          {"threshold", threshold}, {"n_pos", n_pos}, {"n_neg", n_neg}};
}

EvalReport evaluate(const ModelParams& params, const PreparedData& data, Split split,
                    std::size_t batch_size, const double* threshold) {
  const Phase& phase = data.phase(split);
  const std::vector<NodeId> anchors = labeled(phase.graph, data.anchors(split));
  const std::vector<int> y = labels_of(phase.graph, anchors);
  const std::vector<double> p = predict(params, data.features, phase.samples, anchors, batch_size);
  EvalReport r;
  for (int v : y) (v ? r.n_pos : r.n_neg) += 1;
  if (r.n_pos == 0 || r.n_neg == 0) {
    throw std::invalid_argument("split needs both classes for evaluation");
  }
  r.auc = roc_auc(p, y);
  const PrThreshold best = pr_threshold(p, y);
  r.threshold = threshold ? *threshold : best.threshold;
  r.recall = recall_at(p, y, r.threshold);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= r.threshold) (y[i] ? tp : fp) += 1;
  }
  r.f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + (r.n_pos - tp));
  return r;
}

TrainResult train(const PreparedData& data, const TrainConfig& cfg, std::size_t depth,
                  const TrainHooks& hooks) {
  cfg.validate();
  if (cfg.threads > 0) kernels::set_threads(cfg.threads);
  const TransactionGraph& g = data.train.graph;
  const ModelConfig mc = cfg.model_config(g.feature_dim(), g.num_relations(), depth);
  ModelParams params = init_params(mc, cfg.init, cfg.seed);
  AdamState adam = adam_init(params.tensors);
  const AdamConfig acfg{cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};
  const std::vector<NodeId> train_anchors = labeled(g, data.splits.train);

  TrainResult result;
  result.params = params;
  result.best_val_auc = -1.0;
  std::size_t since_best = 0;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto batches = balanced_batches(g, train_anchors, cfg.batch_size, cfg.seed, epoch,
                                          cfg.max_batches_per_epoch);
    double loss_sum = 0.0;
    for (const std::vector<NodeId>& batch : batches) {
      if (hooks.on_batch) hooks.on_batch(epoch, batch);
      const BatchPlan plan = build_plan(mc, data.train.samples, batch);
      Tape tape;
      std::vector<Var> vars;
      vars.reserve(params.size());
      for (const Tensor& t : params.tensors) vars.push_back(tape.variable(t));
      const ForwardResult fr = forward(tape, mc, vars, data.features, plan);
      Tensor labels({batch.size()});
      for (std::size_t i = 0; i < batch.size(); ++i) labels[i] = g.label(batch[i]);
      const LossParts lp = loss(fr.probabilities, labels, cfg.lambda, mc.effective_depth());
      const double value = lp.total.value().item();
      if (!std::isfinite(value)) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch));
      }
      tape.backward(lp.total);
      std::vector<Tensor> grads;
      grads.reserve(vars.size());
      for (const Var& v : vars) grads.push_back(v.grad());
      adam_step(params.tensors, grads, adam, acfg);
      if (hooks.on_loss) hooks.on_loss(lp);
      loss_sum += value;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(batches.size());
    const EvalReport val = evaluate(params, data, Split::kVal, cfg.eval_batch_size);
    entry.val_auc = val.auc;
    entry.val_recall = val.recall;
    entry.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start).count();
    result.log.push_back(entry);
    if (hooks.on_epoch) hooks.on_epoch(entry);

    if (val.auc > result.best_val_auc) {
      result.best_val_auc = val.auc;
      result.best_epoch = epoch;
      result.params = params;
      result.threshold = val.threshold;
      since_best = 0;
    } else if (++since_best >= cfg.patience && cfg.patience > 0) {
      break;
    }
  }
  return result;
}

DepthSearch progressive_depth_search(const PreparedData& data, const TrainConfig& cfg,
                                     const TrainHooks& hooks) {
  DepthSearch search;
  double best_val = -1.0;
  for (std::size_t d = 0; d <= cfg.layers; ++d) {
    TrainResult r = train(data, cfg, d, hooks);
    const EvalReport test = evaluate(r.params, data, Split::kTest, cfg.eval_batch_size, &r.threshold);
    search.rows.push_back({d, r.best_val_auc, test.auc, test.recall});
    if (d >= 1 && r.best_val_auc > best_val) {
      best_val = r.best_val_auc;
      search.best_depth = d;
      search.best = std::move(r);
    }
  }
  return search;
}

}  // namespace jagnn
