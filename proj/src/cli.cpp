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

#include "jagnn/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "jagnn/checkpoint.hpp"
#include "jagnn/kernels.hpp"
#include "jagnn/pipeline.hpp"
#include "jagnn/sampler.hpp"
#include "jagnn/synthgen.hpp"
#include "jagnn/tensor_io.hpp"
#include "jagnn/trainer.hpp"

namespace jagnn {

namespace {

namespace fs = std::filesystem;

std::string resolve_config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return env;
  return {};
}

TrainConfig load_config(const std::string& flag) {
  const std::string path = resolve_config_path(flag);
  return path.empty() ? TrainConfig{} : TrainConfig::load(path);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

fs::path output_dir(const fs::path& out_file) {
  return out_file.has_parent_path() ? out_file.parent_path() : fs::path(".");
}

// Every run leaves its resolved settings next to its output.
void record_run(const fs::path& dir, const std::string& command, nlohmann::json settings) {
  settings["command"] = command;
  write_json(dir / "resolved_config.json", settings);
}

// Phase graph and samples for scoring a checkpoint on `g`.
Phase checkpoint_phase(const TransactionGraph& g, const Checkpoint& c, std::optional<Split> split) {
  std::vector<bool> visible(g.num_nodes(), false);
  if (!split) {
    for (NodeId v : g.anchors()) visible[v] = true;
  } else {
    const SplitAssignment s = make_splits(g, c.config.split);
    visible = *split == Split::kVal ? s.mask({Split::kTrain, Split::kVal})
                                    : s.mask({Split::kTrain, Split::kVal, Split::kTest});
  }
  return build_phase(g, visible, c.covariances, c.config);
}

void check_dims(const TransactionGraph& g, const Checkpoint& c) {
  const ModelConfig& m = c.params.config;
  if (g.feature_dim() != m.feature_dim || g.num_relations() != m.num_relations) {
    throw std::invalid_argument("graph has " + std::to_string(g.feature_dim()) + " features and " +
                                std::to_string(g.num_relations()) + " relations; checkpoint expects " +
                                std::to_string(m.feature_dim) + " and " +
                                std::to_string(m.num_relations));
  }
}

std::string csv_number(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"JA-GNN fraud detection: sampling, training and scoring on transaction graphs"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic camouflage benchmark graph");
  std::string scenario_path, gen_out;
  std::optional<std::uint64_t> gen_seed;
  bool with_fixture = false;
  gen->add_option("--scenario", scenario_path, "Scenario JSON (defaults when omitted)");
  gen->add_option("--out-dir", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Override the scenario seed");
  gen->add_flag("--camouflage-case", with_fixture, "Plant the verified-fraudster fixture");

  // sample
  auto* smp = app.add_subcommand("sample", "Sample the neighborhood of one anchor");
  std::string smp_graph, smp_out, smp_config;
  NodeId smp_target = 0;
  std::optional<double> smp_eps;
  std::optional<std::uint64_t> smp_seed;
  smp->add_option("--graph-dir", smp_graph)->required();
  smp->add_option("--target", smp_target)->required();
  smp->add_option("--epsilon", smp_eps)->check(CLI::Range(0.0, 1.0));
  smp->add_option("--seed", smp_seed);
  smp->add_option("--config", smp_config, "Train config for sampler settings");
  smp->add_option("--out", smp_out)->required();

  // train
  auto* trn = app.add_subcommand("train", "Train a model");
  std::string trn_config, trn_graph, trn_out, trn_log;
  std::optional<std::uint64_t> trn_seed;
  trn->add_option("--config", trn_config, std::string("Config JSON (default: $") + kConfigEnvVar + ")");
  trn->add_option("--graph-dir", trn_graph)->required();
  trn->add_option("--out", trn_out, "Checkpoint path")->required();
  trn->add_option("--log", trn_log, "Per-epoch JSON lines");
  trn->add_option("--seed", trn_seed, "Override the config seed");

  // eval
  auto* evl = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
  std::string evl_ckpt, evl_graph, evl_out, evl_split = "test";
  evl->add_option("--checkpoint", evl_ckpt)->required();
  evl->add_option("--graph-dir", evl_graph)->required();
  evl->add_option("--split", evl_split)->check(CLI::IsMember({"val", "test"}));
  evl->add_option("--out", evl_out)->required();

  // score
  auto* scr = app.add_subcommand("score", "Fraud score (0-100) for anchors");
  std::string scr_ckpt, scr_graph, scr_out;
  std::vector<NodeId> scr_ids;
  scr->add_option("--checkpoint", scr_ckpt)->required();
  scr->add_option("--graph-dir", scr_graph)->required();
  scr->add_option("--anchors", scr_ids, "Anchor ids")->required()->delimiter(',');
  scr->add_option("--out", scr_out, "CSV output (stdout when omitted)");

  // sweep-depth
  auto* swp = app.add_subcommand("sweep-depth", "Train at every jump depth and report d, AUC, Recall");
  std::string swp_config, swp_graph, swp_out;
  swp->add_option("--config", swp_config, std::string("Config JSON (default: $") + kConfigEnvVar + ")");
  swp->add_option("--graph-dir", swp_graph)->required();
  swp->add_option("--out", swp_out, "CSV report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code;
  }

  try {
    if (threads > 0) kernels::set_threads(threads);

    if (gen->parsed()) {
      ScenarioConfig sc;
      if (!scenario_path.empty()) {
        std::ifstream in(scenario_path);
        if (!in) throw std::runtime_error("cannot open scenario " + scenario_path);
        sc = ScenarioConfig::from_json(nlohmann::json::parse(in));
      }
      if (gen_seed) sc.seed = *gen_seed;
      if (with_fixture) {
        const CamouflageCase c = camouflage_case(sc);
        write_camouflage_case(c, gen_out);
      } else {
        write_scenario(generate(sc), gen_out);
      }
      record_run(gen_out, "generate", {{"scenario", sc.to_json()}, {"camouflage_case", with_fixture}});
      out << "wrote " << gen_out << '\n';
    } else if (smp->parsed()) {
      TrainConfig cfg = load_config(smp_config);
      if (smp_eps) cfg.epsilon = *smp_eps;
      if (smp_seed) cfg.seed = *smp_seed;
      cfg.validate();
      TransactionGraph g = load_graph_dir(smp_graph, {cfg.label_threshold});
      const CovarianceSet cov = compute_covariances(g, cfg.ridge);
      score_all_edges(g, cov, cfg.edge_score);
      const SampledSubgraph s = sample_neighborhood(g, smp_target, cfg.sampler_config());
      nlohmann::json cands = nlohmann::json::array();
      for (const Candidate& c : s.candidates) {
        cands.push_back({{"id", c.id}, {"wmnc", c.wmnc}, {"relations", c.relations}});
      }
      write_json(smp_out, {{"target", s.target},
                           {"k_top", s.k_top},
                           {"n_random", s.n_random},
                           {"closure", s.neighbor_closure},
                           {"candidates", cands},
                           {"warnings", cov.warnings}});
      record_run(output_dir(smp_out), "sample",
                 {{"config", cfg.to_json()}, {"graph_dir", smp_graph}, {"target", smp_target}});
    } else if (trn->parsed()) {
      TrainConfig cfg = load_config(trn_config);
      if (trn_seed) cfg.seed = *trn_seed;
      if (threads > 0) cfg.threads = threads;
      cfg.validate();
      const TransactionGraph g = load_graph_dir(trn_graph, {cfg.label_threshold});
      record_run(output_dir(trn_out), "train", {{"config", cfg.to_json()}, {"graph_dir", trn_graph}});
      const PreparedData data = prepare(g, cfg);
      std::ofstream log;
      if (!trn_log.empty()) {
        log.open(trn_log);
        if (!log) throw std::runtime_error("cannot write " + trn_log);
      }
      TrainHooks hooks;
      hooks.on_epoch = [&](const EpochLog& e) {
        if (log.is_open()) log << e.to_json().dump() << '\n' << std::flush;
      };
      Checkpoint ckpt;
      if (cfg.progressive()) {
        DepthSearch search = progressive_depth_search(data, cfg, hooks);
        ckpt.params = search.best.params;
        ckpt.threshold = search.best.threshold;
        ckpt.best_epoch = search.best.best_epoch;
        ckpt.config = cfg;
        ckpt.config.jump_depth = search.best_depth;
      } else {
        TrainResult r = train(data, cfg, *cfg.jump_depth, hooks);
        ckpt.params = std::move(r.params);
        ckpt.threshold = r.threshold;
        ckpt.best_epoch = r.best_epoch;
        ckpt.config = cfg;
      }
      ckpt.covariances = data.covariances;
      ckpt.scaler = data.scaler;
      save_checkpoint(trn_out, ckpt);
      out << "best epoch " << ckpt.best_epoch << ", checkpoint " << trn_out << '\n';
    } else if (evl->parsed()) {
      const Checkpoint c = load_checkpoint(evl_ckpt);
      const TransactionGraph g = load_graph_dir(evl_graph, {c.config.label_threshold});
      check_dims(g, c);
      const Split split = evl_split == "val" ? Split::kVal : Split::kTest;
      PreparedData data;
      data.splits = make_splits(g, c.config.split);
      data.covariances = c.covariances;
      data.scaler = c.scaler;
      data.features = c.scaler.apply(g);
      (split == Split::kVal ? data.val : data.test) = checkpoint_phase(g, c, split);
      // Recall uses the validation threshold stored with the checkpoint.
      const EvalReport r = evaluate(c.params, data, split, c.config.eval_batch_size, &c.threshold);
      write_json(evl_out, r.to_json());
      record_run(output_dir(evl_out), "eval",
                 {{"checkpoint", evl_ckpt}, {"graph_dir", evl_graph}, {"split", evl_split}});
      out << "auc " << r.auc << " recall " << r.recall << '\n';
    } else if (scr->parsed()) {
      const Checkpoint c = load_checkpoint(scr_ckpt);
      const TransactionGraph g = load_graph_dir(scr_graph, {c.config.label_threshold});
      check_dims(g, c);
      for (NodeId v : scr_ids) {
        if (v >= g.num_nodes() || !g.is_anchor(v)) {
          throw std::invalid_argument("unknown anchor " + std::to_string(v));
        }
      }
      const Phase phase = checkpoint_phase(g, c, std::nullopt);
      const std::vector<double> p =
          predict(c.params, c.scaler.apply(g), phase.samples, scr_ids, c.config.eval_batch_size);
      std::ostringstream csv;
      csv << "node_id,score\n";
      for (std::size_t i = 0; i < p.size(); ++i) csv << scr_ids[i] << ',' << csv_number(100.0 * p[i]) << '\n';
      if (scr_out.empty()) {
        out << csv.str();
      } else {
        if (fs::path(scr_out).has_parent_path()) fs::create_directories(fs::path(scr_out).parent_path());
        std::ofstream f(scr_out);
        if (!f) throw std::runtime_error("cannot write " + scr_out);
        f << csv.str();
        record_run(output_dir(scr_out), "score", {{"checkpoint", scr_ckpt}, {"graph_dir", scr_graph}});
      }
    } else if (swp->parsed()) {
      TrainConfig cfg = load_config(swp_config);
      if (threads > 0) cfg.threads = threads;
      cfg.jump_depth.reset();
      cfg.validate();
      const TransactionGraph g = load_graph_dir(swp_graph, {cfg.label_threshold});
      record_run(output_dir(swp_out), "sweep-depth", {{"config", cfg.to_json()}, {"graph_dir", swp_graph}});
      const PreparedData data = prepare(g, cfg);
      const DepthSearch search = progressive_depth_search(data, cfg);
      if (fs::path(swp_out).has_parent_path()) fs::create_directories(fs::path(swp_out).parent_path());
      std::ofstream f(swp_out);
      if (!f) throw std::runtime_error("cannot write " + swp_out);
      f << "d,AUC,Recall\n";
      for (const DepthRow& row : search.rows) {
        f << row.depth << ',' << csv_number(row.test_auc) << ',' << csv_number(row.test_recall) << '\n';
      }
      out << "best d " << search.best_depth << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace jagnn
