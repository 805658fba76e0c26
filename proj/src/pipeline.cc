// Copyright 2026 The GuDA Authors
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

#include "guda/pipeline.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "guda/dataset_io.h"
#include "guda/demonstrators.h"
#include "guda/error.h"
#include "json.hpp"

namespace guda {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

void RejectUnknownKeys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool found = false;
    for (const char* a : allowed) found = found || key == a;
    if (!found) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <class T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void RequireFile(const std::string& path, const std::string& stage) {
  if (!fs::exists(path)) {
    throw DataError("missing " + stage + " output '" + path + "'; run '" + stage + "' first");
  }
}

void EnsureOutDir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw DataError("cannot create output directory '" + config.out_dir + "'");
}

template <class F>
void WriteFile(const std::string& path, F&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write(out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string SeedTag(const std::string& strategy, std::uint64_t seed) {
  return strategy + "_s" + std::to_string(seed);
}

struct SweepCell {
  std::string strategy;
  std::size_t x = 0;
  std::uint64_t seed = 0;
  EvalResult result;
};

void WriteSweep(const RunConfig& config, const std::string& kind,
                const std::vector<SweepCell>& cells, std::ostream& log) {
  const NormalizationAnchors anchors =
      AnchorsFor(ReadAnchorsFile(config.anchors_path), config.task);
  const std::string path = config.out_dir + "/sweep_" + kind + ".csv";
  WriteFile(path, [&](std::ostream& out) {
    out << "task,strategy,x,seed,norm_return,success_rate\n";
    for (const auto& c : cells) {
      out << config.task << ',' << c.strategy << ',' << c.x << ',' << c.seed << ','
          << FormatCsvReal(NormalizedReturn(c.result.MeanReturn(), anchors)) << ','
          << FormatCsvReal(c.result.SuccessRate()) << '\n';
    }
  });
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
  for (const auto& c : cells) {
    groups[{c.strategy, c.x}].push_back(NormalizedReturn(c.result.MeanReturn(), anchors));
  }
  const std::string iqm_path = config.out_dir + "/sweep_" + kind + "_iqm.csv";
  WriteFile(iqm_path, [&](std::ostream& out) {
    out << "task,strategy,x,seeds,IQM_norm_return,CI_low,CI_high\n";
    std::uint64_t stream = 0;
    for (const auto& [key, values] : groups) {
      Interval ci{values.front(), values.front()};
      if (values.size() >= 2) {
        RngStream rng(config.seeds.front(), stream);
        ci = BootstrapCi(values, Iqm, config.bootstrap_resamples, 0.95, rng);
      }
      ++stream;
      out << config.task << ',' << key.first << ',' << key.second << ',' << values.size()
          << ',' << FormatCsvReal(Iqm(values)) << ',' << FormatCsvReal(ci.low) << ','
          << FormatCsvReal(ci.high) << '\n';
    }
  });
  log << "wrote " << path << " and " << iqm_path << '\n';
}

}  // namespace

void CheckStrategy(const std::string& strategy) {
  if (strategy != "guda" && strategy != "random" && strategy != "none") {
    throw ConfigError("unknown strategy '" + strategy + "' (expected guda, random or none)");
  }
}

void RunConfig::Validate() const {
  if (!IsRegisteredTask(task)) throw ConfigError("unknown task '" + task + "'");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (strategies.empty()) throw ConfigError("strategies must not be empty");
  for (const auto& s : strategies) CheckStrategy(s);
  if (demo_episodes < 1) throw ConfigError("demo episodes must be at least 1");
  if (!(demo_noise >= 0.0 && demo_noise <= 1.0)) throw ConfigError("demo noise must lie in [0, 1]");
  if (eval_episodes < 1) throw ConfigError("eval episodes must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (bootstrap_resamples < 100) throw ConfigError("bootstrap resamples must be >= 100");
  train.Validate();
}

RunConfig ParseRunConfig(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    RejectUnknownKeys(j,
                      {"task", "env", "strategies", "n", "k", "rule", "demo", "seeds",
                       "train", "eval_episodes", "out", "anchors", "workers", "sweep",
                       "bootstrap_resamples"},
                      "");
    Read(j, "task", c.task);
    Read(j, "strategies", c.strategies);
    Read(j, "n", c.n);
    if (j.contains("k")) c.k = j.at("k").get<std::size_t>();
    Read(j, "seeds", c.seeds);
    Read(j, "eval_episodes", c.eval_episodes);
    Read(j, "out", c.out_dir);
    Read(j, "anchors", c.anchors_path);
    Read(j, "workers", c.workers);
    Read(j, "bootstrap_resamples", c.bootstrap_resamples);
    if (j.contains("env")) {
      const json& e = j.at("env");
      RejectUnknownKeys(e, {"constants", "maze_layout"}, "env.");
      Read(e, "constants", c.env.constants);
      Read(e, "maze_layout", c.env.maze_layout_path);
    }
    if (j.contains("rule")) {
      const json& r = j.at("rule");
      RejectUnknownKeys(r,
                        {"angular_sigma", "positional_sigma", "truncation", "max_retries",
                         "min_clearance", "align_threshold", "rotation_trials",
                         "reflect_probability"},
                        "rule.");
      c.rule_overrides = r.get<std::map<std::string, double>>();
    }
    if (j.contains("demo")) {
      const json& d = j.at("demo");
      RejectUnknownKeys(d, {"episodes", "noise", "seed"}, "demo.");
      Read(d, "episodes", c.demo_episodes);
      Read(d, "noise", c.demo_noise);
      Read(d, "seed", c.demo_seed);
    }
    if (j.contains("train")) {
      const json& t = j.at("train");
      RejectUnknownKeys(t,
                        {"learning_rate", "batch_size", "gradient_steps", "init_scale",
                         "hidden", "log_every", "normalize_inputs"},
                        "train.");
      Read(t, "learning_rate", c.train.learning_rate);
      Read(t, "batch_size", c.train.batch_size);
      Read(t, "gradient_steps", c.train.gradient_steps);
      Read(t, "init_scale", c.train.init_scale);
      Read(t, "hidden", c.train.hidden);
      Read(t, "log_every", c.train.log_every);
      Read(t, "normalize_inputs", c.train.normalize_inputs);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      RejectUnknownKeys(s, {"counts", "sizes"}, "sweep.");
      Read(s, "counts", c.sweep_counts);
      Read(s, "sizes", c.sweep_sizes);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseRunConfig(buf.str());
}

AugmentationRule RuleFor(const RunConfig& config, const std::string& strategy) {
  AugmentationRule rule = DefaultRule(config.task, strategy);
  if (config.k) rule.k = *config.k;
  for (const auto& [key, v] : config.rule_overrides) {
    if (key == "angular_sigma") rule.angular_sigma = v;
    else if (key == "positional_sigma") rule.positional_sigma = v;
    else if (key == "truncation") rule.truncation = v;
    else if (key == "max_retries") rule.max_retries = static_cast<int>(v);
    else if (key == "min_clearance") rule.min_clearance = v;
    else if (key == "align_threshold") rule.align_threshold = v;
    else if (key == "rotation_trials") rule.rotation_trials = static_cast<int>(v);
    else if (key == "reflect_probability") rule.reflect_probability = v;
    else throw ConfigError("unknown rule override '" + key + "'");
  }
  rule.Validate();
  return rule;
}

Dataset AugmentFor(const RunConfig& config, const Env& env, const Dataset& demos,
                   const std::string& strategy, std::size_t n, std::uint64_t seed,
                   AugmentationStats* stats) {
  CheckStrategy(strategy);
  if (strategy == "none" || n == 0) {
    Dataset out = demos;
    out.metadata.seed = seed;
    out.metadata.rule = "none";
    if (stats) *stats = {};
    return out;
  }
  AugmentationJob job;
  job.source = &demos;
  job.rule = RuleFor(config, strategy);
  job.n = n;
  job.master_seed = seed;
  job.workers = config.workers;
  return BuildAugmentedDataset(job, env, stats);
}

EvalResult EvaluatePolicy(const RunConfig& config, const Env& env, const Policy& policy,
                          const std::string& strategy, std::uint64_t seed) {
  EvalResult r = Rollout(policy, env, config.eval_episodes, RngStream(seed, kEvalStream),
                         config.workers);
  r.strategy = strategy;
  r.seed = seed;
  return r;
}

EvalResult RunCell(const RunConfig& config, const Env& env, const Dataset& demos,
                   const std::string& strategy, std::size_t n, std::uint64_t seed) {
  const Dataset data = AugmentFor(config, env, demos, strategy, n, seed);
  BcLearner learner(config.train);
  const Policy policy = learner.Fit(data, env.mdp(), seed);
  EvalResult r = EvaluatePolicy(config, env, policy, strategy, seed);
  r.n_aug = strategy == "none" ? 0 : static_cast<long long>(n);
  return r;
}

AuditReport AuditDataset(const Env& env, const Dataset& dataset) {
  AuditReport report;
  for (const auto& ep : dataset.episodes) {
    ++report.episodes;
    report.transitions += ep.size();
    for (std::size_t i = 0; i < ep.size(); ++i) {
      const Transition& tr = ep.transitions[i];
      if (tr.reward != env.Reward(tr.state, tr.action)) ++report.reward_violations;
      if (tr.terminal != env.IsTerminal(tr.state, tr.next_state)) ++report.terminal_violations;
      if (i + 1 < ep.size() && tr.next_state != ep.transitions[i + 1].state) {
        ++report.chain_violations;
      }
      try {
        env.CheckAction(tr.action);
      } catch (const DataError&) {
        ++report.action_violations;
      }
    }
    if (!TerminalCheck(ep)) ++report.terminal_violations;
    if (!ep.empty() && !env.IsValid(ep)) ++report.invalid_episodes;
  }
  return report;
}

std::string DemoPath(const RunConfig& config) { return config.out_dir + "/demo.jsonl"; }

std::string AugmentedPath(const RunConfig& config, const std::string& strategy,
                          std::uint64_t seed) {
  return config.out_dir + "/augmented_" + SeedTag(strategy, seed) + ".jsonl";
}

std::string PolicyPath(const RunConfig& config, const std::string& strategy,
                       std::uint64_t seed) {
  return config.out_dir + "/policy_" + SeedTag(strategy, seed) + ".json";
}

std::string ResultsPath(const RunConfig& config, const std::string& strategy,
                        std::uint64_t seed) {
  return config.out_dir + "/results_" + SeedTag(strategy, seed) + ".jsonl";
}

void CmdDemo(const RunConfig& config, std::ostream& log) {
  EnsureOutDir(config);
  const EnvPtr env = MakeEnv(config.task, config.env);
  const Dataset demos =
      GenerateDemos(env, config.demo_episodes, config.demo_noise, config.demo_seed);
  std::size_t successes = 0;
  for (const auto& ep : demos.episodes) successes += env->IsSuccess(ep) ? 1 : 0;
  WriteDatasetFile(DemoPath(config), demos);
  log << "demo: " << demos.episodes.size() << " episodes, " << demos.NumTransitions()
      << " transitions, " << successes << " successful -> " << DemoPath(config) << '\n';
}

void CmdAugment(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
                std::ostream& log) {
  RequireFile(DemoPath(config), "demo");
  const EnvPtr env = MakeEnv(config.task, config.env);
  const Dataset demos = ReadDatasetFile(DemoPath(config));
  if (demos.task_id != config.task) {
    throw DataError("demo file is for task '" + demos.task_id + "', config says '" +
                    config.task + "'");
  }
  AugmentationStats stats;
  const Dataset out = AugmentFor(config, *env, demos, strategy, config.n, seed, &stats);
  const std::string path = AugmentedPath(config, strategy, seed);
  WriteDatasetFile(path, out);
  log << "augment[" << SeedTag(strategy, seed) << "]: " << stats.augmented_episodes
      << " episodes, " << stats.augmented_transitions << " transitions, "
      << stats.windows_rejected << "/" << stats.windows_tried << " windows rejected -> "
      << path << '\n';
}

void CmdTrain(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
              std::ostream& log) {
  const std::string in = AugmentedPath(config, strategy, seed);
  RequireFile(in, "augment");
  const EnvPtr env = MakeEnv(config.task, config.env);
  const Dataset data = ReadDatasetFile(in);
  TrainConfig tc = config.train;
  tc.seed = seed;
  const TrainResult result = TrainBc(data, env->mdp(), tc);
  const std::string path = PolicyPath(config, strategy, seed);
  WriteCheckpointFile(path, result.net);
  log << "train[" << SeedTag(strategy, seed) << "]: " << tc.gradient_steps << " steps";
  if (!result.loss_curve.empty()) log << ", final loss " << result.loss_curve.back().loss;
  log << " -> " << path << '\n';
}

void CmdEval(const RunConfig& config, const std::string& strategy, std::uint64_t seed,
             std::ostream& log) {
  const std::string in = PolicyPath(config, strategy, seed);
  RequireFile(in, "train");
  const EnvPtr env = MakeEnv(config.task, config.env);
  auto net = std::make_shared<const PolicyNet>(ReadCheckpointFile(in));
  EvalResult r = EvaluatePolicy(config, *env, MakePolicy(net), strategy, seed);
  r.n_aug = strategy == "none" ? 0 : static_cast<long long>(config.n);
  const AnchorTable anchors = ReadAnchorsFile(config.anchors_path);
  const NormalizationAnchors& a = AnchorsFor(anchors, config.task);
  const std::string path = ResultsPath(config, strategy, seed);
  WriteFile(path, [&](std::ostream& out) { WriteEvalResult(out, r, &a); });
  log << "eval[" << SeedTag(strategy, seed) << "]: mean return " << r.MeanReturn()
      << ", normalized " << NormalizedReturn(r.MeanReturn(), a) << ", success "
      << r.SuccessRate() << " -> " << path << '\n';
}

ComparisonReport CmdReport(const RunConfig& config, std::ostream& log) {
  if (!fs::is_directory(config.out_dir)) {
    throw DataError("output directory '" + config.out_dir + "' does not exist; run 'eval' first");
  }
  std::vector<std::string> files;
  static const std::regex kResults(R"(results_.+_s\d+\.jsonl)");
  for (const auto& entry : fs::directory_iterator(config.out_dir)) {
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, kResults)) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no results files in '" + config.out_dir + "'; run 'eval' first");
  std::map<std::string, std::vector<EvalResult>> by_strategy;
  for (const auto& f : files) {
    for (auto& r : ReadEvalResultsFile(f)) by_strategy[r.strategy].push_back(std::move(r));
  }
  for (auto& [_, runs] : by_strategy) {
    std::sort(runs.begin(), runs.end(),
              [](const EvalResult& a, const EvalResult& b) { return a.seed < b.seed; });
  }
  const std::string task = by_strategy.begin()->second.front().task;
  const NormalizationAnchors anchors = AnchorsFor(ReadAnchorsFile(config.anchors_path), task);
  CompareOptions opts;
  opts.resamples = config.bootstrap_resamples;
  opts.seed = config.seeds.front();
  const ComparisonReport report = CompareStrategies(by_strategy, anchors, opts);
  const std::string csv = config.out_dir + "/report.csv";
  const std::string pcsv = config.out_dir + "/pvalues.csv";
  WriteFile(csv, [&](std::ostream& out) { WriteReportCsv(out, report.summaries); });
  WriteFile(pcsv, [&](std::ostream& out) { WritePValuesCsv(out, report.tests); });
  log << "ranking:";
  for (const auto& s : report.summaries) {
    log << ' ' << s.strategy << " (" << FormatCsvReal(s.iqm_norm_return) << ')';
  }
  log << "\nwrote " << csv << " and " << pcsv << '\n';
  return report;
}

void CmdSweepAug(const RunConfig& config, std::ostream& log) {
  if (config.sweep_counts.empty()) throw ConfigError("sweep counts must not be empty");
  EnsureOutDir(config);
  const EnvPtr env = MakeEnv(config.task, config.env);
  const Dataset demos =
      GenerateDemos(env, config.demo_episodes, config.demo_noise, config.demo_seed);
  std::vector<SweepCell> cells;
  for (const auto& strategy : config.strategies) {
    for (std::size_t n : config.sweep_counts) {
      for (std::uint64_t seed : config.seeds) {
        cells.push_back({strategy, n, seed, RunCell(config, *env, demos, strategy, n, seed)});
        log << "sweep-aug " << strategy << " n=" << n << " seed=" << seed << ": return "
            << cells.back().result.MeanReturn() << '\n';
      }
    }
  }
  WriteSweep(config, "aug", cells, log);
}

void CmdSweepDemo(const RunConfig& config, std::ostream& log) {
  if (config.sweep_sizes.empty()) throw ConfigError("sweep sizes must not be empty");
  EnsureOutDir(config);
  const EnvPtr env = MakeEnv(config.task, config.env);
  std::vector<SweepCell> cells;
  for (int size : config.sweep_sizes) {
    const Dataset demos = GenerateDemos(env, size, config.demo_noise, config.demo_seed);
    for (const auto& strategy : config.strategies) {
      for (std::uint64_t seed : config.seeds) {
        cells.push_back({strategy, static_cast<std::size_t>(size), seed,
                         RunCell(config, *env, demos, strategy, config.n, seed)});
        log << "sweep-demo " << strategy << " episodes=" << size << " seed=" << seed
            << ": return " << cells.back().result.MeanReturn() << '\n';
      }
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return a.strategy < b.strategy;
  });
  WriteSweep(config, "demo", cells, log);
}

AuditReport CmdAudit(const RunConfig& config, const std::string& path, std::ostream& log) {
  RequireFile(path, "augment");
  const Dataset data = ReadDatasetFile(path);
  const EnvPtr env = MakeEnv(data.task_id, config.env);
  const AuditReport r = AuditDataset(*env, data);
  log << "audit " << path << ": " << r.episodes << " episodes, " << r.transitions
      << " transitions; reward " << r.reward_violations << ", terminal "
      << r.terminal_violations << ", chain " << r.chain_violations << ", action "
      << r.action_violations << ", invalid episodes " << r.invalid_episodes << '\n';
  return r;
}

void CmdAnchors(const RunConfig& config, const std::vector<std::string>& tasks,
                std::ostream& log) {
  AnchorTable table;
  if (fs::exists(config.anchors_path)) table = ReadAnchorsFile(config.anchors_path);
  constexpr int kEpisodes = 100;
  for (const auto& task : tasks) {
    const EnvPtr env = MakeEnv(task, config.env);
    const RngStream rng(0, kEvalStream);
    const EvalResult expert = Rollout(ExpertPolicy(env), *env, kEpisodes, rng, config.workers);
    const EvalResult random = Rollout(RandomPolicy(env, 0), *env, kEpisodes, rng, config.workers);
    NormalizationAnchors a{expert.MeanReturn(), random.MeanReturn()};
    a.Validate();
    table[task] = a;
    log << "anchors " << task << ": expert " << a.expert_return << " (success "
        << expert.SuccessRate() << "), random " << a.random_return << '\n';
  }
  WriteAnchorsFile(config.anchors_path, table);
  log << "wrote " << config.anchors_path << '\n';
}

}  // namespace guda
