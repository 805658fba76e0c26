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

#include "guda/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include "guda/error.h"
#include "json.hpp"

namespace guda {
namespace {

using json = nlohmann::json;

struct Episode {
  double ret = 0.0;
  bool success = false;
  int length = 0;
};

Episode RunEpisode(const Policy& policy, const Env& env, RngStream rng, int index) {
  Episode ep;
  StateVector s = env.SampleInitial(rng);
  for (int t = 0; t < env.mdp().horizon; ++t) {
    const ActionVector a = policy(s);
    for (double x : a) {
      if (!std::isfinite(x)) {
        throw NumericError("policy emitted a non-finite action in episode " +
                           std::to_string(index) + " at step " + std::to_string(t));
      }
    }
    const StateVector next = env.Step(s, a);
    ep.ret += env.Reward(s, a);
    ep.success = ep.success || env.IsSuccessState(s);
    ++ep.length;
    const bool terminal = env.IsTerminal(s, next);
    s = next;
    if (terminal) break;
  }
  ep.success = ep.success || env.IsSuccessState(s);
  return ep;
}

}  // namespace

double EvalResult::MeanReturn() const { return Mean(returns); }

double EvalResult::IqmReturn() const { return Iqm(returns); }

double EvalResult::SuccessRate() const {
  if (successes.empty()) throw ConfigError("no episodes");
  return static_cast<double>(std::count(successes.begin(), successes.end(), true)) /
         static_cast<double>(successes.size());
}

void EvalResult::Validate() const {
  if (returns.size() != successes.size() || returns.size() != lengths.size()) {
    throw DataError("eval result lists differ in length");
  }
  for (double r : returns) {
    if (!std::isfinite(r)) throw DataError("eval result has a non-finite return");
  }
}

EvalResult Rollout(const Policy& policy, const Env& env, int episodes,
                   const RngStream& rng, int workers) {
  if (episodes < 1) throw ConfigError("rollout needs at least one episode");
  std::vector<Episode> eps(static_cast<std::size_t>(episodes));
  workers = std::clamp(workers, 1, episodes);
  auto work = [&](int w) {
    for (int i = w; i < episodes; i += workers) {
      eps[i] = RunEpisode(policy, env, rng.Child(static_cast<std::uint64_t>(i)), i);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  EvalResult r;
  r.task = env.task_id();
  for (const auto& e : eps) {
    r.returns.push_back(e.ret);
    r.successes.push_back(e.success);
    r.lengths.push_back(e.length);
  }
  return r;
}

AnchorTable ReadAnchorsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open anchors file '" + path + "'");
  AnchorTable table;
  try {
    const json j = json::parse(in);
    if (j.value("version", 0) != 1) throw ConfigError("unsupported anchors version");
    for (const auto& [task, a] : j.at("anchors").items()) {
      NormalizationAnchors anchors{a.at("expert").get<double>(), a.at("random").get<double>()};
      anchors.Validate();
      table[task] = anchors;
    }
  } catch (const json::exception& e) {
    throw ConfigError("anchors file '" + path + "': " + e.what());
  }
  return table;
}

void WriteAnchorsFile(const std::string& path, const AnchorTable& anchors) {
  json j = {{"version", 1}, {"anchors", json::object()}};
  for (const auto& [task, a] : anchors) {
    j["anchors"][task] = {{"expert", a.expert_return}, {"random", a.random_return}};
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write anchors file '" + path + "'");
  out << j.dump(2) << '\n';
}

const NormalizationAnchors& AnchorsFor(const AnchorTable& table, const std::string& task) {
  auto it = table.find(task);
  if (it == table.end()) throw ConfigError("no normalization anchors for task '" + task + "'");
  return it->second;
}

void WriteEvalResult(std::ostream& out, const EvalResult& r,
                     const NormalizationAnchors* anchors) {
  r.Validate();
  json j = {{"task", r.task},         {"strategy", r.strategy},
            {"seed", r.seed},         {"n_aug", r.n_aug},
            {"returns", r.returns},   {"successes", r.successes},
            {"lengths", r.lengths},   {"mean_return", r.MeanReturn()},
            {"iqm_return", r.IqmReturn()}, {"success_rate", r.SuccessRate()}};
  if (anchors) {
    j["norm_mean_return"] = NormalizedReturn(r.MeanReturn(), *anchors);
    j["norm_iqm_return"] = NormalizedReturn(r.IqmReturn(), *anchors);
  }
  out << j.dump() << '\n';
}

std::vector<EvalResult> ReadEvalResults(std::istream& in) {
  std::vector<EvalResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      EvalResult r;
      r.task = j.at("task").get<std::string>();
      r.strategy = j.at("strategy").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.n_aug = j.value("n_aug", -1LL);
      r.returns = j.at("returns").get<std::vector<double>>();
      r.successes = j.at("successes").get<std::vector<bool>>();
      r.lengths = j.at("lengths").get<std::vector<int>>();
      r.Validate();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError("results line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<EvalResult> ReadEvalResultsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open results file '" + path + "'");
  return ReadEvalResults(in);
}

ComparisonReport CompareStrategies(
    const std::map<std::string, std::vector<EvalResult>>& results,
    const NormalizationAnchors& anchors, const CompareOptions& options) {
  anchors.Validate();
  if (results.size() < 2) throw ConfigError("comparison needs at least two strategies");
  std::set<std::string> tasks;
  ComparisonReport report;
  std::uint64_t stream = 0;
  for (const auto& [strategy, runs] : results) {
    if (runs.size() < 2) {
      throw ConfigError("strategy '" + strategy + "' needs at least two seeds");
    }
    StrategySummary s;
    s.strategy = strategy;
    s.seeds = runs.size();
    double successes = 0.0;
    for (const auto& r : runs) {
      tasks.insert(r.task);
      s.per_seed.push_back(NormalizedReturn(r.MeanReturn(), anchors));
      successes += r.SuccessRate();
    }
    s.task = runs.front().task;
    s.success_rate = successes / static_cast<double>(runs.size());
    s.iqm_norm_return = Iqm(s.per_seed);
    RngStream rng(options.seed, stream++);
    s.ci = BootstrapCi(s.per_seed, Iqm, options.resamples, options.level, rng);
    report.summaries.push_back(std::move(s));
  }
  if (tasks.size() != 1) throw ConfigError("results mix tasks with different anchors");
  std::stable_sort(report.summaries.begin(), report.summaries.end(),
                   [](const StrategySummary& a, const StrategySummary& b) {
                     return a.iqm_norm_return > b.iqm_norm_return;
                   });
  for (std::size_t i = 0; i < report.summaries.size(); ++i) {
    for (std::size_t j = i + 1; j < report.summaries.size(); ++j) {
      const auto& a = report.summaries[i];
      const auto& b = report.summaries[j];
      report.tests.push_back({a.strategy, b.strategy, WelchTTest(a.per_seed, b.per_seed)});
    }
  }
  return report;
}

std::string FormatCsvReal(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void WriteReportCsv(std::ostream& out, const std::vector<StrategySummary>& rows) {
  out << "task,strategy,seeds,IQM_norm_return,CI_low,CI_high,success_rate\n";
  for (const auto& r : rows) {
    out << r.task << ',' << r.strategy << ',' << r.seeds << ','
        << FormatCsvReal(r.iqm_norm_return) << ',' << FormatCsvReal(r.ci.low) << ','
        << FormatCsvReal(r.ci.high) << ',' << FormatCsvReal(r.success_rate) << '\n';
  }
}

void WritePValuesCsv(std::ostream& out, const std::vector<PairwiseTest>& tests) {
  out << "strategy_a,strategy_b,t,df,p_value\n";
  for (const auto& t : tests) {
    out << t.a << ',' << t.b << ',' << FormatCsvReal(t.test.t) << ','
        << FormatCsvReal(t.test.df) << ',' << FormatCsvReal(t.test.p) << '\n';
  }
}

}  // namespace guda
