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

#include "guda/dataset_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "guda/error.h"
#include "json.hpp"

namespace guda {
namespace {

using nlohmann::json;

std::string SourceName(DatasetSource s) {
  return s == DatasetSource::kDemo ? "demo" : "augmented";
}

DatasetSource ParseSource(const std::string& s) {
  if (s == "demo") return DatasetSource::kDemo;
  if (s == "augmented") return DatasetSource::kAugmented;
  throw DataError("unknown dataset source '" + s + "'");
}

std::vector<double> ReadRealArray(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string("expected array for ") + what);
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw DataError(std::string("non-numeric ") + what);
    out.push_back(v.get<double>());
  }
  return out;
}

void WriteEpisode(std::ostream& out, const TrajectorySegment& ep,
                  const std::string& task) {
  std::string line = "{\"task\":" + json(task).dump() + ",\"states\":[";
  for (std::size_t i = 0; i < ep.size(); ++i) {
    AppendRealArray(line, ep.transitions[i].state);
    line += ',';
  }
  if (!ep.empty()) AppendRealArray(line, ep.back().next_state);
  line += "],\"actions\":[";
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (i) line += ',';
    AppendRealArray(line, ep.transitions[i].action);
  }
  line += "],\"rewards\":[";
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (i) line += ',';
    line += FormatReal(ep.transitions[i].reward);
  }
  line += "],\"terminals\":[";
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (i) line += ',';
    line += ep.transitions[i].terminal ? "true" : "false";
  }
  line += "]}\n";
  out << line;
}

TrajectorySegment ParseEpisode(const json& j) {
  TrajectorySegment ep;
  ep.task_id = j.at("task").get<std::string>();
  const auto& states = j.at("states");
  const auto& actions = j.at("actions");
  const auto& rewards = j.at("rewards");
  const auto& terminals = j.at("terminals");
  const std::size_t k = actions.size();
  if (rewards.size() != k || terminals.size() != k) {
    throw DataError("episode arrays have mismatched lengths");
  }
  if (k == 0) {
    if (!states.empty()) throw DataError("states without actions");
    return ep;
  }
  if (states.size() != k + 1) {
    throw DataError("episode needs one more state row than actions");
  }
  std::vector<StateVector> rows;
  rows.reserve(k + 1);
  for (const auto& row : states) rows.push_back(ReadRealArray(row, "state"));
  ep.transitions.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto& tr = ep.transitions[i];
    tr.state = rows[i];
    tr.next_state = rows[i + 1];
    tr.action = ReadRealArray(actions[i], "action");
    if (!rewards[i].is_number()) throw DataError("non-numeric reward");
    tr.reward = rewards[i].get<double>();
    tr.terminal = terminals[i].get<bool>();
  }
  return ep;
}

}  // namespace

std::string FormatReal(double value) {
  if (!std::isfinite(value)) {
    throw NumericError("cannot serialize non-finite value");
  }
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, 17);
  std::string s(buf, res.ptr);
  // Keep the token a JSON real so "-0" and integral values parse back as
  // doubles with their sign intact.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void AppendRealArray(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += FormatReal(values[i]);
  }
  out += ']';
}

void WriteDataset(std::ostream& out, const Dataset& dataset) {
  json header = {{"format", "guda-dataset"},
                 {"version", 1},
                 {"task", dataset.task_id},
                 {"source", SourceName(dataset.metadata.source)},
                 {"seed", dataset.metadata.seed},
                 {"rule", dataset.metadata.rule},
                 {"episodes", dataset.episodes.size()},
                 {"transitions", dataset.NumTransitions()}};
  if (!dataset.metadata.extra_json.empty()) {
    header["extra"] = json::parse(dataset.metadata.extra_json);
  }
  out << json{{"header", header}}.dump() << '\n';
  for (const auto& ep : dataset.episodes) {
    WriteEpisode(out, ep, ep.task_id.empty() ? dataset.task_id : ep.task_id);
  }
}

void WriteDatasetFile(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  WriteDataset(out, dataset);
  if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset ReadDataset(std::istream& in) {
  Dataset ds;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (first && j.contains("header")) {
      const auto& h = j["header"];
      ds.task_id = h.value("task", std::string());
      ds.metadata.source = ParseSource(h.value("source", std::string("demo")));
      ds.metadata.seed = h.value("seed", std::uint64_t{0});
      ds.metadata.rule = h.value("rule", std::string());
      if (h.contains("extra")) ds.metadata.extra_json = h["extra"].dump();
      first = false;
      continue;
    }
    first = false;
    try {
      ds.episodes.push_back(ParseEpisode(j));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto& task = ds.episodes.back().task_id;
    if (ds.task_id.empty()) ds.task_id = task;
    if (task != ds.task_id) {
      throw DataError("episode task '" + task + "' differs from dataset task '" +
                      ds.task_id + "'");
    }
  }
  return ds;
}

Dataset ReadDatasetFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  return ReadDataset(in);
}

}  // namespace guda
