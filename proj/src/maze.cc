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

#include "guda/maze.h"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "guda/error.h"

namespace guda {
namespace {

constexpr double kFaceEps = 1e-9;

const std::map<std::string, std::string>& BuiltinLayouts() {
  static const std::map<std::string, std::string> layouts = {
      {"umaze",
       "#####\n"
       "#G..#\n"
       "###.#\n"
       "#...#\n"
       "#####\n"},
      {"medium",
       "########\n"
       "#..#...#\n"
       "#..#.#.#\n"
       "##...#.#\n"
       "#..#...#\n"
       "#.##.#.#\n"
       "#...#.G#\n"
       "########\n"},
      {"large",
       "############\n"
       "#....#.....#\n"
       "#.##.#.#.#.#\n"
       "#.#....#.#.#\n"
       "#.####.###.#\n"
       "#.#..#.....#\n"
       "#.#.##.#.#G#\n"
       "#......#...#\n"
       "############\n"},
      {"open",
       "#######\n"
       "#.....#\n"
       "#.....#\n"
       "#..G..#\n"
       "#.....#\n"
       "#.....#\n"
       "#######\n"},
  };
  return layouts;
}

constexpr std::array<std::array<int, 2>, 4> kNeighbours = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

}  // namespace

MazeSpec MazeSpec::FromText(const std::string& name, const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("maze '" + name + "': empty layout");

  MazeSpec spec;
  spec.name_ = name;
  spec.rows_ = static_cast<int>(lines.size());
  spec.cols_ = static_cast<int>(lines.front().size());
  spec.walls_.assign(spec.rows_ * spec.cols_, 1);
  int goals = 0;
  std::vector<Cell> starts;
  for (int r = 0; r < spec.rows_; ++r) {
    if (static_cast<int>(lines[r].size()) != spec.cols_) {
      throw ConfigError("maze '" + name + "': ragged row " + std::to_string(r));
    }
    for (int c = 0; c < spec.cols_; ++c) {
      const char ch = lines[r][c];
      switch (ch) {
        case '#':
          break;
        case 'G':
          spec.goal_cell_ = {c, r};
          ++goals;
          [[fallthrough]];
        case '.':
        case 'S':
          spec.walls_[r * spec.cols_ + c] = 0;
          spec.open_cells_.push_back({c, r});
          if (ch == 'S') starts.push_back({c, r});
          break;
        default:
          throw ConfigError("maze '" + name + "': unexpected character '" +
                            std::string(1, ch) + "'");
      }
    }
  }
  if (goals != 1) {
    throw ConfigError("maze '" + name + "': expected exactly one goal cell");
  }
  if (starts.empty()) {
    for (Cell c : spec.open_cells_) {
      if (!(c == spec.goal_cell_)) starts.push_back(c);
    }
  }
  if (starts.empty()) throw ConfigError("maze '" + name + "': no start cell");
  spec.start_cells_ = std::move(starts);

  const PathField field = ShortestPathField(spec);
  for (Cell c : spec.open_cells_) {
    if (field.Distance(c) < 0) {
      throw ConfigError("maze '" + name + "': cell (" + std::to_string(c.col) +
                        "," + std::to_string(c.row) +
                        ") cannot reach the goal");
    }
  }
  return spec;
}

MazeSpec MazeSpec::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open maze layout '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return FromText(path, buf.str());
}

MazeSpec MazeSpec::Builtin(const std::string& name) {
  const auto& layouts = BuiltinLayouts();
  auto it = layouts.find(name);
  if (it == layouts.end()) throw ConfigError("unknown maze layout '" + name + "'");
  return FromText(name, it->second);
}

MazeSpec MazeSpec::WithStartCells(std::vector<Cell> starts) const {
  if (starts.empty()) throw ConfigError("maze '" + name_ + "': no start cell");
  for (Cell c : starts) {
    if (!IsOpen(c)) throw ConfigError("maze '" + name_ + "': start on a wall");
  }
  MazeSpec copy = *this;
  copy.start_cells_ = std::move(starts);
  return copy;
}

bool MazeSpec::IsWall(int col, int row) const {
  if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return true;
  return walls_[row * cols_ + col] != 0;
}

bool MazeSpec::RectHitsWall(Vec2 lo, Vec2 hi) const {
  const int c0 = static_cast<int>(std::floor(lo.x + kFaceEps));
  const int c1 = static_cast<int>(std::ceil(hi.x - kFaceEps)) - 1;
  const int r0 = static_cast<int>(std::floor(lo.y + kFaceEps));
  const int r1 = static_cast<int>(std::ceil(hi.y - kFaceEps)) - 1;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (IsWall(c, r)) return true;
    }
  }
  return false;
}

bool MazeSpec::BoxHitsWall(Vec2 p, double half) const {
  return RectHitsWall({p.x - half, p.y - half}, {p.x + half, p.y + half});
}

PathField ShortestPathField(const MazeSpec& spec) {
  return ShortestPathField(spec, spec.goal_cell());
}

PathField ShortestPathField(const MazeSpec& spec, Cell target) {
  PathField field;
  field.cols = spec.cols();
  field.rows = spec.rows();
  field.distance.assign(field.cols * field.rows, -1);
  field.direction.assign(field.cols * field.rows, Vec2{});

  std::deque<Cell> frontier;
  const Cell goal = target;
  if (!spec.IsOpen(goal)) throw ConfigError("path target is a wall");
  field.distance[spec.CellIndex(goal)] = 0;
  frontier.push_back(goal);
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop_front();
    const int d = field.Distance(cur);
    for (const auto& [dc, dr] : kNeighbours) {
      const Cell nb{cur.col + dc, cur.row + dr};
      if (spec.IsWall(nb.col, nb.row)) continue;
      int& nd = field.distance[spec.CellIndex(nb)];
      if (nd < 0) {
        nd = d + 1;
        frontier.push_back(nb);
      }
    }
  }

  for (Cell c : spec.open_cells()) {
    const int d = field.Distance(c);
    if (d <= 0) continue;
    int best = d;
    Vec2 dir{};
    for (const auto& [dc, dr] : kNeighbours) {
      const Cell nb{c.col + dc, c.row + dr};
      if (spec.IsWall(nb.col, nb.row)) continue;
      const int nd = field.Distance(nb);
      if (nd >= 0 && nd < best) {
        best = nd;
        dir = {static_cast<double>(dc), static_cast<double>(dr)};
      }
    }
    field.direction[spec.CellIndex(c)] = dir;
  }
  return field;
}

PointMassMaze::PointMassMaze(std::string task_id, MazeSpec spec,
                             PointMassParams params)
    : task_id_(std::move(task_id)),
      spec_(std::move(spec)),
      params_(params),
      field_(ShortestPathField(spec_)) {
  mdp_.state_dim = 4;
  mdp_.action_dim = 2;
  mdp_.gamma = 0.99;
  mdp_.horizon = params_.horizon;
  mdp_.action_low = {-1.0, -1.0};
  mdp_.action_high = {1.0, 1.0};
  layout_.positions = {{0, 1}};
  layout_.vectors = {{2, 3}};
  layout_.agent = 0;
  layout_.action_vectors = {{0, 1}};
}

Box2 PointMassMaze::bounds() const {
  return {{0.0, 0.0},
          {static_cast<double>(spec_.cols()), static_cast<double>(spec_.rows())}};
}

StateVector PointMassMaze::Step(const StateVector& state,
                                const ActionVector& action) const {
  CheckState(state);
  CheckAction(action);
  const double dt = params_.dt;
  const double h = params_.half_size;
  const Vec2 p{state[0], state[1]};
  const Vec2 v{state[2], state[3]};

  Vec2 force{action[0], action[1]};
  const double fn = force.Norm();
  if (fn > 1.0) force = force * (1.0 / fn);
  force = force * params_.max_force;

  Vec2 nv = v + force * dt - v * params_.friction;
  const double speed = nv.Norm();
  if (speed > params_.v_max) nv = nv * (params_.v_max / speed);

  // Axis-separated collision: x then y. A blocked axis stops at the wall
  // face and loses its velocity component; the other axis keeps sliding.
  Vec2 np = p;
  np.x = p.x + nv.x * dt;
  if (spec_.BoxHitsWall(np, h)) {
    if (nv.x > 0.0) {
      np.x = std::ceil(p.x + h - kFaceEps) - h;
    } else if (nv.x < 0.0) {
      np.x = std::floor(p.x - h + kFaceEps) + h;
    }
    if (spec_.BoxHitsWall(np, h)) np.x = p.x;
    nv.x = 0.0;
  }
  np.y = p.y + nv.y * dt;
  if (spec_.BoxHitsWall(np, h)) {
    if (nv.y > 0.0) {
      np.y = std::ceil(p.y + h - kFaceEps) - h;
    } else if (nv.y < 0.0) {
      np.y = std::floor(p.y - h + kFaceEps) + h;
    }
    if (spec_.BoxHitsWall(np, h)) np.y = p.y;
    nv.y = 0.0;
  }
  return {np.x, np.y, nv.x, nv.y};
}

double PointMassMaze::Reward(const StateVector& state,
                             const ActionVector&) const {
  return IsSuccessState(state) ? 1.0 : 0.0;
}

bool PointMassMaze::IsValidState(const StateVector& state) const {
  if (static_cast<int>(state.size()) != mdp_.state_dim) return false;
  for (double x : state) {
    if (!std::isfinite(x)) return false;
  }
  const Vec2 p{state[0], state[1]};
  if (spec_.BoxHitsWall(p, params_.half_size)) return false;
  return Vec2{state[2], state[3]}.Norm() <= params_.v_max + 1e-9;
}

bool PointMassMaze::IsSuccessState(const StateVector& state) const {
  return (Vec2{state[0], state[1]} - spec_.goal()).Norm() <= params_.goal_radius;
}

StateVector PointMassMaze::SampleInitial(RngStream& rng) const {
  const auto& starts = spec_.start_cells();
  const Cell c = starts[rng.UniformIndex(starts.size())];
  const double j = params_.start_jitter;
  const double x = c.col + 0.5 + rng.Uniform(-j, j);
  const double y = c.row + 0.5 + rng.Uniform(-j, j);
  return {x, y, 0.0, 0.0};
}

bool PointMassMaze::HasClearance(const TrajectorySegment& segment,
                                 double clearance) const {
  if (segment.empty()) return true;
  const double m = params_.half_size + clearance;
  auto pos = [](const StateVector& s) { return Vec2{s[0], s[1]}; };
  auto swept_ok = [&](Vec2 a, Vec2 b) {
    const Vec2 lo{std::min(a.x, b.x) - m, std::min(a.y, b.y) - m};
    const Vec2 hi{std::max(a.x, b.x) + m, std::max(a.y, b.y) + m};
    return !spec_.RectHitsWall(lo, hi);
  };
  for (const auto& tr : segment.transitions) {
    if (!swept_ok(pos(tr.state), pos(tr.next_state))) return false;
  }
  return true;
}

}  // namespace guda
