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

#ifndef GUDA_MAZE_H_
#define GUDA_MAZE_H_

#include <cmath>
#include <string>
#include <vector>

#include "guda/env.h"

namespace guda {

struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

// Occupancy grid with unit cells. Cell (col, row) covers
// [col, col + 1) x [row, row + 1); row 0 is the first line of the layout text.
class MazeSpec {
 public:
  // Layout text: '#' wall, '.' open, 'G' goal (open), 'S' start (open). When
  // no 'S' is present every open non-goal cell is a start cell. Throws
  // ConfigError on malformed or disconnected layouts.
  static MazeSpec FromText(const std::string& name, const std::string& text);
  static MazeSpec FromFile(const std::string& path);
  // Built-in layouts: "umaze" (5x5), "medium" (8x8), "large" (9x12), and
  // "open" (7x7 arena with only border walls).
  static MazeSpec Builtin(const std::string& name);

  // Copy restricted to the given open start cells.
  MazeSpec WithStartCells(std::vector<Cell> starts) const;

  const std::string& name() const { return name_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  bool IsWall(int col, int row) const;
  bool IsOpen(Cell c) const { return !IsWall(c.col, c.row); }
  Cell goal_cell() const { return goal_cell_; }
  Vec2 goal() const { return {goal_cell_.col + 0.5, goal_cell_.row + 0.5}; }
  const std::vector<Cell>& open_cells() const { return open_cells_; }
  const std::vector<Cell>& start_cells() const { return start_cells_; }
  int CellIndex(Cell c) const { return c.row * cols_ + c.col; }
  static Cell CellOf(Vec2 p) {
    return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
  }

  // True if the axis-aligned box centred at p with the given half extent
  // overlaps a wall cell or leaves the grid. Touching a face is not overlap.
  bool BoxHitsWall(Vec2 p, double half) const;
  bool RectHitsWall(Vec2 lo, Vec2 hi) const;

 private:
  std::string name_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<char> walls_;
  Cell goal_cell_;
  std::vector<Cell> open_cells_;
  std::vector<Cell> start_cells_;
};

// BFS from the goal over 4-connected open cells.
struct PathField {
  int cols = 0;
  int rows = 0;
  // Hop count to the goal cell; -1 for walls.
  std::vector<int> distance;
  // Unit vector toward the neighbour with the smallest distance (ties in the
  // order +x, -x, +y, -y); zero at the goal cell and at walls.
  std::vector<Vec2> direction;

  int Distance(Cell c) const { return distance[c.row * cols + c.col]; }
  Vec2 Direction(Cell c) const { return direction[c.row * cols + c.col]; }
};

PathField ShortestPathField(const MazeSpec& spec);
// Same field toward an arbitrary open cell.
PathField ShortestPathField(const MazeSpec& spec, Cell target);

struct PointMassParams {
  double dt = 0.1;
  double friction = 0.05;
  double v_max = 2.0;
  double max_force = 1.0;
  // Half extent of the agent's square footprint used for wall contact.
  double half_size = 0.1;
  double goal_radius = 0.5;
  int horizon = 300;
  // Uniform jitter of the initial position around the start-cell centre.
  double start_jitter = 0.25;
};

// Force-actuated point mass in a maze.
//   state  = [px, py, vx, vy]
//   action = [fx, fy] in [-1, 1]^2; the force norm is capped at max_force.
// Sparse reward: 1 within goal_radius of the goal, 0 otherwise.
class PointMassMaze : public Env {
 public:
  PointMassMaze(std::string task_id, MazeSpec spec, PointMassParams params = {});

  const std::string& task_id() const override { return task_id_; }
  const MdpSpec& mdp() const override { return mdp_; }
  const StateLayout& layout() const override { return layout_; }
  Box2 bounds() const override;

  StateVector Step(const StateVector& state,
                   const ActionVector& action) const override;
  double Reward(const StateVector& state,
                const ActionVector& action) const override;
  bool IsValidState(const StateVector& state) const override;
  bool IsSuccessState(const StateVector& state) const override;
  StateVector SampleInitial(RngStream& rng) const override;

  // Every swept step keeps at least `clearance` between the agent footprint
  // and any wall. Used by augmentation to stay where the dynamics commute
  // with rigid motions.
  bool HasClearance(const TrajectorySegment& segment,
                    double clearance) const override;

  const MazeSpec& spec() const { return spec_; }
  const PathField& field() const { return field_; }
  const PointMassParams& params() const { return params_; }

 private:
  std::string task_id_;
  MazeSpec spec_;
  PointMassParams params_;
  PathField field_;
  MdpSpec mdp_;
  StateLayout layout_;
};

}  // namespace guda

#endif  // GUDA_MAZE_H_
