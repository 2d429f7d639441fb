#pragma once

#include "mrdeploy/grid_world.hpp"

#include <random>
#include <string>
#include <vector>

namespace fixtures {

using mrdeploy::CellIndex;
using mrdeploy::GridMap;
using mrdeploy::WorldPoint;

inline GridMap::Occupancy blank(int w, int h, bool border) {
  GridMap::Occupancy occ = GridMap::Occupancy::Constant(h, w, false);
  if (border) {
    occ.row(0).setConstant(true);
    occ.row(h - 1).setConstant(true);
    occ.col(0).setConstant(true);
    occ.col(w - 1).setConstant(true);
  }
  return occ;
}

// Inclusive rectangle [x0, x1] x [y0, y1].
inline void fill(GridMap::Occupancy& occ, int x0, int y0, int x1, int y1, bool value = true) {
  occ.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1).setConstant(value);
}

inline WorldPoint center(const GridMap& map, int x, int y) {
  return mrdeploy::cell_to_world({x, y}, map);
}

// Two rooms east of a dividing wall, each behind its own doorway, base
// station far west. 200 x 120 cells at 0.2 m.
struct TwoRoom {
  GridMap map;
  WorldPoint bs;
  std::vector<WorldPoint> goals;  // room A first (3), then room B (2)
};

inline TwoRoom two_room() {
  auto occ = blank(200, 120, true);
  fill(occ, 100, 0, 100, 119);
  fill(occ, 100, 25, 100, 34, false);
  fill(occ, 100, 85, 100, 94, false);
  fill(occ, 100, 60, 199, 60);
  GridMap map(occ, 0.2);
  TwoRoom t{map, center(map, 10, 60), {}};
  for (auto [x, y] : {std::pair{150, 20}, {160, 30}, {155, 40}, {150, 90}, {160, 100}}) {
    t.goals.push_back(center(map, x, y));
  }
  return t;
}

// Open hall with goal groups at both far ends of the base station.
// The west group is the larger one.
struct TwoBranch {
  GridMap map;
  WorldPoint bs;
  std::vector<WorldPoint> goals;
};

inline TwoBranch two_branch() {
  auto occ = blank(200, 30, true);
  GridMap map(occ, 0.2);
  TwoBranch t{map, center(map, 100, 15), {}};
  for (int y : {10, 13, 16, 19}) t.goals.push_back(center(map, 8, y));
  for (int y : {12, 18}) t.goals.push_back(center(map, 191, y));
  return t;
}

// Straight walled corridor running east-west; `width_cells` free rows.
inline GridMap corridor(int length_cells, int width_cells, double res) {
  auto occ = blank(length_cells + 2, width_cells + 2, true);
  return GridMap(occ, res);
}

// Seeded random fill of interior cells with obstacles.
inline GridMap random_map(int w, int h, double fill_fraction, std::uint64_t seed, double res = 1.0) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution obstacle(fill_fraction);
  GridMap::Occupancy occ(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) occ(y, x) = obstacle(rng);
  }
  return GridMap(occ, res);
}

inline std::string project_dir() { return MRDEPLOY_SOURCE_DIR; }

}  // namespace fixtures
