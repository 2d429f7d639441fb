#pragma once

#include "mrdeploy/grid_world.hpp"

#include <span>
#include <vector>

namespace mrdeploy {

// Line-of-sight disk model.
struct CommConfig {
  double d_gamma = 10.0;  // meters, inclusive
};

// Absolute slack on the range test so that hops placed exactly d_gamma
// apart on cell centers are not lost to rounding.
inline constexpr double kRangeSlack = 1e-9;

// Cells touched by the closed segment between the centers of a and b,
// including every cell that only shares a corner point with it.
std::vector<CellIndex> supercover(CellIndex a, CellIndex b);

// True iff no cell of the supercover between the two snapped points is an
// obstacle. Throws InvalidEndpointError if an endpoint is on an obstacle.
bool line_of_sight(const GridMap& map, const WorldPoint& a, const WorldPoint& b);
bool line_of_sight(const GridMap& map, CellIndex a, CellIndex b);

bool comm_link(const GridMap& map, const WorldPoint& a, const WorldPoint& b,
               const CommConfig& cfg);
bool comm_link(const GridMap& map, CellIndex a, CellIndex b, const CommConfig& cfg);

// Free cells linked to p, in row-major order.
std::vector<CellIndex> comm_area(const GridMap& map, const WorldPoint& p, const CommConfig& cfg);

// Multi-hop reachability from the base station over the LoS/range graph of
// the given agents. Element i is true iff agent i is connected.
std::vector<bool> connected_to_bs(const GridMap& map, const WorldPoint& bs,
                                  std::span<const WorldPoint> agents, const CommConfig& cfg);

}  // namespace mrdeploy
