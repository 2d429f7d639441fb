#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mrdeploy {

// Row-major raster; row 0 is the top of the map. Row-major storage keeps
// data()[y * width + x] aligned with the linear cell index used for
// deterministic tie-breaking.
template <typename T>
using Raster = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Metric position. x grows with the column index, y with the row index.
using WorldPoint = Eigen::Vector2d;

struct CellIndex {
  int x = 0;
  int y = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  // Row-major order.
  friend std::strong_ordering operator<=>(const CellIndex& a, const CellIndex& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

class GridMap {
 public:
  using Occupancy = Raster<bool>;

  // All-free map.
  GridMap(int width, int height, double resolution);
  // occupancy(y, x) == true marks an obstacle.
  GridMap(Occupancy occupancy, double resolution);

  int width() const { return static_cast<int>(occupancy_.cols()); }
  int height() const { return static_cast<int>(occupancy_.rows()); }
  double resolution() const { return resolution_; }
  double world_width() const { return width() * resolution_; }
  double world_height() const { return height() * resolution_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(occupancy_.size()); }

  bool in_bounds(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width() && c.y < height();
  }
  bool occupied(CellIndex c) const { return occupancy_(c.y, c.x); }
  bool free(CellIndex c) const { return !occupancy_(c.y, c.x); }

  std::size_t linear(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(c.x);
  }
  CellIndex cell(std::size_t linear_index) const {
    const auto w = static_cast<std::size_t>(width());
    return {static_cast<int>(linear_index % w), static_cast<int>(linear_index / w)};
  }

  const Occupancy& occupancy() const { return occupancy_; }

 private:
  Occupancy occupancy_;
  double resolution_;
};

// Throws BoundsError for points outside the map.
CellIndex world_to_cell(const WorldPoint& p, const GridMap& map);
// Center of the cell. Throws BoundsError for out-of-range indices.
WorldPoint cell_to_world(CellIndex c, const GridMap& map);
// Center of the cell containing p.
inline WorldPoint snap(const WorldPoint& p, const GridMap& map) {
  return cell_to_world(world_to_cell(p, map), map);
}

// ASCII map format: "resolution_m <decimal>" header, then one row per line,
// '#' obstacle, '.' free, first row = top. Throws ParseError.
GridMap load_map(std::string_view text);
GridMap load_map_file(const std::string& path);
std::string format_map(const GridMap& map);

// Distinct free-cell centers drawn uniformly from the cells geodesically
// reachable from bs. Same seed, same output.
std::vector<WorldPoint> generate_goals(const GridMap& map, int count, const WorldPoint& bs,
                                       std::uint64_t seed);

struct Scenario {
  GridMap map;
  WorldPoint bs;
  std::vector<WorldPoint> robot_starts;
  std::vector<WorldPoint> goals;
  double comm_range = 10.0;  // d_gamma, meters
  double velocity = 0.2;     // m/s
  std::uint64_t seed = 0;

  int team_size() const { return static_cast<int>(robot_starts.size()); }
  int goal_count() const { return static_cast<int>(goals.size()); }

  // Snaps all positions to cell centers and checks the scenario invariants.
  // Throws Error on violation.
  void normalize();
};

}  // namespace mrdeploy
