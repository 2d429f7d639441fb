#pragma once

#include "mrdeploy/grid_world.hpp"

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace mrdeploy {

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();
// Cells within this many cell widths of a source, and in its line of sight,
// start from the straight-line travel time instead of the upwind update.
inline constexpr double kExactStartRadius = 10.0;
// Lower clamp of the clearance-based speed on free cells.
inline constexpr double kVoronoiSpeedFloor = 1e-3;

// Wavefront speed per cell, 0 on obstacles.
struct SpeedField {
  Raster<double> values;
};

class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(Raster<double> values, std::vector<CellIndex> sources)
      : values_(std::move(values)), sources_(std::move(sources)) {}

  int width() const { return static_cast<int>(values_.cols()); }
  int height() const { return static_cast<int>(values_.rows()); }
  double at(CellIndex c) const { return values_(c.y, c.x); }
  bool reached(CellIndex c) const { return values_(c.y, c.x) < kUnreached; }
  const Raster<double>& values() const { return values_; }
  const std::vector<CellIndex>& sources() const { return sources_; }

 private:
  Raster<double> values_;
  std::vector<CellIndex> sources_;
};

struct Path {
  std::vector<WorldPoint> points;
  double length = 0.0;
};

SpeedField unit_speed(const GridMap& map);

// First-order upwind Fast Marching on the 4-neighbourhood, started from
// exact values around each source. Heap ties are broken by row-major cell
// index, so the result is bit-reproducible.
// Throws InvalidSourceError if a source is out of bounds or on an obstacle.
DistanceField solve(const GridMap& map, std::span<const CellIndex> sources,
                    const SpeedField& speed);
DistanceField solve(const GridMap& map, CellIndex source);

// Distance to the nearest obstacle, with the map border treated as an
// obstacle ring just outside the grid.
DistanceField obstacle_distance_field(const GridMap& map);

// Clearance normalised into (0, 1], floored at kVoronoiSpeedFloor.
SpeedField voronoi_speed(const GridMap& map);

// Follows the interpolated gradient of field from start (snapped to its
// cell center) down to a source. The field value strictly decreases along
// the returned points.
Path descend(const DistanceField& field, const GridMap& map, const WorldPoint& start);

// Clearance-maximising path from the source of bs_field_v to target, ordered
// source first.
Path voronoi_path(const GridMap& map, const DistanceField& bs_field_v, const WorldPoint& target);

// Bilinear interpolation of the field at p; unreached stencil corners are
// replaced by a value above every reached corner.
double sample(const DistanceField& field, const GridMap& map, const WorldPoint& p);

double path_length(std::span<const WorldPoint> points);

// Row-major CSV, one grid row per line, unreached cells written as "inf".
void write_field_csv(std::ostream& out, const DistanceField& field);

}  // namespace mrdeploy
