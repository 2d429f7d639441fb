#include "mrdeploy/comms.hpp"

#include "mrdeploy/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

namespace mrdeploy {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Visits the supercover of the segment between two cell centers. Works in
// half-cell units so the arithmetic is exact: cell i spans [2i, 2i+2] and
// its center sits at 2i+1. Stops early when visit returns false.
template <typename Visit>
bool for_each_supercover(CellIndex a, CellIndex b, Visit&& visit) {
  if (a.x > b.x) std::swap(a, b);
  if (a.x == b.x) {
    const int lo = std::min(a.y, b.y);
    const int hi = std::max(a.y, b.y);
    for (int y = lo; y <= hi; ++y) {
      if (!visit(CellIndex{a.x, y})) return false;
    }
    return true;
  }
  const std::int64_t x0 = 2 * std::int64_t{a.x} + 1;
  const std::int64_t y0 = 2 * std::int64_t{a.y} + 1;
  const std::int64_t x1 = 2 * std::int64_t{b.x} + 1;
  const std::int64_t dx = x1 - x0;
  const std::int64_t dy = 2 * std::int64_t{b.y} + 1 - y0;
  for (int c = a.x; c <= b.x; ++c) {
    const std::int64_t xl = std::max<std::int64_t>(2 * std::int64_t{c}, x0);
    const std::int64_t xr = std::min<std::int64_t>(2 * std::int64_t{c} + 2, x1);
    // y * dx at both slab ends.
    const std::int64_t nl = y0 * dx + (xl - x0) * dy;
    const std::int64_t nr = y0 * dx + (xr - x0) * dy;
    const std::int64_t ylo = std::min(nl, nr);
    const std::int64_t yhi = std::max(nl, nr);
    // Row r's closed span [2r, 2r+2] meets [ylo, yhi] / dx.
    const std::int64_t r_first = ceil_div(ylo, 2 * dx) - 1;
    const std::int64_t r_last = floor_div(yhi, 2 * dx);
    const std::int64_t r_min = std::min(a.y, b.y);
    const std::int64_t r_max = std::max(a.y, b.y);
    for (std::int64_t r = std::max(r_first, r_min); r <= std::min(r_last, r_max); ++r) {
      if (!visit(CellIndex{c, static_cast<int>(r)})) return false;
    }
  }
  return true;
}

void require_free(const GridMap& map, CellIndex c) {
  if (!map.in_bounds(c)) throw InvalidEndpointError("endpoint outside the map");
  if (map.occupied(c)) throw InvalidEndpointError("endpoint lies in an obstacle cell");
}

bool within_range(const GridMap& map, CellIndex a, CellIndex b, double d_gamma) {
  const double h = map.resolution();
  const double dx = (b.x - a.x) * h;
  const double dy = (b.y - a.y) * h;
  return std::sqrt(dx * dx + dy * dy) <= d_gamma + kRangeSlack;
}

}  // namespace

std::vector<CellIndex> supercover(CellIndex a, CellIndex b) {
  std::vector<CellIndex> cells;
  for_each_supercover(a, b, [&](CellIndex c) {
    cells.push_back(c);
    return true;
  });
  std::sort(cells.begin(), cells.end());
  return cells;
}

bool line_of_sight(const GridMap& map, CellIndex a, CellIndex b) {
  require_free(map, a);
  require_free(map, b);
  return for_each_supercover(a, b, [&](CellIndex c) { return map.free(c); });
}

bool line_of_sight(const GridMap& map, const WorldPoint& a, const WorldPoint& b) {
  return line_of_sight(map, world_to_cell(a, map), world_to_cell(b, map));
}

bool comm_link(const GridMap& map, CellIndex a, CellIndex b, const CommConfig& cfg) {
  require_free(map, a);
  require_free(map, b);
  return within_range(map, a, b, cfg.d_gamma) && line_of_sight(map, a, b);
}

bool comm_link(const GridMap& map, const WorldPoint& a, const WorldPoint& b,
               const CommConfig& cfg) {
  return comm_link(map, world_to_cell(a, map), world_to_cell(b, map), cfg);
}

std::vector<CellIndex> comm_area(const GridMap& map, const WorldPoint& p, const CommConfig& cfg) {
  const CellIndex c0 = world_to_cell(p, map);
  require_free(map, c0);
  const int reach = static_cast<int>(std::floor(cfg.d_gamma / map.resolution())) + 1;
  const int x_lo = std::max(0, c0.x - reach);
  const int x_hi = std::min(map.width() - 1, c0.x + reach);
  const int y_lo = std::max(0, c0.y - reach);
  const int y_hi = std::min(map.height() - 1, c0.y + reach);

  std::vector<CellIndex> area;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const CellIndex c{x, y};
      if (map.occupied(c) || !within_range(map, c0, c, cfg.d_gamma)) continue;
      if (for_each_supercover(c0, c, [&](CellIndex s) { return map.free(s); })) {
        area.push_back(c);
      }
    }
  }
  return area;
}

std::vector<bool> connected_to_bs(const GridMap& map, const WorldPoint& bs,
                                  std::span<const WorldPoint> agents, const CommConfig& cfg) {
  // Node 0 is the base station.
  std::vector<CellIndex> nodes;
  nodes.reserve(agents.size() + 1);
  nodes.push_back(world_to_cell(bs, map));
  for (const auto& a : agents) nodes.push_back(world_to_cell(a, map));
  for (const auto& c : nodes) require_free(map, c);

  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 1; v < nodes.size(); ++v) {
      if (seen[v]) continue;
      if (comm_link(map, nodes[u], nodes[v], cfg)) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return {seen.begin() + 1, seen.end()};
}

}  // namespace mrdeploy
