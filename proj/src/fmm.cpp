#include "mrdeploy/fmm.hpp"

#include "mrdeploy/comms.hpp"
#include "mrdeploy/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <queue>
#include <utility>

namespace mrdeploy {

namespace {

enum class Tag : unsigned char { kFar, kTrial, kFrozen };

// Narrow-band marcher over a W x H raster. Sources are frozen at 0; seeds
// enter the band with a preset value. Cells with zero speed are never entered.
Raster<double> march(int width, int height, double h, const Raster<double>& speed,
                     std::span<const std::size_t> sources,
                     std::span<const std::pair<std::size_t, double>> seeds = {}) {
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  Raster<double> value = Raster<double>::Constant(height, width, kUnreached);
  std::vector<Tag> tag(n, Tag::kFar);
  double* t = value.data();
  const double* f = speed.data();

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t s : sources) {
    t[s] = 0.0;
    heap.emplace(0.0, s);
  }
  for (const auto& [s, v] : seeds) {
    if (!(v < t[s])) continue;
    t[s] = v;
    tag[s] = Tag::kTrial;
    heap.emplace(v, s);
  }

  const auto w = static_cast<std::size_t>(width);
  auto frozen_value = [&](std::size_t idx) {
    return tag[idx] == Tag::kFrozen ? t[idx] : kUnreached;
  };
  auto update = [&](std::size_t idx) {
    const std::size_t x = idx % w;
    const std::size_t y = idx / w;
    double a = kUnreached;
    double b = kUnreached;
    if (x > 0) a = std::min(a, frozen_value(idx - 1));
    if (x + 1 < w) a = std::min(a, frozen_value(idx + 1));
    if (y > 0) b = std::min(b, frozen_value(idx - w));
    if (y + 1 < static_cast<std::size_t>(height)) b = std::min(b, frozen_value(idx + w));
    const double step = h / f[idx];
    if (a > b) std::swap(a, b);
    if (b - a >= step) return a + step;
    return 0.5 * (a + b + std::sqrt(2.0 * step * step - (a - b) * (a - b)));
  };

  while (!heap.empty()) {
    const auto [val, idx] = heap.top();
    heap.pop();
    if (tag[idx] == Tag::kFrozen || val != t[idx]) continue;
    tag[idx] = Tag::kFrozen;

    const std::size_t x = idx % w;
    const std::size_t y = idx / w;
    std::array<std::size_t, 4> nbr{};
    int count = 0;
    if (x > 0) nbr[count++] = idx - 1;
    if (x + 1 < w) nbr[count++] = idx + 1;
    if (y > 0) nbr[count++] = idx - w;
    if (y + 1 < static_cast<std::size_t>(height)) nbr[count++] = idx + w;
    for (int k = 0; k < count; ++k) {
      const std::size_t m = nbr[k];
      if (tag[m] == Tag::kFrozen || !(f[m] > 0.0)) continue;
      const double cand = update(m);
      if (cand < t[m]) {
        t[m] = cand;
        tag[m] = Tag::kTrial;
        heap.emplace(cand, m);
      }
    }
  }
  return value;
}

// Straight-line travel times from each source to the visible cells within
// kExactStartRadius cells, integrating 1/F over the crossed cells. A cell is
// only seeded next to a closer seeded cell, so no seed is a local minimum.
std::vector<std::pair<std::size_t, double>> exact_start(const GridMap& map,
                                                        std::span<const CellIndex> sources,
                                                        const Raster<double>& speed) {
  const int r = static_cast<int>(std::floor(kExactStartRadius));
  const int span = 2 * r + 1;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if ((dx != 0 || dy != 0) && std::hypot(dx, dy) <= kExactStartRadius) offsets.emplace_back(dx, dy);
    }
  }
  std::stable_sort(offsets.begin(), offsets.end(), [](const auto& a, const auto& b) {
    return a.first * a.first + a.second * a.second < b.first * b.first + b.second * b.second;
  });

  std::vector<std::pair<std::size_t, double>> seeds;
  std::vector<char> seeded(static_cast<std::size_t>(span * span));
  for (const CellIndex& s : sources) {
    std::fill(seeded.begin(), seeded.end(), 0);
    auto at = [&](int dx, int dy) -> char& {
      return seeded[static_cast<std::size_t>((dy + r) * span + dx + r)];
    };
    at(0, 0) = 1;
    for (const auto& [dx, dy] : offsets) {
      const CellIndex c{s.x + dx, s.y + dy};
      if (!map.in_bounds(c) || !(speed(c.y, c.x) > 0.0)) continue;
      const double d2 = dx * dx + dy * dy;
      bool anchored = false;
      for (const auto& [ex, ey] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int nx = dx + ex, ny = dy + ey;
        if (std::abs(nx) > r || std::abs(ny) > r || nx * nx + ny * ny >= d2) continue;
        if (at(nx, ny)) anchored = true;
      }
      if (!anchored || !line_of_sight(map, s, c)) continue;
      const auto crossed = supercover(s, c);
      double slowness = 0.0;
      for (const CellIndex& q : crossed) slowness += 1.0 / speed(q.y, q.x);
      slowness /= static_cast<double>(crossed.size());
      at(dx, dy) = 1;
      seeds.emplace_back(map.linear(c), std::sqrt(d2) * map.resolution() * slowness);
    }
  }
  return seeds;
}

}  // namespace

SpeedField unit_speed(const GridMap& map) {
  SpeedField s{Raster<double>(map.height(), map.width())};
  s.values = map.occupancy().select(Raster<double>::Zero(map.height(), map.width()),
                                    Raster<double>::Ones(map.height(), map.width()));
  return s;
}

DistanceField solve(const GridMap& map, std::span<const CellIndex> sources,
                    const SpeedField& speed) {
  if (speed.values.rows() != map.height() || speed.values.cols() != map.width()) {
    throw Error("speed field dimensions do not match the map");
  }
  if (sources.empty()) throw InvalidSourceError("no source cells");
  std::vector<std::size_t> idx;
  idx.reserve(sources.size());
  for (const CellIndex& c : sources) {
    if (!map.in_bounds(c)) throw InvalidSourceError("source outside the map");
    if (map.occupied(c)) {
      throw InvalidSourceError("source (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                               ") lies in an obstacle cell");
    }
    idx.push_back(map.linear(c));
  }
  const auto seeds = exact_start(map, sources, speed.values);
  Raster<double> values =
      march(map.width(), map.height(), map.resolution(), speed.values, idx, seeds);
  return DistanceField(std::move(values), {sources.begin(), sources.end()});
}

DistanceField solve(const GridMap& map, CellIndex source) {
  return solve(map, std::span<const CellIndex>(&source, 1), unit_speed(map));
}

DistanceField obstacle_distance_field(const GridMap& map) {
  // Pad by one obstacle ring so the border acts as an obstacle, then crop.
  const int w = map.width() + 2;
  const int hgt = map.height() + 2;
  Raster<bool> solid = Raster<bool>::Constant(hgt, w, true);
  solid.block(1, 1, map.height(), map.width()) = map.occupancy();

  std::vector<std::size_t> src;
  std::vector<CellIndex> inner_sources;
  for (int y = 0; y < hgt; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!solid(y, x)) continue;
      src.push_back(static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                    static_cast<std::size_t>(x));
      if (x > 0 && y > 0 && x < w - 1 && y < hgt - 1) inner_sources.push_back({x - 1, y - 1});
    }
  }
  const Raster<double> speed = Raster<double>::Ones(hgt, w);
  const Raster<double> padded = march(w, hgt, map.resolution(), speed, src);
  return DistanceField(padded.block(1, 1, map.height(), map.width()), std::move(inner_sources));
}

SpeedField voronoi_speed(const GridMap& map) {
  const DistanceField clearance = obstacle_distance_field(map);
  const double peak = clearance.values().maxCoeff();
  SpeedField s{Raster<double>::Zero(map.height(), map.width())};
  if (!(peak > 0.0)) return s;  // every cell is an obstacle
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.occupied({x, y})) continue;
      s.values(y, x) = std::max(clearance.values()(y, x) / peak, kVoronoiSpeedFloor);
    }
  }
  return s;
}

namespace {

struct Stencil {
  std::array<CellIndex, 4> corner;  // (i0,j0) (i1,j0) (i0,j1) (i1,j1)
  std::array<double, 4> value;
  double fx = 0.0;
  double fy = 0.0;
};

Stencil stencil_at(const DistanceField& field, const GridMap& map, const WorldPoint& p) {
  const double h = map.resolution();
  const double u = std::clamp(p.x() / h - 0.5, 0.0, static_cast<double>(map.width() - 1));
  const double v = std::clamp(p.y() / h - 0.5, 0.0, static_cast<double>(map.height() - 1));
  const int i0 = std::min(static_cast<int>(std::floor(u)), std::max(map.width() - 2, 0));
  const int j0 = std::min(static_cast<int>(std::floor(v)), std::max(map.height() - 2, 0));
  const int i1 = std::min(i0 + 1, map.width() - 1);
  const int j1 = std::min(j0 + 1, map.height() - 1);

  Stencil s;
  s.corner = {CellIndex{i0, j0}, CellIndex{i1, j0}, CellIndex{i0, j1}, CellIndex{i1, j1}};
  s.fx = i1 > i0 ? u - i0 : 0.0;
  s.fy = j1 > j0 ? v - j0 : 0.0;
  double lo = kUnreached;
  double hi = -kUnreached;
  for (int k = 0; k < 4; ++k) {
    s.value[k] = field.at(s.corner[k]);
    if (s.value[k] < kUnreached) {
      lo = std::min(lo, s.value[k]);
      hi = std::max(hi, s.value[k]);
    }
  }
  if (lo < kUnreached) {
    const double fill = hi + (hi - lo) + h;
    for (double& val : s.value) {
      if (!(val < kUnreached)) val = fill;
    }
  }
  return s;
}

double interpolate(const Stencil& s) {
  const double top = s.value[0] * (1.0 - s.fx) + s.value[1] * s.fx;
  const double bottom = s.value[2] * (1.0 - s.fx) + s.value[3] * s.fx;
  return top * (1.0 - s.fy) + bottom * s.fy;
}

// Upwind gradient at a reached cell, one-sided toward the smaller neighbour.
Eigen::Vector2d cell_gradient(const DistanceField& field, const GridMap& map, CellIndex c) {
  const double u = field.at(c);
  auto val = [&](int x, int y) {
    const CellIndex n{x, y};
    return map.in_bounds(n) ? field.at(n) : kUnreached;
  };
  auto axis = [&](double lo_side, double hi_side) {
    if (!(std::min(lo_side, hi_side) < u)) return 0.0;
    return hi_side < lo_side ? hi_side - u : u - lo_side;
  };
  return Eigen::Vector2d(axis(val(c.x - 1, c.y), val(c.x + 1, c.y)),
                         axis(val(c.x, c.y - 1), val(c.x, c.y + 1))) /
         map.resolution();
}

// Bilinear blend of the corner gradients, skipping unreached corners.
Eigen::Vector2d smooth_gradient(const DistanceField& field, const GridMap& map, const Stencil& s) {
  const std::array<double, 4> w{(1.0 - s.fx) * (1.0 - s.fy), s.fx * (1.0 - s.fy),
                                (1.0 - s.fx) * s.fy, s.fx * s.fy};
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int k = 0; k < 4; ++k) {
    if (w[k] > 0.0 && field.reached(s.corner[k])) g += w[k] * cell_gradient(field, map, s.corner[k]);
  }
  return g;
}

bool inside(const GridMap& map, const WorldPoint& p) {
  return p.allFinite() && p.x() >= 0.0 && p.y() >= 0.0 && p.x() < map.world_width() &&
         p.y() < map.world_height();
}

// A move between neighbouring cells that does not squeeze diagonally
// between two obstacles.
bool passable(const GridMap& map, CellIndex a, CellIndex b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  if (std::abs(dx) > 1 || std::abs(dy) > 1) return false;
  if (dx == 0 || dy == 0) return true;
  return map.free({a.x + dx, a.y}) && map.free({a.x, a.y + dy});
}

}  // namespace

double sample(const DistanceField& field, const GridMap& map, const WorldPoint& p) {
  const Stencil s = stencil_at(field, map, p);
  return interpolate(s);
}

double path_length(std::span<const WorldPoint> points) {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) len += (points[i] - points[i - 1]).norm();
  return len;
}

Path descend(const DistanceField& field, const GridMap& map, const WorldPoint& start) {
  const CellIndex start_cell = world_to_cell(start, map);
  if (!field.reached(start_cell)) throw UnreachableError("descent start is not reached");

  Path path;
  WorldPoint cur = cell_to_world(start_cell, map);
  double cur_value = field.at(start_cell);
  path.points.push_back(cur);
  if (cur_value == 0.0) return path;

  const double h = map.resolution();
  const std::size_t max_steps = 16 * map.cell_count() + 64;
  for (std::size_t iter = 0; iter < max_steps; ++iter) {
    const Stencil s = stencil_at(field, map, cur);

    // Finish on a source within the stencil; the nearest one wins.
    int best_src = -1;
    double best_d = kUnreached;
    for (int k = 0; k < 4; ++k) {
      if (field.at(s.corner[k]) != 0.0) continue;
      if (!passable(map, world_to_cell(cur, map), s.corner[k])) continue;
      const double d = (cell_to_world(s.corner[k], map) - cur).norm();
      if (d < best_d) {
        best_d = d;
        best_src = k;
      }
    }
    if (best_src >= 0) {
      const WorldPoint end = cell_to_world(s.corner[best_src], map);
      if ((end - cur).norm() > 0.0) path.points.push_back(end);
      path.length = path_length(path.points);
      return path;
    }

    const Eigen::Vector2d g = smooth_gradient(field, map, s);
    const double gnorm = g.norm();
    if (gnorm > 0.0 && std::isfinite(gnorm)) {
      const WorldPoint next = cur - (0.5 * h / gnorm) * g;
      if (inside(map, next)) {
        const CellIndex nc = world_to_cell(next, map);
        if (field.reached(nc) && passable(map, world_to_cell(cur, map), nc)) {
          const double next_value = sample(field, map, next);
          if (next_value < cur_value) {
            cur = next;
            cur_value = next_value;
            path.points.push_back(cur);
            continue;
          }
        }
      }
    }

    // Interpolated step failed: hop to the lowest reached stencil corner.
    int best = -1;
    double best_v = cur_value;
    const CellIndex here = world_to_cell(cur, map);
    for (int k = 0; k < 4; ++k) {
      const double val = field.at(s.corner[k]);
      if (val < best_v && passable(map, here, s.corner[k])) {
        best_v = val;
        best = k;
      }
    }
    if (best >= 0) {
      cur = cell_to_world(s.corner[best], map);
      cur_value = best_v;
      path.points.push_back(cur);
      continue;
    }

    // Still stuck: walk the 4-neighbourhood downhill until below cur_value.
    CellIndex c = world_to_cell(cur, map);
    double cv = field.at(c);
    while (!(cv < cur_value) && cv > 0.0) {
      CellIndex next = c;
      double nv = cv;
      for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const CellIndex n{c.x + dx, c.y + dy};
        if (!map.in_bounds(n) || !field.reached(n)) continue;
        if (field.at(n) < nv) {
          nv = field.at(n);
          next = n;
        }
      }
      if (next == c) throw DescentStallError("gradient descent failed to decrease the field");
      c = next;
      cv = nv;
      path.points.push_back(cell_to_world(c, map));
    }
    cur = cell_to_world(c, map);
    cur_value = cv;
    if (path.points.back() != cur) path.points.push_back(cur);
  }
  throw DescentStallError("gradient descent exceeded its step budget");
}

Path voronoi_path(const GridMap& map, const DistanceField& bs_field_v, const WorldPoint& target) {
  Path p = descend(bs_field_v, map, target);
  std::reverse(p.points.begin(), p.points.end());
  return p;
}

void write_field_csv(std::ostream& out, const DistanceField& field) {
  const auto& v = field.values();
  const auto old_precision = out.precision(17);
  for (Eigen::Index y = 0; y < v.rows(); ++y) {
    for (Eigen::Index x = 0; x < v.cols(); ++x) {
      if (x > 0) out << ',';
      if (v(y, x) < kUnreached) {
        out << v(y, x);
      } else {
        out << "inf";
      }
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mrdeploy
