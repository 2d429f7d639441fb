#include "mrdeploy/grid_world.hpp"

#include "mrdeploy/error.hpp"
#include "mrdeploy/fmm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace mrdeploy {

GridMap::GridMap(int width, int height, double resolution)
    : GridMap(Occupancy::Constant(height, width, false), resolution) {}

GridMap::GridMap(Occupancy occupancy, double resolution)
    : occupancy_(std::move(occupancy)), resolution_(resolution) {
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    throw Error("map resolution must be positive");
  }
  if (occupancy_.rows() < 1 || occupancy_.cols() < 1) {
    throw Error("map must have at least one cell");
  }
}

CellIndex world_to_cell(const WorldPoint& p, const GridMap& map) {
  if (!p.allFinite()) throw BoundsError("non-finite world point");
  const CellIndex c{static_cast<int>(std::floor(p.x() / map.resolution())),
                    static_cast<int>(std::floor(p.y() / map.resolution()))};
  if (!map.in_bounds(c)) {
    std::ostringstream msg;
    msg << "point (" << p.x() << ", " << p.y() << ") is outside the map";
    throw BoundsError(msg.str());
  }
  return c;
}

WorldPoint cell_to_world(CellIndex c, const GridMap& map) {
  if (!map.in_bounds(c)) {
    throw BoundsError("cell (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                      ") is outside the map");
  }
  const double h = map.resolution();
  return {(c.x + 0.5) * h, (c.y + 0.5) * h};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

GridMap load_map(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty map");

  const std::string_view header = trim(lines[0]);
  constexpr std::string_view kKey = "resolution_m";
  if (header.substr(0, kKey.size()) != kKey) {
    throw ParseError(1, "expected header 'resolution_m <decimal>'");
  }
  std::string value(trim(header.substr(kKey.size())));
  double resolution = 0.0;
  {
    std::size_t used = 0;
    try {
      resolution = std::stod(value, &used);
    } catch (const std::exception&) {
      throw ParseError(1, "resolution is not a number");
    }
    if (used != value.size() || !(resolution > 0.0) || !std::isfinite(resolution)) {
      throw ParseError(1, "resolution must be a positive decimal");
    }
  }
  if (lines.size() < 2) throw ParseError(2, "map has no rows");

  const std::size_t width = trim(lines[1]).size();
  if (width == 0) throw ParseError(2, "empty row");
  GridMap::Occupancy occ(static_cast<Eigen::Index>(lines.size() - 1),
                         static_cast<Eigen::Index>(width));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string_view row = trim(lines[r]);
    const int line_no = static_cast<int>(r + 1);
    if (row.size() != width) {
      throw ParseError(line_no, "row has " + std::to_string(row.size()) +
                                    " cells, expected " + std::to_string(width));
    }
    for (std::size_t x = 0; x < width; ++x) {
      const char ch = row[x];
      if (ch != '#' && ch != '.') {
        throw ParseError(line_no, std::string("unexpected character '") + ch + "'");
      }
      occ(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(x)) = (ch == '#');
    }
  }
  return GridMap(std::move(occ), resolution);
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_map(buf.str());
}

std::string format_map(const GridMap& map) {
  std::ostringstream out;
  out.precision(17);
  out << "resolution_m " << map.resolution() << '\n';
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out << (map.occupied({x, y}) ? '#' : '.');
    out << '\n';
  }
  return out.str();
}

std::vector<WorldPoint> generate_goals(const GridMap& map, int count, const WorldPoint& bs,
                                       std::uint64_t seed) {
  if (count < 0) throw Error("goal count must be non-negative");
  if (count == 0) return {};

  const CellIndex bs_cell = world_to_cell(bs, map);
  const DistanceField reach = solve(map, bs_cell);
  const auto& v = reach.values();
  const auto reachable = static_cast<int>((v < kUnreached).count());
  if (reachable < count) {
    throw CapacityError("requested " + std::to_string(count) + " goals but only " +
                        std::to_string(reachable) + " reachable free cells");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, map.cell_count() - 1);
  std::unordered_set<std::size_t> taken;
  std::vector<WorldPoint> goals;
  goals.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(goals.size()) < count) {
    const std::size_t idx = pick(rng);
    if (!(v.data()[idx] < kUnreached) || !taken.insert(idx).second) continue;
    goals.push_back(cell_to_world(map.cell(idx), map));
  }
  return goals;
}

void Scenario::normalize() {
  if (!(comm_range > 0.0)) throw Error("communication range must be positive");
  if (!(velocity > 0.0)) throw Error("velocity must be positive");
  if (robot_starts.empty()) throw Error("team size must be at least 1");
  if (goals.empty()) throw Error("goal count must be at least 1");
  if (robot_starts.size() > goals.size()) {
    throw Error("team size (" + std::to_string(robot_starts.size()) +
                ") exceeds goal count (" + std::to_string(goals.size()) + ")");
  }
  auto snap_free = [&](WorldPoint& p, const char* what) {
    const CellIndex c = world_to_cell(p, map);
    if (map.occupied(c)) throw Error(std::string(what) + " lies in an obstacle cell");
    p = cell_to_world(c, map);
  };
  snap_free(bs, "base station");
  for (auto& r : robot_starts) snap_free(r, "robot start");
  for (auto& g : goals) snap_free(g, "goal");
}

}  // namespace mrdeploy
