#include "mrdeploy/relay_planner.hpp"

#include "mrdeploy/error.hpp"

#include <algorithm>
#include <tuple>

namespace mrdeploy {

std::vector<WorldPoint> Cluster::relay_goals() const {
  std::vector<WorldPoint> out = chain.relays;
  if (x_mc) out.push_back(*x_mc);
  return out;
}

MaxConResult max_connectivity_relays(const GridMap& map, const WorldPoint& bs,
                                     const std::vector<WorldPoint>& goals, const CommConfig& cfg) {
  MaxConResult result;
  const CellIndex bs_cell = world_to_cell(bs, map);
  const DistanceField bs_field = solve(map, bs_cell);

  Raster<bool> bs_area = Raster<bool>::Constant(map.height(), map.width(), false);
  for (const CellIndex& c : comm_area(map, bs, cfg)) bs_area(c.y, c.x) = true;

  // Accumulate every remaining goal's communication area into a per-cell
  // counter, remembering which goals each cell hears.
  const std::size_t n_cells = map.cell_count();
  std::vector<int> count(n_cells, 0);
  std::vector<std::vector<int>> hears(n_cells);
  std::vector<std::vector<std::size_t>> area_of(goals.size());
  std::vector<int> pending;
  for (int g = 0; g < static_cast<int>(goals.size()); ++g) {
    const CellIndex gc = world_to_cell(goals[g], map);
    if (bs_area(gc.y, gc.x)) {
      result.bs_goals.push_back(g);
      continue;
    }
    if (map.occupied(gc) || !bs_field.reached(gc)) {
      result.unconnected.push_back(g);
      continue;
    }
    for (const CellIndex& c : comm_area(map, goals[g], cfg)) {
      if (!bs_field.reached(c)) continue;
      const std::size_t idx = map.linear(c);
      area_of[g].push_back(idx);
      ++count[idx];
      hears[idx].push_back(g);
    }
    if (area_of[g].empty()) {
      result.unconnected.push_back(g);
    } else {
      pending.push_back(g);
    }
  }
  std::sort(result.unconnected.begin(), result.unconnected.end());

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (count[i] > 0) candidates.push_back(i);
  }

  std::vector<bool> connected(goals.size(), false);
  std::size_t remaining = pending.size();
  const double* geo = bs_field.values().data();
  while (remaining > 0) {
    // Larger count wins, then smaller geodesic, then smaller index.
    auto better = [&](std::size_t a, std::size_t b) {
      return std::make_tuple(-count[a], geo[a], a) < std::make_tuple(-count[b], geo[b], b);
    };
    std::size_t best = n_cells;
    for (std::size_t idx : candidates) {
      if (count[idx] == 0) continue;
      if (best == n_cells || better(idx, best)) best = idx;
    }
    if (best == n_cells) throw InvariantViolation("greedy relay search found no candidate");

    MaxConRelay relay;
    relay.position = cell_to_world(map.cell(best), map);
    relay.bs_geodesic = geo[best];
    for (int g : hears[best]) {
      if (!connected[g]) relay.covered_goals.push_back(g);
    }
    if (static_cast<int>(relay.covered_goals.size()) != count[best]) {
      throw InvariantViolation("greedy relay coverage count out of sync");
    }
    for (int g : relay.covered_goals) {
      connected[g] = true;
      for (std::size_t idx : area_of[g]) --count[idx];
    }
    remaining -= relay.covered_goals.size();
    result.relays.push_back(std::move(relay));
  }
  return result;
}

RelayChain build_relay_chain(const GridMap& map, const WorldPoint& bs, const WorldPoint& x_mc,
                             const CommConfig& cfg, const DistanceField& bs_field_v) {
  RelayChain chain;
  chain.vp = voronoi_path(map, bs_field_v, x_mc);

  // Snapped path cells, base station first, without repeats.
  std::vector<CellIndex> cells;
  for (const WorldPoint& p : chain.vp.points) {
    const CellIndex c = world_to_cell(p, map);
    if (cells.empty() || !(cells.back() == c)) cells.push_back(c);
  }
  const CellIndex bs_cell = world_to_cell(bs, map);
  const CellIndex mc_cell = world_to_cell(x_mc, map);
  if (cells.empty() || !(cells.back() == mc_cell)) cells.push_back(mc_cell);

  std::size_t anchor = cells.size() - 1;
  std::vector<WorldPoint> placed;
  while (!comm_link(map, cells[anchor], bs_cell, cfg)) {
    std::size_t next = anchor;
    for (std::size_t j = 0; j < anchor; ++j) {
      if (cells[j] == cells[anchor]) continue;
      if (comm_link(map, cells[j], cells[anchor], cfg)) {
        next = j;
        break;
      }
    }
    if (next == anchor) throw UnreachableError("relay chain cannot advance along the path");
    anchor = next;
    placed.push_back(cell_to_world(cells[anchor], map));
  }
  chain.relays.assign(placed.rbegin(), placed.rend());
  return chain;
}

ClusterSet form_clusters(const GridMap& map, const WorldPoint& bs,
                         const std::vector<WorldPoint>& goals, const CommConfig& cfg) {
  const MaxConResult mc = max_connectivity_relays(map, bs, goals, cfg);
  ClusterSet set;
  set.unconnected_goals = mc.unconnected;

  if (!mc.bs_goals.empty()) {
    Cluster c;
    c.id = 0;
    c.goal_ids = mc.bs_goals;
    for (int g : c.goal_ids) c.primary_goals.push_back(goals[g]);
    set.clusters.push_back(std::move(c));
  }
  if (mc.relays.empty()) return set;

  const DistanceField bs_field_v =
      solve(map, std::span<const CellIndex>(std::vector<CellIndex>{world_to_cell(bs, map)}),
            voronoi_speed(map));
  for (const MaxConRelay& r : mc.relays) {
    Cluster c;
    c.id = set.size();
    c.x_mc = r.position;
    c.chain = build_relay_chain(map, bs, r.position, cfg, bs_field_v);
    c.goal_ids = r.covered_goals;
    for (int g : c.goal_ids) c.primary_goals.push_back(goals[g]);
    set.clusters.push_back(std::move(c));
  }
  return set;
}

}  // namespace mrdeploy
