#include "mrdeploy/allocation.hpp"

#include "mrdeploy/error.hpp"

#include <algorithm>

namespace mrdeploy {

GeodesicOracle::GeodesicOracle(const GridMap& map, std::size_t capacity)
    : map_(&map), capacity_(capacity) {
  if (capacity_ == 0) {
    capacity_ = std::max<std::size_t>(32, (std::size_t{256} << 20) / (map.cell_count() * sizeof(double) + 1));
  }
}

std::shared_ptr<const DistanceField> GeodesicOracle::field(const WorldPoint& source) {
  const CellIndex c = world_to_cell(source, *map_);
  const std::size_t key = map_->linear(c);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto f = std::make_shared<const DistanceField>(solve(*map_, c));
  ++solves_;
  if (cache_.size() >= capacity_) {
    cache_.erase(fifo_.front());
    fifo_.erase(fifo_.begin());
  }
  cache_.emplace(key, f);
  fifo_.push_back(key);
  return f;
}

double GeodesicOracle::distance(const WorldPoint& from, const WorldPoint& to) {
  return field(to)->at(world_to_cell(from, *map_));
}

CostMatrix build_cost_matrix(GeodesicOracle& oracle, std::span<const WorldPoint> robots,
                             std::span<const WorldPoint> goals, std::span<const GoalKind> kinds) {
  if (!kinds.empty() && kinds.size() != goals.size()) {
    throw Error("goal kind list does not match the goal list");
  }
  CostMatrix cm;
  cm.d.resize(static_cast<Eigen::Index>(robots.size()), static_cast<Eigen::Index>(goals.size()));
  cm.kinds.assign(goals.size(), GoalKind::kPrimary);
  if (!kinds.empty()) cm.kinds.assign(kinds.begin(), kinds.end());
  for (std::size_t j = 0; j < goals.size(); ++j) {
    const auto f = oracle.field(goals[j]);
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const double v = f->at(world_to_cell(robots[i], oracle.map()));
      cm.d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          v < kUnreached ? v : kUnreachableCost;
    }
  }
  return cm;
}

CostMatrix build_cost_matrix(const GridMap& map, std::span<const WorldPoint> robots,
                             std::span<const WorldPoint> goals, std::span<const GoalKind> kinds) {
  GeodesicOracle oracle(map, goals.size() + 1);
  return build_cost_matrix(oracle, robots, goals, kinds);
}

CostMatrix apply_relay_priority(const CostMatrix& d) {
  CostMatrix out = d;
  scale_relay_columns(out.d, out.kinds);
  return out;
}

Assignment hungarian(const CostMatrix& cm) {
  Assignment a;
  const int rows = static_cast<int>(cm.d.rows());
  const int cols = static_cast<int>(cm.d.cols());
  if (rows == 0 || cols == 0) return a;
  auto lex = [&](int i, int j) {
    return LexCost{cm.d(i, j), cm.kinds[static_cast<std::size_t>(j)] == GoalKind::kRelay ? 0.0
                                                                                      : 1.0};
  };
  if (rows <= cols) {
    const auto match = solve_assignment<LexCost>(rows, cols, lex);
    for (int i = 0; i < rows; ++i) a.pairs.emplace_back(i, match[i]);
  } else {
    const auto match =
        solve_assignment<LexCost>(cols, rows, [&](int i, int j) { return lex(j, i); });
    for (int j = 0; j < cols; ++j) a.pairs.emplace_back(match[j], j);
    std::sort(a.pairs.begin(), a.pairs.end());
  }
  for (const auto& [i, j] : a.pairs) a.cost += cm.d(i, j);
  return a;
}

ClusterAllocation allocate_cluster(GeodesicOracle& oracle, const Cluster& cluster,
                                   std::span<const WorldPoint> free_robots) {
  const int relays = cluster.relay_count();
  if (static_cast<int>(free_robots.size()) < relays + 1) {
    throw InfeasibleError("cluster " + std::to_string(cluster.id) + " needs " +
                          std::to_string(relays + 1) + " robots, " +
                          std::to_string(free_robots.size()) + " available");
  }
  ClusterAllocation out;
  out.goals = cluster.relay_goals();
  out.kinds.assign(out.goals.size(), GoalKind::kRelay);
  for (const WorldPoint& p : cluster.primary_goals) {
    out.goals.push_back(p);
    out.kinds.push_back(GoalKind::kPrimary);
  }

  std::vector<WorldPoint> pos(free_robots.begin(), free_robots.end());
  std::vector<bool> done(out.goals.size(), false);
  std::vector<bool> is_relay_robot(pos.size(), false);

  CostMatrix cm = build_cost_matrix(oracle, pos, out.goals, out.kinds);
  if (relays > 0) cm = apply_relay_priority(cm);
  const Assignment first = hungarian(cm);
  AllocationRound round0;
  for (const auto& [r, g] : first.pairs) {
    round0.pairs.emplace_back(r, g);
    done[static_cast<std::size_t>(g)] = true;
    pos[static_cast<std::size_t>(r)] = out.goals[static_cast<std::size_t>(g)];
    if (out.kinds[static_cast<std::size_t>(g)] == GoalKind::kRelay) {
      is_relay_robot[static_cast<std::size_t>(r)] = true;
      out.relay_robots.push_back(r);
    }
  }
  if (static_cast<int>(out.relay_robots.size()) != relays) {
    throw InvariantViolation("relay goals were not all assigned in the first round");
  }
  out.rounds.push_back(std::move(round0));

  std::vector<int> visitors;
  for (int r = 0; r < static_cast<int>(pos.size()); ++r) {
    if (!is_relay_robot[static_cast<std::size_t>(r)]) visitors.push_back(r);
  }
  for (;;) {
    std::vector<int> open;
    for (int g = 0; g < static_cast<int>(out.goals.size()); ++g) {
      if (!done[static_cast<std::size_t>(g)]) open.push_back(g);
    }
    if (open.empty()) break;
    if (visitors.empty()) throw InvariantViolation("primaries left but no visitor robot");
    std::vector<WorldPoint> vpos;
    std::vector<WorldPoint> gpos;
    for (int r : visitors) vpos.push_back(pos[static_cast<std::size_t>(r)]);
    for (int g : open) gpos.push_back(out.goals[static_cast<std::size_t>(g)]);
    const CostMatrix sub = build_cost_matrix(oracle, vpos, gpos);
    const Assignment a = hungarian(sub.d);
    AllocationRound round;
    for (const auto& [vi, gi] : a.pairs) {
      const int r = visitors[static_cast<std::size_t>(vi)];
      const int g = open[static_cast<std::size_t>(gi)];
      round.pairs.emplace_back(r, g);
      done[static_cast<std::size_t>(g)] = true;
      pos[static_cast<std::size_t>(r)] = out.goals[static_cast<std::size_t>(g)];
    }
    out.rounds.push_back(std::move(round));
  }
  return out;
}

ClusterAllocation allocate_cluster(const GridMap& map, const Cluster& cluster,
                                   std::span<const WorldPoint> free_robots) {
  GeodesicOracle oracle(map);
  return allocate_cluster(oracle, cluster, free_robots);
}

}  // namespace mrdeploy
