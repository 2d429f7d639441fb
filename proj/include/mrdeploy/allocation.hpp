#pragma once

#include "mrdeploy/assignment.hpp"
#include "mrdeploy/fmm.hpp"
#include "mrdeploy/grid_world.hpp"
#include "mrdeploy/relay_planner.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <span>
#include <vector>

namespace mrdeploy {

// Cost stored for robot/goal pairs with no free path between them.
inline constexpr double kUnreachableCost = 1e9;
// Stand-in for min(D) when a robot already stands on a goal.
inline constexpr double kZeroCostFloor = 1e-6;

enum class GoalKind { kRelay, kPrimary };

struct CostMatrix {
  Eigen::MatrixXd d;  // robots x goals, meters
  std::vector<GoalKind> kinds;
};

// Caches unit-speed distance fields keyed by source cell. Fields are
// evicted first-in first-out once more than `capacity` are held; capacity 0
// sizes the cache to roughly 256 MB of fields.
class GeodesicOracle {
 public:
  explicit GeodesicOracle(const GridMap& map, std::size_t capacity = 0);

  const GridMap& map() const { return *map_; }
  std::shared_ptr<const DistanceField> field(const WorldPoint& source);
  // Geodesic length from `from` to `to`; kUnreached when disconnected.
  double distance(const WorldPoint& from, const WorldPoint& to);
  std::size_t solves() const { return solves_; }

 private:
  const GridMap* map_;
  std::size_t capacity_;
  std::size_t solves_ = 0;
  std::map<std::size_t, std::shared_ptr<const DistanceField>> cache_;
  std::vector<std::size_t> fifo_;
};

// One unit-speed solve per goal; D(i, j) is goal j's field at robot i.
CostMatrix build_cost_matrix(GeodesicOracle& oracle, std::span<const WorldPoint> robots,
                             std::span<const WorldPoint> goals,
                             std::span<const GoalKind> kinds = {});
CostMatrix build_cost_matrix(const GridMap& map, std::span<const WorldPoint> robots,
                             std::span<const WorldPoint> goals,
                             std::span<const GoalKind> kinds = {});

// Rescales relay columns so that every relay entry is at most min(D):
// D*_relay = D_relay * min(D) / max(D_relay). Primary columns are untouched.
template <typename Derived>
void scale_relay_columns(Eigen::MatrixBase<Derived>& d, std::span<const GoalKind> kinds) {
  using Scalar = typename Derived::Scalar;
  bool any_relay = false;
  Scalar relay_max(0);
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (kinds[static_cast<std::size_t>(j)] != GoalKind::kRelay) continue;
    relay_max = any_relay ? std::max(relay_max, d.col(j).maxCoeff()) : d.col(j).maxCoeff();
    any_relay = true;
  }
  if (!any_relay || d.size() == 0 || relay_max == Scalar(0)) return;
  Scalar global_min = d.minCoeff();
  if (global_min == Scalar(0)) global_min = Scalar(kZeroCostFloor);
  const Scalar factor = global_min / relay_max;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (kinds[static_cast<std::size_t>(j)] != GoalKind::kRelay) continue;
    // max * (min / max) can land one ulp above min
    d.col(j) = (d.col(j) * factor).cwiseMin(global_min);
  }
}

// Returns D with relay-priority scaling applied. A matrix without relay
// columns comes back unchanged.
CostMatrix apply_relay_priority(const CostMatrix& d);

// Minimum-cost assignment. Among assignments of equal cost, the one that
// covers the most relay columns is preferred.
Assignment hungarian(const CostMatrix& d);

struct AllocationRound {
  std::vector<std::pair<int, int>> pairs;  // (robot, cluster goal), robot indexes free_robots
};

struct ClusterAllocation {
  std::vector<WorldPoint> goals;  // relay goals (chain, then x_mc), then primaries
  std::vector<GoalKind> kinds;
  std::vector<AllocationRound> rounds;
  std::vector<int> relay_robots;  // robots pinned as relays after round 0
};

// Round 0 assigns every relay goal plus a first batch of primaries on the
// priority-scaled matrix; later rounds hand the remaining primaries to the
// non-relay robots from their latest goals. Throws InfeasibleError when
// fewer than relay_count() + 1 robots are free.
ClusterAllocation allocate_cluster(GeodesicOracle& oracle, const Cluster& cluster,
                                   std::span<const WorldPoint> free_robots);
ClusterAllocation allocate_cluster(const GridMap& map, const Cluster& cluster,
                                   std::span<const WorldPoint> free_robots);

}  // namespace mrdeploy
