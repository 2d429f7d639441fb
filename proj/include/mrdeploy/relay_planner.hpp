#pragma once

#include "mrdeploy/comms.hpp"
#include "mrdeploy/fmm.hpp"
#include "mrdeploy/grid_world.hpp"

#include <optional>
#include <vector>

namespace mrdeploy {

// Position of maximum connectivity and the goals it claimed.
struct MaxConRelay {
  WorldPoint position;
  std::vector<int> covered_goals;
  double bs_geodesic = 0.0;
};

struct MaxConResult {
  std::vector<MaxConRelay> relays;  // in greedy pick order
  std::vector<int> bs_goals;        // linked to the base station directly
  std::vector<int> unconnected;     // no candidate position links them
};

// Relays between the base station and an x_mc, base-station side first.
// The x_mc itself is not part of the chain.
struct RelayChain {
  std::vector<WorldPoint> relays;
  Path vp;
};

struct Cluster {
  int id = 0;
  std::optional<WorldPoint> x_mc;  // empty for the base-station cluster
  RelayChain chain;
  std::vector<int> goal_ids;
  std::vector<WorldPoint> primary_goals;

  bool is_bs() const { return !x_mc.has_value(); }
  // Robots parked as relays: the chain plus the x_mc occupant.
  int relay_count() const { return is_bs() ? 0 : static_cast<int>(chain.relays.size()) + 1; }
  int primary_count() const { return static_cast<int>(primary_goals.size()); }
  // Chain relays then x_mc.
  std::vector<WorldPoint> relay_goals() const;
  // Where the cluster is anchored: x_mc, or the base station.
  WorldPoint anchor(const WorldPoint& bs) const { return x_mc ? *x_mc : bs; }
};

struct ClusterSet {
  std::vector<Cluster> clusters;
  std::vector<int> unconnected_goals;

  int size() const { return static_cast<int>(clusters.size()); }
};

// Greedy maximum-coverage choice of relay positions. Ties on coverage go to
// the smallest unit-speed geodesic from the base station, then to the
// smallest row-major cell index.
MaxConResult max_connectivity_relays(const GridMap& map, const WorldPoint& bs,
                                     const std::vector<WorldPoint>& goals, const CommConfig& cfg);

// bs_field_v must be solve(map, {cell(bs)}, voronoi_speed(map)).
RelayChain build_relay_chain(const GridMap& map, const WorldPoint& bs, const WorldPoint& x_mc,
                             const CommConfig& cfg, const DistanceField& bs_field_v);

// The base-station cluster (if it has goals) comes first, then one cluster
// per x_mc in greedy order. Cluster ids equal their position in the list.
ClusterSet form_clusters(const GridMap& map, const WorldPoint& bs,
                         const std::vector<WorldPoint>& goals, const CommConfig& cfg);

}  // namespace mrdeploy
