#pragma once

#include "mrdeploy/allocation.hpp"
#include "mrdeploy/mission_sim.hpp"
#include "mrdeploy/relay_planner.hpp"
#include "mrdeploy/visit_planner.hpp"

#include <optional>
#include <vector>

namespace mrdeploy {

struct MissionPlan {
  Heuristic heuristic;
  ClusterSet clusters;
  std::vector<int> infeasible;  // cluster ids needing more robots than the team
  ClusterMetrics metrics;       // over the feasible clusters only
  std::optional<ClusterGraph> graph;
  VisitPlan plan;
  double relay_ms = 0.0;
  double order_ms = 0.0;
};

ClusterSet compute_clusters(const Scenario& scenario);

// Orders the feasible clusters of `clusters` with heuristic `h`.
MissionPlan plan_visits(const Scenario& scenario, ClusterSet clusters, const Heuristic& h,
                        GeodesicOracle& oracle);

// Cluster formation followed by plan_visits, with stage timing.
MissionPlan plan_mission(const Scenario& scenario, const Heuristic& h, GeodesicOracle& oracle);

struct MissionRun {
  MissionPlan plan;
  MissionResult result;
};

MissionRun run_mission(const Scenario& scenario, const Heuristic& h);

}  // namespace mrdeploy
