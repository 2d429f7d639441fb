#pragma once

#include "mrdeploy/allocation.hpp"
#include "mrdeploy/comms.hpp"
#include "mrdeploy/grid_world.hpp"
#include "mrdeploy/relay_planner.hpp"
#include "mrdeploy/visit_planner.hpp"

#include <string>
#include <vector>

namespace mrdeploy {

struct GoalCompletion {
  int goal = 0;     // scenario goal index
  int cluster = 0;
  int robot = 0;
  WorldPoint position;
  double arrival = 0.0;
  double time = 0.0;  // data delivered to the base station
  bool connected = false;
};

// A robot parked on a relay goal over [arrival, release].
struct RelayHold {
  int robot = 0;
  int cluster = 0;
  WorldPoint position;
  double arrival = 0.0;
  double release = 0.0;
};

struct ClusterRun {
  int cluster = 0;
  int wave = -1;  // -1 in sequential mode
  double start = 0.0;
  double chain_ready = 0.0;
  double completion = 0.0;
  std::vector<int> robots;  // team ids handed to the cluster
  ClusterAllocation allocation;  // robot indices refer to `robots`
};

struct TimelineEvent {
  double time = 0.0;
  int robot = 0;
  std::string event;
};

struct MissionResult {
  double total_time = 0.0;
  std::vector<GoalCompletion> per_goal;  // completion order
  double coverage = 0.0;
  std::vector<int> skipped_clusters;
  std::vector<int> unconnected_goals;
  std::vector<ClusterRun> clusters;
  std::vector<RelayHold> relays;
  std::vector<TimelineEvent> events;
  double alloc_ms = 0.0;  // wall time spent in allocation
};

// Event-driven execution: constant velocity along unit-speed geodesics,
// completions gated on the cluster's chain-ready time. Throws
// InvariantViolation when a completion would happen without a multi-hop
// link to the base station.
MissionResult simulate(const Scenario& scenario, const ClusterSet& clusters, const VisitPlan& plan,
                       GeodesicOracle& oracle);
MissionResult simulate(const Scenario& scenario, const ClusterSet& clusters,
                       const VisitPlan& plan);

struct AuditReport {
  std::vector<int> violations;  // goal indices
  bool ok() const { return violations.empty(); }
};

// Re-checks every completion against the relays holding position at that
// instant, independently of the plan.
AuditReport audit_connectivity(const MissionResult& result, const Scenario& scenario);

}  // namespace mrdeploy
