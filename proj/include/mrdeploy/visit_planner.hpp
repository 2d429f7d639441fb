#pragma once

#include "mrdeploy/allocation.hpp"
#include "mrdeploy/relay_planner.hpp"
#include "mrdeploy/tsp.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mrdeploy {

// Per-cluster quantities that drive the visit-order heuristics. Vector
// entry k refers to cluster ids[k].
struct ClusterMetrics {
  std::vector<int> ids;
  Eigen::MatrixXd cd;      // anchor-to-anchor geodesics
  Eigen::VectorXd cd_bs;   // base station to anchor
  Eigen::VectorXd ra;      // (relays + 1) / team size
  Eigen::VectorXd pa;      // primary goal count
  Eigen::VectorXd cmd;     // mean anchor-to-primary geodesic
  Eigen::VectorXd cwd;     // worst anchor-to-primary geodesic
  std::vector<int> relays; // relay_count() per cluster

  int size() const { return static_cast<int>(ids.size()); }
};

ClusterMetrics cluster_metrics(GeodesicOracle& oracle, std::span<const Cluster> clusters,
                               const WorldPoint& bs, int team_size);

enum class SequentialRule { kS1, kS2, kS3, kS4, kS5, kS6, kS7, kS8 };
enum class GraphMode { kRL, kDL, kRDL };
enum class Extension { kLC, kMC, kMP };

// One row of the method table: S1..S8 sequential, C1..C9 concurrent.
struct Heuristic {
  std::string id;
  bool sequential = true;
  SequentialRule rule = SequentialRule::kS1;
  GraphMode mode = GraphMode::kRL;
  Extension extension = Extension::kLC;

  // Throws UsageError for anything outside S1..S8, C1..C9.
  static Heuristic parse(std::string_view id);
  static std::vector<std::string> all_ids();
};

struct SequentialOrder {
  std::string heuristic;
  std::vector<int> order;  // cluster ids
};

// Scales by the largest entry; an all-zero input stays zero.
Eigen::VectorXd normalize_to_max(const Eigen::VectorXd& v);

// Vertex 0 is the base station, vertex k + 1 is metrics cluster k. Edge
// (i, j) is CD-bar(i, j) times the destination terms of the rule.
Eigen::MatrixXd sequential_cost(const ClusterMetrics& m, SequentialRule rule);

SequentialOrder sequential_order(const ClusterMetrics& m, const Heuristic& h);

// Size-dispatched open TSP from `start`.
template <typename Derived>
tsp::Route tsp_route(const Eigen::MatrixBase<Derived>& cost, int start) {
  return tsp::solve(cost, start);
}

// Tree over the base station (vertex -1) and the clusters (metrics index).
struct ClusterGraph {
  GraphMode mode = GraphMode::kRL;
  std::vector<int> parent;            // -1 = base station
  std::vector<int> level;             // hops from the base station
  std::vector<int> connection_order;  // metrics indices in attach order
};

ClusterGraph build_cluster_graph(const ClusterMetrics& m, GraphMode mode);

struct Wave {
  std::vector<int> clusters;  // cluster ids whose chains deploy in this wave
  std::vector<int> visitors;  // visitor robots per entry of `clusters`
};

struct ConcurrentPlan {
  std::string heuristic;
  std::vector<Wave> waves;
  std::vector<int> skipped;  // cluster ids that no wave can staff
};

// Largest-remainder split of `total` visitors in proportion to `weights`.
// Every entry gets at least one visitor when total allows; no entry gets
// more than its weight. Ties go to the larger weight, then the lower index.
std::vector<int> split_visitors(int total, const std::vector<int>& weights);

ConcurrentPlan concurrent_plan(const ClusterGraph& g, const ClusterMetrics& m,
                               const Heuristic& h, int team_size);

using VisitPlan = std::variant<SequentialOrder, ConcurrentPlan>;

}  // namespace mrdeploy
