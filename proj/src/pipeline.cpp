#include "mrdeploy/pipeline.hpp"

#include "mrdeploy/error.hpp"

#include <chrono>

namespace mrdeploy {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

ClusterSet compute_clusters(const Scenario& scenario) {
  return form_clusters(scenario.map, scenario.bs, scenario.goals, CommConfig{scenario.comm_range});
}

MissionPlan plan_visits(const Scenario& scenario, ClusterSet clusters, const Heuristic& h,
                        GeodesicOracle& oracle) {
  MissionPlan out;
  out.heuristic = h;
  out.clusters = std::move(clusters);
  const int team = scenario.team_size();

  std::vector<Cluster> feasible;
  for (const Cluster& c : out.clusters.clusters) {
    if (c.relay_count() + 1 > team) {
      out.infeasible.push_back(c.id);
    } else {
      feasible.push_back(c);
    }
  }

  const auto tic = std::chrono::steady_clock::now();
  if (feasible.empty()) {
    out.plan = SequentialOrder{h.id, {}};
    if (!h.sequential) out.plan = ConcurrentPlan{h.id, {}, out.infeasible};
    out.order_ms = elapsed_ms(tic);
    return out;
  }
  out.metrics = cluster_metrics(oracle, feasible, scenario.bs, team);
  if (h.sequential) {
    out.plan = sequential_order(out.metrics, h);
  } else {
    out.graph = build_cluster_graph(out.metrics, h.mode);
    ConcurrentPlan cp = concurrent_plan(*out.graph, out.metrics, h, team);
    cp.skipped.insert(cp.skipped.begin(), out.infeasible.begin(), out.infeasible.end());
    out.plan = std::move(cp);
  }
  out.order_ms = elapsed_ms(tic);
  return out;
}

MissionPlan plan_mission(const Scenario& scenario, const Heuristic& h, GeodesicOracle& oracle) {
  const auto tic = std::chrono::steady_clock::now();
  ClusterSet clusters = compute_clusters(scenario);
  const double relay_ms = elapsed_ms(tic);
  MissionPlan out = plan_visits(scenario, std::move(clusters), h, oracle);
  out.relay_ms = relay_ms;
  return out;
}

MissionRun run_mission(const Scenario& scenario, const Heuristic& h) {
  GeodesicOracle oracle(scenario.map);
  MissionRun run;
  run.plan = plan_mission(scenario, h, oracle);
  run.result = simulate(scenario, run.plan.clusters, run.plan.plan, oracle);
  return run;
}

}  // namespace mrdeploy
