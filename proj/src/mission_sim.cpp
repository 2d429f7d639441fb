#include "mrdeploy/mission_sim.hpp"

#include "mrdeploy/error.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <type_traits>

namespace mrdeploy {

namespace {

class Executor {
 public:
  Executor(const Scenario& s, const ClusterSet& set, GeodesicOracle& oracle, MissionResult& out)
      : scenario_(s),
        set_(set),
        oracle_(oracle),
        out_(out),
        pos_(s.robot_starts),
        avail_(s.robot_starts.size(), 0.0) {}

  const std::vector<WorldPoint>& positions() const { return pos_; }

  const Cluster& cluster(int id) const {
    if (id < 0 || id >= set_.size()) throw Error("plan refers to unknown cluster " + std::to_string(id));
    return set_.clusters[static_cast<std::size_t>(id)];
  }

  ClusterRun run(const Cluster& c, std::vector<int> robots, double t0, int wave) {
    ClusterRun run;
    run.cluster = c.id;
    run.wave = wave;
    run.start = t0;
    run.robots = std::move(robots);

    std::vector<WorldPoint> free;
    for (int r : run.robots) free.push_back(pos_[static_cast<std::size_t>(r)]);
    const auto tic = std::chrono::steady_clock::now();
    run.allocation = allocate_cluster(oracle_, c, free);
    out_.alloc_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - tic).count();

    const ClusterAllocation& alloc = run.allocation;
    const double v = scenario_.velocity;
    auto travel = [&](int r, const WorldPoint& goal, double depart) {
      const double d = oracle_.distance(pos_[static_cast<std::size_t>(r)], goal);
      if (!(d < kUnreached)) throw UnreachableError("robot cannot reach its goal");
      event(depart, r, "depart");
      return depart + d / v;
    };

    // Round 0: everyone leaves at the cluster start.
    struct Visit {
      int robot;
      int goal;
      double arrival;
    };
    std::vector<Visit> first_visits;
    std::vector<RelayHold> holds;
    run.chain_ready = t0;
    for (const auto& [lr, g] : alloc.rounds.front().pairs) {
      const int r = run.robots[static_cast<std::size_t>(lr)];
      const WorldPoint& goal = alloc.goals[static_cast<std::size_t>(g)];
      const double arrival = travel(r, goal, std::max(t0, avail_[static_cast<std::size_t>(r)]));
      pos_[static_cast<std::size_t>(r)] = goal;
      if (alloc.kinds[static_cast<std::size_t>(g)] == GoalKind::kRelay) {
        holds.push_back({r, c.id, goal, arrival, 0.0});
        run.chain_ready = std::max(run.chain_ready, arrival);
        event(arrival, r, "relay_in_place");
      } else {
        first_visits.push_back({r, g, arrival});
      }
    }

    std::vector<WorldPoint> relay_positions;
    for (const auto& h : holds) relay_positions.push_back(h.position);

    double completion = run.chain_ready;
    auto complete = [&](int r, int g, double arrival) {
      const double t = std::max(arrival, run.chain_ready);
      avail_[static_cast<std::size_t>(r)] = t;
      completion = std::max(completion, t);
      const int pg = g - c.relay_count();
      GoalCompletion gc;
      gc.goal = c.goal_ids[static_cast<std::size_t>(pg)];
      gc.cluster = c.id;
      gc.robot = r;
      gc.position = alloc.goals[static_cast<std::size_t>(g)];
      gc.arrival = arrival;
      gc.time = t;
      gc.connected = linked_through_chain(relay_positions, gc.position);
      if (!gc.connected) {
        throw InvariantViolation("goal " + std::to_string(gc.goal) +
                                 " completed without a link to the base station");
      }
      event(arrival, r, "arrive_goal");
      event(t, r, "complete_goal " + std::to_string(gc.goal));
      out_.per_goal.push_back(gc);
    };

    for (const Visit& vis : first_visits) complete(vis.robot, vis.goal, vis.arrival);
    for (std::size_t k = 1; k < alloc.rounds.size(); ++k) {
      for (const auto& [lr, g] : alloc.rounds[k].pairs) {
        const int r = run.robots[static_cast<std::size_t>(lr)];
        const WorldPoint& goal = alloc.goals[static_cast<std::size_t>(g)];
        const double arrival = travel(r, goal, avail_[static_cast<std::size_t>(r)]);
        pos_[static_cast<std::size_t>(r)] = goal;
        complete(r, g, arrival);
      }
    }

    run.completion = completion;
    for (auto& h : holds) {
      h.release = completion;
      avail_[static_cast<std::size_t>(h.robot)] = completion;
      event(completion, h.robot, "relay_released");
      out_.relays.push_back(h);
    }
    return run;
  }

  // Splits the team between the clusters of one concurrent wave: relay
  // goals first (priority-scaled), then visitor slots at each anchor.
  std::vector<std::vector<int>> split(const Wave& wave) {
    std::vector<WorldPoint> cols;
    std::vector<GoalKind> kinds;
    std::vector<int> owner;
    for (std::size_t i = 0; i < wave.clusters.size(); ++i) {
      const Cluster& c = cluster(wave.clusters[i]);
      for (const WorldPoint& p : c.relay_goals()) {
        cols.push_back(p);
        kinds.push_back(GoalKind::kRelay);
        owner.push_back(static_cast<int>(i));
      }
      for (int s = 0; s < wave.visitors[i]; ++s) {
        cols.push_back(c.anchor(scenario_.bs));
        kinds.push_back(GoalKind::kPrimary);
        owner.push_back(static_cast<int>(i));
      }
    }
    if (cols.size() > pos_.size()) throw InvariantViolation("wave demands more robots than the team");
    const auto tic = std::chrono::steady_clock::now();
    CostMatrix cm = build_cost_matrix(oracle_, pos_, cols, kinds);
    cm = apply_relay_priority(cm);
    const Assignment a = hungarian(cm);
    out_.alloc_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - tic).count();
    std::vector<std::vector<int>> teams(wave.clusters.size());
    for (const auto& [r, col] : a.pairs) teams[static_cast<std::size_t>(owner[static_cast<std::size_t>(col)])].push_back(r);
    for (auto& t : teams) std::sort(t.begin(), t.end());
    return teams;
  }

 private:
  bool linked_through_chain(const std::vector<WorldPoint>& relays, const WorldPoint& visitor) const {
    std::vector<WorldPoint> agents = relays;
    agents.push_back(visitor);
    const auto linked = connected_to_bs(scenario_.map, scenario_.bs, agents,
                                        CommConfig{scenario_.comm_range});
    return linked.back();
  }

  void event(double t, int robot, std::string what) {
    out_.events.push_back({t, robot, std::move(what)});
  }

  const Scenario& scenario_;
  const ClusterSet& set_;
  GeodesicOracle& oracle_;
  MissionResult& out_;
  std::vector<WorldPoint> pos_;
  std::vector<double> avail_;
};

}  // namespace

MissionResult simulate(const Scenario& scenario, const ClusterSet& clusters, const VisitPlan& plan,
                       GeodesicOracle& oracle) {
  MissionResult out;
  out.unconnected_goals = clusters.unconnected_goals;
  Executor exec(scenario, clusters, oracle, out);
  std::vector<bool> scheduled(static_cast<std::size_t>(clusters.size()), false);
  auto mark = [&](int id) {
    if (id < 0 || id >= clusters.size() || scheduled[static_cast<std::size_t>(id)]) {
      throw Error("plan schedules cluster " + std::to_string(id) + " more than once or unknown");
    }
    scheduled[static_cast<std::size_t>(id)] = true;
  };

  std::vector<int> everyone(static_cast<std::size_t>(scenario.team_size()));
  std::iota(everyone.begin(), everyone.end(), 0);

  if (const auto* seq = std::get_if<SequentialOrder>(&plan)) {
    double t = 0.0;
    for (int id : seq->order) {
      mark(id);
      ClusterRun r = exec.run(exec.cluster(id), everyone, t, -1);
      t = r.completion;
      out.clusters.push_back(std::move(r));
    }
  } else {
    const auto& conc = std::get<ConcurrentPlan>(plan);
    double t = 0.0;
    for (std::size_t w = 0; w < conc.waves.size(); ++w) {
      const Wave& wave = conc.waves[w];
      if (wave.clusters.size() != wave.visitors.size()) throw Error("malformed wave");
      for (int id : wave.clusters) mark(id);
      const auto teams = exec.split(wave);
      double wave_end = t;
      for (std::size_t i = 0; i < wave.clusters.size(); ++i) {
        ClusterRun r = exec.run(exec.cluster(wave.clusters[i]), teams[i], t, static_cast<int>(w));
        wave_end = std::max(wave_end, r.completion);
        out.clusters.push_back(std::move(r));
      }
      t = wave_end;
    }
  }

  for (int id = 0; id < clusters.size(); ++id) {
    if (!scheduled[static_cast<std::size_t>(id)]) out.skipped_clusters.push_back(id);
  }
  for (const auto& g : out.per_goal) out.total_time = std::max(out.total_time, g.time);
  out.coverage = static_cast<double>(out.per_goal.size()) / std::max(1, scenario.goal_count());
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const TimelineEvent& a, const TimelineEvent& b) { return a.time < b.time; });

  const AuditReport audit = audit_connectivity(out, scenario);
  if (!audit.ok()) {
    throw InvariantViolation("connectivity audit failed for " +
                             std::to_string(audit.violations.size()) + " goal(s)");
  }
  return out;
}

MissionResult simulate(const Scenario& scenario, const ClusterSet& clusters,
                       const VisitPlan& plan) {
  GeodesicOracle oracle(scenario.map);
  return simulate(scenario, clusters, plan, oracle);
}

AuditReport audit_connectivity(const MissionResult& result, const Scenario& scenario) {
  AuditReport report;
  const CommConfig cfg{scenario.comm_range};
  for (const GoalCompletion& g : result.per_goal) {
    std::vector<WorldPoint> agents;
    for (const RelayHold& h : result.relays) {
      if (h.arrival <= g.time && g.time <= h.release) agents.push_back(h.position);
    }
    agents.push_back(g.position);
    if (!connected_to_bs(scenario.map, scenario.bs, agents, cfg).back()) {
      report.violations.push_back(g.goal);
    }
  }
  return report;
}

}  // namespace mrdeploy
