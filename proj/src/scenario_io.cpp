#include "mrdeploy/scenario_io.hpp"

#include "mrdeploy/error.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace mrdeploy {

namespace {

WorldPoint point_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(std::string(what) + " must be a [x, y] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json points(const std::vector<WorldPoint>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(to_json(p));
  return out;
}

}  // namespace

Json to_json(const WorldPoint& p) { return Json::array({p.x(), p.y()}); }

Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error("scenario must be a JSON object");
  if (!doc.contains("map_path") || !doc["map_path"].is_string()) throw Error("scenario needs map_path");
  if (!doc.contains("bs")) throw Error("scenario needs bs");
  if (!doc.contains("robots")) throw Error("scenario needs robots");

  std::filesystem::path map_path = doc["map_path"].get<std::string>();
  if (map_path.is_relative()) map_path = base_dir / map_path;

  Scenario s{load_map_file(map_path.string()), point_from(doc["bs"], "bs"), {}, {}};
  s.comm_range = doc.value("d_gamma_m", 10.0);
  s.velocity = doc.value("velocity_mps", 0.2);
  s.seed = doc.value("seed", std::uint64_t{0});

  const Json& robots = doc["robots"];
  if (robots.is_number_integer()) {
    const int n = robots.get<int>();
    if (n < 1) throw Error("robots must be at least 1");
    s.robot_starts.assign(static_cast<std::size_t>(n), s.bs);
  } else if (robots.is_array()) {
    for (const Json& r : robots) s.robot_starts.push_back(point_from(r, "robot start"));
  } else {
    throw Error("robots must be a count or a list of positions");
  }

  if (doc.contains("goals")) {
    if (!doc["goals"].is_array()) throw Error("goals must be a list of positions");
    for (const Json& g : doc["goals"]) s.goals.push_back(point_from(g, "goal"));
  } else {
    if (!doc.contains("goal_count")) throw Error("scenario needs goals or goal_count");
    s.goals = generate_goals(s.map, doc["goal_count"].get<int>(), s.bs, s.seed);
  }
  s.normalize();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad scenario JSON in " + path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(doc, path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad scenario field in " + path.string() + ": " + e.what());
  }
}

Json scenario_to_json(const Scenario& s, const std::string& map_path) {
  Json j;
  j["map_path"] = map_path;
  j["bs"] = to_json(s.bs);
  j["robots"] = points(s.robot_starts);
  j["goals"] = points(s.goals);
  j["d_gamma_m"] = s.comm_range;
  j["velocity_mps"] = s.velocity;
  j["seed"] = s.seed;
  return j;
}

Json clusters_to_json(const ClusterSet& set) {
  Json out;
  Json list = Json::array();
  for (const Cluster& c : set.clusters) {
    Json j;
    j["id"] = c.id;
    j["bs_cluster"] = c.is_bs();
    j["x_mc"] = c.x_mc ? to_json(*c.x_mc) : Json();
    j["chain"] = points(c.chain.relays);
    j["relay_count"] = c.relay_count();
    j["goal_ids"] = c.goal_ids;
    j["primary_goals"] = points(c.primary_goals);
    list.push_back(std::move(j));
  }
  out["clusters"] = std::move(list);
  out["unconnected_goals"] = set.unconnected_goals;
  return out;
}

Json plan_to_json(const MissionPlan& plan) {
  Json j;
  j["heuristic"] = plan.heuristic.id;
  j["mode"] = plan.heuristic.sequential ? "sequential" : "concurrent";
  j["clusters"] = clusters_to_json(plan.clusters);
  j["infeasible_clusters"] = plan.infeasible;
  if (const auto* seq = std::get_if<SequentialOrder>(&plan.plan)) {
    j["order"] = seq->order;
  } else {
    const auto& cp = std::get<ConcurrentPlan>(plan.plan);
    Json waves = Json::array();
    for (const Wave& w : cp.waves) {
      Json wj;
      wj["clusters"] = w.clusters;
      wj["visitors"] = w.visitors;
      waves.push_back(std::move(wj));
    }
    j["waves"] = std::move(waves);
    j["skipped"] = cp.skipped;
    if (plan.graph) {
      Json g;
      std::vector<int> parent;
      for (int p : plan.graph->parent) {
        parent.push_back(p < 0 ? -1 : plan.metrics.ids[static_cast<std::size_t>(p)]);
      }
      std::vector<int> order;
      for (int v : plan.graph->connection_order) order.push_back(plan.metrics.ids[static_cast<std::size_t>(v)]);
      g["cluster_ids"] = plan.metrics.ids;
      g["parent"] = parent;
      g["level"] = plan.graph->level;
      g["connection_order"] = order;
      j["graph"] = std::move(g);
    }
  }
  return j;
}

Json result_to_json(const MissionResult& r) {
  Json j;
  j["total_time_s"] = r.total_time;
  j["coverage"] = r.coverage;
  j["skipped_clusters"] = r.skipped_clusters;
  j["unconnected_goals"] = r.unconnected_goals;
  Json goals = Json::array();
  for (const auto& g : r.per_goal) {
    Json gj;
    gj["goal"] = g.goal;
    gj["cluster"] = g.cluster;
    gj["robot"] = g.robot;
    gj["position"] = to_json(g.position);
    gj["arrival_s"] = g.arrival;
    gj["completion_s"] = g.time;
    gj["connected"] = g.connected;
    goals.push_back(std::move(gj));
  }
  j["per_goal"] = std::move(goals);
  Json clusters = Json::array();
  for (const auto& c : r.clusters) {
    Json cj;
    cj["cluster"] = c.cluster;
    if (c.wave >= 0) cj["wave"] = c.wave;
    cj["start_s"] = c.start;
    cj["chain_ready_s"] = c.chain_ready;
    cj["completion_s"] = c.completion;
    cj["robots"] = c.robots;
    Json rounds = Json::array();
    for (const auto& round : c.allocation.rounds) {
      Json rj = Json::array();
      for (const auto& [robot, goal] : round.pairs) {
        rj.push_back({{"robot", c.robots[static_cast<std::size_t>(robot)]},
                      {"goal", to_json(c.allocation.goals[static_cast<std::size_t>(goal)])},
                      {"relay", c.allocation.kinds[static_cast<std::size_t>(goal)] == GoalKind::kRelay}});
      }
      rounds.push_back(std::move(rj));
    }
    cj["rounds"] = std::move(rounds);
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  Json relays = Json::array();
  for (const auto& h : r.relays) {
    relays.push_back({{"robot", h.robot},
                      {"cluster", h.cluster},
                      {"position", to_json(h.position)},
                      {"arrival_s", h.arrival},
                      {"release_s", h.release}});
  }
  j["relays"] = std::move(relays);
  return j;
}

void write_timeline_csv(std::ostream& out, const MissionResult& result) {
  out << "time,robot,event\n";
  for (const auto& e : result.events) {
    std::ostringstream t;
    t.precision(6);
    t << std::fixed << e.time;
    out << t.str() << ',' << e.robot << ',' << e.event << '\n';
  }
}

}  // namespace mrdeploy
