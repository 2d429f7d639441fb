#pragma once

#include "mrdeploy/grid_world.hpp"
#include "mrdeploy/mission_sim.hpp"
#include "mrdeploy/pipeline.hpp"
#include "mrdeploy/relay_planner.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace mrdeploy {

using Json = nlohmann::ordered_json;

// Scenario document:
//   map_path     ASCII map, relative to the scenario file
//   bs           [x, y] meters
//   robots       team size (all start at bs) or a list of [x, y]
//   goals        optional list of [x, y]; generated from seed when absent
//   goal_count   number of goals to generate when goals is absent
//   d_gamma_m    communication range, default 10
//   velocity_mps default 0.2
//   seed         default 0
Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

Json to_json(const WorldPoint& p);
Json scenario_to_json(const Scenario& s, const std::string& map_path);
Json clusters_to_json(const ClusterSet& set);
Json plan_to_json(const MissionPlan& plan);
Json result_to_json(const MissionResult& result);

// time,robot,event
void write_timeline_csv(std::ostream& out, const MissionResult& result);

}  // namespace mrdeploy
