#include "mrdeploy/bench.hpp"

#include "mrdeploy/error.hpp"
#include "mrdeploy/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mrdeploy {

namespace {

template <typename T>
std::vector<T> list_of(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw Error(std::string("spec needs a list ") + key);
  return doc[key].get<std::vector<T>>();
}

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

void BenchmarkSpec::validate() const {
  if (team_sizes.empty() || goal_counts.empty() || seeds.empty() || heuristics.empty()) {
    throw Error("benchmark lists must be nonempty");
  }
  for (const auto& h : heuristics) Heuristic::parse(h);
  for (int t : team_sizes) {
    if (t < 1) throw Error("team sizes must be positive");
    for (int g : goal_counts) {
      if (g < t) throw Error("every goal count must be at least every team size");
    }
  }
  if (!(comm_range > 0.0) || !(velocity > 0.0)) throw Error("range and velocity must be positive");
}

BenchmarkSpec parse_benchmark_spec(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error("benchmark spec must be a JSON object");
  BenchmarkSpec spec;
  try {
    spec.map_path = doc.at("map_path").get<std::string>();
    if (spec.map_path.is_relative()) spec.map_path = base_dir / spec.map_path;
    const auto bs = doc.at("bs").get<std::vector<double>>();
    if (bs.size() != 2) throw Error("bs must be a [x, y] pair");
    spec.bs = {bs[0], bs[1]};
    spec.comm_range = doc.value("d_gamma_m", 10.0);
    spec.velocity = doc.value("velocity_mps", 0.2);
    spec.team_sizes = list_of<int>(doc, "team_sizes");
    spec.goal_counts = list_of<int>(doc, "goal_counts");
    spec.seeds = list_of<std::uint64_t>(doc, "seeds");
    spec.heuristics =
        doc.contains("heuristics") ? list_of<std::string>(doc, "heuristics") : Heuristic::all_ids();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad benchmark spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open benchmark spec " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad benchmark JSON in " + path.string() + ": " + e.what());
  }
  return parse_benchmark_spec(doc, path.parent_path());
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  const GridMap map = load_map_file(spec.map_path.string());
  std::vector<Heuristic> heuristics;
  for (const auto& id : spec.heuristics) heuristics.push_back(Heuristic::parse(id));

  BenchmarkReport report;
  // runs indexed [goal][team][heuristic][seed]
  const std::size_t nt = spec.team_sizes.size(), nh = heuristics.size(), ns = spec.seeds.size();
  std::vector<BenchmarkRun> runs(spec.goal_counts.size() * nt * nh * ns);
  auto slot = [&](std::size_t g, std::size_t t, std::size_t h, std::size_t s) -> BenchmarkRun& {
    return runs[((g * nt + t) * nh + h) * ns + s];
  };

  for (std::size_t gi = 0; gi < spec.goal_counts.size(); ++gi) {
    for (std::size_t si = 0; si < ns; ++si) {
      Scenario base{map, spec.bs, {}, {}};
      base.comm_range = spec.comm_range;
      base.velocity = spec.velocity;
      base.seed = spec.seeds[si];
      base.goals = generate_goals(map, spec.goal_counts[gi], spec.bs, base.seed);
      base.robot_starts.assign(1, spec.bs);
      base.normalize();

      const auto tic = std::chrono::steady_clock::now();
      const ClusterSet clusters = compute_clusters(base);
      const double relay_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - tic).count();

      GeodesicOracle oracle(base.map);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        Scenario s = base;
        s.robot_starts.assign(static_cast<std::size_t>(spec.team_sizes[ti]), s.bs);
        for (std::size_t hi = 0; hi < nh; ++hi) {
          MissionPlan plan = plan_visits(s, clusters, heuristics[hi], oracle);
          const MissionResult result = simulate(s, plan.clusters, plan.plan, oracle);
          report.audited_completions += result.per_goal.size();

          BenchmarkRun& r = slot(gi, ti, hi, si);
          r.heuristic = heuristics[hi].id;
          r.team = spec.team_sizes[ti];
          r.goals = spec.goal_counts[gi];
          r.seed = spec.seeds[si];
          r.time_s = result.total_time;
          r.coverage = result.coverage;
          r.relay_ms = relay_ms;
          r.alloc_ms = plan.order_ms + result.alloc_ms;
          r.clusters = clusters.size();
          r.skipped = static_cast<int>(result.skipped_clusters.size());
        }
      }
    }
  }

  for (std::size_t gi = 0; gi < spec.goal_counts.size(); ++gi) {
    for (std::size_t ti = 0; ti < nt; ++ti) {
      for (std::size_t hi = 0; hi < nh; ++hi) {
        BenchmarkRow row;
        row.heuristic = heuristics[hi].id;
        row.team = spec.team_sizes[ti];
        row.goals = spec.goal_counts[gi];
        row.min_time_s = slot(gi, ti, hi, 0).time_s;
        row.max_time_s = row.min_time_s;
        for (std::size_t si = 0; si < ns; ++si) {
          const BenchmarkRun& r = slot(gi, ti, hi, si);
          row.mean_time_s += r.time_s;
          row.min_time_s = std::min(row.min_time_s, r.time_s);
          row.max_time_s = std::max(row.max_time_s, r.time_s);
          row.mean_coverage += r.coverage;
          row.mean_relay_ms += r.relay_ms;
          row.mean_alloc_ms += r.alloc_ms;
          report.runs.push_back(r);
        }
        const double n = static_cast<double>(ns);
        row.mean_time_s /= n;
        row.mean_coverage /= n;
        row.mean_relay_ms /= n;
        row.mean_alloc_ms /= n;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report, bool timing) {
  out << "heuristic,team,goals,mean_time_s,min_time_s,max_time_s,mean_coverage,"
         "mean_plan_ms_relay,mean_plan_ms_alloc\n";
  for (const auto& r : report.rows) {
    out << r.heuristic << ',' << r.team << ',' << r.goals << ',' << fixed(r.mean_time_s, 3) << ','
        << fixed(r.min_time_s, 3) << ',' << fixed(r.max_time_s, 3) << ','
        << fixed(r.mean_coverage, 4) << ',' << fixed(timing ? r.mean_relay_ms : 0.0, 3) << ','
        << fixed(timing ? r.mean_alloc_ms : 0.0, 3) << '\n';
  }
}

void write_runs_csv(std::ostream& out, const BenchmarkReport& report, bool timing) {
  out << "heuristic,team,goals,seed,time_s,coverage,clusters,skipped,plan_ms_relay,plan_ms_alloc\n";
  for (const auto& r : report.runs) {
    out << r.heuristic << ',' << r.team << ',' << r.goals << ',' << r.seed << ','
        << fixed(r.time_s, 3) << ',' << fixed(r.coverage, 4) << ',' << r.clusters << ','
        << r.skipped << ',' << fixed(timing ? r.relay_ms : 0.0, 3) << ','
        << fixed(timing ? r.alloc_ms : 0.0, 3) << '\n';
  }
}

}  // namespace mrdeploy
