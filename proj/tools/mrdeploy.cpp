#include "mrdeploy/bench.hpp"
#include "mrdeploy/error.hpp"
#include "mrdeploy/fmm.hpp"
#include "mrdeploy/pipeline.hpp"
#include "mrdeploy/scenario_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace mrdeploy;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAudit = 3;

struct Options {
  std::string scenario;
  std::string heuristic = "S1";
  std::string spec;
  std::string out;
  std::string raw;
  std::string timeline;
  std::string dump_fields;
  std::string dump_clusters;
  bool no_timing = false;

  std::string map;
  std::vector<double> bs;
  int robots = 1;
  int goals = 1;
  std::uint64_t seed = 0;
  double d_gamma = 10.0;
  double velocity = 0.2;
};

template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  write(f);
}

void write_json(const std::string& path, const Json& j) {
  emit(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void dumps(const Options& o, const Scenario& s, const MissionPlan& plan) {
  if (!o.dump_fields.empty()) {
    const DistanceField f = solve(s.map, world_to_cell(s.bs, s.map));
    emit(o.dump_fields, [&](std::ostream& os) { write_field_csv(os, f); });
  }
  if (!o.dump_clusters.empty()) write_json(o.dump_clusters, clusters_to_json(plan.clusters));
}

int cmd_plan(const Options& o) {
  const Heuristic h = Heuristic::parse(o.heuristic);
  const Scenario s = load_scenario(o.scenario);
  GeodesicOracle oracle(s.map);
  const MissionPlan plan = plan_mission(s, h, oracle);
  dumps(o, s, plan);
  Json j = plan_to_json(plan);
  // Round 0 and later assignments come out of the simulated execution.
  const MissionResult r = simulate(s, plan.clusters, plan.plan, oracle);
  Json rounds = Json::array();
  const Json executed = result_to_json(r);
  for (const Json& c : executed["clusters"]) {
    rounds.push_back({{"cluster", c["cluster"]}, {"robots", c["robots"]}, {"rounds", c["rounds"]}});
  }
  j["assignments"] = std::move(rounds);
  j["expected_coverage"] = r.coverage;
  write_json(o.out, j);
  return 0;
}

int cmd_simulate(const Options& o) {
  const Heuristic h = Heuristic::parse(o.heuristic);
  const Scenario s = load_scenario(o.scenario);
  GeodesicOracle oracle(s.map);
  const MissionPlan plan = plan_mission(s, h, oracle);
  dumps(o, s, plan);
  const MissionResult r = simulate(s, plan.clusters, plan.plan, oracle);
  const AuditReport audit = audit_connectivity(r, s);
  Json j = result_to_json(r);
  j["heuristic"] = h.id;
  j["audit_violations"] = audit.violations;
  write_json(o.out, j);
  if (!o.timeline.empty()) emit(o.timeline, [&](std::ostream& os) { write_timeline_csv(os, r); });
  return audit.ok() ? 0 : kExitAudit;
}

int cmd_benchmark(const Options& o) {
  const BenchmarkSpec spec = load_benchmark_spec(o.spec);
  const BenchmarkReport report = run_benchmark(spec);
  emit(o.out, [&](std::ostream& os) { write_report_csv(os, report, !o.no_timing); });
  if (!o.raw.empty()) emit(o.raw, [&](std::ostream& os) { write_runs_csv(os, report, !o.no_timing); });
  std::cerr << "audited " << report.audited_completions << " completions, 0 violations\n";
  return 0;
}

int cmd_gen_scenario(const Options& o) {
  if (o.bs.size() != 2) throw UsageError("--bs takes two coordinates");
  const GridMap map = load_map_file(o.map);
  Scenario s{map, {o.bs[0], o.bs[1]}, {}, {}};
  s.comm_range = o.d_gamma;
  s.velocity = o.velocity;
  s.seed = o.seed;
  s.robot_starts.assign(static_cast<std::size_t>(std::max(o.robots, 0)), s.bs);
  s.goals = generate_goals(map, o.goals, s.bs, o.seed);
  s.normalize();
  write_json(o.out, scenario_to_json(s, o.map));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot deployment planner with intermittent connectivity"};
  app.require_subcommand(1);
  Options o;

  auto add_plan_flags = [&](CLI::App* c) {
    c->add_option("--scenario", o.scenario, "Scenario JSON")->required();
    c->add_option("--heuristic", o.heuristic, "S1..S8 or C1..C9");
    c->add_option("--out", o.out, "Output JSON (default stdout)");
    c->add_option("--dump-fields", o.dump_fields, "Write the base-station distance field as CSV");
    c->add_option("--dump-clusters", o.dump_clusters, "Write the clusters as JSON");
  };
  auto* plan = app.add_subcommand("plan", "Form clusters and a visit plan");
  add_plan_flags(plan);
  auto* sim = app.add_subcommand("simulate", "Plan, execute and audit a mission");
  add_plan_flags(sim);
  sim->add_option("--timeline", o.timeline, "Write the event timeline as CSV");

  auto* bench = app.add_subcommand("benchmark", "Sweep heuristics, team sizes and seeds");
  bench->add_option("--spec", o.spec, "Benchmark spec JSON")->required();
  bench->add_option("--out", o.out, "Aggregate CSV (default stdout)");
  bench->add_option("--raw", o.raw, "Per-seed CSV");
  bench->add_flag("--no-timing", o.no_timing, "Write planning times as zero");

  auto* gen = app.add_subcommand("gen-scenario", "Write a scenario with seeded random goals");
  gen->add_option("--map", o.map, "ASCII map")->required();
  gen->add_option("--bs", o.bs, "Base station x y in meters")->expected(2)->required();
  gen->add_option("--robots", o.robots, "Team size");
  gen->add_option("--goals", o.goals, "Goal count");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--d-gamma", o.d_gamma, "Communication range in meters");
  gen->add_option("--velocity", o.velocity, "Robot speed in m/s");
  gen->add_option("--out", o.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (plan->parsed()) return cmd_plan(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (bench->parsed()) return cmd_benchmark(o);
    return cmd_gen_scenario(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitAudit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
