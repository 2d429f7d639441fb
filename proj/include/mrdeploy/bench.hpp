#pragma once

#include "mrdeploy/grid_world.hpp"
#include "mrdeploy/scenario_io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mrdeploy {

struct BenchmarkSpec {
  std::filesystem::path map_path;
  WorldPoint bs;
  double comm_range = 10.0;
  double velocity = 0.2;
  std::vector<int> team_sizes;
  std::vector<int> goal_counts;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> heuristics;  // defaults to all seventeen

  // Throws Error on empty lists, unknown heuristics, or a team larger than
  // a goal count.
  void validate() const;
};

BenchmarkSpec parse_benchmark_spec(const Json& doc, const std::filesystem::path& base_dir);
BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path);

struct BenchmarkRun {
  std::string heuristic;
  int team = 0;
  int goals = 0;
  std::uint64_t seed = 0;
  double time_s = 0.0;
  double coverage = 0.0;
  double relay_ms = 0.0;
  double alloc_ms = 0.0;
  int clusters = 0;
  int skipped = 0;
};

struct BenchmarkRow {
  std::string heuristic;
  int team = 0;
  int goals = 0;
  double mean_time_s = 0.0;
  double min_time_s = 0.0;
  double max_time_s = 0.0;
  double mean_coverage = 0.0;
  double mean_relay_ms = 0.0;
  double mean_alloc_ms = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;  // goals, team, heuristic order of the spec
  std::vector<BenchmarkRun> runs;  // same order, then seed order
  std::size_t audited_completions = 0;
};

// Full sweep. Every run is audited; a violation throws InvariantViolation.
// Cluster formation is shared by all runs of one (goal count, seed) pair.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

// With timing off the planning-time columns are written as zero so that
// repeated sweeps produce identical bytes.
void write_report_csv(std::ostream& out, const BenchmarkReport& report, bool timing = true);
void write_runs_csv(std::ostream& out, const BenchmarkReport& report, bool timing = true);

}  // namespace mrdeploy
