#include "mrdeploy/scenario_io.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mrdeploy;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mrdeploy_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  // Runs the CLI with stdout and stderr captured; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(MRDEPLOY_CLI) + " " + args + " > " +
                            path("stdout").string() + " 2> " + path("stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Json read_json(const fs::path& p) const { return Json::parse(read(p)); }

  void write(const fs::path& p, const std::string& text) const { std::ofstream(p) << text; }

  void write_map(const std::string& name, const GridMap::Occupancy& occ, double res) const {
    std::ostringstream os;
    os << "resolution_m " << res << '\n';
    for (Eigen::Index y = 0; y < occ.rows(); ++y) {
      for (Eigen::Index x = 0; x < occ.cols(); ++x) os << (occ(y, x) ? '#' : '.');
      os << '\n';
    }
    write(path(name), os.str());
  }

  void write_two_room(int robots) const {
    const auto t = fixtures::two_room();
    write_map("two_room.txt", t.map.occupancy(), 0.2);
    Json s;
    s["map_path"] = "two_room.txt";
    s["bs"] = to_json(t.bs);
    s["robots"] = robots;
    Json goals = Json::array();
    for (const auto& g : t.goals) goals.push_back(to_json(g));
    s["goals"] = goals;
    write(path("two_room.json"), s.dump());
  }

  fs::path dir_;
};

std::string fixture(const std::string& name) {
  return (fs::path(fixtures::project_dir()) / "tests" / "data" / name).string();
}

}  // namespace

TEST_F(CliTest, PlanSingleGoal) {
  write_map("open.txt", fixtures::blank(40, 40, true), 0.2);
  write(path("one.json"),
        R"({"map_path": "open.txt", "bs": [4.1, 4.1], "robots": 1, "goals": [[5.1, 6.1]]})");
  ASSERT_EQ(run("plan --scenario " + path("one.json").string() + " --out " + path("plan.json").string()), 0);
  const Json j = read_json(path("plan.json"));
  ASSERT_EQ(j["clusters"]["clusters"].size(), 1u);
  EXPECT_TRUE(j["clusters"]["clusters"][0]["bs_cluster"].get<bool>());
  EXPECT_EQ(j["order"], Json::array({0}));
  EXPECT_EQ(j["assignments"].size(), 1u);
  EXPECT_EQ(j["expected_coverage"].get<double>(), 1.0);
}

TEST_F(CliTest, PlanTwoRooms) {
  write_two_room(5);
  for (const char* h : {"S1", "C4"}) {
    ASSERT_EQ(run("plan --scenario " + path("two_room.json").string() + " --heuristic " + h +
                  " --out " + path("plan.json").string()),
              0);
    const Json j = read_json(path("plan.json"));
    EXPECT_EQ(j["heuristic"], h);
    const Json& clusters = j["clusters"]["clusters"];
    ASSERT_EQ(clusters.size(), 2u);
    for (const Json& c : clusters) EXPECT_GE(c["relay_count"].get<int>(), 1);
    EXPECT_TRUE(j["infeasible_clusters"].empty());
    EXPECT_EQ(j["expected_coverage"].get<double>(), 1.0);
    if (j["mode"] == "sequential") {
      EXPECT_EQ(j["order"].size(), 2u);
    } else {
      EXPECT_TRUE(j.contains("waves"));
      EXPECT_TRUE(j.contains("graph"));
    }
  }
}

TEST_F(CliTest, DumpsFieldsAndClusters) {
  write_two_room(3);
  ASSERT_EQ(run("plan --scenario " + path("two_room.json").string() + " --dump-fields " +
                path("field.csv").string() + " --dump-clusters " + path("clusters.json").string()),
            0);
  const std::string csv = read(path("field.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 120);
  const auto first_line = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(first_line.begin(), first_line.end(), ','), 199);
  EXPECT_EQ(read_json(path("clusters.json"))["clusters"].size(), 2u);
}

TEST_F(CliTest, UsageErrors) {
  write_two_room(3);
  EXPECT_EQ(run("plan --scenario " + path("two_room.json").string() + " --heuristic S9"), 2);
  EXPECT_EQ(run("plan --scenario " + path("two_room.json").string() + " --heuristic C0"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("plan"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(CliTest, InputErrors) {
  EXPECT_EQ(run("plan --scenario " + path("missing.json").string()), 1);
  write(path("broken.json"), "{\"map_path\": ");
  EXPECT_EQ(run("plan --scenario " + path("broken.json").string()), 1);
  write(path("bad.txt"), "resolution_m 0.2\n..x\n...\n");
  write(path("bad_map.json"), R"({"map_path": "bad.txt", "bs": [0.1, 0.1], "robots": 1, "goals": [[0.3, 0.3]]})");
  EXPECT_EQ(run("simulate --scenario " + path("bad_map.json").string()), 1);
  EXPECT_NE(read(path("stderr")).find("line 2"), std::string::npos);
  write_map("open.txt", fixtures::blank(10, 10, true), 0.2);
  write(path("team.json"),
        R"({"map_path": "open.txt", "bs": [0.5, 0.5], "robots": 3, "goals": [[1.1, 1.1]]})");
  EXPECT_EQ(run("simulate --scenario " + path("team.json").string()), 1);
}

TEST_F(CliTest, SimulateSkipsUnstaffableCluster) {
  for (const char* h : {"S1", "S4", "C1", "C9"}) {
    ASSERT_EQ(run("simulate --scenario " + fixture("coverage_skip.json") + " --heuristic " + h +
                  " --out " + path("run.json").string() + " --timeline " + path("t.csv").string()),
              0)
        << h;
    const Json j = read_json(path("run.json"));
    EXPECT_LT(j["coverage"].get<double>(), 1.0);
    EXPECT_EQ(j["skipped_clusters"], Json::array({1})) << h;
    EXPECT_TRUE(j["audit_violations"].empty());
    EXPECT_EQ(read(path("t.csv")).rfind("time,robot,event\n", 0), 0u);
  }
  ASSERT_EQ(run("plan --scenario " + fixture("coverage_skip.json") + " --out " + path("p.json").string()), 0);
  EXPECT_EQ(read_json(path("p.json"))["infeasible_clusters"], Json::array({1}));
}

TEST_F(CliTest, BenchmarkIsReproducible) {
  write_two_room(3);
  Json spec;
  spec["map_path"] = "two_room.txt";
  spec["bs"] = Json::array({2.1, 12.1});
  spec["team_sizes"] = Json::array({2, 4});
  spec["goal_counts"] = Json::array({6});
  spec["seeds"] = Json::array({1, 2});
  spec["heuristics"] = Json::array({"S1", "C2"});
  write(path("bench.json"), spec.dump());
  const std::string base = "benchmark --spec " + path("bench.json").string() + " --no-timing";
  ASSERT_EQ(run(base + " --out " + path("a.csv").string() + " --raw " + path("raw.csv").string()), 0);
  ASSERT_EQ(run(base + " --out " + path("b.csv").string()), 0);
  const std::string a = read(path("a.csv"));
  EXPECT_EQ(a, read(path("b.csv")));
  std::istringstream lines(a);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "heuristic,team,goals,mean_time_s,min_time_s,max_time_s,mean_coverage,"
            "mean_plan_ms_relay,mean_plan_ms_alloc");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    EXPECT_NE(line.find(",0.000,0.000"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 4);
  const std::string raw = read(path("raw.csv"));
  EXPECT_EQ(std::count(raw.begin(), raw.end(), '\n'), 1 + 2 * 2 * 2);
}

TEST_F(CliTest, BenchmarkRejectsBadSpec) {
  write_two_room(3);
  write(path("bench.json"),
        R"({"map_path": "two_room.txt", "bs": [2.1, 12.1], "team_sizes": [9], "goal_counts": [6],
            "seeds": [1], "heuristics": ["S1"]})");
  EXPECT_NE(run("benchmark --spec " + path("bench.json").string()), 0);
  write(path("bench2.json"),
        R"({"map_path": "two_room.txt", "bs": [2.1, 12.1], "team_sizes": [2], "goal_counts": [6],
            "seeds": [1], "heuristics": ["S10"]})");
  EXPECT_NE(run("benchmark --spec " + path("bench2.json").string()), 0);
}

TEST_F(CliTest, GenScenarioRoundTrip) {
  write_two_room(3);
  const std::string gen = "gen-scenario --map " + path("two_room.txt").string() +
                          " --bs 2.1 12.1 --robots 4 --goals 12 --seed 5 --out ";
  ASSERT_EQ(run(gen + path("g1.json").string()), 0);
  ASSERT_EQ(run(gen + path("g2.json").string()), 0);
  EXPECT_EQ(read(path("g1.json")), read(path("g2.json")));
  const Json j = read_json(path("g1.json"));
  EXPECT_EQ(j["goals"].size(), 12u);
  ASSERT_EQ(run("simulate --scenario " + path("g1.json").string() + " --heuristic C5 --out " +
                path("r.json").string()),
            0);
  const Json r = read_json(path("r.json"));
  EXPECT_GT(r["coverage"].get<double>(), 0.0);
}
