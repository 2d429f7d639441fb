#include "mrdeploy/allocation.hpp"
#include "mrdeploy/assignment.hpp"
#include "mrdeploy/error.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace mrdeploy;

namespace {

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng, double hi = 100.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

void expect_valid_matching(const Assignment& a, int rows, int cols) {
  ASSERT_EQ(static_cast<int>(a.pairs.size()), std::min(rows, cols));
  std::set<int> rs, cs;
  for (auto [i, j] : a.pairs) {
    EXPECT_TRUE(rs.insert(i).second);
    EXPECT_TRUE(cs.insert(j).second);
    EXPECT_LT(i, rows);
    EXPECT_LT(j, cols);
  }
}

}  // namespace

TEST(CostMatrix, RobotOnGoalIsZero) {
  const GridMap m(20, 20, 0.2);
  const std::vector<WorldPoint> robots{fixtures::center(m, 3, 3), fixtures::center(m, 10, 10)};
  const std::vector<WorldPoint> goals{fixtures::center(m, 10, 10)};
  const CostMatrix cm = build_cost_matrix(m, robots, goals);
  EXPECT_EQ(cm.d(1, 0), 0.0);
  EXPECT_GT(cm.d(0, 0), 0.0);
}

TEST(CostMatrix, EmptyMapNearEuclidean) {
  // first-order error shrinks with distance: within 2% past 15 m, 6% everywhere
  const GridMap m(200, 160, 0.2);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> ux(0, 199), uy(0, 159);
  std::vector<WorldPoint> robots, goals;
  for (int i = 0; i < 8; ++i) robots.push_back(fixtures::center(m, ux(rng), uy(rng)));
  for (int i = 0; i < 8; ++i) goals.push_back(fixtures::center(m, ux(rng), uy(rng)));
  const CostMatrix cm = build_cost_matrix(m, robots, goals);
  int far = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double e = (robots[i] - goals[j]).norm();
      if (e < 2.0) continue;
      const double ratio = cm.d(i, j) / e;
      EXPECT_GE(ratio, 1.0 - 1e-9);
      EXPECT_LE(ratio, 1.06);
      if (e > 15.0) {
        ++far;
        EXPECT_LE(ratio, 1.02) << "pair " << i << "," << j << " at " << e << " m";
      }
    }
  }
  EXPECT_GT(far, 10);
}

TEST(CostMatrix, SealedRoomGetsSentinel) {
  auto occ = fixtures::blank(30, 30, false);
  fixtures::fill(occ, 10, 10, 14, 14);
  fixtures::fill(occ, 12, 12, 12, 12, false);
  const GridMap m(occ, 0.2);
  const std::vector<WorldPoint> robots{fixtures::center(m, 1, 1), fixtures::center(m, 25, 25)};
  const std::vector<WorldPoint> goals{fixtures::center(m, 12, 12)};
  const CostMatrix cm = build_cost_matrix(m, robots, goals);
  EXPECT_EQ(cm.d(0, 0), kUnreachableCost);
  EXPECT_EQ(cm.d(1, 0), kUnreachableCost);
}

TEST(CostMatrix, OracleCachesFields) {
  const GridMap m(30, 30, 0.2);
  GeodesicOracle oracle(m);
  const std::vector<WorldPoint> robots{fixtures::center(m, 1, 1), fixtures::center(m, 5, 5)};
  const std::vector<WorldPoint> goals{fixtures::center(m, 20, 20), fixtures::center(m, 25, 2)};
  build_cost_matrix(oracle, robots, goals);
  build_cost_matrix(oracle, robots, goals);
  EXPECT_EQ(oracle.solves(), 2u);
  GeodesicOracle tiny(m, 1);
  build_cost_matrix(tiny, robots, goals);
  build_cost_matrix(tiny, robots, goals);
  EXPECT_EQ(tiny.solves(), 4u);
}

TEST(RelayPriority, HandEvaluated) {
  CostMatrix cm{Eigen::MatrixXd(2, 2), {GoalKind::kRelay, GoalKind::kPrimary}};
  cm.d << 2, 4, 6, 8;
  const CostMatrix s = apply_relay_priority(cm);
  EXPECT_NEAR(s.d(0, 0), 2.0 * 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(s.d(1, 0), 2.0, 1e-12);
  EXPECT_EQ(s.d(0, 1), 4.0);
  EXPECT_EQ(s.d(1, 1), 8.0);
}

TEST(RelayPriority, ConstantMatrixIsFixedPoint) {
  CostMatrix cm{Eigen::MatrixXd::Constant(3, 4, 5.0),
                {GoalKind::kRelay, GoalKind::kPrimary, GoalKind::kRelay, GoalKind::kPrimary}};
  const CostMatrix s = apply_relay_priority(cm);
  EXPECT_TRUE(s.d.isApprox(cm.d));
}

TEST(RelayPriority, NoRelayColumnsUnchanged) {
  CostMatrix cm{Eigen::MatrixXd::Constant(2, 2, 3.0), {GoalKind::kPrimary, GoalKind::kPrimary}};
  cm.d(0, 1) = 9.0;
  EXPECT_EQ(apply_relay_priority(cm).d, cm.d);
}

TEST(RelayPriority, ZeroMinimumUsesFloor) {
  CostMatrix cm{Eigen::MatrixXd(2, 2), {GoalKind::kRelay, GoalKind::kPrimary}};
  cm.d << 4, 0, 8, 3;
  const CostMatrix s = apply_relay_priority(cm);
  EXPECT_NEAR(s.d.col(0).maxCoeff(), kZeroCostFloor, 1e-18);
}

TEST(RelayPriority, RelaysAlwaysAssignedFirst) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> un(1, 7);
    const int robots = un(rng);
    const int goals = un(rng);
    std::uniform_int_distribution<int> ur(1, std::min(robots, goals));
    const int relays = ur(rng);
    CostMatrix cm{random_matrix(robots, goals, rng) + Eigen::MatrixXd::Constant(robots, goals, 1.0),
                  std::vector<GoalKind>(static_cast<std::size_t>(goals), GoalKind::kPrimary)};
    std::vector<int> cols(static_cast<std::size_t>(goals));
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    for (int k = 0; k < relays; ++k) cm.kinds[static_cast<std::size_t>(cols[k])] = GoalKind::kRelay;

    const CostMatrix s = apply_relay_priority(cm);
    double relay_max = 0.0;
    for (int j = 0; j < goals; ++j) {
      if (s.kinds[j] == GoalKind::kRelay) relay_max = std::max(relay_max, s.d.col(j).maxCoeff());
    }
    EXPECT_NEAR(relay_max, cm.d.minCoeff(), 1e-9 * cm.d.minCoeff());
    const Assignment a = hungarian(s);
    int assigned = 0;
    for (auto [i, j] : a.pairs) assigned += s.kinds[j] == GoalKind::kRelay;
    EXPECT_EQ(assigned, relays);
  }
}

TEST(Hungarian, IdentityStructure) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  const Assignment a = hungarian(d);
  EXPECT_EQ(a.cost, 0.0);
  for (auto [i, j] : a.pairs) EXPECT_EQ(i, j);
}

TEST(Hungarian, MatchesPermutationBruteForce) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd d = random_matrix(7, 7, rng);
    const Assignment a = hungarian(d);
    expect_valid_matching(a, 7, 7);
    EXPECT_NEAR(a.cost, oracle::brute_assignment(d), 1e-9);
  }
}

TEST(Hungarian, Rectangular) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd wide = random_matrix(2, 5, rng);
    const Assignment a = hungarian(wide);
    expect_valid_matching(a, 2, 5);
    EXPECT_NEAR(a.cost, oracle::brute_assignment(wide), 1e-9);
    const Eigen::MatrixXd tall = wide.transpose();
    const Assignment b = hungarian(tall);
    expect_valid_matching(b, 5, 2);
    EXPECT_NEAR(b.cost, a.cost, 1e-9);
  }
}

TEST(Hungarian, IntegerTiesStillOptimal) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> u(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd d(5, 6);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 6; ++j) d(i, j) = u(rng);
    }
    EXPECT_EQ(hungarian(d).cost, oracle::brute_assignment(d));
  }
}

TEST(AllocateCluster, SinglePrimary) {
  const GridMap m(20, 20, 0.2);
  Cluster c;
  c.goal_ids = {0};
  c.primary_goals = {fixtures::center(m, 15, 15)};
  const std::vector<WorldPoint> robots{fixtures::center(m, 1, 1)};
  const ClusterAllocation a = allocate_cluster(m, c, robots);
  ASSERT_EQ(a.rounds.size(), 1u);
  ASSERT_EQ(a.rounds[0].pairs.size(), 1u);
  EXPECT_EQ(a.rounds[0].pairs[0], (std::pair<int, int>{0, 0}));
}

TEST(AllocateCluster, LoneVisitorRounds) {
  const GridMap m(100, 40, 0.2);
  Cluster c;
  c.id = 1;
  c.x_mc = fixtures::center(m, 60, 20);
  c.chain.relays = {fixtures::center(m, 30, 20)};
  c.goal_ids = {0, 1, 2, 3};
  c.primary_goals = {fixtures::center(m, 70, 10), fixtures::center(m, 75, 30),
                     fixtures::center(m, 85, 12), fixtures::center(m, 90, 28)};
  const std::vector<WorldPoint> robots(3, fixtures::center(m, 2, 20));
  const ClusterAllocation a = allocate_cluster(m, c, robots);
  ASSERT_EQ(a.goals.size(), 6u);
  ASSERT_EQ(a.rounds.size(), 4u);
  ASSERT_EQ(a.rounds[0].pairs.size(), 3u);
  int relay_pairs = 0;
  for (auto [r, g] : a.rounds[0].pairs) relay_pairs += a.kinds[g] == GoalKind::kRelay;
  EXPECT_EQ(relay_pairs, 2);
  EXPECT_EQ(a.relay_robots.size(), 2u);
  std::set<int> visited;
  for (std::size_t k = 1; k < 4; ++k) {
    ASSERT_EQ(a.rounds[k].pairs.size(), 1u);
    const auto [r, g] = a.rounds[k].pairs[0];
    EXPECT_EQ(std::count(a.relay_robots.begin(), a.relay_robots.end(), r), 0);
    EXPECT_EQ(a.kinds[g], GoalKind::kPrimary);
    visited.insert(g);
  }
  for (auto [r, g] : a.rounds[0].pairs) visited.insert(g);
  EXPECT_EQ(visited.size(), 6u);
}

TEST(AllocateCluster, TooFewRobots) {
  const GridMap m(40, 40, 0.2);
  Cluster c;
  c.x_mc = fixtures::center(m, 30, 30);
  c.chain.relays = {fixtures::center(m, 20, 20)};
  c.goal_ids = {0};
  c.primary_goals = {fixtures::center(m, 35, 35)};
  const std::vector<WorldPoint> robots(2, fixtures::center(m, 1, 1));
  EXPECT_THROW(allocate_cluster(m, c, robots), InfeasibleError);
}

TEST(AllocateCluster, RelaysFirstOnRandomInstances) {
  const auto t = fixtures::two_room();
  GeodesicOracle oracle(t.map);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> un(0, 3), up(1, 6);
    Cluster c;
    c.id = trial;
    const auto pts = generate_goals(t.map, 12, t.bs, static_cast<std::uint64_t>(trial));
    const int chain = un(rng);
    c.x_mc = pts[0];
    for (int k = 0; k < chain; ++k) c.chain.relays.push_back(pts[1 + k]);
    const int primaries = up(rng);
    for (int k = 0; k < primaries; ++k) {
      c.goal_ids.push_back(k);
      c.primary_goals.push_back(pts[5 + k]);
    }
    std::uniform_int_distribution<int> ur(c.relay_count() + 1, c.relay_count() + 4);
    const int nrobots = ur(rng);
    std::vector<WorldPoint> robots;
    const auto starts = generate_goals(t.map, nrobots, t.bs, 1000 + trial);
    robots.assign(starts.begin(), starts.end());
    const ClusterAllocation a = allocate_cluster(oracle, c, robots);
    std::set<int> relay_goals;
    for (auto [r, g] : a.rounds[0].pairs) {
      if (a.kinds[g] == GoalKind::kRelay) relay_goals.insert(g);
    }
    EXPECT_EQ(static_cast<int>(relay_goals.size()), c.relay_count());
    std::size_t total = 0;
    for (const auto& round : a.rounds) total += round.pairs.size();
    EXPECT_EQ(total, a.goals.size());
  }
}
