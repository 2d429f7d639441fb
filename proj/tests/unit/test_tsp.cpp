#include "mrdeploy/tsp.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mrdeploy;

namespace {

Eigen::MatrixXd random_costs(int n, std::mt19937_64& rng, bool symmetric) {
  std::uniform_real_distribution<double> u(1.0, 100.0);
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = i == j ? 0.0 : u(rng);
  }
  if (symmetric) c = (0.5 * (c + c.transpose())).eval();
  return c;
}

Eigen::MatrixXd planar_costs(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::vector<Eigen::Vector2d> p(n);
  for (auto& q : p) q = {u(rng), u(rng)};
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = (p[i] - p[j]).norm();
  }
  return c;
}

void expect_permutation(const tsp::Route& r, int n, int start) {
  ASSERT_EQ(static_cast<int>(r.size()), n);
  EXPECT_EQ(r.front(), start);
  std::vector<int> s = r;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < n; ++i) EXPECT_EQ(s[i], i);
}

}  // namespace

TEST(Tsp, SingleVertex) {
  const Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_EQ(tsp::solve(c, 0), (tsp::Route{0}));
  EXPECT_EQ(tsp::two_opt(c, {0}), (tsp::Route{0}));
}

TEST(Tsp, RejectsBadInput) {
  EXPECT_THROW(tsp::solve(Eigen::MatrixXd::Zero(2, 3), 0), Error);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Zero(3, 3);
  neg(0, 1) = -1.0;
  EXPECT_THROW(tsp::solve(neg, 0), Error);
  EXPECT_THROW(tsp::solve(Eigen::MatrixXd::Zero(3, 3), 3), Error);
}

TEST(Tsp, BruteForceMatchesHeldKarp) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 9; ++n) {
    for (int rep = 0; rep < 6; ++rep) {
      const Eigen::MatrixXd c = random_costs(n, rng, rep % 2 == 0);
      const int start = rep % n;
      const tsp::Route r = tsp::brute_force(c, start);
      expect_permutation(r, n, start);
      EXPECT_NEAR(tsp::route_cost(c, r), oracle::held_karp(c, start), 1e-9) << "n=" << n;
    }
  }
}

TEST(Tsp, DispatchIsExactBelowTwenty) {
  std::mt19937_64 rng(11);
  for (int n = 5; n < tsp::kBranchAndBoundLimit; ++n) {
    for (bool planar : {true, false}) {
      const Eigen::MatrixXd c = planar ? planar_costs(n, rng) : random_costs(n, rng, false);
      const tsp::Route r = tsp::solve(c, 0);
      expect_permutation(r, n, 0);
      EXPECT_NEAR(tsp::route_cost(c, r), oracle::held_karp(c, 0), 1e-9) << "n=" << n;
    }
  }
}

TEST(Tsp, BranchAndBoundMatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd c = random_costs(8, rng, rep % 3 == 0);
    EXPECT_NEAR(tsp::route_cost(c, tsp::branch_and_bound(c, 2)),
                tsp::route_cost(c, tsp::brute_force(c, 2)), 1e-9);
  }
}

TEST(Tsp, TwoOptImprovesNearestNeighbour) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd c = planar_costs(30, rng);
    const tsp::Route nn = tsp::nearest_neighbor(c, 0);
    const tsp::Route r = tsp::two_opt(c, nn);
    expect_permutation(r, 30, 0);
    EXPECT_LE(tsp::route_cost(c, r), tsp::route_cost(c, nn) + 1e-9);
    EXPECT_EQ(tsp::two_opt(c, r), r);
    EXPECT_EQ(tsp::solve(c, 0), r);
  }
}

TEST(Tsp, TwoOptLocalOptimumOnAsymmetricCosts) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd c = random_costs(25, rng, false);
    const tsp::Route r = tsp::two_opt(c, tsp::nearest_neighbor(c, 0));
    const double base = tsp::route_cost(c, r);
    // no single reversal of r[i..k] is cheaper
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      for (std::size_t k = i + 1; k < r.size(); ++k) {
        tsp::Route alt = r;
        std::reverse(alt.begin() + static_cast<std::ptrdiff_t>(i),
                     alt.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        EXPECT_GE(tsp::route_cost(c, alt), base - 1e-9 * base);
      }
    }
  }
}

TEST(Tsp, NearestNeighbourGreedyChoice) {
  Eigen::MatrixXd c(4, 4);
  c << 0, 5, 1, 9,
       5, 0, 2, 3,
       1, 2, 0, 7,
       9, 3, 7, 0;
  EXPECT_EQ(tsp::nearest_neighbor(c, 0), (tsp::Route{0, 2, 1, 3}));
  EXPECT_EQ(tsp::brute_force(c, 0), (tsp::Route{0, 2, 1, 3}));
}
