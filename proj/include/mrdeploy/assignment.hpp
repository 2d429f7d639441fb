#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace mrdeploy {

// Two-level cost ordered lexicographically. Forms an ordered abelian group,
// which is all the assignment solver below needs from its scalar.
struct LexCost {
  double primary = 0.0;
  double secondary = 0.0;

  friend LexCost operator+(LexCost a, LexCost b) {
    return {a.primary + b.primary, a.secondary + b.secondary};
  }
  friend LexCost operator-(LexCost a, LexCost b) {
    return {a.primary - b.primary, a.secondary - b.secondary};
  }
  friend bool operator<(LexCost a, LexCost b) {
    return a.primary < b.primary || (a.primary == b.primary && a.secondary < b.secondary);
  }
  friend bool operator==(LexCost, LexCost) = default;
};

template <typename T>
struct CostTraits {
  static T zero() { return T(0); }
  static T infinity() { return std::numeric_limits<T>::infinity(); }
};

template <>
struct CostTraits<LexCost> {
  static LexCost zero() { return {}; }
  static LexCost infinity() {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

// Shortest augmenting path Hungarian method with potentials, O(n^2 m).
// Requires rows <= cols; cost(i, j) returns a T. Returns col_of_row.
template <typename T, typename CostFn>
std::vector<int> solve_assignment(int rows, int cols, CostFn&& cost) {
  using Traits = CostTraits<T>;
  const T inf = Traits::infinity();
  // 1-based arrays; index 0 is the virtual start column.
  std::vector<T> u(static_cast<std::size_t>(rows) + 1, Traits::zero());
  std::vector<T> v(static_cast<std::size_t>(cols) + 1, Traits::zero());
  std::vector<int> p(static_cast<std::size_t>(cols) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(cols) + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<T> minv(static_cast<std::size_t>(cols) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(cols) + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      T delta = inf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const T cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] = u[p[j]] + delta;
          v[j] = v[j] - delta;
        } else {
          minv[j] = minv[j] - delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= cols; ++j) {
    if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
  }
  return col_of_row;
}

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
  double cost = 0.0;
};

// Minimum-cost assignment of min(rows, cols) pairs. Wide and tall matrices
// are both solved natively (tall ones through the transpose).
template <typename Derived>
Assignment hungarian(const Eigen::MatrixBase<Derived>& d) {
  Assignment a;
  const int rows = static_cast<int>(d.rows());
  const int cols = static_cast<int>(d.cols());
  if (rows == 0 || cols == 0) return a;
  if (rows <= cols) {
    const auto match = solve_assignment<double>(rows, cols, [&](int i, int j) { return d(i, j); });
    for (int i = 0; i < rows; ++i) a.pairs.emplace_back(i, match[i]);
  } else {
    const auto match = solve_assignment<double>(cols, rows, [&](int i, int j) { return d(j, i); });
    for (int j = 0; j < cols; ++j) a.pairs.emplace_back(match[j], j);
    std::sort(a.pairs.begin(), a.pairs.end());
  }
  for (const auto& [i, j] : a.pairs) a.cost += d(i, j);
  return a;
}

}  // namespace mrdeploy
