#pragma once

#include "mrdeploy/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

// Open-route travelling salesman solvers over a square (possibly asymmetric)
// cost matrix. Routes start at a fixed vertex and do not return to it.
namespace mrdeploy::tsp {

using Route = std::vector<int>;

// Instances up to this many vertices are solved by exhaustive search.
inline constexpr int kBruteForceMax = 12;
// Instances strictly below this size (and above kBruteForceMax) use
// branch and bound; everything larger uses nearest neighbour + 2-opt.
inline constexpr int kBranchAndBoundLimit = 20;

template <typename Derived>
typename Derived::Scalar route_cost(const Eigen::MatrixBase<Derived>& c, const Route& r) {
  typename Derived::Scalar total(0);
  for (std::size_t i = 1; i < r.size(); ++i) total += c(r[i - 1], r[i]);
  return total;
}

template <typename Derived>
void validate(const Eigen::MatrixBase<Derived>& c, int start) {
  if (c.rows() != c.cols()) throw Error("TSP cost matrix must be square");
  if (c.size() > 0 && !(c.array() >= 0).all()) throw Error("TSP costs must be non-negative");
  if (start < 0 || start >= c.rows()) throw Error("TSP start vertex out of range");
}

namespace detail {

template <typename Derived>
struct Search {
  const Eigen::MatrixBase<Derived>& c;
  using Scalar = typename Derived::Scalar;
  int n;
  Route path;
  std::vector<char> used;
  Route best;
  Scalar best_cost;
  bool use_bound;

  // Every unvisited vertex still needs one entering edge, coming from the
  // current vertex or another unvisited one. Symmetrically, the current
  // vertex and all unvisited ones but the last need a leaving edge.
  Scalar lower_bound(int current) const {
    Scalar enter(0);
    Scalar leave(0);
    Scalar widest(0);
    bool any = false;
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      Scalar m = c(current, v);
      for (int u = 0; u < n; ++u) {
        if (u != v && !used[u]) m = std::min(m, c(u, v));
      }
      enter += m;
    }
    for (int v = -1; v < n; ++v) {
      const int from = v < 0 ? current : v;
      if (v >= 0 && used[v]) continue;
      bool found = false;
      Scalar m(0);
      for (int u = 0; u < n; ++u) {
        if (u == from || used[u]) continue;
        m = found ? std::min(m, c(from, u)) : c(from, u);
        found = true;
      }
      if (!found) continue;
      leave += m;
      widest = any ? std::max(widest, m) : m;
      any = true;
    }
    if (any) leave -= widest;
    return std::max({enter, leave, tree_bound(current)});
  }

  // The rest of the route is a spanning tree over the current vertex and the
  // unvisited ones; Prim with each edge at its cheaper direction.
  Scalar tree_bound(int current) const {
    std::vector<int> nodes{current};
    for (int v = 0; v < n; ++v) {
      if (!used[v]) nodes.push_back(v);
    }
    const std::size_t m = nodes.size();
    std::vector<Scalar> key(m);
    std::vector<char> in(m, 0);
    in[0] = 1;
    for (std::size_t k = 1; k < m; ++k) key[k] = std::min(c(current, nodes[k]), c(nodes[k], current));
    Scalar total(0);
    for (std::size_t step = 1; step < m; ++step) {
      std::size_t pick = 0;
      for (std::size_t k = 1; k < m; ++k) {
        if (!in[k] && (pick == 0 || key[k] < key[pick])) pick = k;
      }
      in[pick] = 1;
      total += key[pick];
      for (std::size_t k = 1; k < m; ++k) {
        if (in[k]) continue;
        key[k] = std::min({key[k], c(nodes[pick], nodes[k]), c(nodes[k], nodes[pick])});
      }
    }
    return total;
  }

  // Cheapest known prefix cost per (visited set, current vertex); only
  // used with the bound, where n is small enough for a 64-bit mask.
  std::unordered_map<std::uint64_t, Scalar> seen;
  std::uint64_t mask = 0;

  void run(Scalar cost) {
    const int current = path.back();
    if (static_cast<int>(path.size()) == n) {
      if (best.empty() || cost < best_cost) {
        best_cost = cost;
        best = path;
      }
      return;
    }
    if (!best.empty()) {
      const Scalar lb = use_bound ? cost + lower_bound(current) : cost;
      if (!(lb < best_cost)) return;
    }
    if (use_bound) {
      const std::uint64_t key = (mask << 6) | static_cast<std::uint64_t>(current);
      const auto [it, fresh] = seen.try_emplace(key, cost);
      if (!fresh) {
        if (!(cost < it->second)) return;
        it->second = cost;
      }
    }
    Route next;
    for (int v = 0; v < n; ++v) {
      if (!used[v]) next.push_back(v);
    }
    if (use_bound) {
      std::stable_sort(next.begin(), next.end(),
                       [&](int a, int b) { return c(current, a) < c(current, b); });
    }
    for (int v : next) {
      used[v] = 1;
      mask |= std::uint64_t{1} << v;
      path.push_back(v);
      run(cost + c(current, v));
      path.pop_back();
      mask &= ~(std::uint64_t{1} << v);
      used[v] = 0;
    }
  }
};

}  // namespace detail

// Exhaustive search; prunes only branches already costlier than the best
// complete route, so the result is the exact optimum.
template <typename Derived>
Route brute_force(const Eigen::MatrixBase<Derived>& c, int start) {
  validate(c, start);
  const int n = static_cast<int>(c.rows());
  detail::Search<Derived> s{c, n, {start}, std::vector<char>(n, 0), {}, 0, false};
  s.used[start] = 1;
  s.run(0);
  return s.best;
}

template <typename Derived>
Route nearest_neighbor(const Eigen::MatrixBase<Derived>& c, int start) {
  validate(c, start);
  const int n = static_cast<int>(c.rows());
  std::vector<char> used(n, 0);
  Route r{start};
  used[start] = 1;
  while (static_cast<int>(r.size()) < n) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!used[v] && (best < 0 || c(r.back(), v) < c(r.back(), best))) best = v;
    }
    used[best] = 1;
    r.push_back(best);
  }
  return r;
}

// First-improvement 2-opt with the start vertex pinned. Terminates at a
// route where no segment reversal lowers the cost by more than `tol`
// relative to the current route cost.
template <typename Derived>
Route two_opt(const Eigen::MatrixBase<Derived>& c, Route r, double tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  const std::size_t n = r.size();
  if (n < 3) return r;
  bool improved = true;
  while (improved) {
    improved = false;
    const Scalar threshold = -tol * std::max<Scalar>(route_cost(c, r), Scalar(1));
    for (std::size_t i = 1; i + 1 < n && !improved; ++i) {
      // Running sum of the reversed-minus-forward inner edges.
      Scalar inner(0);
      for (std::size_t k = i + 1; k < n; ++k) {
        inner += c(r[k], r[k - 1]) - c(r[k - 1], r[k]);
        Scalar delta = c(r[i - 1], r[k]) - c(r[i - 1], r[i]) + inner;
        if (k + 1 < n) delta += c(r[i], r[k + 1]) - c(r[k], r[k + 1]);
        if (delta < threshold) {
          std::reverse(r.begin() + static_cast<std::ptrdiff_t>(i),
                       r.begin() + static_cast<std::ptrdiff_t>(k) + 1);
          improved = true;
          break;
        }
      }
    }
  }
  return r;
}

// Depth-first branch and bound seeded with a 2-opt incumbent. Children are
// expanded cheapest edge first and pruned on the edge-count bound and on
// dominated (visited set, vertex) prefixes.
template <typename Derived>
Route branch_and_bound(const Eigen::MatrixBase<Derived>& c, int start) {
  validate(c, start);
  const int n = static_cast<int>(c.rows());
  Route seed = two_opt(c, nearest_neighbor(c, start));
  detail::Search<Derived> s{c, n, {start}, std::vector<char>(n, 0), seed, route_cost(c, seed),
                            true};
  s.used[start] = 1;
  s.run(0);
  return s.best;
}

// Size-dispatched solver: exact up to kBranchAndBoundLimit - 1 vertices,
// nearest neighbour + 2-opt beyond.
template <typename Derived>
Route solve(const Eigen::MatrixBase<Derived>& c, int start) {
  validate(c, start);
  const int n = static_cast<int>(c.rows());
  if (n <= kBruteForceMax) return brute_force(c, start);
  if (n < kBranchAndBoundLimit) return branch_and_bound(c, start);
  return two_opt(c, nearest_neighbor(c, start));
}

}  // namespace mrdeploy::tsp
