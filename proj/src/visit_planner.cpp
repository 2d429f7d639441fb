#include "mrdeploy/visit_planner.hpp"

#include "mrdeploy/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace mrdeploy {

namespace {

double finite_or_sentinel(double v) { return v < kUnreached ? v : kUnreachableCost; }

}  // namespace

ClusterMetrics cluster_metrics(GeodesicOracle& oracle, std::span<const Cluster> clusters,
                               const WorldPoint& bs, int team_size) {
  if (team_size < 1) throw Error("team size must be at least 1");
  const auto k = static_cast<Eigen::Index>(clusters.size());
  ClusterMetrics m;
  m.cd = Eigen::MatrixXd::Zero(k, k);
  m.cd_bs.resize(k);
  m.ra.resize(k);
  m.pa.resize(k);
  m.cmd.resize(k);
  m.cwd.resize(k);

  const auto bs_field = oracle.field(bs);
  const GridMap& map = oracle.map();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Cluster& c = clusters[static_cast<std::size_t>(i)];
    const WorldPoint anchor = c.anchor(bs);
    m.ids.push_back(c.id);
    m.relays.push_back(c.relay_count());
    m.cd_bs(i) = finite_or_sentinel(bs_field->at(world_to_cell(anchor, map)));
    m.ra(i) = static_cast<double>(c.relay_count() + 1) / team_size;
    m.pa(i) = c.primary_count();

    const auto f = oracle.field(anchor);
    // One solve per anchor fills the upper triangle; mirroring keeps CD
    // exactly symmetric.
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const WorldPoint other = clusters[static_cast<std::size_t>(j)].anchor(bs);
      m.cd(i, j) = m.cd(j, i) = finite_or_sentinel(f->at(world_to_cell(other, map)));
    }
    double sum = 0.0;
    double worst = 0.0;
    for (const WorldPoint& p : c.primary_goals) {
      const double d = finite_or_sentinel(f->at(world_to_cell(p, map)));
      sum += d;
      worst = std::max(worst, d);
    }
    m.cmd(i) = c.primary_goals.empty() ? 0.0 : sum / static_cast<double>(c.primary_goals.size());
    m.cwd(i) = worst;
  }
  return m;
}

Heuristic Heuristic::parse(std::string_view id) {
  Heuristic h;
  h.id = std::string(id);
  if (id.size() == 2 && id[0] == 'S' && id[1] >= '1' && id[1] <= '8') {
    h.sequential = true;
    h.rule = static_cast<SequentialRule>(id[1] - '1');
    return h;
  }
  if (id.size() == 2 && id[0] == 'C' && id[1] >= '1' && id[1] <= '9') {
    const int n = id[1] - '1';
    h.sequential = false;
    h.mode = static_cast<GraphMode>(n / 3);
    h.extension = static_cast<Extension>(n % 3);
    return h;
  }
  throw UsageError("unknown heuristic '" + std::string(id) + "' (expected S1-S8 or C1-C9)");
}

std::vector<std::string> Heuristic::all_ids() {
  std::vector<std::string> ids;
  for (int i = 1; i <= 8; ++i) ids.push_back("S" + std::to_string(i));
  for (int i = 1; i <= 9; ++i) ids.push_back("C" + std::to_string(i));
  return ids;
}

Eigen::VectorXd normalize_to_max(const Eigen::VectorXd& v) {
  if (v.size() == 0) return v;
  const double peak = v.maxCoeff();
  if (!(peak > 0.0)) return Eigen::VectorXd::Zero(v.size());
  return v / peak;
}

Eigen::MatrixXd sequential_cost(const ClusterMetrics& m, SequentialRule rule) {
  const Eigen::Index k = m.size();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(k + 1, k + 1);
  aug.block(1, 1, k, k) = m.cd;
  aug.block(0, 1, 1, k) = m.cd_bs.transpose();
  aug.block(1, 0, k, 1) = m.cd_bs;
  if (rule == SequentialRule::kS1 || rule == SequentialRule::kS2) return aug;

  const double peak = aug.size() > 0 ? aug.maxCoeff() : 0.0;
  const Eigen::MatrixXd cd_bar = peak > 0.0 ? Eigen::MatrixXd(aug / peak) : aug;
  const Eigen::VectorXd pa = normalize_to_max(m.pa);
  const Eigen::VectorXd cmd = normalize_to_max(m.cmd);
  const Eigen::VectorXd cwd = normalize_to_max(m.cwd);
  Eigen::VectorXd term(k);
  switch (rule) {
    case SequentialRule::kS3: term = m.ra; break;
    case SequentialRule::kS4: term = pa; break;
    case SequentialRule::kS5: term = cmd; break;
    case SequentialRule::kS6: term = cwd; break;
    case SequentialRule::kS7: term = pa.cwiseProduct(cmd); break;
    case SequentialRule::kS8: term = pa.cwiseProduct(cwd); break;
    default: break;
  }
  Eigen::VectorXd dest(k + 1);
  dest(0) = 1.0;
  dest.tail(k) = term;
  // Destination-indexed product: column j scaled by the terms of cluster j.
  return cd_bar * dest.asDiagonal();
}

SequentialOrder sequential_order(const ClusterMetrics& m, const Heuristic& h) {
  if (!h.sequential) throw UsageError("heuristic " + h.id + " is not sequential");
  SequentialOrder out;
  out.heuristic = h.id;
  const int k = m.size();
  if (k == 0) return out;
  if (h.rule == SequentialRule::kS2) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::make_tuple(m.ra(a), m.cd_bs(a)) < std::make_tuple(m.ra(b), m.cd_bs(b));
    });
    for (int i : idx) out.order.push_back(m.ids[static_cast<std::size_t>(i)]);
    return out;
  }
  const Eigen::MatrixXd cost = sequential_cost(m, h.rule);
  const tsp::Route route = tsp_route(cost, 0);
  for (std::size_t i = 1; i < route.size(); ++i) {
    out.order.push_back(m.ids[static_cast<std::size_t>(route[i] - 1)]);
  }
  return out;
}

ClusterGraph build_cluster_graph(const ClusterMetrics& m, GraphMode mode) {
  const int k = m.size();
  ClusterGraph g;
  g.mode = mode;
  g.parent.assign(static_cast<std::size_t>(k), -1);
  g.level.assign(static_cast<std::size_t>(k), 0);
  std::vector<bool> connected(static_cast<std::size_t>(k), false);
  std::vector<int> in_tree;  // connected clusters, attach order

  // Distance from tree vertex u (-1 = base station) to cluster v.
  auto dist = [&](int u, int v) { return u < 0 ? m.cd_bs(v) : m.cd(u, v); };
  auto closest_connected = [&](int v) {
    int best = -1;
    double best_d = dist(-1, v);
    for (int u : in_tree) {
      if (dist(u, v) < best_d) {
        best_d = dist(u, v);
        best = u;
      }
    }
    return std::make_pair(best, best_d);
  };
  auto attach = [&](int v, int parent) {
    g.parent[static_cast<std::size_t>(v)] = parent;
    g.level[static_cast<std::size_t>(v)] =
        parent < 0 ? 1 : g.level[static_cast<std::size_t>(parent)] + 1;
    connected[static_cast<std::size_t>(v)] = true;
    in_tree.push_back(v);
    g.connection_order.push_back(v);
  };

  std::vector<int> by_relays(static_cast<std::size_t>(k));
  std::iota(by_relays.begin(), by_relays.end(), 0);
  std::stable_sort(by_relays.begin(), by_relays.end(), [&](int a, int b) {
    return std::make_tuple(m.relays[static_cast<std::size_t>(a)], m.cd_bs(a)) <
           std::make_tuple(m.relays[static_cast<std::size_t>(b)], m.cd_bs(b));
  });

  switch (mode) {
    case GraphMode::kRL:
      for (int v : by_relays) attach(v, closest_connected(v).first);
      break;
    case GraphMode::kDL:
      // Prim's rule over {BS} and the clusters.
      for (int step = 0; step < k; ++step) {
        int best_v = -1;
        std::pair<int, double> best{-1, 0.0};
        for (int v = 0; v < k; ++v) {
          if (connected[static_cast<std::size_t>(v)]) continue;
          const auto cand = closest_connected(v);
          if (best_v < 0 || cand.second < best.second) {
            best_v = v;
            best = cand;
          }
        }
        attach(best_v, best.first);
      }
      break;
    case GraphMode::kRDL:
      // Within the lowest pending relay level, the vertex closest to the
      // tree goes first.
      for (int step = 0; step < k; ++step) {
        int level = -1;
        for (int v : by_relays) {
          if (!connected[static_cast<std::size_t>(v)]) {
            level = m.relays[static_cast<std::size_t>(v)];
            break;
          }
        }
        int best_v = -1;
        std::pair<int, double> best{-1, 0.0};
        for (int v : by_relays) {
          if (connected[static_cast<std::size_t>(v)] ||
              m.relays[static_cast<std::size_t>(v)] != level) {
            continue;
          }
          const auto cand = closest_connected(v);
          if (best_v < 0 || cand.second < best.second) {
            best_v = v;
            best = cand;
          }
        }
        attach(best_v, best.first);
      }
      break;
  }
  return g;
}

std::vector<int> split_visitors(int total, const std::vector<int>& weights) {
  const std::size_t n = weights.size();
  std::vector<int> out(n, 0);
  if (n == 0 || total <= 0) return out;
  const long long weight_sum = std::accumulate(weights.begin(), weights.end(), 0LL);
  if (weight_sum <= 0) return out;

  std::vector<double> remainder(n, 0.0);
  int given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota = static_cast<double>(total) * weights[i] / static_cast<double>(weight_sum);
    out[i] = static_cast<int>(std::floor(quota));
    remainder[i] = quota - out[i];
    given += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_tuple(-remainder[a], -weights[a]) < std::make_tuple(-remainder[b], -weights[b]);
  });
  for (std::size_t r = 0; given < total && r < n; ++r, ++given) ++out[order[r]];

  // Everyone reachable gets a visitor when the budget allows, taken from
  // the best-staffed entry.
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i] > 0 || weights[i] <= 0) continue;
    const auto donor = static_cast<std::size_t>(
        std::max_element(out.begin(), out.end()) - out.begin());
    if (out[donor] <= 1) break;
    --out[donor];
    out[i] = 1;
  }
  // No more visitors than primaries; the surplus goes where work remains.
  int surplus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i] > weights[i]) {
      surplus += out[i] - weights[i];
      out[i] = weights[i];
    }
  }
  while (surplus > 0) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] >= weights[i]) continue;
      if (best == n || weights[i] - out[i] > weights[best] - out[best]) best = i;
    }
    if (best == n) break;
    ++out[best];
    --surplus;
  }
  return out;
}

ConcurrentPlan concurrent_plan(const ClusterGraph& g, const ClusterMetrics& m,
                               const Heuristic& h, int team_size) {
  if (h.sequential) throw UsageError("heuristic " + h.id + " is not concurrent");
  ConcurrentPlan plan;
  plan.heuristic = h.id;
  const int k = m.size();
  auto demand = [&](int v) { return m.relays[static_cast<std::size_t>(v)]; };

  // 0 pending, 1 opened in an earlier wave, 2 skipped.
  std::vector<int> state(static_cast<std::size_t>(k), 0);
  int pending = 0;
  for (int v : g.connection_order) {
    if (demand(v) + 1 > team_size) {
      state[static_cast<std::size_t>(v)] = 2;
      plan.skipped.push_back(m.ids[static_cast<std::size_t>(v)]);
    } else {
      ++pending;
    }
  }
  if (pending == 0 && k > 0) {
    std::string ids;
    for (int id : plan.skipped) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    throw InfeasibleError("no cluster fits a team of " + std::to_string(team_size) +
                          "; skipped clusters: " + ids);
  }

  auto parent_done = [&](int v) {
    const int p = g.parent[static_cast<std::size_t>(v)];
    return p < 0 || state[static_cast<std::size_t>(p)] != 0;
  };

  while (pending > 0) {
    std::vector<int> opened;
    int budget = team_size;
    if (h.extension == Extension::kMP) {
      int best = -1;
      double best_ratio = -1.0;
      for (int v : g.connection_order) {
        if (state[static_cast<std::size_t>(v)] != 0) continue;
        const double ratio = m.pa(v) / static_cast<double>(demand(v) + 1);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = v;
        }
      }
      opened.push_back(best);
      budget -= demand(best);
    } else {
      for (int v : g.connection_order) {
        if (state[static_cast<std::size_t>(v)] != 0) continue;
        if (h.extension == Extension::kLC && !parent_done(v)) continue;
        if (demand(v) + 1 > budget) continue;
        opened.push_back(v);
        budget -= demand(v) + 1;
      }
      budget += static_cast<int>(opened.size());  // the reserved visitors
    }
    if (opened.empty()) throw InvariantViolation("concurrent wave opened no cluster");

    Wave wave;
    std::vector<int> weights;
    for (int v : opened) {
      wave.clusters.push_back(m.ids[static_cast<std::size_t>(v)]);
      weights.push_back(static_cast<int>(m.pa(v)));
    }
    if (h.extension == Extension::kMP) {
      wave.visitors = {budget};
    } else {
      wave.visitors = split_visitors(budget, weights);
    }
    for (int v : opened) state[static_cast<std::size_t>(v)] = 1;
    pending -= static_cast<int>(opened.size());
    plan.waves.push_back(std::move(wave));
  }
  return plan;
}

}  // namespace mrdeploy
