#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "obsnet/errors.hpp"

namespace obsnet {

// Symmetric link costs between agents, with an availability mask for pairs
// that cannot be wired at all. The diagonal is ignored.
struct NetworkCostMatrix {
  std::vector<std::vector<double>> costs;
  std::vector<std::vector<bool>> available;  // symmetric, false on diagonal

  int size() const { return static_cast<int>(costs.size()); }

  static NetworkCostMatrix full(std::vector<std::vector<double>> costs) {
    NetworkCostMatrix b;
    int n = static_cast<int>(costs.size());
    b.costs = std::move(costs);
    b.available.assign(n, std::vector<bool>(n, true));
    for (int i = 0; i < n; ++i) b.available[i][i] = false;
    return b;
  }

  void validate() const {
    int n = size();
    if (n < 1) throw ValidationError("network cost matrix must be nonempty");
    if (static_cast<int>(available.size()) != n)
      throw ValidationError("availability mask size does not match cost matrix");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(costs[i].size()) != n || static_cast<int>(available[i].size()) != n)
        throw ValidationError("network cost matrix must be square");
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (available[i][j] != available[j][i])
          throw NetworkAssumptionError("availability mask is asymmetric at (" +
                                       std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        if (!available[i][j]) continue;
        if (!std::isfinite(costs[i][j]) || costs[i][j] < 0.0)
          throw ValidationError("link costs must be finite and nonnegative");
        if (costs[i][j] != costs[j][i])
          throw NetworkAssumptionError("link costs are asymmetric at (" + std::to_string(i + 1) +
                                       "," + std::to_string(j + 1) + "): " +
                                       std::to_string(costs[i][j]) + " vs " +
                                       std::to_string(costs[j][i]));
      }
    }
  }
};

// Undirected links chosen for the beta backbone; edges as (i, j) with i < j.
struct LinkSelection {
  std::vector<std::pair<int, int>> edges;
  double total_cost = 0.0;
  bool connected = false;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

inline std::string unreachable_list(const NetworkCostMatrix& b) {
  int n = b.size();
  std::vector<bool> seen(n, false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (size_t q = 0; q < queue.size(); ++q)
    for (int j = 0; j < n; ++j)
      if (!seen[j] && b.available[queue[q]][j]) {
        seen[j] = true;
        queue.push_back(j);
      }
  std::string out;
  for (int j = 0; j < n; ++j)
    if (!seen[j]) out += (out.empty() ? "" : ", ") + std::to_string(j + 1);
  return out;
}

}  // namespace detail

// Kruskal over the available links, edges ordered by (cost, i, j) ascending,
// which pins the tree uniquely even under cost ties.
inline LinkSelection solve_mst(const NetworkCostMatrix& b) {
  b.validate();
  int n = b.size();
  std::vector<std::tuple<double, int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (b.available[i][j]) edges.emplace_back(b.costs[i][j], i + 1, j + 1);
  std::sort(edges.begin(), edges.end());

  detail::UnionFind uf(n);
  LinkSelection sel;
  for (auto [c, i, j] : edges)
    if (uf.unite(i - 1, j - 1)) sel.edges.emplace_back(i, j);
  if (static_cast<int>(sel.edges.size()) != n - 1)
    throw NetworkAssumptionError("available links cannot span all agents; unreachable from agent 1: " +
                                 detail::unreachable_list(b));
  // Total summed in (i, j) edge order: the one canonical order every solver
  // and cross-check uses, so equal trees give bit-equal totals.
  std::sort(sel.edges.begin(), sel.edges.end());
  for (auto [i, j] : sel.edges) sel.total_cost += b.costs[i - 1][j - 1];
  sel.connected = true;
  return sel;
}

// Exhaustive reference over all available-link subsets (smallest bitmask
// wins ties). Guarded to desk scale.
inline LinkSelection brute_force_network(const NetworkCostMatrix& b) {
  b.validate();
  int n = b.size();
  if (n > 6)
    throw SizeGuardError("exhaustive network search is limited to 6 agents (got " +
                         std::to_string(n) + ")");
  std::vector<std::tuple<double, int, int>> pool;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (b.available[i][j]) pool.emplace_back(b.costs[i][j], i + 1, j + 1);

  int m = static_cast<int>(pool.size());
  LinkSelection best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    detail::UnionFind uf(n);
    double cost = 0.0;
    int joined = 0;
    for (int e = 0; e < m; ++e)
      if (mask & (1u << e)) {
        auto [c, i, j] = pool[e];
        cost += c;
        if (uf.unite(i - 1, j - 1)) ++joined;
      }
    if (joined == n - 1 && cost < best_cost) {
      best_cost = cost;
      best.edges.clear();
      for (int e = 0; e < m; ++e)
        if (mask & (1u << e)) best.edges.emplace_back(std::get<1>(pool[e]), std::get<2>(pool[e]));
    }
  }
  if (!std::isfinite(best_cost))
    throw NetworkAssumptionError("available links cannot span all agents; unreachable from agent 1: " +
                                 detail::unreachable_list(b));
  best.total_cost = best_cost;
  best.connected = true;
  return best;
}

}  // namespace obsnet
