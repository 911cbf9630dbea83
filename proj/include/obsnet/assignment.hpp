#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "obsnet/errors.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/observability.hpp"

namespace obsnet {

// c(i, j): cost of agent i measuring state j. Rows are agents.
struct SensingCostMatrix {
  std::vector<std::vector<double>> costs;

  int rows() const { return static_cast<int>(costs.size()); }
  int cols() const { return costs.empty() ? 0 : static_cast<int>(costs[0].size()); }

  void validate() const {
    if (costs.empty() || costs[0].empty())
      throw ValidationError("sensing cost matrix must be nonempty");
    for (size_t i = 0; i < costs.size(); ++i) {
      if (costs[i].size() != costs[0].size())
        throw ValidationError("sensing cost row " + std::to_string(i + 1) + " has ragged length");
      for (double c : costs[i])
        if (!std::isfinite(c) || c < 0.0)
          throw ValidationError("sensing costs must be finite and nonnegative");
    }
  }
};

// Square agent-by-component matrix left by collapsing each component to its
// cheapest state per agent. argmin_state remembers which state realized each
// entry (lowest state index on ties).
struct ReducedCostMatrix {
  std::vector<std::vector<double>> costs;
  std::vector<std::vector<int>> argmin_state;

  int size() const { return static_cast<int>(costs.size()); }
};

// Components are the units that need one sensor each: parent components for
// a matched pattern, or contractions plus parents when those are disjoint.
inline ReducedCostMatrix reduce_sensing_costs(const SensingCostMatrix& c,
                                              const std::vector<std::vector<int>>& components) {
  c.validate();
  int N = c.rows();
  if (static_cast<int>(components.size()) != N)
    throw ValidationError("need exactly one component per agent: " +
                          std::to_string(components.size()) + " components, " + std::to_string(N) +
                          " agents");
  std::vector<bool> used(c.cols() + 1, false);
  for (const auto& comp : components) {
    if (comp.empty()) throw ValidationError("empty component in sensing reduction");
    for (int s : comp) {
      if (s < 1 || s > c.cols())
        throw ValidationError("component state " + std::to_string(s) + " out of range for " +
                              std::to_string(c.cols()) + " states");
      if (used[s])
        throw ValidationError("components must be pairwise disjoint; state " + std::to_string(s) +
                              " appears twice");
      used[s] = true;
    }
  }

  ReducedCostMatrix r;
  r.costs.assign(N, std::vector<double>(N, 0.0));
  r.argmin_state.assign(N, std::vector<int>(N, 0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double best = std::numeric_limits<double>::infinity();
      int best_state = 0;
      for (int s : components[j])
        if (c.costs[i][s - 1] < best) {
          best = c.costs[i][s - 1];
          best_state = s;
        }
      r.costs[i][j] = best;
      r.argmin_state[i][j] = best_state;
    }
  return r;
}

// One component index per agent (1-based), a permutation of 1..N.
struct Assignment {
  std::vector<int> component_of_agent;
  double total_cost = 0.0;
};

namespace detail {

// Canonical cost of a permutation: summed in ascending agent order, so the
// solver, the tie-break pass, and any brute-force cross-check all evaluate
// the identical floating-point expression.
inline double permutation_cost(const std::vector<std::vector<double>>& c,
                               const std::vector<int>& perm) {
  double sum = 0.0;
  for (size_t i = 0; i < perm.size(); ++i) sum += c[i][perm[i] - 1];
  return sum;
}

// O(N^3) shortest augmenting path Hungarian with row/column potentials.
// Rows are processed in ascending order and column scans ascend, so the
// result is deterministic. Returns a minimum-cost permutation (1-based).
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& c) {
  int n = static_cast<int>(c.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = c[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> perm(n);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j;
  return perm;
}

}  // namespace detail

// Exact linear sum assignment. The optimal value is unique; when several
// permutations realize it, the lexicographically smallest one is returned
// (fix agents in order, keep a candidate column only if some completion
// still meets the optimum).
inline Assignment solve_lsap(const ReducedCostMatrix& r) {
  int n = r.size();
  if (n == 0) throw ValidationError("assignment needs a nonempty square matrix");
  for (const auto& row : r.costs) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("assignment cost matrix must be square");
    for (double c : row)
      if (!std::isfinite(c)) throw ValidationError("assignment costs must be finite");
  }

  double best = detail::permutation_cost(r.costs, detail::hungarian(r.costs));

  std::vector<int> perm;
  std::vector<bool> used(n + 1, false);
  double fixed = 0.0;
  for (int i = 0; i < n; ++i) {
    int chosen = 0, cheapest = 0;
    double cheapest_total = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= n; ++j) {
      if (used[j]) continue;
      // Optimal completion of the remaining (n-i-1)-agent subproblem.
      std::vector<std::vector<double>> sub;
      std::vector<int> sub_cols;
      for (int jj = 1; jj <= n; ++jj)
        if (jj != j && !used[jj]) sub_cols.push_back(jj);
      for (int ii = i + 1; ii < n; ++ii) {
        std::vector<double> row;
        for (int jj : sub_cols) row.push_back(r.costs[ii][jj - 1]);
        sub.push_back(std::move(row));
      }
      double completion = 0.0;
      if (!sub.empty()) completion = detail::permutation_cost(sub, detail::hungarian(sub));
      double total = fixed + r.costs[i][j - 1] + completion;
      if (total <= best) {
        chosen = j;
        break;
      }
      if (total < cheapest_total) {
        cheapest_total = total;
        cheapest = j;
      }
    }
    // The fallback only fires when round-off pushes a mathematically optimal
    // completion just past the reference value.
    if (chosen == 0) chosen = cheapest;
    perm.push_back(chosen);
    used[chosen] = true;
    fixed += r.costs[i][chosen - 1];
  }

  Assignment a;
  a.component_of_agent = std::move(perm);
  a.total_cost = detail::permutation_cost(r.costs, a.component_of_agent);
  return a;
}

// Back out the concrete state behind every reduced entry.
inline MeasurementStructure expand_assignment(const Assignment& a, const ReducedCostMatrix& r) {
  if (static_cast<int>(a.component_of_agent.size()) != r.size())
    throw ValidationError("assignment and reduced matrix disagree on agent count");
  std::vector<int> states;
  for (size_t i = 0; i < a.component_of_agent.size(); ++i)
    states.push_back(r.argmin_state[i][a.component_of_agent[i] - 1]);
  return MeasurementStructure(std::move(states));
}

// Exhaustive reference: cheapest observable assignment of N agents to
// distinct states, enumerated in lexicographic state order with strict
// improvement, so the result is deterministic. Guarded to desk scale.
inline std::pair<MeasurementStructure, double> brute_force_sensing(const SocialDigraph& g,
                                                                   const SensingCostMatrix& c) {
  c.validate();
  int N = c.rows(), n = g.n();
  if (c.cols() != n)
    throw ValidationError("sensing cost matrix has " + std::to_string(c.cols()) +
                          " state columns, graph has " + std::to_string(n));
  if (n > 12 || N > 6)
    throw SizeGuardError("exhaustive sensing search is limited to 12 states and 6 agents (got n=" +
                         std::to_string(n) + ", agents=" + std::to_string(N) + ")");

  std::vector<int> pick(N, 0);
  std::vector<bool> used(n + 1, false);
  std::vector<int> best_pick;
  double best_cost = std::numeric_limits<double>::infinity();

  std::function<void(int, double)> recurse = [&](int agent, double cost) {
    if (cost >= best_cost) return;  // strict improvement keeps the first (lex-least) optimum
    if (agent == N) {
      auto rep = check_structural_observability(g, pick);
      if (rep.observable) {
        best_cost = cost;
        best_pick = pick;
      }
      return;
    }
    for (int s = 1; s <= n; ++s) {
      if (used[s]) continue;
      used[s] = true;
      pick[agent] = s;
      recurse(agent + 1, cost + c.costs[agent][s - 1]);
      used[s] = false;
    }
  };
  recurse(0, 0.0);

  if (best_pick.empty())
    throw InfeasibleError("no assignment of " + std::to_string(N) +
                          " single-state sensors makes the graph observable");
  return {MeasurementStructure(best_pick), best_cost};
}

}  // namespace obsnet
