#pragma once

#include <algorithm>
#include <functional>
#include <queue>
#include <vector>

#include "obsnet/digraph.hpp"
#include "obsnet/measurement.hpp"

namespace obsnet {

// Bipartite view of a sparsity pattern. Left vertices are column copies
// (influencers), right vertices are row copies (dependents); a digraph edge
// (u, v) becomes left-u ~ right-v. Stacking measurement rows appends extra
// right vertices beyond n.
struct BipartiteGraph {
  int left_count = 0;
  int right_count = 0;
  std::vector<std::vector<int>> adj;  // adj[u] = rights of left u, ascending; 1-based

  static BipartiteGraph from_digraph(const SocialDigraph& g) {
    BipartiteGraph b;
    b.left_count = b.right_count = g.n();
    b.adj.assign(g.n() + 1, {});
    for (auto [u, v] : g.edges()) b.adj[u].push_back(v);  // edges() sorted, so lists ascend
    return b;
  }

  // Rows of the pattern plus one indicator row per measured state.
  static BipartiteGraph stacked(const SocialDigraph& g, const std::vector<int>& measured) {
    BipartiteGraph b = from_digraph(g);
    for (size_t k = 0; k < measured.size(); ++k) {
      b.right_count = g.n() + static_cast<int>(k) + 1;
      b.adj[measured[k]].push_back(b.right_count);
    }
    return b;
  }
};

// Maximum matching, plus the unmatched left vertices that seed contractions.
struct MaximumMatching {
  int size = 0;
  std::vector<int> left_match;   // left u -> right, 0 if free
  std::vector<int> right_match;  // right v -> left, 0 if free
  std::vector<int> unmatched_left;  // ascending
};

// Hopcroft-Karp. Deterministic: BFS layers and DFS both scan vertices and
// adjacency in ascending order, so equal inputs give equal matchings.
inline MaximumMatching maximum_matching(const BipartiteGraph& b) {
  int nl = b.left_count, nr = b.right_count;
  std::vector<int> lm(nl + 1, 0), rm(nr + 1, 0), dist(nl + 1);
  const int inf = nl + nr + 1;

  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 1; u <= nl; ++u) {
      dist[u] = lm[u] == 0 ? 0 : inf;
      if (lm[u] == 0) q.push(u);
    }
    bool reachable = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : b.adj[u]) {
        int w = rm[v];
        if (w == 0) {
          reachable = true;
        } else if (dist[w] == inf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return reachable;
  };

  std::function<bool(int)> dfs = [&](int u) {
    for (int v : b.adj[u]) {
      int w = rm[v];
      if (w == 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        lm[u] = v;
        rm[v] = u;
        return true;
      }
    }
    dist[u] = inf;
    return false;
  };

  int size = 0;
  while (bfs())
    for (int u = 1; u <= nl; ++u)
      if (lm[u] == 0 && dfs(u)) ++size;

  MaximumMatching m;
  m.size = size;
  m.left_match = std::move(lm);
  m.right_match = std::move(rm);
  for (int u = 1; u <= nl; ++u)
    if (m.left_match[u] == 0) m.unmatched_left.push_back(u);
  return m;
}

// Structural (generic) rank of the pattern: maximum matching size.
inline int s_rank(const SocialDigraph& g) {
  return maximum_matching(BipartiteGraph::from_digraph(g)).size;
}

// Structural rank of the pattern stacked with indicator rows for the
// measured states.
inline int stacked_s_rank(const SocialDigraph& g, const std::vector<int>& measured) {
  return maximum_matching(BipartiteGraph::stacked(g, measured)).size;
}

inline int stacked_s_rank(const SocialDigraph& g, const MeasurementStructure& h) {
  return stacked_s_rank(g, h.states());
}

}  // namespace obsnet
