#pragma once

#include <algorithm>
#include <vector>

#include "obsnet/digraph.hpp"
#include "obsnet/matching.hpp"

namespace obsnet {

// One rank-deficiency class: the column vertices reachable from a free
// column vertex by matching-alternating paths. Measuring any single node of
// the set raises the structural rank of the stacked pattern by exactly one.
struct Contraction {
  int root = 0;             // the free column vertex the search started from
  std::vector<int> nodes;   // ascending, includes root
};

struct ContractionSet {
  std::vector<Contraction> contractions;  // ordered by root ascending

  bool contains(int node) const {
    for (const auto& c : contractions)
      if (std::binary_search(c.nodes.begin(), c.nodes.end(), node)) return true;
    return false;
  }
};

// Alternating-path search in the auxiliary orientation: non-matching edges
// keep their column-to-row direction, matching edges are reversed. From a
// column vertex only non-matching edges leave, from a row vertex only its
// matching edge, so plain reachability alternates automatically. Sets may
// overlap across roots; only the roots themselves are exclusive.
inline ContractionSet find_contractions(const SocialDigraph& g, const MaximumMatching& m) {
  const BipartiteGraph b = BipartiteGraph::from_digraph(g);
  ContractionSet out;
  for (int root : m.unmatched_left) {
    std::vector<bool> seen_left(b.left_count + 1, false), seen_right(b.right_count + 1, false);
    std::vector<int> stack{root};
    seen_left[root] = true;
    Contraction c;
    c.root = root;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      c.nodes.push_back(u);
      for (int v : b.adj[u]) {
        if (seen_right[v] || m.left_match[u] == v) continue;
        seen_right[v] = true;
        int w = m.right_match[v];
        if (w != 0 && !seen_left[w]) {
          seen_left[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(c.nodes.begin(), c.nodes.end());
    out.contractions.push_back(std::move(c));
  }
  return out;
}

inline ContractionSet find_contractions(const SocialDigraph& g) {
  return find_contractions(g, maximum_matching(BipartiteGraph::from_digraph(g)));
}

}  // namespace obsnet
