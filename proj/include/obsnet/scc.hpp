#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "obsnet/digraph.hpp"

namespace obsnet {

// Strongly connected components with the condensation edges and parent
// flags. A parent component has no outgoing condensation edge, so a
// measurement inside it is reachable from every state of the component's
// ancestors.
struct SccDecomposition {
  std::vector<std::vector<int>> components;      // each ascending; ordered by min node
  std::vector<int> component_of;                 // state (1-based) -> component index (0-based)
  std::vector<std::pair<int, int>> condensation_edges;  // (from, to) component indices, unique
  std::vector<bool> is_parent;

  std::vector<int> parent_indices() const {
    std::vector<int> out;
    for (size_t i = 0; i < is_parent.size(); ++i)
      if (is_parent[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  std::vector<std::vector<int>> parent_components() const {
    std::vector<std::vector<int>> out;
    for (int i : parent_indices()) out.push_back(components[i]);
    return out;
  }
};

// Iterative Tarjan, then components renumbered canonically (by smallest
// member) so output order never depends on traversal incidentals.
inline SccDecomposition scc_decompose(const SocialDigraph& g) {
  int n = g.n();
  std::vector<int> index(n + 1, 0), low(n + 1, 0);
  std::vector<bool> on_stack(n + 1, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> raw_comps;
  int counter = 0;

  struct Frame { int v; size_t edge; };
  for (int s = 1; s <= n; ++s) {
    if (index[s] != 0) continue;
    std::vector<Frame> call{{s, 0}};
    index[s] = low[s] = ++counter;
    stack.push_back(s);
    on_stack[s] = true;
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      const auto& next = g.out_neighbors(v);
      if (ei < next.size()) {
        int w = next[ei++];
        if (index[w] == 0) {
          index[w] = low[w] = ++counter;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          std::vector<int> members;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            members.push_back(w);
          } while (w != v);
          raw_comps.push_back(std::move(members));
        }
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }

  for (auto& c : raw_comps) std::sort(c.begin(), c.end());
  std::sort(raw_comps.begin(), raw_comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  SccDecomposition d;
  d.components = std::move(raw_comps);
  d.component_of.assign(n + 1, -1);
  for (size_t i = 0; i < d.components.size(); ++i)
    for (int v : d.components[i]) d.component_of[v] = static_cast<int>(i);

  for (auto [u, v] : g.edges()) {
    int cu = d.component_of[u], cv = d.component_of[v];
    if (cu != cv) d.condensation_edges.emplace_back(cu, cv);
  }
  std::sort(d.condensation_edges.begin(), d.condensation_edges.end());
  d.condensation_edges.erase(std::unique(d.condensation_edges.begin(), d.condensation_edges.end()),
                             d.condensation_edges.end());

  d.is_parent.assign(d.components.size(), true);
  for (auto [from, to] : d.condensation_edges) d.is_parent[from] = false;
  return d;
}

}  // namespace obsnet
