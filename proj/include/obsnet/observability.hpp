#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "obsnet/contraction.hpp"
#include "obsnet/digraph.hpp"
#include "obsnet/matching.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/scc.hpp"

namespace obsnet {

struct ObservabilityReport {
  int s_rank = 0;
  ContractionSet contractions;
  SccDecomposition sccs;
  bool accessible = false;  // every state reaches some measured state
  bool rank_ok = false;     // stacked pattern has full structural rank
  bool observable = false;  // both of the above
  int n_min = 0;            // minimum sensors for the graph, placement-independent
};

namespace detail {

// Every state must have a directed path to a measured state. BFS backwards
// from the measured set over reversed edges.
inline bool all_states_reach(const SocialDigraph& g, const std::vector<int>& measured) {
  int n = g.n();
  if (n == 0) return true;
  std::vector<bool> hit(n + 1, false);
  std::vector<int> queue;
  for (int s : measured)
    if (!hit[s]) {
      hit[s] = true;
      queue.push_back(s);
    }
  for (size_t q = 0; q < queue.size(); ++q)
    for (int u : g.in_neighbors(queue[q]))
      if (!hit[u]) {
        hit[u] = true;
        queue.push_back(u);
      }
  for (int v = 1; v <= n; ++v)
    if (!hit[v]) return false;
  return true;
}

// Greedy maximum matching with augmenting paths on an explicit adjacency;
// small helper for the contraction/parent overlap count.
inline int small_matching(const std::vector<std::vector<int>>& adj, int right_count) {
  std::vector<int> right_match(right_count, -1);
  int size = 0;
  std::vector<bool> visited;
  std::function<bool(int)> try_one = [&](int u) {
    for (int v : adj[u]) {
      if (visited[v]) continue;
      visited[v] = true;
      if (right_match[v] < 0 || try_one(right_match[v])) {
        right_match[v] = u;
        return true;
      }
    }
    return false;
  };
  for (size_t u = 0; u < adj.size(); ++u) {
    visited.assign(right_count, false);
    if (try_one(static_cast<int>(u))) ++size;
  }
  return size;
}

}  // namespace detail

// Minimum number of single-state sensors that can make the graph
// observable: one per contraction plus one per parent component, minus the
// assignments a shared node can serve twice. The discount is a maximum
// matching between contractions and parent components under the
// shares-a-node relation, so overlapping contractions are handled exactly.
inline int minimal_sensor_count(const ContractionSet& cs, const SccDecomposition& sccs) {
  auto parents = sccs.parent_components();
  std::vector<std::vector<int>> adj(cs.contractions.size());
  for (size_t ci = 0; ci < cs.contractions.size(); ++ci)
    for (size_t pi = 0; pi < parents.size(); ++pi) {
      const auto& c = cs.contractions[ci].nodes;
      const auto& p = parents[pi];
      bool share = std::any_of(c.begin(), c.end(), [&](int v) {
        return std::binary_search(p.begin(), p.end(), v);
      });
      if (share) adj[ci].push_back(static_cast<int>(pi));
    }
  int overlap = detail::small_matching(adj, static_cast<int>(parents.size()));
  return static_cast<int>(cs.contractions.size()) + static_cast<int>(parents.size()) - overlap;
}

inline int minimal_sensor_count(const SocialDigraph& g) {
  return minimal_sensor_count(find_contractions(g), scc_decompose(g));
}

// Full structural verdict for a placement: accessibility plus structural
// rank of the stacked pattern.
inline ObservabilityReport check_structural_observability(const SocialDigraph& g,
                                                          const std::vector<int>& measured) {
  for (int s : measured)
    if (s < 1 || s > g.n())
      throw ValidationError("measured state " + std::to_string(s) + " out of range for n=" +
                            std::to_string(g.n()));
  ObservabilityReport r;
  auto m = maximum_matching(BipartiteGraph::from_digraph(g));
  r.s_rank = m.size;
  r.contractions = find_contractions(g, m);
  r.sccs = scc_decompose(g);
  r.accessible = detail::all_states_reach(g, measured);
  r.rank_ok = stacked_s_rank(g, measured) == g.n();
  r.observable = r.accessible && r.rank_ok;
  r.n_min = minimal_sensor_count(r.contractions, r.sccs);
  return r;
}

inline ObservabilityReport check_structural_observability(const SocialDigraph& g,
                                                          const MeasurementStructure& h) {
  h.validate_against(g.n());
  return check_structural_observability(g, h.states());
}

// Placement-free analysis; the verdict fields describe the empty placement.
inline ObservabilityReport analyze_structure(const SocialDigraph& g) {
  return check_structural_observability(g, std::vector<int>{});
}

enum class AgentType { alpha, beta, redundant };

inline const char* to_string(AgentType t) {
  switch (t) {
    case AgentType::alpha: return "alpha";
    case AgentType::beta: return "beta";
    default: return "redundant";
  }
}

// Role of each agent plus everything needed to audit coverage: which
// contractions contain its state and which parent component does (if any).
struct AgentClassification {
  struct Entry {
    int agent = 0;
    int state = 0;
    AgentType type = AgentType::redundant;
    std::vector<int> contraction_ids;  // indices into contraction_nodes
    int parent_id = -1;                // index into parent_nodes, -1 if none
  };
  std::vector<Entry> agents;
  std::vector<std::vector<int>> contraction_nodes;
  std::vector<std::vector<int>> parent_nodes;
};

// An agent measuring inside a contraction restores rank, so it is alpha even
// when the state also sits in a parent component; beta needs the parent
// component alone; anything else adds nothing structural.
inline AgentClassification classify_agents(const SocialDigraph& g, const MeasurementStructure& h) {
  h.validate_against(g.n());
  auto cs = find_contractions(g);
  auto sccs = scc_decompose(g);
  AgentClassification out;
  for (const auto& c : cs.contractions) out.contraction_nodes.push_back(c.nodes);
  out.parent_nodes = sccs.parent_components();
  auto parent_ids = sccs.parent_indices();

  for (int i = 1; i <= h.num_agents(); ++i) {
    AgentClassification::Entry e;
    e.agent = i;
    e.state = h.state_of(i);
    for (size_t ci = 0; ci < out.contraction_nodes.size(); ++ci)
      if (std::binary_search(out.contraction_nodes[ci].begin(), out.contraction_nodes[ci].end(),
                             e.state))
        e.contraction_ids.push_back(static_cast<int>(ci));
    int comp = sccs.component_of[e.state];
    for (size_t pi = 0; pi < parent_ids.size(); ++pi)
      if (parent_ids[pi] == comp) e.parent_id = static_cast<int>(pi);
    if (!e.contraction_ids.empty())
      e.type = AgentType::alpha;
    else if (e.parent_id >= 0)
      e.type = AgentType::beta;
    else
      e.type = AgentType::redundant;
    out.agents.push_back(std::move(e));
  }
  return out;
}

}  // namespace obsnet
