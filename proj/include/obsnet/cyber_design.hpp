#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "obsnet/cyber.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/observability.hpp"

namespace obsnet {

namespace detail {

inline std::string node_list(const std::vector<int>& nodes) {
  std::string s = "{";
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(nodes[i]);
  }
  return s + "}";
}

}  // namespace detail

// Rank information cannot be recovered over multi-hop paths, so every alpha
// agent broadcasts its measurement directly to all agents. Prediction
// information does travel over paths, so a single directed ring (ascending
// agent order) is the cheapest strongly connected beta layer. The one-agent
// case degenerates to a beta self-loop.
inline CyberNetwork design_cyber_network(const AgentClassification& cls, int n_agents) {
  if (n_agents != static_cast<int>(cls.agents.size()))
    throw ValidationError("classification covers " + std::to_string(cls.agents.size()) +
                          " agents, expected " + std::to_string(n_agents));

  std::vector<bool> contraction_covered(cls.contraction_nodes.size(), false);
  std::vector<bool> parent_covered(cls.parent_nodes.size(), false);
  for (const auto& e : cls.agents) {
    for (int ci : e.contraction_ids) contraction_covered[ci] = true;
    if (e.parent_id >= 0) parent_covered[e.parent_id] = true;
  }
  for (size_t ci = 0; ci < contraction_covered.size(); ++ci)
    if (!contraction_covered[ci])
      throw CoverageError("contraction " + detail::node_list(cls.contraction_nodes[ci]) +
                          " has no measuring agent");
  for (size_t pi = 0; pi < parent_covered.size(); ++pi)
    if (!parent_covered[pi])
      throw CoverageError("parent component " + detail::node_list(cls.parent_nodes[pi]) +
                          " has no measuring agent");

  CyberNetwork net;
  net.num_agents = n_agents;
  for (const auto& e : cls.agents)
    if (e.type == AgentType::alpha)
      for (int i = 1; i <= n_agents; ++i)
        if (i != e.agent) net.alpha_edges.emplace_back(e.agent, i);
  if (n_agents == 1) {
    net.beta_edges.emplace_back(1, 1);
  } else {
    for (int i = 1; i < n_agents; ++i) net.beta_edges.emplace_back(i, i + 1);
    net.beta_edges.emplace_back(n_agents, 1);
  }
  std::sort(net.alpha_edges.begin(), net.alpha_edges.end());
  std::sort(net.beta_edges.begin(), net.beta_edges.end());
  return net;
}

// Structural sufficiency of a network for distributed observability: every
// agent must receive each contraction's measurement over a direct alpha
// link, and each parent component's measurement over some beta path.
inline bool check_distributed_observability_structure(const SocialDigraph& g,
                                                      const MeasurementStructure& h,
                                                      const CyberNetwork& net) {
  h.validate_against(g.n());
  if (net.num_agents != h.num_agents())
    throw ValidationError("network has " + std::to_string(net.num_agents) +
                          " agents, placement has " + std::to_string(h.num_agents()));
  auto cs = find_contractions(g);
  auto parents = scc_decompose(g).parent_components();
  int N = net.num_agents;

  // Reflexive-transitive closure of the beta layer, O(N^3); N is small.
  std::vector<std::vector<bool>> reach(N + 1, std::vector<bool>(N + 1, false));
  for (int i = 1; i <= N; ++i) reach[i][i] = true;
  for (auto [j, i] : net.beta_edges) reach[j][i] = true;
  for (int k = 1; k <= N; ++k)
    for (int a = 1; a <= N; ++a)
      if (reach[a][k])
        for (int b = 1; b <= N; ++b)
          if (reach[k][b]) reach[a][b] = true;

  std::vector<std::vector<bool>> alpha(N + 1, std::vector<bool>(N + 1, false));
  for (int i = 1; i <= N; ++i) alpha[i][i] = true;
  for (auto [j, i] : net.alpha_edges) alpha[j][i] = true;

  for (int i = 1; i <= N; ++i) {
    for (const auto& c : cs.contractions) {
      bool ok = false;
      for (int j = 1; j <= N && !ok; ++j)
        ok = alpha[j][i] &&
             std::binary_search(c.nodes.begin(), c.nodes.end(), h.state_of(j));
      if (!ok) return false;
    }
    for (const auto& p : parents) {
      bool ok = false;
      for (int j = 1; j <= N && !ok; ++j)
        ok = reach[j][i] && std::binary_search(p.begin(), p.end(), h.state_of(j));
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace obsnet
