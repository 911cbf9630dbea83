#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "obsnet/errors.hpp"

namespace obsnet {

// Inter-agent communication structure. An edge (j, i) in either layer means
// agent i receives from agent j: measurements over alpha links, state
// predictions over beta links. Neighborhoods always include the agent
// itself, without an explicit self edge (except the degenerate one-agent
// ring, which keeps its self-loop so the beta layer is nonempty).
struct CyberNetwork {
  int num_agents = 0;
  std::vector<std::pair<int, int>> alpha_edges;
  std::vector<std::pair<int, int>> beta_edges;
  // Row-stochastic prediction weights, row i over the beta in-neighborhood
  // of i (self included). Empty until build_consensus_weights fills it.
  std::vector<std::vector<double>> beta_weights;

  // In-neighborhoods, self first, then senders ascending.
  std::vector<int> alpha_in(int i) const { return in_of(alpha_edges, i); }
  std::vector<int> beta_in(int i) const { return in_of(beta_edges, i); }

  void validate() const {
    if (num_agents < 1) throw ValidationError("cyber network needs at least one agent");
    check_edges(alpha_edges, "alpha");
    check_edges(beta_edges, "beta");
    if (!beta_weights.empty()) {
      if (static_cast<int>(beta_weights.size()) != num_agents)
        throw ValidationError("beta_weights row count does not match agent count");
      for (int i = 1; i <= num_agents; ++i) {
        const auto& row = beta_weights[i - 1];
        if (static_cast<int>(row.size()) != num_agents)
          throw ValidationError("beta_weights row " + std::to_string(i) + " has wrong length");
        double sum = 0.0;
        auto nbr = beta_in(i);
        for (int j = 1; j <= num_agents; ++j) {
          sum += row[j - 1];
          bool allowed = std::find(nbr.begin(), nbr.end(), j) != nbr.end();
          if (row[j - 1] != 0.0 && !allowed)
            throw ValidationError("beta weight (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is nonzero without a beta link");
          if (row[j - 1] < 0.0)
            throw ValidationError("beta weight (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is negative");
        }
        if (std::abs(sum - 1.0) > 1e-12)
          throw ValidationError("beta_weights row " + std::to_string(i) + " sums to " +
                                std::to_string(sum) + ", expected 1");
      }
    }
  }

 private:
  std::vector<int> in_of(const std::vector<std::pair<int, int>>& edges, int i) const {
    std::vector<int> nbr{i};
    for (auto [j, k] : edges)
      if (k == i && j != i) nbr.push_back(j);
    std::sort(nbr.begin() + 1, nbr.end());
    return nbr;
  }

  void check_edges(const std::vector<std::pair<int, int>>& edges, const char* layer) const {
    for (auto [j, i] : edges)
      if (j < 1 || j > num_agents || i < 1 || i > num_agents)
        throw ValidationError(std::string(layer) + " edge (" + std::to_string(j) + "," +
                              std::to_string(i) + ") out of range for " +
                              std::to_string(num_agents) + " agents");
  }
};

}  // namespace obsnet
