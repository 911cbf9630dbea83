#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "obsnet/errors.hpp"
#include "obsnet/rng.hpp"

namespace obsnet {

// Directed interaction graph over states x_1..x_n. An edge (u, v) means
// information flows from u to v, i.e. x_v depends on x_u (a_{vu} != 0).
// Node indices are 1-based everywhere, matching the file formats.
// Treat instances as immutable once built.
class SocialDigraph {
 public:
  SocialDigraph() = default;

  SocialDigraph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw ValidationError("node count must be nonnegative, got " + std::to_string(n));
    std::sort(edges.begin(), edges.end());
    for (size_t i = 0; i < edges.size(); ++i) {
      auto [u, v] = edges[i];
      if (u < 1 || u > n || v < 1 || v > n)
        throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") out of range for n=" + std::to_string(n));
      if (i > 0 && edges[i] == edges[i - 1])
        throw ValidationError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    edges_ = std::move(edges);
    out_.assign(n + 1, {});
    in_.assign(n + 1, {});
    for (auto [u, v] : edges_) {
      out_[u].push_back(v);
      in_[v].push_back(u);
    }
  }

  int n() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& out_neighbors(int u) const { return out_[u]; }
  const std::vector<int>& in_neighbors(int v) const { return in_[v]; }

  bool has_edge(int u, int v) const {
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;       // sorted, unique
  std::vector<std::vector<int>> out_, in_;       // adjacency, ascending
};

// Erdos-Renyi style digraph: every ordered pair (u, v), self-pairs included,
// kept with probability p. Deterministic per seed; pairs in row-major order.
inline SocialDigraph random_digraph(int n, double edge_probability, uint64_t seed) {
  if (n < 0) throw ValidationError("node count must be nonnegative");
  if (edge_probability < 0.0 || edge_probability > 1.0)
    throw ValidationError("edge probability must lie in [0,1]");
  Rng rng(mix_seed(seed, 0x6469677261ULL));
  std::vector<std::pair<int, int>> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v)
      if (rng.bernoulli(edge_probability)) edges.emplace_back(u, v);
  return SocialDigraph(n, std::move(edges));
}

// True iff the digraph has a directed cycle (self-loops count). Equivalent
// to: some weight realization has nonzero spectral radius.
inline bool has_directed_cycle(const SocialDigraph& g) {
  int n = g.n();
  std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<std::pair<int, size_t>> stack;
  for (int s = 1; s <= n; ++s) {
    if (state[s] != 0) continue;
    stack.push_back({s, 0});
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      const auto& next = g.out_neighbors(u);
      if (idx < next.size()) {
        int v = next[idx++];
        if (state[v] == 1) return true;
        if (state[v] == 0) {
          state[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace obsnet
