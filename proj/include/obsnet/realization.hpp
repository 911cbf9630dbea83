#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <string>

#include "obsnet/digraph.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/rng.hpp"

namespace obsnet {

inline double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Numeric system matrix drawn over a digraph's sparsity pattern. matrix(v-1,
// u-1) is nonzero exactly when edge (u, v) exists.
struct WeightRealization {
  Eigen::MatrixXd matrix;
  double rho = 0.0;  // spectral radius of matrix, recomputed after scaling
};

// Draws edge weights uniformly from [0.5, 1.5], then rescales the whole
// matrix so the spectral radius lands on target_rho (within 1e-9). Scaling
// is linear in rho, so one pass almost suffices; a couple of corrective
// passes absorb eigensolver round-off.
inline WeightRealization realize_weights(const SocialDigraph& g, double target_rho, uint64_t seed) {
  if (target_rho <= 0.0) throw ValidationError("target spectral radius must be positive");
  if (g.edges().empty())
    throw ScalingError("graph has no edges; cannot reach spectral radius " + std::to_string(target_rho));
  if (!has_directed_cycle(g))
    throw ScalingError("acyclic interaction pattern is nilpotent for every weight choice; "
                       "spectral radius is identically zero");

  Rng rng(mix_seed(seed, 0x7765696768ULL));
  int n = g.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) a(v - 1, u - 1) = rng.uniform(0.5, 1.5);

  // Positive weights on a cycle keep the Perron root comfortably above zero,
  // so this division is safe once acyclicity is excluded.
  for (int pass = 0; pass < 4; ++pass) {
    double rho = spectral_radius(a);
    if (std::abs(rho - target_rho) <= 1e-12 * target_rho) break;
    a *= target_rho / rho;
  }
  return WeightRealization{a, spectral_radius(a)};
}

}  // namespace obsnet
