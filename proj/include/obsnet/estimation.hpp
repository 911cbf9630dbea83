#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

#include "obsnet/cyber.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/realization.hpp"

namespace obsnet {

// Numeric system plus noise levels for simulation.
struct SystemRealization {
  WeightRealization a;
  double process_noise_var = 0.0;
  double measurement_noise_var = 0.0;
};

// Fills beta_weights with the uniform averaging rule: agent i weights every
// beta in-neighbor (itself included) by 1/|N_beta(i)|.
inline CyberNetwork build_consensus_weights(CyberNetwork net) {
  net.validate();
  int N = net.num_agents;
  net.beta_weights.assign(N, std::vector<double>(N, 0.0));
  for (int i = 1; i <= N; ++i) {
    auto nbr = net.beta_in(i);
    for (int j : nbr) net.beta_weights[i - 1][j - 1] = 1.0 / static_cast<double>(nbr.size());
  }
  return net;
}

inline Eigen::MatrixXd consensus_matrix(const CyberNetwork& net) {
  if (net.beta_weights.empty())
    throw ValidationError("beta weights not built; run build_consensus_weights first");
  int N = net.num_agents;
  Eigen::MatrixXd w(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) w(i, j) = net.beta_weights[i][j];
  return w;
}

// Per-agent measurement aggregation blocks: block i sums H_j^T H_j over the
// alpha in-neighborhood of i (self included). For single-state sensors each
// block is a 0/1 diagonal marking the states agent i hears directly.
struct DhMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  int n() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows()); }
  int num_agents() const { return static_cast<int>(blocks.size()); }

  Eigen::MatrixXd assemble() const {
    int N = num_agents(), d = n();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N * d, N * d);
    for (int i = 0; i < N; ++i) m.block(i * d, i * d, d, d) = blocks[i];
    return m;
  }
};

inline DhMatrix build_dh(const MeasurementStructure& h, const CyberNetwork& net, int n) {
  h.validate_against(n);
  if (net.num_agents != h.num_agents())
    throw ValidationError("network has " + std::to_string(net.num_agents) +
                          " agents, placement has " + std::to_string(h.num_agents()));
  DhMatrix dh;
  for (int i = 1; i <= net.num_agents; ++i) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int j : net.alpha_in(i)) {
      int s = h.state_of(j) - 1;
      d(s, s) += 1.0;
    }
    dh.blocks.push_back(std::move(d));
  }
  return dh;
}

// Kalman rank criterion: stack c, c*phi, ..., c*phi^(d-1) and compare the
// numerical rank (singular values above 1e-8 relative) against d.
inline bool numerical_observability(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& c) {
  int d = static_cast<int>(phi.rows());
  if (phi.cols() != d) throw ValidationError("state matrix must be square");
  if (c.cols() != d) throw ValidationError("output matrix column count must match state dimension");
  if (c.rows() == 0) return d == 0;
  Eigen::MatrixXd stack(c.rows() * d, d);
  Eigen::MatrixXd block = c;
  for (int k = 0; k < d; ++k) {
    stack.middleRows(k * c.rows(), c.rows()) = block;
    if (k + 1 < d) block = block * phi;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return d == 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  return rank == d;
}

// Block-diagonal correction gain for the stacked error recursion
// e+ = (W (x) A  -  K D (W (x) A)) e. closed_loop_rho is recomputed from the
// final blocks, never carried over from an intermediate round. dh records the
// aggregation structure the gain was designed against; the simulator uses it
// to tell which feeds each agent's update expects.
struct GainMatrix {
  std::vector<Eigen::MatrixXd> blocks;  // one n-by-n block per agent
  double closed_loop_rho = 0.0;
  DhMatrix dh;

  Eigen::MatrixXd assemble() const {
    int N = static_cast<int>(blocks.size());
    int d = N ? static_cast<int>(blocks[0].rows()) : 0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N * d, N * d);
    for (int i = 0; i < N; ++i) m.block(i * d, i * d, d, d) = blocks[i];
    return m;
  }
};

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd closed_loop(const Eigen::MatrixXd& phi,
                                   const std::vector<Eigen::MatrixXd>& dh,
                                   const std::vector<Eigen::MatrixXd>& gain) {
  int N = static_cast<int>(dh.size());
  int n = static_cast<int>(dh[0].rows());
  Eigen::MatrixXd m = phi;
  for (int i = 0; i < N; ++i)
    m.middleRows(i * n, n) -= gain[i] * (dh[i] * phi.middleRows(i * n, n));
  return m;
}

}  // namespace detail

// Designs the block-diagonal gain. Stage one is the closed-form block-row
// least squares fit of K D (W (x) A) to (W (x) A). Stage two refines with up
// to 50 rounds of covariance-weighted per-block updates (each round solves
// the same least-squares shape reweighted by a propagated error covariance,
// the classic greedy filter iteration), keeping the spectrally best iterate.
// K = 0 stays in the candidate set so a stable open loop always passes.
// Succeeds only when the pair is numerically observable and the best radius
// is below one; otherwise throws with the diagnosis and the achieved radius.
inline GainMatrix design_gain(const Eigen::MatrixXd& w, const WeightRealization& a,
                              const DhMatrix& dh) {
  int N = static_cast<int>(w.rows());
  int n = static_cast<int>(a.matrix.rows());
  if (w.cols() != N) throw ValidationError("consensus matrix must be square");
  if (dh.num_agents() != N)
    throw ValidationError("aggregation blocks disagree with consensus matrix on agent count");
  if (dh.n() != n) throw ValidationError("aggregation blocks disagree with state dimension");

  const Eigen::MatrixXd phi = detail::kron(w, a.matrix);
  const int d = N * n;

  std::vector<Eigen::MatrixXd> best(N, Eigen::MatrixXd::Zero(n, n));
  double best_rho = spectral_radius(phi);  // the K = 0 candidate

  auto consider = [&](const std::vector<Eigen::MatrixXd>& k) {
    double rho = spectral_radius(detail::closed_loop(phi, dh.blocks, k));
    if (rho < best_rho) {
      best_rho = rho;
      best = k;
    }
    return rho;
  };

  // Block-row least squares: per agent, fit K_i (D_i Phi_i) ~ Phi_i.
  std::vector<Eigen::MatrixXd> k(N);
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd phi_i = phi.middleRows(i * n, n);
    Eigen::MatrixXd x = dh.blocks[i] * phi_i;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x.transpose());
    k[i] = cod.solve(phi_i.transpose()).transpose();
  }
  consider(k);

  // Covariance-weighted refinement. S plays the role of the stacked error
  // covariance under unit process noise and light measurement noise; each
  // round the per-block minimizer of the weighted residual is closed form.
  const double meas = 1e-2, ridge = 1e-9;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d);
  for (int round = 0; round < 50; ++round) {
    Eigen::MatrixXd sigma = phi * s * phi.transpose() + Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < N; ++i) {
      const Eigen::MatrixXd& di = dh.blocks[i];
      Eigen::MatrixXd sig_ii = sigma.block(i * n, i * n, n, n);
      Eigen::MatrixXd gram = di * sig_ii * di + meas * di + ridge * Eigen::MatrixXd::Identity(n, n);
      k[i] = sig_ii * di * gram.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    }
    double rho = consider(k);

    // Propagate the covariance with the freshly chosen blocks (Joseph form).
    Eigen::MatrixXd ikd = Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < N; ++i) ikd.block(i * n, i * n, n, n) -= k[i] * dh.blocks[i];
    s = ikd * sigma * ikd.transpose();
    for (int i = 0; i < N; ++i)
      s.block(i * n, i * n, n, n) += meas * k[i] * dh.blocks[i] * k[i].transpose();
    // Keep the weighting bounded when the instance is not stabilizable.
    double tr = s.trace();
    if (tr > 1e6 * d) s *= static_cast<double>(d) / tr;
    if (rho < 0.999 && round >= 5) break;
  }

  // A gain is only returned for a numerically observable pair. A radius that
  // happens to land below one on an unobservable pair proves nothing about
  // the blind subspace, so such inputs are refused with the diagnosis.
  bool pair_ok = numerical_observability(phi, dh.assemble());
  if (!pair_ok)
    throw InstabilityError(
        std::string("the consensus/aggregation pair is numerically unobservable; no gain can "
                    "guarantee bounded inference (best candidate spectral radius ") +
            std::to_string(best_rho) + ")",
        best_rho, false);
  if (best_rho >= 1.0)
    throw InstabilityError(
        std::string("gain design reached spectral radius ") + std::to_string(best_rho) +
            "; the pair is numerically observable, so this is a designer shortfall",
        best_rho, true);
  return GainMatrix{std::move(best), best_rho, dh};
}

// Spectral radius of the closed loop a given gain induces; lets callers
// re-verify a stored gain against fresh structures.
inline double closed_loop_spectral_radius(const Eigen::MatrixXd& w, const WeightRealization& a,
                                          const DhMatrix& dh, const GainMatrix& gain) {
  Eigen::MatrixXd phi = detail::kron(w, a.matrix);
  return spectral_radius(detail::closed_loop(phi, dh.blocks, gain.blocks));
}

}  // namespace obsnet
