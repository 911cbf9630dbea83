#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "obsnet/cyber.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/estimation.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/rng.hpp"

namespace obsnet {

// Monte-Carlo averaged mean squared estimation error, normalized by the
// state dimension. msee[i][k-1] is agent i+1 at step k; steps run 1..horizon.
struct SimulationResult {
  std::vector<std::vector<double>> msee;
  std::vector<double> centralized_msee;  // empty unless the baseline ran
  int runs = 0;
  int horizon = 0;
  std::optional<int> divergence_step;  // first step the average error exceeds 1e9
  double recursion_max_dev = 0.0;      // worst gap to the stacked error recursion
};

namespace detail {

// Pseudo-inverse of a symmetric PSD matrix, clipping the near-null space.
inline Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& ev = es.eigenvalues();
  double cutoff = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline std::optional<int> scan_divergence(const SimulationResult& out, int horizon) {
  for (int k = 1; k <= horizon; ++k) {
    auto check = [&](double v) {
      if (!std::isfinite(v))
        throw DivergenceError("simulation state became non-finite at step " + std::to_string(k), k);
      return v > 1e9;
    };
    for (const auto& series : out.msee)
      if (check(series[k - 1])) return k;
    if (!out.centralized_msee.empty() && check(out.centralized_msee[k - 1])) return k;
  }
  return std::nullopt;
}

}  // namespace detail

// Runs the two-step distributed inference protocol: each agent first forms a
// prediction as the consensus-weighted average of its beta neighbors'
// propagated estimates, then corrects it with the innovations its update was
// designed to receive over alpha links. Estimates are tracked in error
// coordinates (estimate minus true state is propagated directly); with an
// unstable system the state grows geometrically and forming the error as a
// difference of two huge trajectories would drown it in rounding noise.
//
// The subscription list of each agent comes from the gain's design-time
// aggregation structure. A subscribed feed the network no longer delivers is
// read as zero by the agent's fixed update rule, which injects the true state
// into the error dynamics; this is how a cut alpha link shows up as runtime
// divergence rather than a graceful reconfiguration. A gain built by hand
// without that structure subscribes to exactly what the network delivers.
//
// Alongside the protocol the stacked error recursion is propagated from the
// same noise draws; the worst per-step gap between the two, relative to
// max(1, recursion error magnitude), is reported, which pins the per-agent
// implementation to the closed form. Noise streams derive from (seed, run),
// so any run count reproduces bit-identically.
inline SimulationResult simulate_distributed(const SystemRealization& sys,
                                             const MeasurementStructure& h,
                                             const CyberNetwork& net_in, const GainMatrix& gain,
                                             int horizon, int runs, uint64_t seed) {
  if (horizon < 1 || runs < 1) throw ValidationError("horizon and run count must be positive");
  CyberNetwork net = net_in.beta_weights.empty() ? build_consensus_weights(net_in) : net_in;
  net.validate();
  const int n = static_cast<int>(sys.a.matrix.rows());
  const int N = net.num_agents;
  h.validate_against(n);
  if (h.num_agents() != N)
    throw ValidationError("placement has " + std::to_string(h.num_agents()) + " agents, network has " +
                          std::to_string(N));
  if (static_cast<int>(gain.blocks.size()) != N ||
      (N > 0 && gain.blocks[0].rows() != n))
    throw ValidationError("gain blocks do not match the agent count and state dimension");

  const Eigen::MatrixXd& a = sys.a.matrix;
  const Eigen::MatrixXd w = consensus_matrix(net);
  const DhMatrix delivered_dh = build_dh(h, net, n);
  const bool has_design = !gain.dh.blocks.empty();
  if (has_design && (gain.dh.num_agents() != N || gain.dh.n() != n))
    throw ValidationError("gain aggregation structure does not match the agent count and state dimension");
  const DhMatrix& design_dh = has_design ? gain.dh : delivered_dh;

  // Per agent: which measuring agents its update expects, and which of those
  // feeds the network actually delivers.
  std::vector<std::vector<int>> expected(N), missing(N);
  for (int i = 1; i <= N; ++i) {
    std::vector<bool> arrives(N + 1, false);
    for (int j : net.alpha_in(i)) arrives[j] = true;
    double diag_mass = 0.0;
    for (int j = 1; j <= N; ++j) {
      int s = h.state_of(j) - 1;
      if (design_dh.blocks[i - 1](s, s) > 0.0) {
        expected[i - 1].push_back(j);
        diag_mass += design_dh.blocks[i - 1](s, s);
        if (!arrives[j]) missing[i - 1].push_back(j);
      }
    }
    if (std::abs(diag_mass - design_dh.blocks[i - 1].diagonal().sum()) > 1e-9)
      throw ValidationError("gain was designed for a different placement: agent " +
                            std::to_string(i) + " aggregates a state nobody measures");
  }

  const Eigen::MatrixXd m_closed =
      detail::closed_loop(detail::kron(w, a), design_dh.blocks, gain.blocks);
  const double psd = std::sqrt(sys.process_noise_var);
  const double msd = std::sqrt(sys.measurement_noise_var);

  SimulationResult out;
  out.runs = runs;
  out.horizon = horizon;
  out.msee.assign(N, std::vector<double>(horizon, 0.0));

  for (int run = 0; run < runs; ++run) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(run)));
    Eigen::VectorXd x(n);
    for (int s = 0; s < n; ++s) x(s) = rng.normal();
    // Estimates start at zero, so every agent's initial error is the state.
    std::vector<Eigen::VectorXd> err(N, x);
    Eigen::VectorXd e_rec(N * n);
    for (int i = 0; i < N; ++i) e_rec.segment(i * n, n) = x;

    for (int k = 1; k <= horizon; ++k) {
      Eigen::VectorXd v(n);
      for (int s = 0; s < n; ++s) v(s) = psd * rng.normal();
      Eigen::VectorXd meas_noise(N);
      for (int j = 0; j < N; ++j) meas_noise(j) = msd * rng.normal();

      Eigen::VectorXd x_next = a * x + v;

      std::vector<Eigen::VectorXd> propagated(N);
      for (int j = 0; j < N; ++j) propagated[j] = a * err[j];

      std::vector<Eigen::VectorXd> err_next(N);
      for (int i = 1; i <= N; ++i) {
        Eigen::VectorXd pred_err = v;
        for (int j = 0; j < N; ++j)
          if (w(i - 1, j) != 0.0) pred_err += w(i - 1, j) * propagated[j];
        Eigen::VectorXd innov = Eigen::VectorXd::Zero(n);
        for (int j : expected[i - 1]) {
          int s = h.state_of(j) - 1;
          innov(s) += pred_err(s) + meas_noise(j - 1);
        }
        // A subscribed feed that never arrives reads as zero, so its term
        // loses the measurement: innovation drops y = state + noise.
        for (int j : missing[i - 1]) {
          int s = h.state_of(j) - 1;
          innov(s) -= x_next(s) + meas_noise(j - 1);
        }
        err_next[i - 1] = pred_err - gain.blocks[i - 1] * innov;
      }

      // Stacked recursion fed the same draws.
      Eigen::VectorXd q(N * n);
      for (int i = 1; i <= N; ++i) {
        Eigen::VectorXd zeta = Eigen::VectorXd::Zero(n);
        for (int j : expected[i - 1]) zeta(h.state_of(j) - 1) += meas_noise(j - 1);
        for (int j : missing[i - 1]) {
          int s = h.state_of(j) - 1;
          zeta(s) -= x_next(s) + meas_noise(j - 1);
        }
        q.segment((i - 1) * n, n) =
            v - gain.blocks[i - 1] * (design_dh.blocks[i - 1] * v) - gain.blocks[i - 1] * zeta;
      }
      e_rec = m_closed * e_rec + q;

      for (int i = 0; i < N; ++i) {
        out.msee[i][k - 1] += err_next[i].squaredNorm() / n;
        auto seg = e_rec.segment(i * n, n);
        double scale = std::max(1.0, seg.cwiseAbs().maxCoeff());
        double dev = (err_next[i] - seg).cwiseAbs().maxCoeff() / scale;
        if (dev > out.recursion_max_dev) out.recursion_max_dev = dev;
      }
      x = std::move(x_next);
      err = std::move(err_next);
    }
  }

  for (auto& series : out.msee)
    for (double& vv : series) vv /= runs;
  out.divergence_step = detail::scan_divergence(out, horizon);
  return out;
}

// Centralized Kalman baseline over the same seeds and noise stream layout,
// so trajectories coincide run for run with the distributed protocol. The
// filter error is propagated directly for the same conditioning reason.
inline SimulationResult simulate_centralized_kf(const SystemRealization& sys,
                                                const MeasurementStructure& h, int horizon,
                                                int runs, uint64_t seed) {
  if (horizon < 1 || runs < 1) throw ValidationError("horizon and run count must be positive");
  const int n = static_cast<int>(sys.a.matrix.rows());
  const int N = h.num_agents();
  h.validate_against(n);
  const Eigen::MatrixXd& a = sys.a.matrix;
  const Eigen::MatrixXd hm = h.matrix(n);
  if (!numerical_observability(a, hm))
    throw ValidationError("the system/placement pair is numerically unobservable; "
                          "the centralized baseline is undefined");

  const double psd = std::sqrt(sys.process_noise_var);
  const double msd = std::sqrt(sys.measurement_noise_var);
  const Eigen::MatrixXd q_cov = sys.process_noise_var * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r_cov = sys.measurement_noise_var * Eigen::MatrixXd::Identity(N, N);

  // The gain schedule is state-independent; compute it once.
  std::vector<Eigen::MatrixXd> gains(horizon);
  {
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < horizon; ++k) {
      Eigen::MatrixXd p_pred = a * p * a.transpose() + q_cov;
      Eigen::MatrixXd s_inn = hm * p_pred * hm.transpose() + r_cov;
      // With zero noise the innovation covariance underflows once the filter
      // converges; inverting that dust would blow up the gain. Freeze the
      // schedule at the last meaningful gain instead.
      if (s_inn.cwiseAbs().maxCoeff() < 1e-200)
        gains[k] = k > 0 ? gains[k - 1] : Eigen::MatrixXd::Zero(n, N);
      else
        gains[k] = p_pred * hm.transpose() * detail::pinv_psd(s_inn);
      Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(n, n) - gains[k] * hm;
      p = ikh * p_pred * ikh.transpose() + gains[k] * r_cov * gains[k].transpose();
    }
  }

  SimulationResult out;
  out.runs = runs;
  out.horizon = horizon;
  out.centralized_msee.assign(horizon, 0.0);

  for (int run = 0; run < runs; ++run) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(run)));
    Eigen::VectorXd err(n);
    for (int s = 0; s < n; ++s) err(s) = rng.normal();

    for (int k = 1; k <= horizon; ++k) {
      Eigen::VectorXd v(n);
      for (int s = 0; s < n; ++s) v(s) = psd * rng.normal();
      Eigen::VectorXd meas_noise(N);
      for (int j = 0; j < N; ++j) meas_noise(j) = msd * rng.normal();

      Eigen::VectorXd err_pred = a * err + v;
      err = err_pred - gains[k - 1] * (hm * err_pred + meas_noise);
      out.centralized_msee[k - 1] += err.squaredNorm() / n;
    }
  }
  for (double& vv : out.centralized_msee) vv /= runs;
  out.divergence_step = detail::scan_divergence(out, horizon);
  return out;
}

}  // namespace obsnet
