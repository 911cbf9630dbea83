#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "obsnet/errors.hpp"

namespace obsnet {

// Sensor placement: agent i measures the single state state_of(i). States
// and agents are 1-based; no state is measured by two agents.
class MeasurementStructure {
 public:
  MeasurementStructure() = default;

  explicit MeasurementStructure(std::vector<int> assigned_states)
      : states_(std::move(assigned_states)) {
    std::vector<int> seen;
    for (size_t i = 0; i < states_.size(); ++i) {
      int s = states_[i];
      if (s < 1)
        throw ValidationError("agent " + std::to_string(i + 1) + " assigned invalid state " +
                              std::to_string(s));
      for (int t : seen)
        if (t == s)
          throw ValidationError("state " + std::to_string(s) + " assigned to more than one agent");
      seen.push_back(s);
    }
  }

  int num_agents() const { return static_cast<int>(states_.size()); }
  int state_of(int agent) const { return states_[agent - 1]; }
  const std::vector<int>& states() const { return states_; }

  // Cross-check against a concrete state count (not known at parse time).
  void validate_against(int n) const {
    for (size_t i = 0; i < states_.size(); ++i)
      if (states_[i] > n)
        throw ValidationError("agent " + std::to_string(i + 1) + " measures state " +
                              std::to_string(states_[i]) + ", out of range for n=" + std::to_string(n));
  }

  // Stacked H: row i is the indicator of agent i's state.
  Eigen::MatrixXd matrix(int n) const {
    validate_against(n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(num_agents(), n);
    for (int i = 0; i < num_agents(); ++i) h(i, states_[i] - 1) = 1.0;
    return h;
  }

 private:
  std::vector<int> states_;
};

}  // namespace obsnet
