#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace obsnet {

// Malformed input file or JSON that does not match the expected shape.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates a documented precondition
// (out-of-range node, duplicate edge, non-square matrix, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// realize_weights cannot hit the requested spectral radius (acyclic pattern).
struct ScalingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A contraction or parent component has no measuring agent.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance exceeds a brute-force size guard.
struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No feasible solution exists (e.g. no observable sensor assignment).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Network cost input breaks the solver's assumptions (asymmetry, no
// spanning connectivity among available links).
struct NetworkAssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gain design failed to stabilize the error recursion. pair_observable
// separates a hopeless instance (the pair itself is unobservable) from a
// designer shortfall on an observable one.
struct InstabilityError : std::runtime_error {
  InstabilityError(const std::string& msg, double rho, bool observable)
      : std::runtime_error(msg), achieved_rho(rho), pair_observable(observable) {}
  double achieved_rho;
  bool pair_observable;
};

// Simulation state became non-finite.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, int step)
      : std::runtime_error(msg), step(step) {}
  int step;
};

}  // namespace obsnet
