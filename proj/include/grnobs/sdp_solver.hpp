#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grnobs/kernels.hpp"
#include "grnobs/lmi_synthesis.hpp"

namespace grnobs {

struct SolverConfig {
  int max_outer_iterations = 60;
  int max_newton_iterations = 200;  // per centering step
  // Stop once the barrier's duality-gap bound drops below
  // gap_tolerance * max(1, |t|).
  double gap_tolerance = 1e-9;
  double newton_tolerance = 1e-10;  // on half the squared Newton decrement
  double margin_target = 1e-6;
  double barrier_initial = 1.0;
  double barrier_growth = 8.0;
  // Decision coordinates are confined to the ball |x| <= radius, which keeps
  // the margin bounded for homogeneous systems.
  double radius = 100.0;
  kernels::Backend backend = kernels::Backend::Auto;

  void validate() const;
};

enum class SolveStatus { Feasible, MarginBelowTarget, IterationLimit };

[[nodiscard]] std::string to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterationLimit;
  Eigen::VectorXd assignment;
  double margin = 0.0;  // t of the final iterate
  int outer_iterations = 0;
  int newton_iterations = 0;
};

// max t  s.t.  orientation_j * F_j(x) - t I  >= 0  for every constraint,
// |x| <= radius. Log-det barrier with damped Newton steps; deterministic.
[[nodiscard]] SolveOutcome solve_margin(const LmiSystem& system, const SolverConfig& config = {});

[[nodiscard]] std::vector<ConstraintMargin> verify_assignment(const LmiSystem& system,
                                                              const Eigen::VectorXd& x);

}  // namespace grnobs
