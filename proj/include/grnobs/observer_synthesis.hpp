#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"
#include "grnobs/lmi_synthesis.hpp"
#include "grnobs/sdp_solver.hpp"

namespace grnobs {

struct ObserverGains {
  Eigen::MatrixXd mrna_gain;     // K1, n x r_m
  Eigen::MatrixXd protein_gain;  // K2, n x r_p
  SolveOutcome certificate;
};

// K1 = P1^-1 W1, K2 = P2^-1 W2 with P1, P2 given by their diagonals.
// Throws Error on a nonpositive diagonal entry or a shape mismatch.
[[nodiscard]] std::pair<Eigen::MatrixXd, Eigen::MatrixXd> extract_gains(
    const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, const Eigen::MatrixXd& w1,
    const Eigen::MatrixXd& w2);

struct SynthesisResult {
  LmiSystem system;
  ObserverGains gains;
  std::vector<ConstraintMargin> margins;  // re-evaluated at the certificate

  [[nodiscard]] bool feasible() const {
    return gains.certificate.status == SolveStatus::Feasible;
  }
};

// Assemble, solve, and read the gains off the certificate. The gains are
// filled in even when the solver did not reach a positive margin.
[[nodiscard]] SynthesisResult synthesize_observer(const ObserverProblem& problem,
                                                  const SolverConfig& config = {});

// Rewrites the certificate's W slots as P K and re-evaluates every
// constraint.
[[nodiscard]] std::vector<ConstraintMargin> recertify(const LmiSystem& system,
                                                      const Eigen::VectorXd& assignment,
                                                      const Eigen::MatrixXd& mrna_gain,
                                                      const Eigen::MatrixXd& protein_gain);

}  // namespace grnobs
