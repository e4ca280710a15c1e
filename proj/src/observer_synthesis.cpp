#include "grnobs/observer_synthesis.hpp"

namespace grnobs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd left_divide_diagonal(const VectorXd& p, const MatrixXd& w, const char* what) {
  if (p.size() != w.rows()) throw Error(std::string("dimension mismatch in ") + what);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw Error(std::string(what) + ": P must have a positive diagonal");
  }
  return p.cwiseInverse().asDiagonal() * w;
}

}  // namespace

std::pair<MatrixXd, MatrixXd> extract_gains(const VectorXd& p1, const VectorXd& p2,
                                            const MatrixXd& w1, const MatrixXd& w2) {
  return {left_divide_diagonal(p1, w1, "mRNA gain"),
          left_divide_diagonal(p2, w2, "protein gain")};
}

SynthesisResult synthesize_observer(const ObserverProblem& problem, const SolverConfig& config) {
  SynthesisResult result{assemble_lmi_system(problem), {}, {}};
  const auto& layout = result.system.layout;
  auto outcome = solve_margin(result.system, config);
  const VectorXd& x = outcome.assignment;
  const VectorXd p1 = layout.unpack(Slot::P1, x).diagonal();
  const VectorXd p2 = layout.unpack(Slot::P2, x).diagonal();
  auto [k1, k2] = extract_gains(p1, p2, layout.unpack(Slot::W1, x), layout.unpack(Slot::W2, x));
  result.margins = evaluate_lmi_system(result.system, x);
  result.gains = ObserverGains{std::move(k1), std::move(k2), std::move(outcome)};
  return result;
}

std::vector<ConstraintMargin> recertify(const LmiSystem& system, const VectorXd& assignment,
                                        const MatrixXd& mrna_gain, const MatrixXd& protein_gain) {
  const auto& layout = system.layout;
  VectorXd x = assignment;
  layout.pack(Slot::W1, layout.unpack(Slot::P1, x) * mrna_gain, x);
  layout.pack(Slot::W2, layout.unpack(Slot::P2, x) * protein_gain, x);
  return evaluate_lmi_system(system, x);
}

}  // namespace grnobs
