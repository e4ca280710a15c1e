#include "grnobs/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace grnobs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void SolverConfig::validate() const {
  if (max_outer_iterations < 1 || max_newton_iterations < 1) {
    throw Error("solver iteration limits must be positive");
  }
  if (!(gap_tolerance > 0.0) || !(newton_tolerance > 0.0) || !(radius > 0.0) ||
      !(barrier_initial > 0.0) || !(barrier_growth > 1.0)) {
    throw Error("solver tolerances must be positive and the barrier growth above 1");
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::MarginBelowTarget: return "MarginBelowTarget";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

// A constraint in solver orientation: constant + sum x_k A_k - t I > 0.
struct PreparedBlock {
  MatrixXd constant;
  std::vector<int> coordinates;
  std::vector<Eigen::SparseMatrix<double>> coefficients;
};

std::vector<PreparedBlock> prepare(const LmiSystem& system) {
  std::vector<PreparedBlock> blocks;
  blocks.reserve(system.constraints.size());
  for (const auto& c : system.constraints) {
    PreparedBlock b;
    const double s = c.orientation();
    b.constant = s * c.constant;
    for (const auto& term : c.terms) {
      b.coordinates.push_back(term.coordinate);
      b.coefficients.push_back(s * term.coefficient);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

MatrixXd block_value(const PreparedBlock& b, const VectorXd& x, double t) {
  MatrixXd s = b.constant;
  for (std::size_t k = 0; k < b.coordinates.size(); ++k) {
    s += x[b.coordinates[k]] * b.coefficients[k];
  }
  s.diagonal().array() -= t;
  return s;
}

class Barrier {
 public:
  Barrier(const LmiSystem& system, const SolverConfig& config)
      : blocks_(prepare(system)), n_(system.layout.size()), config_(config) {
    barrier_dim_ = 1.0;  // ball
    for (const auto& b : blocks_) barrier_dim_ += static_cast<double>(b.constant.rows());
  }

  [[nodiscard]] int coordinates() const { return n_; }
  [[nodiscard]] double barrier_dim() const { return barrier_dim_; }

  // z = (x, t). Empty when z leaves the domain.
  [[nodiscard]] std::optional<double> value(const VectorXd& z, double weight) const {
    const VectorXd x = z.head(n_);
    const double t = z[n_];
    const double room = config_.radius * config_.radius - x.squaredNorm();
    if (!(room > 0.0)) return std::nullopt;
    double f = -weight * t - std::log(room);
    for (const auto& b : blocks_) {
      Eigen::LLT<MatrixXd> llt(block_value(b, x, t));
      if (llt.info() != Eigen::Success) return std::nullopt;
      const VectorXd diag = llt.matrixLLT().diagonal();
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (!(diag[i] > 0.0)) return std::nullopt;
        f -= 2.0 * std::log(diag[i]);
      }
    }
    return f;
  }

  void derivatives(const VectorXd& z, double weight, VectorXd& grad, MatrixXd& hess) const {
    const VectorXd x = z.head(n_);
    const double t = z[n_];
    grad = VectorXd::Zero(n_ + 1);
    hess = MatrixXd::Zero(n_ + 1, n_ + 1);
    grad[n_] = -weight;

    const double room = config_.radius * config_.radius - x.squaredNorm();
    grad.head(n_) += (2.0 / room) * x;
    hess.topLeftCorner(n_, n_).diagonal().array() += 2.0 / room;
    hess.topLeftCorner(n_, n_).noalias() += (4.0 / (room * room)) * x * x.transpose();

    for (const auto& b : blocks_) {
      const MatrixXd s = block_value(b, x, t);
      Eigen::LLT<MatrixXd> llt(s);
      const MatrixXd s_inv = llt.solve(MatrixXd::Identity(s.rows(), s.cols()));
      const kernels::BarrierBlockView view{&b.coordinates, &b.coefficients};
      const auto local = kernels::barrier_block(view, s_inv, config_.backend);
      const auto m = b.coordinates.size();
      auto global = [&](std::size_t k) { return k < m ? b.coordinates[k] : n_; };
      for (std::size_t k = 0; k <= m; ++k) {
        grad[global(k)] += local.gradient[static_cast<Eigen::Index>(k)];
        for (std::size_t l = 0; l <= m; ++l) {
          hess(global(k), global(l)) +=
              local.hessian(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
        }
      }
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
  }

  [[nodiscard]] double min_eigen_margin(const VectorXd& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks_) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(block_value(b, x, 0.0), Eigen::EigenvaluesOnly);
      best = std::min(best, eig.eigenvalues()(0));
    }
    return best;
  }

 private:
  std::vector<PreparedBlock> blocks_;
  int n_;
  SolverConfig config_;
  double barrier_dim_;
};

}  // namespace

SolveOutcome solve_margin(const LmiSystem& system, const SolverConfig& config) {
  config.validate();
  if (system.constraints.empty()) throw Error("LMI system has no constraints");
  const Barrier barrier(system, config);
  const int n = barrier.coordinates();

  // Strictly feasible start: centre of the ball, t one unit below the margin.
  VectorXd z = VectorXd::Zero(n + 1);
  z[n] = barrier.min_eigen_margin(z.head(n)) - 1.0;

  SolveOutcome outcome;
  double weight = config.barrier_initial;
  bool converged = false;
  bool newton_exhausted = false;
  VectorXd grad;
  MatrixXd hess;

  for (int outer = 0; outer < config.max_outer_iterations; ++outer) {
    ++outcome.outer_iterations;
    int steps = 0;
    for (; steps < config.max_newton_iterations; ++steps) {
      barrier.derivatives(z, weight, grad, hess);
      const VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement) || decrement / 2.0 <= config.newton_tolerance) break;

      const double f0 = *barrier.value(z, weight);
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-14) {
        const VectorXd trial = z + alpha * step;
        const auto f = barrier.value(trial, weight);
        if (f && *f <= f0 - 0.25 * alpha * decrement) {
          z = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      ++outcome.newton_iterations;
      if (!moved) break;  // numerically centred
    }
    if (steps == config.max_newton_iterations) newton_exhausted = true;

    const double t = z[n];
    if (barrier.barrier_dim() / weight < config.gap_tolerance * std::max(1.0, std::abs(t))) {
      converged = true;
      break;
    }
    weight *= config.barrier_growth;
  }

  outcome.assignment = z.head(n);
  outcome.margin = z[n];
  if (outcome.margin >= config.margin_target) {
    outcome.status = SolveStatus::Feasible;
  } else if (!converged || newton_exhausted) {
    outcome.status = SolveStatus::IterationLimit;
  } else {
    outcome.status = SolveStatus::MarginBelowTarget;
  }
  return outcome;
}

std::vector<ConstraintMargin> verify_assignment(const LmiSystem& system, const VectorXd& x) {
  return evaluate_lmi_system(system, x);
}

}  // namespace grnobs
