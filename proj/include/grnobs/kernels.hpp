#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant; both produce bitwise identical results (each output entry
// is written by exactly one iteration, no reductions across threads).

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace grnobs::kernels {

enum class Backend { Serial, OpenMP, Auto };

// Work size (entries) above which Backend::Auto switches to OpenMP.
inline constexpr long kAutoParallelThreshold = 4096;

[[nodiscard]] bool use_parallel(Backend backend, long work);

// ---------------------------------------------------------------------------
// Log-det barrier derivatives of one constraint block
// ---------------------------------------------------------------------------

// Block S(z) = sum_k z_k A_k + A_0 - t I, already oriented so S must be
// positive definite. `coefficients[k]` belongs to global coordinate
// `coordinates[k]`; t is handled implicitly.
struct BarrierBlockView {
  const std::vector<int>* coordinates = nullptr;
  const std::vector<Eigen::SparseMatrix<double>>* coefficients = nullptr;
};

// Gradient and Hessian of -log det S restricted to the block's coordinates
// followed by t (last row/column).
struct LocalBarrierDerivatives {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// `s_inverse` is S^{-1} at the current point.
[[nodiscard]] LocalBarrierDerivatives barrier_block_serial(const BarrierBlockView& block,
                                                           const Eigen::MatrixXd& s_inverse);
[[nodiscard]] LocalBarrierDerivatives barrier_block_parallel(const BarrierBlockView& block,
                                                             const Eigen::MatrixXd& s_inverse);
[[nodiscard]] LocalBarrierDerivatives barrier_block(const BarrierBlockView& block,
                                                   const Eigen::MatrixXd& s_inverse,
                                                   Backend backend);

// ---------------------------------------------------------------------------
// Method-of-lines right-hand side on a 1-D Dirichlet grid
// ---------------------------------------------------------------------------

// Fields are genes x interior-nodes; boundary nodes are implicit zeros.
//   out(i, j) = diffusion_i * (u(i, j+1) - 2 u(i, j) + u(i, j-1)) / h^2
//               - decay_i * u(i, j) + source(i, j)
void diffusion_reaction_serial(Eigen::Ref<const Eigen::MatrixXd> u, const Eigen::VectorXd& diffusion,
                               const Eigen::VectorXd& decay, double inv_h2,
                               Eigen::Ref<const Eigen::MatrixXd> source, Eigen::Ref<Eigen::MatrixXd> out);
void diffusion_reaction_parallel(Eigen::Ref<const Eigen::MatrixXd> u, const Eigen::VectorXd& diffusion,
                                 const Eigen::VectorXd& decay, double inv_h2,
                                 Eigen::Ref<const Eigen::MatrixXd> source, Eigen::Ref<Eigen::MatrixXd> out);
void diffusion_reaction(Eigen::Ref<const Eigen::MatrixXd> u, const Eigen::VectorXd& diffusion,
                        const Eigen::VectorXd& decay, double inv_h2,
                        Eigen::Ref<const Eigen::MatrixXd> source, Eigen::Ref<Eigen::MatrixXd> out, Backend backend);

// Shifted Hill nonlinearity f_i(y) = g(y + p*_i) - g(p*_i), pointwise.
void shifted_hill_serial(Eigen::Ref<const Eigen::MatrixXd> y, const Eigen::VectorXd& operating_point,
                         int hill, Eigen::Ref<Eigen::MatrixXd> out);
void shifted_hill_parallel(Eigen::Ref<const Eigen::MatrixXd> y, const Eigen::VectorXd& operating_point,
                           int hill, Eigen::Ref<Eigen::MatrixXd> out);
void shifted_hill(Eigen::Ref<const Eigen::MatrixXd> y, const Eigen::VectorXd& operating_point, int hill,
                  Eigen::Ref<Eigen::MatrixXd> out, Backend backend);

}  // namespace grnobs::kernels
