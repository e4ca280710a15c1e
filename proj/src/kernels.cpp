#include "grnobs/kernels.hpp"

#include <omp.h>

#include <algorithm>

#include "grnobs/grn_model.hpp"

namespace grnobs::kernels {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

bool use_parallel(Backend backend, long work) {
  switch (backend) {
    case Backend::Serial: return false;
    case Backend::OpenMP: return true;
    case Backend::Auto: return work >= kAutoParallelThreshold && omp_get_max_threads() > 1;
  }
  return false;
}

namespace {

// sum over nonzeros of a(p, q) * b(q, p) = tr(a b) for sparse a.
double trace_product(const SparseMat& a, const MatrixXd& b) {
  double acc = 0.0;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMat::InnerIterator it(a, col); it; ++it) acc += it.value() * b(it.col(), it.row());
  }
  return acc;
}

// Row k of the local Hessian plus gradient entry k. Shared by both backends.
void barrier_row(const BarrierBlockView& block, const MatrixXd& s_inv, int k,
                 LocalBarrierDerivatives& out) {
  const auto& coeffs = *block.coefficients;
  const int m = static_cast<int>(coeffs.size());
  const SparseMat& a = coeffs[k];
  out.gradient[k] = -trace_product(a, s_inv);
  const MatrixXd c = (s_inv * a) * s_inv;  // S^-1 A_k S^-1
  for (int l = 0; l < m; ++l) out.hessian(k, l) = trace_product(coeffs[l], c);
  // t has coefficient -I.
  out.hessian(k, m) = -c.trace();
}

void barrier_t_entries(const MatrixXd& s_inv, int m, LocalBarrierDerivatives& out) {
  out.gradient[m] = s_inv.trace();
  out.hessian(m, m) = s_inv.cwiseProduct(s_inv.transpose()).sum();
  for (int k = 0; k < m; ++k) out.hessian(m, k) = out.hessian(k, m);
}

LocalBarrierDerivatives allocate(const BarrierBlockView& block) {
  const auto m = static_cast<Eigen::Index>(block.coefficients->size());
  return {VectorXd::Zero(m + 1), MatrixXd::Zero(m + 1, m + 1)};
}

}  // namespace

LocalBarrierDerivatives barrier_block_serial(const BarrierBlockView& block, const MatrixXd& s_inv) {
  auto out = allocate(block);
  const int m = static_cast<int>(block.coefficients->size());
  for (int k = 0; k < m; ++k) barrier_row(block, s_inv, k, out);
  barrier_t_entries(s_inv, m, out);
  return out;
}

LocalBarrierDerivatives barrier_block_parallel(const BarrierBlockView& block,
                                               const MatrixXd& s_inv) {
  auto out = allocate(block);
  const int m = static_cast<int>(block.coefficients->size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < m; ++k) barrier_row(block, s_inv, k, out);
  barrier_t_entries(s_inv, m, out);
  return out;
}

LocalBarrierDerivatives barrier_block(const BarrierBlockView& block, const MatrixXd& s_inv,
                                      Backend backend) {
  const long work = static_cast<long>(block.coefficients->size()) * s_inv.rows() * s_inv.rows();
  return use_parallel(backend, work) ? barrier_block_parallel(block, s_inv)
                                     : barrier_block_serial(block, s_inv);
}

// ---------------------------------------------------------------------------

namespace {

// Columns [begin, end) of the output, one gene row at a time. The two
// boundary-adjacent columns are peeled off so the inner loop has no branches.
void diffusion_columns(Eigen::Ref<const MatrixXd> u, const VectorXd& diffusion, const VectorXd& decay,
                       double inv_h2, Eigen::Ref<const MatrixXd> source, Eigen::Ref<MatrixXd> out,
                       Eigen::Index begin, Eigen::Index end) {
  const Eigen::Index nodes = u.cols();
  const Eigen::Index su = u.outerStride(), ss = source.outerStride(), so = out.outerStride();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double c = diffusion[i] * inv_h2;
    const double a = decay[i];
    const double* p = u.data() + i;
    const double* q = source.data() + i;
    double* o = out.data() + i;
    auto edge = [&](Eigen::Index j) {
      const double l = j > 0 ? p[(j - 1) * su] : 0.0;
      const double r = j + 1 < nodes ? p[(j + 1) * su] : 0.0;
      o[j * so] = c * (r - 2.0 * p[j * su] + l) - a * p[j * su] + q[j * ss];
    };
    const Eigen::Index lo = std::max<Eigen::Index>(begin, 1);
    const Eigen::Index hi = std::min<Eigen::Index>(end, nodes - 1);
    if (begin == 0) edge(0);
    for (Eigen::Index j = lo; j < hi; ++j) {
      const double mid = p[j * su];
      o[j * so] = c * (p[(j + 1) * su] - 2.0 * mid + p[(j - 1) * su]) - a * mid + q[j * ss];
    }
    if (end == nodes && nodes > 1) edge(nodes - 1);
  }
}

}  // namespace

void diffusion_reaction_serial(Eigen::Ref<const MatrixXd> u, const VectorXd& diffusion, const VectorXd& decay,
                               double inv_h2, Eigen::Ref<const MatrixXd> source, Eigen::Ref<MatrixXd> out) {
  diffusion_columns(u, diffusion, decay, inv_h2, source, out, 0, u.cols());
}

void diffusion_reaction_parallel(Eigen::Ref<const MatrixXd> u, const VectorXd& diffusion,
                                 const VectorXd& decay, double inv_h2, Eigen::Ref<const MatrixXd> source,
                                 Eigen::Ref<MatrixXd> out) {
  constexpr Eigen::Index kChunk = 64;
  const Eigen::Index nodes = u.cols();
  const Eigen::Index chunks = (nodes + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    diffusion_columns(u, diffusion, decay, inv_h2, source, out, c * kChunk,
                      std::min(nodes, (c + 1) * kChunk));
  }
}

void diffusion_reaction(Eigen::Ref<const MatrixXd> u, const VectorXd& diffusion, const VectorXd& decay,
                        double inv_h2, Eigen::Ref<const MatrixXd> source, Eigen::Ref<MatrixXd> out, Backend backend) {
  if (use_parallel(backend, static_cast<long>(u.size()))) {
    diffusion_reaction_parallel(u, diffusion, decay, inv_h2, source, out);
  } else {
    diffusion_reaction_serial(u, diffusion, decay, inv_h2, source, out);
  }
}

void shifted_hill_serial(Eigen::Ref<const MatrixXd> y, const VectorXd& operating_point, int hill,
                         Eigen::Ref<MatrixXd> out) {
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double base = hill_function(operating_point[i], hill);
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      out(i, j) = hill_function(y(i, j) + operating_point[i], hill) - base;
    }
  }
}

void shifted_hill_parallel(Eigen::Ref<const MatrixXd> y, const VectorXd& operating_point, int hill,
                           Eigen::Ref<MatrixXd> out) {
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double base = hill_function(operating_point[i], hill);
    const double shift = operating_point[i];
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      out(i, j) = hill_function(y(i, j) + shift, hill) - base;
    }
  }
}

void shifted_hill(Eigen::Ref<const MatrixXd> y, const VectorXd& operating_point, int hill, Eigen::Ref<MatrixXd> out,
                  Backend backend) {
  if (use_parallel(backend, static_cast<long>(y.size()))) {
    shifted_hill_parallel(y, operating_point, hill, out);
  } else {
    shifted_hill_serial(y, operating_point, hill, out);
  }
}

}  // namespace grnobs::kernels
