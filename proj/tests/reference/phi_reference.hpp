#pragma once

// Literal dense transcription of the stability matrix, kept apart from the
// library assembler. Every term is written out as printed (including the
// one-sided products such as -2 e1 X e1'); the sum is symmetrized once at
// the end. Used only by tests.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"

namespace grnobs::reference {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Unknowns {
  MatrixXd Q1, Q2, Q3, Q4, Q5;
  MatrixXd R1, R2, R3, R4;
  MatrixXd M1, M2;
  MatrixXd P1, P2, L1, L2;  // diagonal
  MatrixXd G1, G2;
  MatrixXd W1, W2;
};

// e_0 = 0, e_k = block k (1-based) of the 14-block identity.
inline MatrixXd sel(int n, int k) {
  MatrixXd e = MatrixXd::Zero(14 * n, n);
  if (k > 0) e.block((k - 1) * n, 0, n, n) = MatrixXd::Identity(n, n);
  return e;
}

inline MatrixXd hcat(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

inline MatrixXd bdiag(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out = MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Phi(tau, sigma). When `gains` is set the products W1 M and W2 N are formed
// as P1 K1 M and P2 K2 N instead (the unknowns' W entries are ignored).
inline MatrixXd phi(const ObserverProblem& pr, const Unknowns& u, double tau, double sigma,
                    const std::optional<std::pair<MatrixXd, MatrixXd>>& gains = std::nullopt) {
  const auto& md = pr.model;
  const int n = static_cast<int>(md.genes());
  const double tb = pr.delays.tau_bar, sb = pr.delays.sigma_bar;
  const double mu1 = pr.delays.mu1, mu2 = pr.delays.mu2;
  const double pi2 = std::numbers::pi * std::numbers::pi;

  std::array<MatrixXd, 15> e;
  for (int k = 0; k <= 14; ++k) e[k] = sel(n, k);

  const MatrixXd A = md.mrna_decay.asDiagonal();
  const MatrixXd B = md.translation.asDiagonal();
  const MatrixXd C = md.protein_decay.asDiagonal();
  const MatrixXd& W = md.coupling;
  const MatrixXd K = pr.sector.slopes.asDiagonal();
  const MatrixXd& Mo = pr.measurement.mrna_output;
  const MatrixXd& No = pr.measurement.protein_output;

  VectorXd dl = VectorXd::Zero(n), dls = VectorXd::Zero(n);
  for (std::size_t k = 0; k < md.half_widths.size(); ++k) {
    const double L = md.half_widths[k];
    dl += md.mrna_diffusion[k] / (L * L);
    dls += md.protein_diffusion[k] / (L * L);
  }
  const MatrixXd DL = dl.asDiagonal();
  const MatrixXd DLs = dls.asDiagonal();

  const MatrixXd W1M = gains ? MatrixXd(u.P1 * gains->first * Mo) : MatrixXd(u.W1 * Mo);
  const MatrixXd W2N = gains ? MatrixXd(u.P2 * gains->second * No) : MatrixXd(u.W2 * No);
  const MatrixXd X1 = u.P1 * A + W1M;
  const MatrixXd X2 = u.P2 * C + W2N;

  const MatrixXd phi0 =
      -2 * e[7] * u.L1 * e[7].transpose() + e[4] * u.L1 * K * e[7].transpose() +
      e[7] * K * u.L1 * e[4].transpose() - 2 * e[8] * u.L2 * e[8].transpose() +
      e[6] * K * u.L2 * e[8].transpose() + e[8] * u.L2 * K * e[6].transpose() -
      e[9] * X1 * e[1].transpose() - e[1] * X1.transpose() * e[9].transpose() +
      e[9] * u.P1 * W * e[8].transpose() + e[8] * W.transpose() * u.P1 * e[9].transpose() -
      2 * e[9] * u.P1 * e[9].transpose() - e[10] * X2 * e[4].transpose() -
      e[4] * X2.transpose() * e[10].transpose() + e[10] * u.P2 * B * e[3].transpose() +
      e[3] * B.transpose() * u.P2 * e[10].transpose() - 2 * e[10] * u.P2 * e[10].transpose();

  const MatrixXd phi1 =
      -0.5 * pi2 * e[1] * u.P1 * DL * e[1].transpose() - 2 * e[1] * X1 * e[1].transpose() +
      e[1] * u.P1 * W * e[8].transpose() + e[8] * W.transpose() * u.P1 * e[1].transpose() -
      0.5 * pi2 * e[4] * u.P2 * DLs * e[4].transpose() - 2 * e[4] * X2 * e[4].transpose() +
      e[4] * u.P2 * B * e[3].transpose() + e[3] * B.transpose() * u.P2 * e[4].transpose();

  const MatrixXd D1 = hcat(e[1], tb * e[12]);
  const MatrixXd D2 = hcat(e[0], e[11] - e[12]);
  const MatrixXd D3 = hcat(e[2], tb * e[12]);
  const MatrixXd D4 = hcat(tb * e[12], tb * tb * e[12]);
  const MatrixXd D5 = hcat(e[11] - e[12], tb * (e[11] - e[12]));
  const MatrixXd D6 = hcat(e[0], e[1] - e[2]);
  const MatrixXd D7 = hcat(e[3] - e[2], e[3] + e[2] - 2 * e[12]);
  const MatrixXd D8 = hcat(e[1] - e[3], e[1] + e[3] - 2 * e[11]);
  const MatrixXd T1 = hcat(e[4], sb * e[14]);
  const MatrixXd T2 = hcat(e[0], e[13] - e[14]);
  const MatrixXd T3 = hcat(e[5], sb * e[14]);
  const MatrixXd T4 = hcat(sb * e[14], sb * sb * e[14]);
  const MatrixXd T5 = hcat(e[13] - e[14], sb * (e[13] - e[14]));
  const MatrixXd T6 = hcat(e[0], e[4] - e[5]);
  const MatrixXd T7 = hcat(e[6] - e[5], e[6] + e[5] - 2 * e[14]);
  const MatrixXd T8 = hcat(e[4] - e[6], e[4] + e[6] - 2 * e[13]);

  const MatrixXd& Q2 = u.Q2;
  const MatrixXd& Q4 = u.Q4;
  const MatrixXd phi2 =
      e[1] * u.Q1 * e[1].transpose() - (1 - mu1) * e[3] * u.Q1 * e[3].transpose() +
      e[4] * u.Q3 * e[4].transpose() - (1 - mu2) * e[6] * u.Q3 * e[6].transpose() +
      D1 * Q2 * D1.transpose() + tau * (D1 * Q2 * D2.transpose() + D2 * Q2 * D1.transpose()) -
      D3 * Q2 * D3.transpose() - tau * (D3 * Q2 * D2.transpose() + D2 * Q2 * D3.transpose()) +
      D4 * Q2 * D6.transpose() + D6 * Q2 * D4.transpose() +
      tau * (D5 * Q2 * D6.transpose() + D6 * Q2 * D5.transpose()) + T1 * Q4 * T1.transpose() +
      sigma * (T1 * Q4 * T2.transpose() + T2 * Q4 * T1.transpose()) - T3 * Q4 * T3.transpose() -
      sigma * (T3 * Q4 * T2.transpose() + T2 * Q4 * T3.transpose()) + T4 * Q4 * T6.transpose() +
      T6 * Q4 * T4.transpose() + sigma * (T5 * Q4 * T6.transpose() + T6 * Q4 * T5.transpose());

  const MatrixXd phi3 = e[7] * u.Q5 * e[7].transpose() - (1 - mu2) * e[8] * u.Q5 * e[8].transpose();

  const MatrixXd Rh1 = [&] {
    MatrixXd r(4 * n, 4 * n);
    const MatrixXd rt = bdiag(u.R1, 3 * u.R1);
    r << rt, u.G1, u.G1.transpose(), rt;
    return r;
  }();
  const MatrixXd Rh2 = [&] {
    MatrixXd r(4 * n, 4 * n);
    const MatrixXd rt = bdiag(u.R2, 3 * u.R2);
    r << rt, u.G2, u.G2.transpose(), rt;
    return r;
  }();
  const MatrixXd phi41 = tb * tb * e[9] * u.R1 * e[9].transpose() +
                         sb * sb * e[10] * u.R2 * e[10].transpose() +
                         tb * tb * e[1] * u.R3 * e[1].transpose() +
                         sb * sb * e[4] * u.R4 * e[4].transpose();
  const MatrixXd phi42 = tb * (tb - tau) * e[12] * u.R3 * e[12].transpose() +
                         tb * tau * e[11] * u.R3 * e[11].transpose();
  const MatrixXd phi43 = sb * (sb - sigma) * e[14] * u.R4 * e[14].transpose() +
                         sb * sigma * e[13] * u.R4 * e[13].transpose();
  const MatrixXd DD = hcat(D7, D8);
  const MatrixXd TT = hcat(T7, T8);
  const MatrixXd phi4 =
      phi41 - phi42 - phi43 - DD * Rh1 * DD.transpose() - TT * Rh2 * TT.transpose();

  const MatrixXd phi51 = tb * tb / 2 * e[9] * u.M1 * e[9].transpose() +
                         sb * sb / 2 * e[10] * u.M2 * e[10].transpose();
  const MatrixXd a1 = e[1] - e[11], a2 = e[3] - e[12];
  const MatrixXd b1 = e[4] - e[13], b2 = e[6] - e[14];
  const MatrixXd phi52 = a1 * u.M1 * a1.transpose() + a2 * u.M1 * a2.transpose();
  const MatrixXd phi53 = b1 * u.M2 * b1.transpose() + b2 * u.M2 * b2.transpose();
  MatrixXd phi5 = phi51 - phi52 - phi53;
  // A zero delay bound leaves no interval to integrate over; the weighted
  // term is absent.
  if (tb > 0) {
    const MatrixXd Mt1 = bdiag(u.M1, 3 * u.M1) / tb;
    phi5 -= (tb - tau) / tb * D8 * Mt1 * D8.transpose();
  }
  if (sb > 0) {
    const MatrixXd Mt2 = bdiag(u.M2, 3 * u.M2) / sb;
    phi5 -= (sb - sigma) / sb * T8 * Mt2 * T8.transpose();
  }

  const MatrixXd total = phi0 + phi1 + phi2 + phi3 + phi4 + phi5;
  return 0.5 * (total + total.transpose());
}

}  // namespace grnobs::reference
