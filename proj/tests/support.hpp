#pragma once

#include <random>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"
#include "grnobs/lmi_synthesis.hpp"
#include "reference/phi_reference.hpp"

namespace grnobs::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline GrnModel uniform_model(const VectorXd& a, const VectorXd& b, const VectorXd& c,
                              const MatrixXd& w, int axes, double d, double ds) {
  GrnModel m;
  m.mrna_decay = a;
  m.translation = b;
  m.protein_decay = c;
  m.coupling = w;
  for (int k = 0; k < axes; ++k) {
    m.mrna_diffusion.push_back(VectorXd::Constant(a.size(), d));
    m.protein_diffusion.push_back(VectorXd::Constant(a.size(), ds));
    m.half_widths.push_back(1.0);
  }
  m.hill = 2;
  return m;
}

// Three genes, three spatial axes, tau_bar = sigma_bar = 3.
inline ObserverProblem example1() {
  ObserverProblem p;
  MatrixXd w(3, 3);
  w << 0, 0, -0.5, -0.5, 0, 0, 0, -0.5, 0;
  p.model = uniform_model(Eigen::Vector3d(0.2, 1.1, 1.2), Eigen::Vector3d(1.0, 0.4, 0.7),
                          Eigen::Vector3d(0.3, 0.7, 1.3), w, 3, 0.1, 0.2);
  p.measurement.mrna_output.resize(2, 3);
  p.measurement.mrna_output << 0.5, -0.6, 0, 0.3, 0.8, -0.2;
  p.measurement.protein_output.resize(2, 3);
  p.measurement.protein_output << 0.7, -0.25, 0.3, 0.4, 0.2, -0.3;
  p.delays = {3.0, 3.0, 2.0, 2.0};
  p.sector.slopes = VectorXd::Constant(3, 0.65);
  return p;
}

// One gene, one axis, no mRNA measurement, tau_bar = sigma_bar = 1.
inline ObserverProblem example2() {
  ObserverProblem p;
  p.model = uniform_model(VectorXd::Constant(1, 0.2), VectorXd::Constant(1, 1.0),
                          VectorXd::Constant(1, 0.3), MatrixXd::Constant(1, 1, -0.5), 1, 0.1,
                          0.2);
  p.measurement.mrna_output = MatrixXd::Zero(1, 1);
  p.measurement.protein_output = MatrixXd::Constant(1, 1, 0.7);
  p.delays = {1.0, 1.0, 2.0, 2.0};
  p.sector.slopes = VectorXd::Constant(1, 0.65);
  return p;
}

inline MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return MatrixXd::NullaryExpr(r, c, [&] { return u(rng); });
}

inline MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  const MatrixXd g = random_matrix(rng, n, n);
  return 0.5 * (g + g.transpose());
}

inline MatrixXd random_diagonal(std::mt19937_64& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0).asDiagonal();
}

inline reference::Unknowns random_unknowns(std::mt19937_64& rng, int n, int rm, int rp) {
  reference::Unknowns u;
  u.Q1 = random_symmetric(rng, n);
  u.Q2 = random_symmetric(rng, 2 * n);
  u.Q3 = random_symmetric(rng, n);
  u.Q4 = random_symmetric(rng, 2 * n);
  u.Q5 = random_symmetric(rng, n);
  u.R1 = random_symmetric(rng, n);
  u.R2 = random_symmetric(rng, n);
  u.R3 = random_symmetric(rng, n);
  u.R4 = random_symmetric(rng, n);
  u.M1 = random_symmetric(rng, n);
  u.M2 = random_symmetric(rng, n);
  u.P1 = random_diagonal(rng, n);
  u.P2 = random_diagonal(rng, n);
  u.L1 = random_diagonal(rng, n);
  u.L2 = random_diagonal(rng, n);
  u.G1 = random_matrix(rng, 2 * n, 2 * n);
  u.G2 = random_matrix(rng, 2 * n, 2 * n);
  u.W1 = random_matrix(rng, n, rm);
  u.W2 = random_matrix(rng, n, rp);
  return u;
}

inline VectorXd pack(const DecisionLayout& layout, const reference::Unknowns& u) {
  VectorXd x = VectorXd::Zero(layout.size());
  const std::pair<Slot, const MatrixXd*> entries[] = {
      {Slot::Q1, &u.Q1}, {Slot::Q2, &u.Q2}, {Slot::Q3, &u.Q3}, {Slot::Q4, &u.Q4},
      {Slot::Q5, &u.Q5}, {Slot::R1, &u.R1}, {Slot::R2, &u.R2}, {Slot::R3, &u.R3},
      {Slot::R4, &u.R4}, {Slot::M1, &u.M1}, {Slot::M2, &u.M2}, {Slot::P1, &u.P1},
      {Slot::P2, &u.P2}, {Slot::Lambda1, &u.L1}, {Slot::Lambda2, &u.L2}, {Slot::G1, &u.G1},
      {Slot::G2, &u.G2}, {Slot::W1, &u.W1}, {Slot::W2, &u.W2}};
  for (const auto& [slot, m] : entries) layout.pack(slot, *m, x);
  return x;
}

inline DecisionLayout layout_for(const ObserverProblem& p) {
  return DecisionLayout(static_cast<int>(p.model.genes()),
                        static_cast<int>(p.measurement.mrna_output.rows()),
                        static_cast<int>(p.measurement.protein_output.rows()));
}

}  // namespace grnobs::testing
