#include "grnobs/lmi_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grnobs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::array<MatrixXd, kAugmentedBlocks + 1> build_selectors(int n) {
  if (n < 1) throw Error("selectors need n >= 1");
  std::array<MatrixXd, kAugmentedBlocks + 1> e;
  const int dim = kAugmentedBlocks * n;
  e[0] = MatrixXd::Zero(dim, n);
  for (int i = 1; i <= kAugmentedBlocks; ++i) {
    e[i] = MatrixXd::Zero(dim, n);
    e[i].block((i - 1) * n, 0, n, n).setIdentity();
  }
  return e;
}

IntervalBlocks build_interval_blocks(int n, double tau_bar, double sigma_bar) {
  const auto e = build_selectors(n);
  const int dim = kAugmentedBlocks * n;
  auto pair = [&](const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(dim, 2 * n);
    out << a, b;
    return out;
  };
  const double t = tau_bar;
  const double s = sigma_bar;
  IntervalBlocks blk;
  blk.delta[0] = pair(e[1], t * e[12]);
  blk.delta[1] = pair(e[0], e[11] - e[12]);
  blk.delta[2] = pair(e[2], t * e[12]);
  blk.delta[3] = pair(t * e[12], t * t * e[12]);
  blk.delta[4] = pair(e[11] - e[12], t * (e[11] - e[12]));
  blk.delta[5] = pair(e[0], e[1] - e[2]);
  blk.delta[6] = pair(e[3] - e[2], e[3] + e[2] - 2.0 * e[12]);
  blk.delta[7] = pair(e[1] - e[3], e[1] + e[3] - 2.0 * e[11]);

  blk.theta[0] = pair(e[4], s * e[14]);
  blk.theta[1] = pair(e[0], e[13] - e[14]);
  blk.theta[2] = pair(e[5], s * e[14]);
  blk.theta[3] = pair(s * e[14], s * s * e[14]);
  blk.theta[4] = pair(e[13] - e[14], s * (e[13] - e[14]));
  blk.theta[5] = pair(e[0], e[4] - e[5]);
  blk.theta[6] = pair(e[6] - e[5], e[6] + e[5] - 2.0 * e[14]);
  blk.theta[7] = pair(e[4] - e[6], e[4] + e[6] - 2.0 * e[13]);
  return blk;
}

// ---------------------------------------------------------------------------
// DecisionLayout
// ---------------------------------------------------------------------------

DecisionLayout::DecisionLayout(int genes, int mrna_outputs, int protein_outputs)
    : genes_(genes) {
  if (genes < 1 || mrna_outputs < 1 || protein_outputs < 1) {
    throw Error("decision layout needs positive dimensions");
  }
  const int n = genes;
  auto add = [&](Slot id, const char* name, SlotKind kind, int rows, int cols, bool positive) {
    SlotInfo info{id, name, kind, rows, cols, size_, 0, positive};
    switch (kind) {
      case SlotKind::Symmetric: info.count = rows * (rows + 1) / 2; break;
      case SlotKind::Diagonal: info.count = rows; break;
      case SlotKind::Full: info.count = rows * cols; break;
    }
    size_ += info.count;
    slots_.push_back(info);
  };
  add(Slot::Q1, "Q1", SlotKind::Symmetric, n, n, true);
  add(Slot::Q2, "Q2", SlotKind::Symmetric, 2 * n, 2 * n, true);
  add(Slot::Q3, "Q3", SlotKind::Symmetric, n, n, true);
  add(Slot::Q4, "Q4", SlotKind::Symmetric, 2 * n, 2 * n, true);
  add(Slot::Q5, "Q5", SlotKind::Symmetric, n, n, true);
  add(Slot::R1, "R1", SlotKind::Symmetric, n, n, true);
  add(Slot::R2, "R2", SlotKind::Symmetric, n, n, true);
  add(Slot::R3, "R3", SlotKind::Symmetric, n, n, true);
  add(Slot::R4, "R4", SlotKind::Symmetric, n, n, true);
  add(Slot::M1, "M1", SlotKind::Symmetric, n, n, true);
  add(Slot::M2, "M2", SlotKind::Symmetric, n, n, true);
  add(Slot::P1, "P1", SlotKind::Diagonal, n, n, true);
  add(Slot::P2, "P2", SlotKind::Diagonal, n, n, true);
  add(Slot::Lambda1, "Lambda1", SlotKind::Diagonal, n, n, true);
  add(Slot::Lambda2, "Lambda2", SlotKind::Diagonal, n, n, true);
  add(Slot::G1, "G1", SlotKind::Full, 2 * n, 2 * n, false);
  add(Slot::G2, "G2", SlotKind::Full, 2 * n, 2 * n, false);
  add(Slot::W1, "W1", SlotKind::Full, n, mrna_outputs, false);
  add(Slot::W2, "W2", SlotKind::Full, n, protein_outputs, false);
}

std::optional<Slot> DecisionLayout::find(std::string_view name) const {
  for (const auto& s : slots_) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

const SlotInfo& DecisionLayout::owner(int coordinate) const {
  for (const auto& s : slots_) {
    if (coordinate >= s.offset && coordinate < s.offset + s.count) return s;
  }
  throw Error("decision coordinate out of range");
}

MatrixXd DecisionLayout::unpack(Slot id, const VectorXd& x) const {
  if (x.size() != size_) throw Error("assignment has the wrong number of coordinates");
  const auto& s = slot(id);
  MatrixXd out = MatrixXd::Zero(s.rows, s.cols);
  int k = s.offset;
  switch (s.kind) {
    case SlotKind::Symmetric:
      for (int i = 0; i < s.rows; ++i) {
        for (int j = i; j < s.cols; ++j) {
          out(i, j) = x[k];
          out(j, i) = x[k];
          ++k;
        }
      }
      break;
    case SlotKind::Diagonal:
      for (int i = 0; i < s.rows; ++i) out(i, i) = x[k++];
      break;
    case SlotKind::Full:
      for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) out(i, j) = x[k++];
      }
      break;
  }
  return out;
}

void DecisionLayout::pack(Slot id, const MatrixXd& value, VectorXd& x) const {
  const auto& s = slot(id);
  if (value.rows() != s.rows || value.cols() != s.cols) {
    throw Error("dimension mismatch packing slot " + s.name);
  }
  if (x.size() != size_) x = VectorXd::Zero(size_);
  int k = s.offset;
  switch (s.kind) {
    case SlotKind::Symmetric:
      for (int i = 0; i < s.rows; ++i) {
        for (int j = i; j < s.cols; ++j) x[k++] = value(i, j);
      }
      break;
    case SlotKind::Diagonal:
      for (int i = 0; i < s.rows; ++i) x[k++] = value(i, i);
      break;
    case SlotKind::Full:
      for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) x[k++] = value(i, j);
      }
      break;
  }
}

MatrixXd DecisionLayout::basis(Slot id, int k) const {
  const auto& s = slot(id);
  if (k < 0 || k >= s.count) throw Error("local coordinate out of range for slot " + s.name);
  VectorXd x = VectorXd::Zero(size_);
  x[s.offset + k] = 1.0;
  return unpack(id, x);
}

VectorXd DecisionLayout::identity_assignment() const {
  VectorXd x = VectorXd::Zero(size_);
  for (const auto& s : slots_) {
    if (s.positive) pack(s.id, MatrixXd::Identity(s.rows, s.cols), x);
  }
  return x;
}

// ---------------------------------------------------------------------------
// AffineMatrix
// ---------------------------------------------------------------------------

AffineMatrix::AffineMatrix(Eigen::Index rows, Eigen::Index cols)
    : constant_(MatrixXd::Zero(rows, cols)) {}

AffineMatrix AffineMatrix::variable(const DecisionLayout& layout, Slot id) {
  const auto& s = layout.slot(id);
  AffineMatrix out(s.rows, s.cols);
  for (int k = 0; k < s.count; ++k) out.coeffs_.emplace(s.offset + k, layout.basis(id, k));
  return out;
}

AffineMatrix AffineMatrix::constant(const MatrixXd& value) {
  AffineMatrix out(value.rows(), value.cols());
  out.constant_ = value;
  return out;
}

AffineMatrix AffineMatrix::blocks(const AffineMatrix& a, const AffineMatrix& b,
                                  const AffineMatrix& c, const AffineMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    throw Error("block dimensions do not conform");
  }
  const Eigen::Index r0 = a.rows();
  const Eigen::Index c0 = a.cols();
  AffineMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  auto place = [&](const AffineMatrix& m, Eigen::Index r, Eigen::Index col) {
    out.constant_.block(r, col, m.rows(), m.cols()) = m.constant_;
    for (const auto& [k, coeff] : m.coeffs_) {
      auto [it, inserted] = out.coeffs_.try_emplace(k, MatrixXd::Zero(out.rows(), out.cols()));
      it->second.block(r, col, m.rows(), m.cols()) += coeff;
    }
  };
  place(a, 0, 0);
  place(b, 0, c0);
  place(c, r0, 0);
  place(d, r0, c0);
  return out;
}

AffineMatrix AffineMatrix::transpose() const {
  AffineMatrix out(cols(), rows());
  out.constant_ = constant_.transpose();
  for (const auto& [k, coeff] : coeffs_) out.coeffs_.emplace(k, coeff.transpose());
  return out;
}

MatrixXd AffineMatrix::evaluate(const VectorXd& x) const {
  MatrixXd out = constant_;
  for (const auto& [k, coeff] : coeffs_) {
    if (k >= x.size()) throw Error("assignment has too few coordinates");
    out += x[k] * coeff;
  }
  return out;
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& other) {
  if (rows() != other.rows() || cols() != other.cols()) throw Error("affine sum: shape mismatch");
  constant_ += other.constant_;
  for (const auto& [k, coeff] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(k, coeff);
    if (!inserted) it->second += coeff;
  }
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& other) {
  if (rows() != other.rows() || cols() != other.cols()) throw Error("affine sum: shape mismatch");
  constant_ -= other.constant_;
  for (const auto& [k, coeff] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(k, -coeff);
    if (!inserted) it->second -= coeff;
  }
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(double s) {
  constant_ *= s;
  for (auto& [k, coeff] : coeffs_) coeff *= s;
  return *this;
}

AffineMatrix operator*(const MatrixXd& left, const AffineMatrix& x) {
  if (left.cols() != x.rows()) throw Error("affine product: shape mismatch");
  AffineMatrix out(left.rows(), x.cols());
  out.constant_ = left * x.constant_;
  for (const auto& [k, coeff] : x.coeffs_) out.coeffs_.emplace(k, left * coeff);
  return out;
}

AffineMatrix operator*(const AffineMatrix& x, const MatrixXd& right) {
  if (x.cols() != right.rows()) throw Error("affine product: shape mismatch");
  AffineMatrix out(x.rows(), right.cols());
  out.constant_ = x.constant_ * right;
  for (const auto& [k, coeff] : x.coeffs_) out.coeffs_.emplace(k, coeff * right);
  return out;
}

AffineMatrix sandwich(const MatrixXd& left, const AffineMatrix& x, const MatrixXd& right) {
  return (left * x) * right.transpose();
}

AffineMatrix hermitian_part(const MatrixXd& left, const AffineMatrix& x, const MatrixXd& right) {
  const AffineMatrix y = sandwich(left, x, right);
  return y + y.transpose();
}

// ---------------------------------------------------------------------------
// AffineLmi / LmiSystem
// ---------------------------------------------------------------------------

namespace {

double symmetry_defect(const MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::SparseMatrix<double> to_sparse(const MatrixXd& m) {
  return m.sparseView(0.0, 0.0);
}

double lambda_min(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace

AffineLmi AffineLmi::from_affine(std::string name, Sense sense, const AffineMatrix& expr) {
  if (expr.rows() != expr.cols()) throw Error("LMI " + name + " is not square");
  AffineLmi lmi;
  lmi.name = std::move(name);
  lmi.sense = sense;
  if (symmetry_defect(expr.constant_part()) > 1e-14) {
    throw Error("LMI " + lmi.name + " has an asymmetric constant term");
  }
  lmi.constant = 0.5 * (expr.constant_part() + expr.constant_part().transpose());
  for (const auto& [k, coeff] : expr.coefficients()) {
    if (symmetry_defect(coeff) > 1e-14) {
      throw Error("LMI " + lmi.name + " has an asymmetric coefficient");
    }
    MatrixXd sym = 0.5 * (coeff + coeff.transpose());
    if (sym.cwiseAbs().maxCoeff() == 0.0) continue;
    lmi.terms.push_back({k, to_sparse(sym)});
  }
  return lmi;
}

MatrixXd AffineLmi::evaluate(const VectorXd& x) const {
  MatrixXd out = constant;
  for (const auto& t : terms) {
    if (t.coordinate >= x.size()) throw Error("dimension mismatch: assignment too short");
    out += x[t.coordinate] * t.coefficient;
  }
  return out;
}

double AffineLmi::margin(const VectorXd& x) const {
  return lambda_min(orientation() * evaluate(x));
}

const AffineLmi& LmiSystem::constraint(std::string_view name) const {
  for (const auto& c : constraints) {
    if (c.name == name) return c;
  }
  throw Error("no constraint named " + std::string(name));
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

AffineMatrix assemble_phi(const ObserverProblem& problem, const DecisionLayout& layout,
                          double tau, double sigma) {
  const auto& model = problem.model;
  const auto& d = problem.delays;
  const int n = model.genes();
  if (layout.genes() != n) throw Error("decision layout does not match the model");
  constexpr double kTol = 1e-12;
  if (tau < -kTol || tau > d.tau_bar + kTol || sigma < -kTol || sigma > d.sigma_bar + kTol) {
    throw Error("delay vertex outside [0, tau_bar] x [0, sigma_bar]");
  }

  const auto e = build_selectors(n);
  const auto blk = build_interval_blocks(n, d.tau_bar, d.sigma_bar);
  const double tb = d.tau_bar;
  const double sb = d.sigma_bar;
  const double pi2 = std::numbers::pi * std::numbers::pi;

  const MatrixXd A = model.mrna_decay.asDiagonal();
  const MatrixXd B = model.translation.asDiagonal();
  const MatrixXd C = model.protein_decay.asDiagonal();
  const MatrixXd& W = model.coupling;
  const MatrixXd K = problem.sector.slopes.asDiagonal();
  const MatrixXd& Mout = problem.measurement.mrna_output;
  const MatrixXd& Nout = problem.measurement.protein_output;
  const auto diff = compute_diffusion_bound(model);
  const MatrixXd DL = diff.mrna.asDiagonal();
  const MatrixXd DLs = diff.protein.asDiagonal();

  auto var = [&](Slot s) { return AffineMatrix::variable(layout, s); };
  const auto Q1 = var(Slot::Q1), Q2 = var(Slot::Q2), Q3 = var(Slot::Q3), Q4 = var(Slot::Q4),
             Q5 = var(Slot::Q5);
  const auto R1 = var(Slot::R1), R2 = var(Slot::R2), R3 = var(Slot::R3), R4 = var(Slot::R4);
  const auto M1 = var(Slot::M1), M2 = var(Slot::M2);
  const auto P1 = var(Slot::P1), P2 = var(Slot::P2);
  const auto L1 = var(Slot::Lambda1), L2 = var(Slot::Lambda2);
  const auto G1 = var(Slot::G1), G2 = var(Slot::G2);
  const auto W1 = var(Slot::W1), W2 = var(Slot::W2);

  // l X l^T for symmetric X, symmetrized so roundoff cannot break symmetry.
  auto quad = [](const MatrixXd& l, const AffineMatrix& x) {
    const auto y = sandwich(l, x, l);
    return 0.5 * (y + y.transpose());
  };
  auto he = [](const MatrixXd& l, const AffineMatrix& x, const MatrixXd& r) {
    return hermitian_part(l, x, r);
  };

  // P1 A + W1 M and P2 C + W2 N: the gains enter only through W = P K.
  const AffineMatrix mrna_gain = P1 * A + W1 * Mout;
  const AffineMatrix protein_gain = P2 * C + W2 * Nout;

  // Sector terms and the descriptor-style dm/dt, dp/dt identities.
  AffineMatrix phi = -2.0 * quad(e[7], L1);
  phi += he(e[4], L1 * K, e[7]);
  phi -= 2.0 * quad(e[8], L2);
  phi += he(e[6], K * L2, e[8]);
  phi -= he(e[9], mrna_gain, e[1]);
  phi += he(e[9], P1 * W, e[8]);
  phi -= 2.0 * quad(e[9], P1);
  phi -= he(e[10], protein_gain, e[4]);
  phi += he(e[10], P2 * B, e[3]);
  phi -= 2.0 * quad(e[10], P2);

  // Derivative of the quadratic energy with the diffusion bound.
  phi -= (0.5 * pi2) * quad(e[1], P1 * DL);
  phi -= he(e[1], mrna_gain, e[1]);
  phi += he(e[1], P1 * W, e[8]);
  phi -= (0.5 * pi2) * quad(e[4], P2 * DLs);
  phi -= he(e[4], protein_gain, e[4]);
  phi += he(e[4], P2 * B, e[3]);

  // Single-integral delay terms; tau and sigma enter affinely.
  phi += quad(e[1], Q1);
  phi -= (1.0 - d.mu1) * quad(e[3], Q1);
  phi += quad(e[4], Q3);
  phi -= (1.0 - d.mu2) * quad(e[6], Q3);
  phi += quad(blk.Delta(1), Q2);
  phi += tau * he(blk.Delta(1), Q2, blk.Delta(2));
  phi -= quad(blk.Delta(3), Q2);
  phi -= tau * he(blk.Delta(3), Q2, blk.Delta(2));
  phi += he(blk.Delta(4), Q2, blk.Delta(6));
  phi += tau * he(blk.Delta(5), Q2, blk.Delta(6));
  phi += quad(blk.Theta(1), Q4);
  phi += sigma * he(blk.Theta(1), Q4, blk.Theta(2));
  phi -= quad(blk.Theta(3), Q4);
  phi -= sigma * he(blk.Theta(3), Q4, blk.Theta(2));
  phi += he(blk.Theta(4), Q4, blk.Theta(6));
  phi += sigma * he(blk.Theta(5), Q4, blk.Theta(6));

  // Nonlinearity history.
  phi += quad(e[7], Q5);
  phi -= (1.0 - d.mu2) * quad(e[8], Q5);

  // Double-integral terms bounded by the Wirtinger-based and reciprocally
  // convex steps.
  phi += (tb * tb) * quad(e[9], R1);
  phi += (sb * sb) * quad(e[10], R2);
  phi += (tb * tb) * quad(e[1], R3);
  phi += (sb * sb) * quad(e[4], R4);
  phi -= (tb * (tb - tau)) * quad(e[12], R3);
  phi -= (tb * tau) * quad(e[11], R3);
  phi -= (sb * (sb - sigma)) * quad(e[14], R4);
  phi -= (sb * sigma) * quad(e[13], R4);

  const MatrixXd Zn = MatrixXd::Zero(n, n);
  const AffineMatrix zero_n = AffineMatrix::constant(Zn);
  const auto R1t = AffineMatrix::blocks(R1, zero_n, zero_n, 3.0 * R1);
  const auto R2t = AffineMatrix::blocks(R2, zero_n, zero_n, 3.0 * R2);
  const auto R1h = AffineMatrix::blocks(R1t, G1, G1.transpose(), R1t);
  const auto R2h = AffineMatrix::blocks(R2t, G2, G2.transpose(), R2t);
  MatrixXd delta78(kAugmentedBlocks * n, 4 * n);
  delta78 << blk.Delta(7), blk.Delta(8);
  MatrixXd theta78(kAugmentedBlocks * n, 4 * n);
  theta78 << blk.Theta(7), blk.Theta(8);
  phi -= quad(delta78, R1h);
  phi -= quad(theta78, R2h);

  // Triple-integral terms.
  phi += (0.5 * tb * tb) * quad(e[9], M1);
  phi += (0.5 * sb * sb) * quad(e[10], M2);
  phi -= quad(e[1] - e[11], M1);
  phi -= quad(e[3] - e[12], M1);
  phi -= quad(e[4] - e[13], M2);
  phi -= quad(e[6] - e[14], M2);
  // (bar - t)/bar * (1/bar) diag(M, 3M); dropped in the zero-bound limit.
  if (tb > 0.0) {
    const auto M1t = (1.0 / tb) * AffineMatrix::blocks(M1, zero_n, zero_n, 3.0 * M1);
    phi -= ((tb - tau) / tb) * quad(blk.Delta(8), M1t);
  }
  if (sb > 0.0) {
    const auto M2t = (1.0 / sb) * AffineMatrix::blocks(M2, zero_n, zero_n, 3.0 * M2);
    phi -= ((sb - sigma) / sb) * quad(blk.Theta(8), M2t);
  }
  return phi;
}

namespace {

std::string vertex_name(double tau, double sigma, const DelayBounds& d) {
  auto label = [](double v, double bar, const char* sym) {
    return v == 0.0 ? std::string("0") : (v == bar ? std::string(sym) : std::to_string(v));
  };
  return "Phi(" + label(tau, d.tau_bar, "tau_bar") + "," + label(sigma, d.sigma_bar, "sigma_bar") +
         ")";
}

}  // namespace

AffineLmi assemble_phi_vertex(const ObserverProblem& problem, const DecisionLayout& layout,
                              double tau, double sigma) {
  return AffineLmi::from_affine(vertex_name(tau, sigma, problem.delays), Sense::NegativeDefinite,
                                assemble_phi(problem, layout, tau, sigma));
}

LmiSystem assemble_lmi_system(const ObserverProblem& problem, double slack) {
  const auto report = validate_problem(problem.model, problem.measurement, problem.delays,
                                       problem.sector);
  if (!report.ok()) throw Error("invalid observer problem: " + report.summary());

  const int n = problem.model.genes();
  LmiSystem system{DecisionLayout(n, static_cast<int>(problem.measurement.mrna_output.rows()),
                                  static_cast<int>(problem.measurement.protein_output.rows())),
                   {}};
  const auto& layout = system.layout;
  const auto& d = problem.delays;
  for (double tau : {0.0, d.tau_bar}) {
    for (double sigma : {0.0, d.sigma_bar}) {
      system.constraints.push_back(assemble_phi_vertex(problem, layout, tau, sigma));
    }
  }

  const AffineMatrix zero_n = AffineMatrix::constant(MatrixXd::Zero(n, n));
  auto rhat = [&](Slot r, Slot g) {
    const auto R = AffineMatrix::variable(layout, r);
    const auto G = AffineMatrix::variable(layout, g);
    const auto Rt = AffineMatrix::blocks(R, zero_n, zero_n, 3.0 * R);
    return AffineMatrix::blocks(Rt, G, G.transpose(), Rt);
  };
  system.constraints.push_back(
      AffineLmi::from_affine("Rhat1", Sense::PositiveSemidefinite, rhat(Slot::R1, Slot::G1)));
  system.constraints.push_back(
      AffineLmi::from_affine("Rhat2", Sense::PositiveSemidefinite, rhat(Slot::R2, Slot::G2)));

  for (const auto& s : layout.slots()) {
    if (!s.positive) continue;
    auto expr = AffineMatrix::variable(layout, s.id);
    expr -= AffineMatrix::constant(slack * MatrixXd::Identity(s.rows, s.cols));
    system.constraints.push_back(
        AffineLmi::from_affine(s.name + ">0", Sense::PositiveSemidefinite, expr));
  }
  return system;
}

std::vector<ConstraintMargin> evaluate_lmi_system(const LmiSystem& system, const VectorXd& x) {
  if (x.size() != system.layout.size()) {
    throw Error("dimension mismatch: assignment has " + std::to_string(x.size()) +
                " coordinates, layout needs " + std::to_string(system.layout.size()));
  }
  std::vector<ConstraintMargin> out;
  out.reserve(system.constraints.size());
  for (const auto& c : system.constraints) out.push_back({c.name, c.margin(x)});
  return out;
}

double min_margin(const std::vector<ConstraintMargin>& margins) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : margins) m = std::min(m, c.margin);
  return m;
}

}  // namespace grnobs
