#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "grnobs/grn_model.hpp"

namespace grnobs {

// Number of n-blocks in the augmented state
//   (m(t), m(t-tau_bar), m(t-tau(t)), p(t), p(t-sigma_bar), p(t-sigma(t)),
//    f(p(t)), f(p(t-sigma(t))), dm/dt, dp/dt, four interval averages).
inline constexpr int kAugmentedBlocks = 14;

// Fixed slack used to encode strict inequalities as non-strict ones.
inline constexpr double kStrictSlack = 1e-6;

// e_0 .. e_14. e_0 is the 14n x n zero matrix, e_i (i >= 1) picks block i.
[[nodiscard]] std::array<Eigen::MatrixXd, kAugmentedBlocks + 1> build_selectors(int n);

// Delta_1..Delta_8 (mRNA delay interval) and Theta_1..Theta_8 (protein
// delay interval), each 14n x 2n. Index 0 holds Delta_1.
struct IntervalBlocks {
  std::array<Eigen::MatrixXd, 8> delta;
  std::array<Eigen::MatrixXd, 8> theta;

  [[nodiscard]] const Eigen::MatrixXd& Delta(int i) const { return delta.at(i - 1); }
  [[nodiscard]] const Eigen::MatrixXd& Theta(int i) const { return theta.at(i - 1); }
};

[[nodiscard]] IntervalBlocks build_interval_blocks(int n, double tau_bar, double sigma_bar);

// ---------------------------------------------------------------------------
// Decision variables
// ---------------------------------------------------------------------------

enum class Slot {
  Q1, Q2, Q3, Q4, Q5,
  R1, R2, R3, R4,
  M1, M2,
  P1, P2, Lambda1, Lambda2,
  G1, G2,
  W1, W2,
};

inline constexpr int kSlotCount = 19;

enum class SlotKind { Symmetric, Diagonal, Full };

struct SlotInfo {
  Slot id;
  std::string name;
  SlotKind kind;
  int rows = 0;
  int cols = 0;
  int offset = 0;  // first scalar coordinate
  int count = 0;   // number of scalar coordinates
  bool positive = false;  // must be positive definite
};

// Maps every matrix unknown onto a contiguous range of scalar coordinates.
// Symmetric slots use their upper triangle in row-major order, diagonal
// slots their diagonal, full slots all entries row-major.
class DecisionLayout {
 public:
  DecisionLayout() = default;
  DecisionLayout(int genes, int mrna_outputs, int protein_outputs);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int genes() const { return genes_; }
  [[nodiscard]] const SlotInfo& slot(Slot id) const { return slots_[static_cast<int>(id)]; }
  [[nodiscard]] const std::vector<SlotInfo>& slots() const { return slots_; }
  [[nodiscard]] std::optional<Slot> find(std::string_view name) const;
  // Slot owning a scalar coordinate.
  [[nodiscard]] const SlotInfo& owner(int coordinate) const;

  [[nodiscard]] Eigen::MatrixXd unpack(Slot id, const Eigen::VectorXd& x) const;
  // Writes `value` into x. Symmetric slots read the upper triangle, diagonal
  // slots the diagonal.
  void pack(Slot id, const Eigen::MatrixXd& value, Eigen::VectorXd& x) const;
  // Coefficient matrix of local coordinate `k` of slot `id`.
  [[nodiscard]] Eigen::MatrixXd basis(Slot id, int k) const;

  // Identity for every positive slot, zero for G and W.
  [[nodiscard]] Eigen::VectorXd identity_assignment() const;

  friend bool operator==(const DecisionLayout& a, const DecisionLayout& b) {
    return a.genes_ == b.genes_ && a.size_ == b.size_ &&
           a.slot(Slot::W1).cols == b.slot(Slot::W1).cols &&
           a.slot(Slot::W2).cols == b.slot(Slot::W2).cols;
  }

 private:
  int genes_ = 0;
  int size_ = 0;
  std::vector<SlotInfo> slots_;
};

// ---------------------------------------------------------------------------
// Affine matrix expressions
// ---------------------------------------------------------------------------

// constant + sum_i x_i * coeff_i with dense coefficients. Used while
// building constraints; the finished constraints store sparse copies.
class AffineMatrix {
 public:
  AffineMatrix(Eigen::Index rows, Eigen::Index cols);

  static AffineMatrix variable(const DecisionLayout& layout, Slot id);
  static AffineMatrix constant(const Eigen::MatrixXd& value);
  // [[a, b], [c, d]]
  static AffineMatrix blocks(const AffineMatrix& a, const AffineMatrix& b,
                             const AffineMatrix& c, const AffineMatrix& d);

  [[nodiscard]] Eigen::Index rows() const { return constant_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return constant_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& constant_part() const { return constant_; }
  [[nodiscard]] const std::map<int, Eigen::MatrixXd>& coefficients() const { return coeffs_; }

  [[nodiscard]] AffineMatrix transpose() const;
  [[nodiscard]] Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;

  AffineMatrix& operator+=(const AffineMatrix& other);
  AffineMatrix& operator-=(const AffineMatrix& other);
  AffineMatrix& operator*=(double s);

  friend AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
  friend AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
  friend AffineMatrix operator*(double s, AffineMatrix a) { return a *= s; }
  friend AffineMatrix operator*(const Eigen::MatrixXd& left, const AffineMatrix& x);
  friend AffineMatrix operator*(const AffineMatrix& x, const Eigen::MatrixXd& right);

 private:
  Eigen::MatrixXd constant_;
  std::map<int, Eigen::MatrixXd> coeffs_;
};

// left * x * right^T
[[nodiscard]] AffineMatrix sandwich(const Eigen::MatrixXd& left, const AffineMatrix& x,
                                    const Eigen::MatrixXd& right);
// left * x * right^T + right * x^T * left^T, exactly symmetric.
[[nodiscard]] AffineMatrix hermitian_part(const Eigen::MatrixXd& left, const AffineMatrix& x,
                                          const Eigen::MatrixXd& right);

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

enum class Sense {
  PositiveSemidefinite,  // F(x) >= 0
  NegativeDefinite,      // F(x) < 0
};

struct LmiTerm {
  int coordinate = 0;
  Eigen::SparseMatrix<double> coefficient;
};

struct AffineLmi {
  std::string name;
  Sense sense = Sense::PositiveSemidefinite;
  Eigen::MatrixXd constant;
  std::vector<LmiTerm> terms;

  [[nodiscard]] Eigen::Index dim() const { return constant.rows(); }
  // +1 for F >= 0, -1 for F < 0: orientation * F(x) must be positive.
  [[nodiscard]] double orientation() const { return sense == Sense::NegativeDefinite ? -1.0 : 1.0; }
  [[nodiscard]] Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;
  // lambda_min(orientation * F(x)).
  [[nodiscard]] double margin(const Eigen::VectorXd& x) const;

  // Symmetrizes and checks the stored matrices; throws Error when any
  // matrix is asymmetric beyond 1e-14 (relative to its scale).
  static AffineLmi from_affine(std::string name, Sense sense, const AffineMatrix& expr);
};

struct LmiSystem {
  DecisionLayout layout;
  std::vector<AffineLmi> constraints;

  [[nodiscard]] const AffineLmi& constraint(std::string_view name) const;
};

struct ConstraintMargin {
  std::string name;
  double margin = 0.0;
};

// Phi(tau, sigma) of the stability criterion as an affine expression in the
// decision coordinates. tau in [0, tau_bar], sigma in [0, sigma_bar].
[[nodiscard]] AffineMatrix assemble_phi(const ObserverProblem& problem,
                                        const DecisionLayout& layout, double tau, double sigma);

// Phi(tau, sigma) < 0 as a named constraint.
[[nodiscard]] AffineLmi assemble_phi_vertex(const ObserverProblem& problem,
                                            const DecisionLayout& layout, double tau,
                                            double sigma);

// Four Phi vertices, R-hat_1 >= 0, R-hat_2 >= 0 and slot - slack*I >= 0 for
// every positive slot. Throws Error when the problem fails validation.
[[nodiscard]] LmiSystem assemble_lmi_system(const ObserverProblem& problem,
                                            double slack = kStrictSlack);

[[nodiscard]] std::vector<ConstraintMargin> evaluate_lmi_system(const LmiSystem& system,
                                                                const Eigen::VectorXd& x);

[[nodiscard]] double min_margin(const std::vector<ConstraintMargin>& margins);

}  // namespace grnobs
