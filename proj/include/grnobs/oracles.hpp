#pragma once

// Numerical checks of the integral inequalities behind the stability
// certificate, evaluated on concrete function families.

#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"

namespace grnobs::oracles {

inline constexpr int kSimpsonPanels = 512;
inline constexpr double kSlackFloor = -1e-9;

// w(u) = sum_k poly.col(k) u^k + sum_j trig_amp.col(j) sin(freq_j u + phase_j).
struct TestFunction {
  Eigen::MatrixXd poly;      // dim x (degree + 1), ascending powers
  Eigen::MatrixXd trig_amp;  // dim x terms
  Eigen::VectorXd freq;
  Eigen::VectorXd phase;

  [[nodiscard]] Eigen::Index dim() const { return std::max(poly.rows(), trig_amp.rows()); }
  [[nodiscard]] Eigen::VectorXd value(double u) const;
  [[nodiscard]] Eigen::VectorXd derivative(double u) const;

  static TestFunction polynomial(Eigen::MatrixXd coefficients);
  static TestFunction constant(const Eigen::VectorXd& v);
};

// Composite Simpson rule; `f` may return double or an Eigen vector.
template <class F>
auto simpson(F&& f, double a, double b, int panels = kSimpsonPanels) {
  using Result = std::decay_t<decltype(f(a))>;
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  Result acc = f(a);
  acc += f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return Result(acc * (h / 3.0));
}

struct JensenSlack {
  double single = 0.0;  // (b-a) int w'Mw - (int w)' M (int w)
  double dual = 0.0;    // double-integral form
};

[[nodiscard]] JensenSlack check_jensen(const TestFunction& w, double a, double b,
                                       const Eigen::MatrixXd& weight);

// int w_dot' Q w_dot - [O0; O1]' diag(Q, 3Q) [O0; O1] / (b - a).
[[nodiscard]] double check_wirtinger_based(const TestFunction& w, double a, double b,
                                           const Eigen::MatrixXd& weight);

// (b-a)^2/pi^2 int |f'|^2 - int |f|^2. Throws Error unless |f(a)|, |f(b)| <= 1e-12.
[[nodiscard]] double check_wirtinger(const TestFunction& f, double a, double b);

struct RccBound {
  double lhs_min = 0.0;    // min over alpha of f1/alpha + f2/(1-alpha)
  double rhs_bound = 0.0;  // f1 + f2 + 2 g
  double alpha = 0.0;      // minimiser
  [[nodiscard]] double slack() const { return lhs_min - rhs_bound; }
};

// Throws Error when f1, f2 are not positive or [[f1, g], [g, f2]] is not PSD.
[[nodiscard]] RccBound check_rcc(double f1, double f2, double coupling);

// |<u, L v> - <L u, v>| for L = diag(diffusion) d^2/dx^2 on a uniform
// Dirichlet grid of spacing h. Fields are genes x nodes including boundary
// columns, which must be zero (Error otherwise).
[[nodiscard]] double check_green_discrete(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                                          double spacing, const Eigen::VectorXd& diffusion);

// Random families ---------------------------------------------------------

using Rng = std::mt19937_64;

[[nodiscard]] TestFunction random_mixture(Rng& rng, Eigen::Index dim, int degree, int terms);
// Vanishes at a and b by construction.
[[nodiscard]] TestFunction random_pinned(Rng& rng, double a, double b, Eigen::Index dim);
[[nodiscard]] Eigen::MatrixXd random_spd(Rng& rng, Eigen::Index dim);

struct LemmaReport {
  std::string lemma;
  int draws = 0;
  double min_slack = 0.0;
  double witness_slack = 0.0;  // |slack| at the equality witness
  [[nodiscard]] bool passed() const;
};

// Runs `draws` seeded random checks per lemma plus each equality witness.
[[nodiscard]] std::vector<LemmaReport> run_lemma_suite(std::uint64_t seed, int draws = 100);

}  // namespace grnobs::oracles
