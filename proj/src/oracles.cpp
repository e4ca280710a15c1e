#include "grnobs/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grnobs::oracles {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd TestFunction::value(double u) const {
  VectorXd out = VectorXd::Zero(dim());
  double power = 1.0;
  for (Index k = 0; k < poly.cols(); ++k) {
    out += poly.col(k) * power;
    power *= u;
  }
  for (Index j = 0; j < trig_amp.cols(); ++j) out += trig_amp.col(j) * std::sin(freq[j] * u + phase[j]);
  return out;
}

VectorXd TestFunction::derivative(double u) const {
  VectorXd out = VectorXd::Zero(dim());
  double power = 1.0;
  for (Index k = 1; k < poly.cols(); ++k) {
    out += poly.col(k) * (static_cast<double>(k) * power);
    power *= u;
  }
  for (Index j = 0; j < trig_amp.cols(); ++j) {
    out += trig_amp.col(j) * (freq[j] * std::cos(freq[j] * u + phase[j]));
  }
  return out;
}

TestFunction TestFunction::polynomial(MatrixXd coefficients) {
  TestFunction f;
  f.poly = std::move(coefficients);
  return f;
}

TestFunction TestFunction::constant(const VectorXd& v) { return polynomial(v); }

JensenSlack check_jensen(const TestFunction& w, double a, double b, const MatrixXd& weight) {
  if (!(a < b)) throw Error("check_jensen: need a < b");
  const VectorXd iw = simpson([&](double s) { return w.value(s); }, a, b);
  const double iq = simpson(
      [&](double s) {
        const VectorXd v = w.value(s);
        return v.dot(weight * v);
      },
      a, b);
  // int_a^b int_theta^b h(s) ds dtheta = int_a^b (s - a) h(s) ds
  const VectorXd dw = simpson([&](double s) { return VectorXd((s - a) * w.value(s)); }, a, b);
  const double dq = simpson(
      [&](double s) {
        const VectorXd v = w.value(s);
        return (s - a) * v.dot(weight * v);
      },
      a, b);
  const double len = b - a;
  return {len * iq - iw.dot(weight * iw), 0.5 * len * len * dq - dw.dot(weight * dw)};
}

double check_wirtinger_based(const TestFunction& w, double a, double b, const MatrixXd& weight) {
  if (!(a < b)) throw Error("check_wirtinger_based: need a < b");
  const double len = b - a;
  const double lhs = simpson(
      [&](double u) {
        const VectorXd d = w.derivative(u);
        return d.dot(weight * d);
      },
      a, b);
  const VectorXd wa = w.value(a), wb = w.value(b);
  const VectorXd o0 = wb - wa;
  const VectorXd o1 = wb + wa - (2.0 / len) * simpson([&](double u) { return w.value(u); }, a, b);
  const double rhs = (o0.dot(weight * o0) + 3.0 * o1.dot(weight * o1)) / len;
  return lhs - rhs;
}

double check_wirtinger(const TestFunction& f, double a, double b) {
  if (!(a < b)) throw Error("check_wirtinger: need a < b");
  if (f.value(a).cwiseAbs().maxCoeff() > 1e-12 || f.value(b).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("check_wirtinger: function must vanish at both endpoints");
  }
  const double len = b - a;
  const double grad = simpson([&](double v) { return f.derivative(v).squaredNorm(); }, a, b);
  const double mass = simpson([&](double v) { return f.value(v).squaredNorm(); }, a, b);
  return len * len / (std::numbers::pi * std::numbers::pi) * grad - mass;
}

RccBound check_rcc(double f1, double f2, double coupling) {
  if (!(f1 > 0.0) || !(f2 > 0.0) || !std::isfinite(f1) || !std::isfinite(f2)) {
    throw Error("check_rcc: f1 and f2 must be positive and finite");
  }
  if (coupling * coupling > f1 * f2 * (1.0 + 1e-12)) {
    throw Error("check_rcc: [[f1, g], [g, f2]] is not positive semidefinite");
  }
  auto objective = [&](double alpha) { return f1 / alpha + f2 / (1.0 - alpha); };
  constexpr int kGrid = 1000;
  int best = 1;
  for (int i = 2; i < kGrid; ++i) {
    if (objective(static_cast<double>(i) / kGrid) < objective(static_cast<double>(best) / kGrid)) {
      best = i;
    }
  }
  double lo = static_cast<double>(best - 1) / kGrid;
  double hi = static_cast<double>(best + 1) / kGrid;
  lo = std::max(lo, 1e-15);
  hi = std::min(hi, 1.0 - 1e-15);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  while (hi - lo > 1e-13) {
    const double x1 = hi - ratio * (hi - lo);
    const double x2 = lo + ratio * (hi - lo);
    if (objective(x1) < objective(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  RccBound out;
  out.alpha = 0.5 * (lo + hi);
  out.lhs_min = objective(out.alpha);
  out.rhs_bound = f1 + f2 + 2.0 * coupling;
  if (out.lhs_min < out.rhs_bound - 1e-9) throw Error("check_rcc: lemma violated");
  return out;
}

double check_green_discrete(const MatrixXd& u, const MatrixXd& v, double spacing,
                            const VectorXd& diffusion) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || diffusion.size() != u.rows()) {
    throw Error("check_green_discrete: shape mismatch");
  }
  if (u.cols() < 3) throw Error("check_green_discrete: need at least one interior node");
  const Index last = u.cols() - 1;
  for (Index i = 0; i < u.rows(); ++i) {
    if (u(i, 0) != 0.0 || u(i, last) != 0.0 || v(i, 0) != 0.0 || v(i, last) != 0.0) {
      throw Error("check_green_discrete: fields must vanish on the boundary");
    }
  }
  const long double inv_h2 = 1.0L / (static_cast<long double>(spacing) * spacing);
  long double lhs = 0.0L, rhs = 0.0L;
  for (Index i = 0; i < u.rows(); ++i) {
    const long double d = diffusion[i];
    for (Index j = 1; j < last; ++j) {
      const long double lv =
          d * inv_h2 * (static_cast<long double>(v(i, j + 1)) - 2.0L * v(i, j) + v(i, j - 1));
      const long double lu =
          d * inv_h2 * (static_cast<long double>(u(i, j + 1)) - 2.0L * u(i, j) + u(i, j - 1));
      lhs += static_cast<long double>(u(i, j)) * lv;
      rhs += lu * static_cast<long double>(v(i, j));
    }
  }
  return static_cast<double>(std::fabs(lhs - rhs) * spacing);
}

// ---------------------------------------------------------------------------

TestFunction random_mixture(Rng& rng, Index dim, int degree, int terms) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> omega(0.5, 4.0);
  std::uniform_real_distribution<double> shift(0.0, 2.0 * std::numbers::pi);
  TestFunction f;
  f.poly = MatrixXd::NullaryExpr(dim, degree + 1, [&] { return coef(rng); });
  f.trig_amp = MatrixXd::NullaryExpr(dim, terms, [&] { return coef(rng); });
  f.freq = VectorXd::NullaryExpr(terms, [&] { return omega(rng); });
  f.phase = VectorXd::NullaryExpr(terms, [&] { return shift(rng); });
  return f;
}

TestFunction random_pinned(Rng& rng, double a, double b, Index dim) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  // (v - a)(b - v) times a random quadratic, plus sines vanishing at a and b.
  const MatrixXd q = MatrixXd::NullaryExpr(dim, 3, [&] { return coef(rng); });
  const double c0 = -a * b, c1 = a + b, c2 = -1.0;  // (v - a)(b - v)
  MatrixXd poly = MatrixXd::Zero(dim, 5);
  for (int k = 0; k < 3; ++k) {
    poly.col(k) += c0 * q.col(k);
    poly.col(k + 1) += c1 * q.col(k);
    poly.col(k + 2) += c2 * q.col(k);
  }
  constexpr int kModes = 3;
  TestFunction f;
  f.poly = std::move(poly);
  f.trig_amp = MatrixXd::NullaryExpr(dim, kModes, [&] { return coef(rng); });
  f.freq.resize(kModes);
  f.phase.resize(kModes);
  for (int j = 0; j < kModes; ++j) {
    f.freq[j] = (j + 1) * std::numbers::pi / (b - a);
    f.phase[j] = -f.freq[j] * a;
  }
  return f;
}

MatrixXd random_spd(Rng& rng, Index dim) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const MatrixXd g = MatrixXd::NullaryExpr(dim, dim, [&] { return coef(rng); });
  return g * g.transpose() + 0.1 * MatrixXd::Identity(dim, dim);
}

bool LemmaReport::passed() const {
  return min_slack >= kSlackFloor && std::abs(witness_slack) <= 1e-9;
}

namespace {

struct Interval {
  double a, b;
};

Interval random_interval(Rng& rng) {
  std::uniform_real_distribution<double> start(-2.0, 1.0);
  std::uniform_real_distribution<double> length(0.2, 3.0);
  const double a = start(rng);
  return {a, a + length(rng)};
}

}  // namespace

std::vector<LemmaReport> run_lemma_suite(std::uint64_t seed, int draws) {
  Rng rng(seed);
  std::uniform_int_distribution<int> dims(1, 3);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<LemmaReport> out;

  {
    LemmaReport r{"jensen", draws, inf, 0.0};
    for (int i = 0; i < draws; ++i) {
      const auto [a, b] = random_interval(rng);
      const Index d = dims(rng);
      const auto w = random_mixture(rng, d, 3, 2);
      const auto s = check_jensen(w, a, b, random_spd(rng, d));
      r.min_slack = std::min({r.min_slack, s.single, s.dual});
    }
    const auto witness = check_jensen(TestFunction::constant(VectorXd::Constant(2, 0.7)), -1.0,
                                      2.0, random_spd(rng, 2));
    r.witness_slack = std::max(std::abs(witness.single), std::abs(witness.dual));
    out.push_back(r);
  }
  {
    LemmaReport r{"wirtinger_based", draws, inf, 0.0};
    for (int i = 0; i < draws; ++i) {
      const auto [a, b] = random_interval(rng);
      const Index d = dims(rng);
      const auto w = random_mixture(rng, d, 3, 2);
      r.min_slack = std::min(r.min_slack, check_wirtinger_based(w, a, b, random_spd(rng, d)));
    }
    MatrixXd linear(2, 2);
    linear << 0.3, -1.2, 0.5, 2.0;
    r.witness_slack = std::abs(
        check_wirtinger_based(TestFunction::polynomial(linear), -0.5, 1.5, random_spd(rng, 2)));
    out.push_back(r);
  }
  {
    LemmaReport r{"wirtinger", draws, inf, 0.0};
    for (int i = 0; i < draws; ++i) {
      const auto [a, b] = random_interval(rng);
      r.min_slack = std::min(r.min_slack, check_wirtinger(random_pinned(rng, a, b, dims(rng)), a, b));
    }
    const double a = -0.3, b = 1.7;
    TestFunction sine;
    sine.trig_amp = MatrixXd::Ones(1, 1);
    sine.freq = VectorXd::Constant(1, std::numbers::pi / (b - a));
    sine.phase = VectorXd::Constant(1, -std::numbers::pi * a / (b - a));
    r.witness_slack = std::abs(check_wirtinger(sine, a, b));
    out.push_back(r);
  }
  {
    LemmaReport r{"rcc", draws, inf, 0.0};
    std::uniform_real_distribution<double> pos(0.05, 5.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < draws; ++i) {
      const double f1 = pos(rng), f2 = pos(rng);
      const double g = unit(rng) * std::sqrt(f1 * f2);
      r.min_slack = std::min(r.min_slack, check_rcc(f1, f2, g).slack());
    }
    r.witness_slack = std::abs(check_rcc(4.0, 1.0, 2.0).slack());
    out.push_back(r);
  }
  return out;
}

}  // namespace grnobs::oracles
