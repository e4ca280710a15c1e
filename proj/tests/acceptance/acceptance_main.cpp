// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "grnobs/observer_synthesis.hpp"
#include "grnobs/oracles.hpp"
#include "grnobs/rd_simulator.hpp"
#include "support.hpp"

using namespace grnobs;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

namespace tol {
constexpr double kGainEntry = 5e-4;
constexpr double kGainSeconds = 1e-3;
constexpr double kExample1Seconds = 120.0;
constexpr double kExample2Seconds = 30.0;
constexpr double kRecertifyDiff = 1e-10;
constexpr double kAssembly = 1e-12;
constexpr int kAssemblyDraws = 20;
constexpr int kLemmaDraws = 100;
constexpr double kLemmaFloor = -1e-9;
constexpr double kWitness = 1e-9;
constexpr double kLemmaSeconds = 10.0;
constexpr double kSectorTarget = 0.6495;
constexpr double kSector = 1e-3;
constexpr double kDecayFraction = 0.01;
constexpr double kZeroError = 1e-12;
constexpr double kEigenRelative = 0.01;
constexpr double kConvexity = 1e-12;
constexpr int kConvexityDraws = 50;
}  // namespace tol

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double all_margins_min(const std::vector<ConstraintMargin>& m) { return min_margin(m); }

void gain_reproduction() {
  const VectorXd p1 = Eigen::Vector3d(57.6506, 44.1104, 50.5774);
  const VectorXd p2 = Eigen::Vector3d(25.7909, 39.4682, 32.9357);
  MatrixXd w1(3, 2), w2(3, 2), k1(3, 2), k2(3, 2);
  w1 << 34.7528, 25.0882, 9.8144, -15.2841, 4.3837, 9.3021;
  w2 << 16.3285, 18.6193, 5.3137, -9.3968, -12.5043, 22.4536;
  k1 << 0.6028, 0.4352, 0.2225, -0.3465, 0.0867, 0.1839;
  k2 << 0.6331, 0.7219, 0.1346, -0.2381, -0.3797, 0.6817;
  const auto t0 = Clock::now();
  const auto [g1, g2] = extract_gains(p1, p2, w1, w2);
  const double secs = seconds_since(t0);
  const double err = std::max((g1 - k1).cwiseAbs().maxCoeff(), (g2 - k2).cwiseAbs().maxCoeff());
  verdict(1, err <= tol::kGainEntry && secs < tol::kGainSeconds, "gain reproduction",
          fmt("max entry error %.3g, %.3g ms", err, secs * 1e3));
}

void synthesis(int id, const ObserverProblem& p, double limit, const char* label) {
  const auto t0 = Clock::now();
  const auto res = synthesize_observer(p);
  const double secs = seconds_since(t0);
  const double worst = all_margins_min(res.margins);
  const auto again = recertify(res.system, res.gains.certificate.assignment, res.gains.mrna_gain,
                               res.gains.protein_gain);
  double diff = 0.0;
  for (std::size_t i = 0; i < again.size(); ++i) {
    diff = std::max(diff, std::abs(again[i].margin - res.margins[i].margin));
  }
  const bool ok = res.feasible() && worst > 0.0 && all_margins_min(again) > 0.0 &&
                  diff <= tol::kRecertifyDiff && secs < limit;
  verdict(id, ok, label,
          to_string(res.gains.certificate.status) +
              fmt(", min margin %.4g, recertify diff %.2g, %.1f s", worst, diff, secs));
}

void assembly_oracle() {
  std::mt19937_64 rng(20150701);
  const auto p = grnobs::testing::example2();
  const auto layout = grnobs::testing::layout_for(p);
  const double tb = p.delays.tau_bar, sb = p.delays.sigma_bar;
  const std::pair<double, double> vertices[] = {{0, 0}, {0, sb}, {tb, 0}, {tb, sb}};
  double worst = 0.0;
  for (int k = 0; k < tol::kAssemblyDraws; ++k) {
    const auto u = grnobs::testing::random_unknowns(rng, 1, 1, 1);
    const VectorXd x = grnobs::testing::pack(layout, u);
    for (const auto& [tau, sigma] : vertices) {
      const MatrixXd got = assemble_phi(p, layout, tau, sigma).evaluate(x);
      worst = std::max(worst, (got - reference::phi(p, u, tau, sigma)).cwiseAbs().maxCoeff());
    }
  }
  verdict(4, worst <= tol::kAssembly, "assembly oracle",
          fmt("%g draws x 4 vertices, max entry diff %.3g", tol::kAssemblyDraws, worst));
}

void lemma_suite() {
  const auto t0 = Clock::now();
  const auto reports = oracles::run_lemma_suite(20150701, tol::kLemmaDraws);
  const double secs = seconds_since(t0);
  bool ok = secs < tol::kLemmaSeconds && reports.size() == 4;
  std::string detail;
  for (const auto& r : reports) {
    ok = ok && r.draws == tol::kLemmaDraws && r.min_slack >= tol::kLemmaFloor &&
         std::abs(r.witness_slack) <= tol::kWitness;
    detail += r.lemma + fmt(" min %.2g witness %.1g; ", r.min_slack, r.witness_slack);
  }
  verdict(5, ok, "lemma oracle suite", detail + fmt("%.2f s", secs));
}

void sector_bound() {
  const double xi = compute_sector_bound(2);
  verdict(6, std::abs(xi - tol::kSectorTarget) <= tol::kSector, "sector bound",
          fmt("xi(H=2) = %.6f", xi));
}

void simulation_decay() {
  const auto p = grnobs::testing::example2();
  const auto res = synthesize_observer(p);
  SimConfig cfg;  // dt 1e-4, horizon 50, constant delays 1
  cfg.bounds = p.delays;
  cfg.snapshot_interval = cfg.horizon;
  const Grid1D grid{1.0, 100};
  const auto t0 = Clock::now();
  const auto traj = simulate(p.model, p.measurement, res.gains.mrna_gain, res.gains.protein_gain, grid, cfg);
  const double rm = traj.error_mrna_norm.back() / traj.error_mrna_norm.front();
  const double rp = traj.error_protein_norm.back() / traj.error_protein_norm.front();

  cfg.observer_mrna = cosine_profile(cfg.mrna_amplitude, grid.half_width);
  cfg.observer_protein = cosine_profile(cfg.protein_amplitude, grid.half_width);
  const auto still = simulate(p.model, p.measurement, res.gains.mrna_gain, res.gains.protein_gain, grid, cfg);
  double zero = 0.0;
  for (std::size_t i = 0; i < still.times.size(); ++i) {
    zero = std::max({zero, still.error_mrna_norm[i], still.error_protein_norm[i]});
  }
  const bool ok = rm < tol::kDecayFraction && rp < tol::kDecayFraction && zero <= tol::kZeroError;
  verdict(7, ok, "simulation decay",
          fmt("final/initial m %.3g, p %.3g, zero-error max %.3g", rm, rp, zero) +
              fmt(", %.1f s", seconds_since(t0)));
}

void diffusion_physics() {
  const double d = 0.1, len = 1.0;
  const auto model = grnobs::testing::uniform_model(VectorXd::Zero(1), VectorXd::Zero(1), VectorXd::Zero(1),
                                                    MatrixXd::Zero(1, 1), 1, d, 0.2);
  const MeasurementModel meas{MatrixXd::Zero(1, 1), MatrixXd::Zero(1, 1)};
  const Grid1D grid{len, 200};
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 6.0;
  cfg.tau = cfg.sigma = DelayFunction::constant(0.0);
  cfg.snapshot_interval = cfg.horizon;
  cfg.plant_mrna = [len](int, double, double x) { return 1.0 - (x * x) / (len * len); };
  cfg.plant_protein = zero_profile();
  const auto traj = simulate(model, meas, MatrixXd::Zero(1, 1), MatrixXd::Zero(1, 1), grid, cfg);
  const std::size_t i1 = traj.times.size() * 2 / 3, i2 = traj.times.size() - 1;
  const double rate = std::log(traj.error_mrna_norm[i1] / traj.error_mrna_norm[i2]) /
                      (traj.times[i2] - traj.times[i1]);
  const double h = grid.spacing();
  const double s = std::sin(std::numbers::pi * h / (4 * len));
  const double want = d * 4.0 / (h * h) * s * s;
  const double rel = std::abs(rate / want - 1.0);
  verdict(8, rel <= tol::kEigenRelative, "diffusion physics",
          fmt("measured rate %.6f, eigenvalue %.6f, rel diff %.2g", rate, want, rel));
}

void convexity() {
  std::mt19937_64 rng(7);
  const auto p = grnobs::testing::example1();
  const auto layout = grnobs::testing::layout_for(p);
  const double tb = p.delays.tau_bar;
  std::uniform_real_distribution<double> pick(0.0, p.delays.sigma_bar);
  double worst = 0.0;
  for (int k = 0; k < tol::kConvexityDraws; ++k) {
    const VectorXd x = grnobs::testing::pack(layout, grnobs::testing::random_unknowns(rng, 3, 2, 2));
    const double sigma = pick(rng);
    const MatrixXd mid = assemble_phi(p, layout, 0.5 * tb, sigma).evaluate(x);
    const MatrixXd lo = assemble_phi(p, layout, 0.0, sigma).evaluate(x);
    const MatrixXd hi = assemble_phi(p, layout, tb, sigma).evaluate(x);
    worst = std::max(worst, (mid - 0.5 * (lo + hi)).cwiseAbs().maxCoeff());
  }
  verdict(9, worst <= tol::kConvexity, "convexity in tau",
          fmt("%g draws, max entry diff %.3g", tol::kConvexityDraws, worst));
}

}  // namespace

int main() {
  gain_reproduction();
  synthesis(2, grnobs::testing::example1(), tol::kExample1Seconds, "example 1 synthesis");
  synthesis(3, grnobs::testing::example2(), tol::kExample2Seconds, "example 2 synthesis");
  assembly_oracle();
  lemma_suite();
  sector_bound();
  simulation_decay();
  diffusion_physics();
  convexity();
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
