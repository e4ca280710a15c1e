#include <cmath>

#include <gtest/gtest.h>

#include "grnobs/grn_model.hpp"
#include "support.hpp"

using namespace grnobs;
using grnobs::testing::example1;
using grnobs::testing::example2;

TEST(GrnModel, ExamplesValidate) {
  for (const auto& p : {example1(), example2()}) {
    const auto r = validate_problem(p.model, p.measurement, p.delays, p.sector);
    EXPECT_TRUE(r.ok()) << r.summary();
  }
}

TEST(GrnModel, NegativeDegradationIsNamed) {
  auto p = example2();
  p.model.mrna_decay[0] = -0.2;
  const auto r = validate_model(p.model, p.measurement, p.delays);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.summary().find("degradation rate must be positive"), std::string::npos);
}

TEST(GrnModel, CouplingShapeMismatch) {
  auto p = example1();
  p.model.coupling = Eigen::MatrixXd::Zero(2, 3);
  const auto r = validate_model(p.model, p.measurement, p.delays);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.summary().find("dimension mismatch"), std::string::npos);
}

TEST(GrnModel, MeasurementColumnsChecked) {
  auto p = example1();
  p.measurement.protein_output = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_FALSE(validate_model(p.model, p.measurement, p.delays).ok());
}

TEST(GrnModel, NegativeDelayBoundRejected) {
  auto p = example2();
  p.delays.tau_bar = -1.0;
  EXPECT_FALSE(validate_model(p.model, p.measurement, p.delays).ok());
}

TEST(GrnModel, DiffusionBoundSumsAxes) {
  const auto p = example1();
  const auto d = compute_diffusion_bound(p.model);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.mrna[i], 0.3, 1e-15);
    EXPECT_NEAR(d.protein[i], 0.6, 1e-15);
  }
  auto q = example2();
  q.model.half_widths[0] = 2.0;
  EXPECT_NEAR(compute_diffusion_bound(q.model).mrna[0], 0.1 / 4.0, 1e-15);
}

TEST(Hill, ValuesAndDerivative) {
  EXPECT_DOUBLE_EQ(hill_function(1.0, 2), 0.5);
  EXPECT_DOUBLE_EQ(hill_function(-1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(hill_function(0.0, 3), 0.0);
  for (int h = 1; h <= 5; ++h) {
    for (double s : {0.1, 0.7, 1.3, 2.9}) {
      const double eps = 1e-6;
      const double fd = (hill_function(s + eps, h) - hill_function(s - eps, h)) / (2 * eps);
      EXPECT_NEAR(hill_derivative(s, h), fd, 1e-8) << "H=" << h << " s=" << s;
    }
  }
}

TEST(Hill, SectorBoundClosedForms) {
  // H = 2: g'(s) = 2s/(1+s^2)^2 peaks at s = 1/sqrt(3) with value 9/(8 sqrt 3).
  EXPECT_NEAR(compute_sector_bound(2), 9.0 / (8.0 * std::sqrt(3.0)), 1e-12);
  // H = 1: g'(s) = 1/(1+s)^2 is largest at s = 0.
  EXPECT_NEAR(compute_sector_bound(1), 1.0, 1e-12);
  EXPECT_THROW((void)compute_sector_bound(0), Error);
  EXPECT_THROW((void)compute_sector_bound(kMaxHill + 1), Error);
}

TEST(Hill, SectorBoundDominatesGrid) {
  for (int h = 1; h <= kMaxHill; ++h) {
    const double xi = compute_sector_bound(h);
    for (int i = 0; i <= 4000; ++i) EXPECT_LE(hill_derivative(i * 1e-3, h), xi + 1e-12);
  }
}

TEST(Hill, ShiftedDifferenceStaysInSector) {
  // 0 <= (f(a) - f(b)) / (a - b) <= xi for the shifted nonlinearity.
  const double xi = compute_sector_bound(2);
  const double ps = 1.0 / std::sqrt(3.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 1e-9) continue;
    const double q = (hill_function(a + ps, 2) - hill_function(b + ps, 2)) / (a - b);
    EXPECT_GE(q, -1e-12);
    EXPECT_LE(q, xi + 1e-12);
  }
}
