#include "grnobs/grn_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grnobs {

namespace {

void check_positive(const Eigen::VectorXd& v, const std::string& what,
                    std::vector<std::string>& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << what << " must be positive (entry " << i << " = " << v[i] << ")";
      out.push_back(os.str());
    }
  }
}

void check_size(Eigen::Index got, Eigen::Index want, const std::string& what,
                std::vector<std::string>& out) {
  if (got != want) {
    std::ostringstream os;
    os << "dimension mismatch: " << what << " has " << got << ", expected " << want;
    out.push_back(os.str());
  }
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok()) return "pass";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate_model(const GrnModel& model, const MeasurementModel& meas,
                                const DelayBounds& delays) {
  ValidationReport report;
  auto& v = report.violations;
  const Eigen::Index n = model.mrna_decay.size();
  if (n < 1) v.emplace_back("dimension mismatch: model has no genes");

  check_size(model.translation.size(), n, "translation rates B", v);
  check_size(model.protein_decay.size(), n, "protein decay rates C", v);
  check_size(model.coupling.rows(), n, "coupling W rows", v);
  check_size(model.coupling.cols(), n, "coupling W columns", v);
  if (model.basal.size() != 0) check_size(model.basal.size(), n, "basal rates q", v);

  check_positive(model.mrna_decay, "degradation rate", v);
  check_positive(model.protein_decay, "degradation rate", v);
  check_positive(model.translation, "translation rate", v);

  const auto l = model.half_widths.size();
  if (l == 0) v.emplace_back("dimension mismatch: spatial dimension must be at least 1");
  check_size(static_cast<Eigen::Index>(model.mrna_diffusion.size()),
             static_cast<Eigen::Index>(l), "mRNA diffusion axis count", v);
  check_size(static_cast<Eigen::Index>(model.protein_diffusion.size()),
             static_cast<Eigen::Index>(l), "protein diffusion axis count", v);
  for (const auto& d : model.mrna_diffusion) {
    check_size(d.size(), n, "mRNA diffusion diagonal", v);
    check_positive(d, "diffusion rate", v);
  }
  for (const auto& d : model.protein_diffusion) {
    check_size(d.size(), n, "protein diffusion diagonal", v);
    check_positive(d, "diffusion rate", v);
  }
  for (double L : model.half_widths) {
    if (!(L > 0.0)) v.emplace_back("domain half-width must be positive");
  }
  if (model.hill < 1 || model.hill > kMaxHill) {
    v.emplace_back("Hill coefficient must be an integer in 1.." + std::to_string(kMaxHill));
  }

  check_size(meas.mrna_output.cols(), n, "mRNA output map M columns", v);
  check_size(meas.protein_output.cols(), n, "protein output map N columns", v);
  if (meas.mrna_output.rows() < 1 || meas.protein_output.rows() < 1) {
    v.emplace_back("dimension mismatch: output maps need at least one row");
  }

  if (!(delays.tau_bar >= 0.0)) v.emplace_back("delay bound tau_bar must be nonnegative");
  if (!(delays.sigma_bar >= 0.0)) v.emplace_back("delay bound sigma_bar must be nonnegative");
  if (!std::isfinite(delays.mu1) || !std::isfinite(delays.mu2)) {
    v.emplace_back("delay rate bounds must be finite");
  }
  return report;
}

ValidationReport validate_problem(const GrnModel& model, const MeasurementModel& meas,
                                  const DelayBounds& delays, const SectorBound& sector) {
  auto report = validate_model(model, meas, delays);
  check_size(sector.slopes.size(), model.mrna_decay.size(), "sector slopes K", report.violations);
  check_positive(sector.slopes, "sector slope", report.violations);
  return report;
}

DiffusionBound compute_diffusion_bound(const GrnModel& model) {
  const Eigen::Index n = model.genes();
  DiffusionBound out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (std::size_t k = 0; k < model.half_widths.size(); ++k) {
    const double inv_l2 = 1.0 / (model.half_widths[k] * model.half_widths[k]);
    out.mrna += model.mrna_diffusion[k] * inv_l2;
    out.protein += model.protein_diffusion[k] * inv_l2;
  }
  return out;
}

namespace {

double integer_power(double s, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= s;
  return out;
}

}  // namespace

double hill_function(double s, int hill) {
  if (s <= 0.0) return 0.0;
  const double p = integer_power(s, hill);
  return p / (1.0 + p);
}

double hill_derivative(double s, int hill) {
  if (s < 0.0) return 0.0;
  if (s == 0.0) return hill == 1 ? 1.0 : 0.0;
  const double p = integer_power(s, hill);
  const double denom = 1.0 + p;
  return hill * integer_power(s, hill - 1) / (denom * denom);
}

double compute_sector_bound(int hill) {
  if (hill < 1 || hill > kMaxHill) {
    throw Error("Hill coefficient must be an integer in 1.." + std::to_string(kMaxHill));
  }
  // g' is unimodal on [0, inf) and its peak lies below s = 2 for every H >= 1.
  constexpr int kGrid = 400;
  constexpr double kUpper = 4.0;
  const double step = kUpper / kGrid;
  int best = 0;
  for (int i = 1; i <= kGrid; ++i) {
    if (hill_derivative(i * step, hill) > hill_derivative(best * step, hill)) best = i;
  }
  double lo = std::max(0.0, (best - 1) * step);
  double hi = (best + 1) * step;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = hill_derivative(x1, hill);
  double f2 = hill_derivative(x2, hill);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = hill_derivative(x2, hill);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = hill_derivative(x1, hill);
    }
  }
  const double interior = hill_derivative(0.5 * (lo + hi), hill);
  return std::max({interior, hill_derivative(0.0, hill), f1, f2});
}

SectorBound sector_from_hill(const GrnModel& model) {
  return SectorBound{Eigen::VectorXd::Constant(model.genes(), compute_sector_bound(model.hill))};
}

}  // namespace grnobs
