#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace grnobs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plant data of the delayed reaction-diffusion network, already shifted to
// its equilibrium. Diagonal matrices are stored by their diagonals.
struct GrnModel {
  Eigen::VectorXd mrna_decay;       // A
  Eigen::VectorXd translation;      // B
  Eigen::VectorXd protein_decay;    // C
  Eigen::MatrixXd coupling;         // W, signed
  std::vector<Eigen::VectorXd> mrna_diffusion;     // D_k, one per axis
  std::vector<Eigen::VectorXd> protein_diffusion;  // D*_k, one per axis
  std::vector<double> half_widths;                 // L_k
  int hill = 2;
  // Basal rates q. Informational only: they cancel in shifted coordinates.
  Eigen::VectorXd basal;

  [[nodiscard]] int genes() const { return static_cast<int>(mrna_decay.size()); }
  [[nodiscard]] int spatial_dim() const { return static_cast<int>(half_widths.size()); }
};

struct DelayBounds {
  double tau_bar = 0.0;    // bound on the mRNA->protein delay
  double sigma_bar = 0.0;  // bound on the protein->mRNA delay
  double mu1 = 0.0;        // bound on d tau / dt
  double mu2 = 0.0;        // bound on d sigma / dt
};

// Output maps z_m = M m, z_p = N p.
struct MeasurementModel {
  Eigen::MatrixXd mrna_output;     // M, r_m x n
  Eigen::MatrixXd protein_output;  // N, r_p x n
};

// Diagonal slopes xi_i of the sector [0, xi_i] containing the shifted
// regulation function.
struct SectorBound {
  Eigen::VectorXd slopes;
};

struct ValidationReport {
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

[[nodiscard]] ValidationReport validate_model(const GrnModel& model,
                                              const MeasurementModel& meas,
                                              const DelayBounds& delays);

// Same checks plus the sector slopes.
[[nodiscard]] ValidationReport validate_problem(const GrnModel& model,
                                                const MeasurementModel& meas,
                                                const DelayBounds& delays,
                                                const SectorBound& sector);

struct DiffusionBound {
  Eigen::VectorXd mrna;     // diag of D_L:  sum_k D_ik / L_k^2
  Eigen::VectorXd protein;  // diag of D*_L
};

[[nodiscard]] DiffusionBound compute_diffusion_bound(const GrnModel& model);

inline constexpr int kMaxHill = 12;

// Everything the observer design needs about one network.
struct ObserverProblem {
  GrnModel model;
  MeasurementModel measurement;
  DelayBounds delays;
  SectorBound sector;
};

// Hill regulation g(s) = s^H / (1 + s^H), taken as 0 for s < 0
// (concentrations are nonnegative).
[[nodiscard]] double hill_function(double s, int hill);
[[nodiscard]] double hill_derivative(double s, int hill);

// sup_{s >= 0} g'(s), located numerically. Throws Error for H outside 1..12.
[[nodiscard]] double compute_sector_bound(int hill);

// Uniform sector slope for every gene of the model.
[[nodiscard]] SectorBound sector_from_hill(const GrnModel& model);

}  // namespace grnobs
