#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"
#include "grnobs/kernels.hpp"

namespace grnobs {

// Uniform grid on [-L, L] with N interior nodes; the two boundary nodes carry
// the homogeneous Dirichlet condition.
struct Grid1D {
  double half_width = 1.0;
  int interior = 100;

  [[nodiscard]] double spacing() const { return 2.0 * half_width / (interior + 1); }
  [[nodiscard]] int nodes() const { return interior + 2; }
  // Coordinate of node j = 0 .. interior + 1 (0 and interior + 1 are boundary).
  [[nodiscard]] double node(int j) const { return -half_width + j * spacing(); }
  void validate() const;
};

// Ring of equally spaced past states with linear interpolation.
class HistoryBuffer {
 public:
  HistoryBuffer(double step, double depth, Eigen::Index state_size);

  // Appends the state at time t; t must be exactly one step after newest()
  // (the first push sets the time origin).
  void push(double t, const Eigen::VectorXd& state);

  [[nodiscard]] bool empty() const { return count_ == 0; }
  [[nodiscard]] double oldest() const;
  [[nodiscard]] double newest() const;
  [[nodiscard]] Eigen::Index state_size() const { return data_.rows(); }
  [[nodiscard]] std::size_t capacity() const { return static_cast<std::size_t>(data_.cols()); }

  // Linear interpolation at t. Throws Error when t lies outside
  // [oldest(), newest()]; the buffer never extrapolates.
  void lookup(double t, Eigen::Ref<Eigen::VectorXd> out) const;
  [[nodiscard]] Eigen::VectorXd at(double t) const;

 private:
  [[nodiscard]] double time_of(std::size_t age) const;  // age 0 = newest
  [[nodiscard]] Eigen::Index column_of(std::size_t age) const;

  double step_;
  Eigen::MatrixXd data_;
  std::size_t head_ = 0;  // column of the newest sample
  std::size_t count_ = 0;
  double newest_time_ = 0.0;
};

// tau(t) = offset + amplitude * sin(frequency * t).
struct DelayFunction {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] double max_value() const;
  [[nodiscard]] double min_value() const;
  [[nodiscard]] double max_rate() const;

  static DelayFunction constant(double value) { return {value, 0.0, 0.0}; }
};

// Initial history value of gene `gene` at time s <= 0 and position x.
using InitialCondition = std::function<double(int gene, double s, double x)>;

// amplitude * cos(pi x / (2 L)), constant in time.
[[nodiscard]] InitialCondition cosine_profile(double amplitude, double half_width);
[[nodiscard]] InitialCondition zero_profile();

struct SimConfig {
  double dt = 1e-4;
  double horizon = 50.0;
  DelayFunction tau = DelayFunction::constant(1.0);
  DelayFunction sigma = DelayFunction::constant(1.0);
  // When set, the delay functions must respect these bounds and the history
  // depth becomes max(tau_bar, sigma_bar).
  std::optional<DelayBounds> bounds;
  // Empty samplers fall back to the cosine profile for the plant (amplitudes
  // below) and zero for the observer.
  InitialCondition plant_mrna, plant_protein, observer_mrna, observer_protein;
  double mrna_amplitude = 1.0;
  double protein_amplitude = 1.0;
  // Equilibrium protein level p* at which the Hill function is linearised;
  // empty means 1/sqrt(3) (steepest point of g for H = 2) for every gene.
  Eigen::VectorXd protein_operating_point;
  // Interval between stored field snapshots; t = 0 and the final time are
  // always stored.
  double snapshot_interval = 1.0;
  kernels::Backend backend = kernels::Backend::Auto;
};

// Fields are genes x nodes, boundary columns included (always zero).
struct Snapshot {
  double t = 0.0;
  Eigen::MatrixXd plant_mrna, plant_protein;
  Eigen::MatrixXd observer_mrna, observer_protein;
  Eigen::MatrixXd error_mrna, error_protein;
};

struct Trajectory {
  Grid1D grid;
  std::vector<Snapshot> snapshots;
  // Per-step spatial L2 norms, index 0 is t = 0.
  std::vector<double> times;
  std::vector<double> error_mrna_norm;
  std::vector<double> error_protein_norm;
};

// Trapezoidal spatial L2 norm summed over genes: sqrt(sum_i int u_i^2 dx).
[[nodiscard]] double spatial_l2_norm(const Eigen::MatrixXd& field, const Grid1D& grid);

struct NormSeries {
  std::vector<double> times;
  std::vector<double> mrna;
  std::vector<double> protein;
};

// Error norms recomputed from the stored snapshots.
[[nodiscard]] NormSeries error_norms(const Trajectory& trajectory);

// Plant in shifted coordinates and the observer, integrated side by side with
// central differences in space and classical RK4 in time. Requires l = 1.
[[nodiscard]] Trajectory simulate(const GrnModel& model, const MeasurementModel& meas,
                                  const Eigen::MatrixXd& mrna_gain,
                                  const Eigen::MatrixXd& protein_gain, const Grid1D& grid,
                                  const SimConfig& config);

// Plant together with the error system in error coordinates. The observer
// fields of the result are reconstructed as plant - error.
[[nodiscard]] Trajectory simulate_error_system(const GrnModel& model,
                                               const MeasurementModel& meas,
                                               const Eigen::MatrixXd& mrna_gain,
                                               const Eigen::MatrixXd& protein_gain,
                                               const Grid1D& grid, const SimConfig& config);

// Largest admissible step: 0.9 h^2 / (2 max diffusion).
[[nodiscard]] double stable_time_step(const GrnModel& model, const Grid1D& grid);

}  // namespace grnobs
