#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grnobs/lmi_synthesis.hpp"
#include "grnobs/rd_simulator.hpp"
#include "grnobs/sdp_solver.hpp"

namespace grnobs {

struct DecaySummary {
  double initial_mrna = 0.0, initial_protein = 0.0;
  double final_mrna = 0.0, final_protein = 0.0;
  double fraction = 0.01;
  [[nodiscard]] bool decayed() const;
};

[[nodiscard]] DecaySummary summarize_decay(const Trajectory& trajectory, double fraction);

struct RunReport {
  std::string command;
  std::optional<SolveStatus> status;
  std::optional<double> margin;  // solver margin t
  std::vector<ConstraintMargin> margins;
  std::optional<Eigen::MatrixXd> mrna_gain, protein_gain;
  const Trajectory* trajectory = nullptr;
  double norms_interval = 0.01;
  std::optional<DecaySummary> decay;
  std::vector<std::string> notes;
};

// Matrix rows in brackets with `digits` significant digits.
[[nodiscard]] std::string format_matrix(const Eigen::MatrixXd& m, int digits = 6);

void write_report_text(std::ostream& out, const RunReport& report);
void write_margins_csv(std::ostream& out, const std::vector<ConstraintMargin>& margins);
// One row per stored snapshot and grid node: t, x, plant and observer fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
// Per-step norms thinned to rows roughly `interval` apart; the first row is t = 0.
void write_norms_csv(std::ostream& out, const Trajectory& trajectory, double interval);

// Writes report.txt, margins.csv and, when a trajectory is attached,
// trajectory.csv and norms.csv into `dir` (created if needed). Throws Error
// on I/O failure.
void emit_report(const std::filesystem::path& dir, const RunReport& report);

}  // namespace grnobs
