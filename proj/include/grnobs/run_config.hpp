#pragma once

#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "grnobs/grn_model.hpp"
#include "grnobs/rd_simulator.hpp"
#include "grnobs/sdp_solver.hpp"

namespace grnobs {

class ConfigError : public Error {
 public:
  enum class Kind { Parse, Schema, Dimension };
  ConfigError(Kind kind, std::string path, const std::string& message);
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  Kind kind_;
  std::string path_;
};

[[nodiscard]] std::string to_string(ConfigError::Kind kind);

struct SimulationSettings {
  int interior_nodes = 100;
  double dt = 1e-4;
  double horizon = 50.0;
  DelayFunction tau = DelayFunction::constant(1.0);
  DelayFunction sigma = DelayFunction::constant(1.0);
  double mrna_amplitude = 1.0;
  double protein_amplitude = 1.0;
  double snapshot_interval = 1.0;
  double norms_interval = 0.01;  // row spacing of norms.csv
  double decay_fraction = 0.01;  // --check-decay threshold relative to t = 0
  Eigen::VectorXd operating_point;  // empty: default

  [[nodiscard]] SimConfig to_sim_config(const DelayBounds& bounds) const;
};

struct GainSettings {
  Eigen::MatrixXd mrna_gain;
  Eigen::MatrixXd protein_gain;
};

// Either the identity assignment or explicit per-slot matrices; slots that
// are not named stay zero.
struct AssignmentSettings {
  bool identity = false;
  std::map<std::string, Eigen::MatrixXd> slots;
};

struct RunConfig {
  ObserverProblem problem;
  bool sector_given = false;  // false: slopes derived from the Hill coefficient
  SolverConfig solver;
  SimulationSettings simulation;
  std::optional<GainSettings> gains;
  std::optional<AssignmentSettings> assignment;
  std::string output_dir;
};

// Throws ConfigError with the offending key path ("delays.tau_bar").
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);
// Canonical JSON text; parse_config(emit_config(c)) == c.
[[nodiscard]] std::string emit_config(const RunConfig& config);

[[nodiscard]] bool operator==(const RunConfig& a, const RunConfig& b);

// Decision vector described by an assignment section.
[[nodiscard]] Eigen::VectorXd build_assignment(const AssignmentSettings& settings,
                                               const DecisionLayout& layout);

}  // namespace grnobs
