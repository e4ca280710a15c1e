#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "grnobs/report.hpp"
#include "grnobs/run_config.hpp"

using namespace grnobs;
using nlohmann::json;

namespace {

std::string config_path(const char* name) { return std::string(GRNOBS_CONFIG_DIR) + "/" + name; }

json example2_json() {
  std::ifstream in(config_path("example2.json"));
  return json::parse(in);
}

ConfigError::Kind kind_of(const std::string& text, std::string* path = nullptr) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    if (path) *path = e.path();
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ConfigError::Kind::Parse;
}

std::string first_line(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Config, ShippedExamplesParse) {
  const auto c1 = load_config(config_path("example1.json"));
  EXPECT_EQ(c1.problem.model.genes(), 3);
  EXPECT_EQ(c1.problem.model.spatial_dim(), 3);
  EXPECT_EQ(c1.problem.measurement.mrna_output.rows(), 2);
  EXPECT_DOUBLE_EQ(c1.problem.delays.tau_bar, 3.0);
  EXPECT_TRUE(c1.sector_given);
  const auto c2 = load_config(config_path("example2.json"));
  EXPECT_EQ(c2.problem.model.genes(), 1);
  EXPECT_EQ(c2.simulation.interior_nodes, 100);
}

TEST(Config, MissingTauBarNamesPath) {
  auto j = example2_json();
  j["delays"].erase("tau_bar");
  std::string path;
  EXPECT_EQ(kind_of(j.dump(), &path), ConfigError::Kind::Schema);
  EXPECT_EQ(path, "delays.tau_bar");
}

TEST(Config, CouplingShapeIsDimensionError) {
  const auto c = load_config(config_path("example1.json"));
  auto j = json::parse(emit_config(c));
  j["model"]["W"] = json::array({json::array({0, 0, 0}), json::array({0, 0, 0})});
  std::string path;
  EXPECT_EQ(kind_of(j.dump(), &path), ConfigError::Kind::Dimension);
  EXPECT_EQ(path, "model.W");
}

TEST(Config, UnknownKeysAndBadSyntax) {
  auto j = example2_json();
  j["model"]["extra"] = 1;
  std::string path;
  EXPECT_EQ(kind_of(j.dump(), &path), ConfigError::Kind::Schema);
  EXPECT_EQ(path, "model.extra");
  EXPECT_EQ(kind_of("{\"model\": "), ConfigError::Kind::Parse);
  j = example2_json();
  j["model"]["A"] = json::array({-0.2});
  EXPECT_EQ(kind_of(j.dump()), ConfigError::Kind::Schema);
}

TEST(Config, DiagonalMayBeSquareMatrix) {
  auto j = example2_json();
  j["model"]["A"] = json::array({json::array({0.2})});
  EXPECT_DOUBLE_EQ(parse_config(j.dump()).problem.model.mrna_decay[0], 0.2);
}

TEST(Config, SectorDefaultsFromHill) {
  auto j = example2_json();
  j.erase("sector");
  const auto c = parse_config(j.dump());
  EXPECT_FALSE(c.sector_given);
  EXPECT_NEAR(c.problem.sector.slopes[0], 0.6495, 1e-3);
}

TEST(Config, RoundTrip) {
  for (const char* name : {"example1.json", "example2.json"}) {
    const auto c = load_config(config_path(name));
    EXPECT_TRUE(parse_config(emit_config(c)) == c) << name;
  }
  auto j = example2_json();
  j["simulation"]["tau"] = {{"offset", 0.5}, {"amplitude", 0.3}, {"frequency", 2.0}};
  j["gains"] = {{"K1", {{0.0}}}, {"K2", {{0.8}}}};
  j["assignment"] = "identity";
  j["solver"] = {{"backend", "serial"}, {"radius", 50.0}};
  const auto c = parse_config(j.dump());
  EXPECT_TRUE(parse_config(emit_config(c)) == c);
  EXPECT_DOUBLE_EQ(c.simulation.tau.amplitude, 0.3);
  EXPECT_EQ(c.solver.backend, kernels::Backend::Serial);
}

TEST(Config, AssignmentSlots) {
  auto j = example2_json();
  j["assignment"] = {{"P1", {{2.0}}}, {"Q2", {{1, 0}, {0, 1}}}};
  const auto c = parse_config(j.dump());
  ASSERT_TRUE(c.assignment);
  const DecisionLayout layout(1, 1, 1);
  const auto x = build_assignment(*c.assignment, layout);
  EXPECT_DOUBLE_EQ(layout.unpack(Slot::P1, x)(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(layout.unpack(Slot::Q2, x)(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(layout.unpack(Slot::R1, x)(0, 0), 0.0);
  j["assignment"] = {{"Bogus", {{1.0}}}};
  EXPECT_EQ(kind_of(j.dump()), ConfigError::Kind::Schema);
}

TEST(Report, FilesAndHeaders) {
  Trajectory traj;
  traj.grid = Grid1D{1.0, 1};
  Snapshot s;
  s.plant_mrna = s.plant_protein = s.observer_mrna = s.observer_protein = Eigen::MatrixXd::Zero(1, 3);
  s.error_mrna = s.error_protein = Eigen::MatrixXd::Zero(1, 3);
  traj.snapshots = {s};
  for (int i = 0; i <= 4; ++i) {
    traj.times.push_back(0.5 * i);
    traj.error_mrna_norm.push_back(1.0 / (i + 1));
    traj.error_protein_norm.push_back(2.0 / (i + 1));
  }
  RunReport r;
  r.command = "simulate";
  r.status = SolveStatus::Feasible;
  r.margin = 0.25;
  r.margins = {{"Phi(0,0)", 0.25}, {"Q1>0", 1.0}};
  r.mrna_gain = Eigen::MatrixXd::Constant(3, 2, 0.123456789);
  r.trajectory = &traj;
  r.norms_interval = 1.0;
  r.decay = summarize_decay(traj, 0.01);
  const auto dir = std::filesystem::temp_directory_path() / "grnobs_report_test";
  std::filesystem::remove_all(dir);
  emit_report(dir, r);
  EXPECT_EQ(first_line(dir / "margins.csv"), "constraint,margin");
  EXPECT_EQ(first_line(dir / "trajectory.csv"), "t,x,m_bar,p_bar,m_hat,p_hat");
  EXPECT_EQ(first_line(dir / "norms.csv"), "t,err_m,err_p");
  std::ifstream norms(dir / "norms.csv");
  std::string line;
  std::getline(norms, line);
  std::getline(norms, line);
  EXPECT_EQ(line, "0,1,2");
  std::ifstream text(dir / "report.txt");
  std::stringstream body;
  body << text.rdbuf();
  EXPECT_NE(body.str().find("K1 (3x2)"), std::string::npos);
  EXPECT_NE(body.str().find("0.123457"), std::string::npos);
  EXPECT_FALSE(r.decay->decayed());
  std::filesystem::remove_all(dir);
}
