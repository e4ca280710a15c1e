#include "grnobs/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace grnobs {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

ConfigError::ConfigError(Kind kind, std::string path, const std::string& message)
    : Error(to_string(kind) + " error at '" + path + "': " + message),
      kind_(kind),
      path_(std::move(path)) {}

std::string to_string(ConfigError::Kind kind) {
  switch (kind) {
    case ConfigError::Kind::Parse: return "parse";
    case ConfigError::Kind::Schema: return "schema";
    case ConfigError::Kind::Dimension: return "dimension";
  }
  return "unknown";
}

SimConfig SimulationSettings::to_sim_config(const DelayBounds& bounds) const {
  SimConfig c;
  c.dt = dt;
  c.horizon = horizon;
  c.tau = tau;
  c.sigma = sigma;
  c.bounds = bounds;
  c.mrna_amplitude = mrna_amplitude;
  c.protein_amplitude = protein_amplitude;
  c.snapshot_interval = snapshot_interval;
  c.protein_operating_point = operating_point;
  return c;
}

namespace {

using Kind = ConfigError::Kind;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw ConfigError(Kind::Schema, path, what);
}

[[noreturn]] void dimension(const std::string& path, const std::string& what) {
  throw ConfigError(Kind::Dimension, path, what);
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) schema(join(path, k), "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) schema(join(path, key), "missing required key");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

VectorXd vector(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of numbers");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

bool is_nested(const json& j) { return j.is_array() && !j.empty() && j[0].is_array(); }

MatrixXd matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a nonempty array of rows");
  if (!is_nested(j)) schema(path, "expected a row-major nested array");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const VectorXd row = vector(j[static_cast<std::size_t>(r)], rp);
    if (row.size() != cols) dimension(rp, "ragged matrix rows");
    m.row(r) = row.transpose();
  }
  return m;
}

// Flat array, or a square matrix that must be diagonal.
VectorXd diagonal(const json& j, const std::string& path) {
  if (!is_nested(j)) return vector(j, path);
  const MatrixXd m = matrix(j, path);
  if (m.rows() != m.cols()) dimension(path, "expected a square diagonal matrix");
  const MatrixXd off = m - MatrixXd(m.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() != 0.0) schema(path, "matrix must be diagonal");
  return m.diagonal();
}

json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

kernels::Backend backend(const json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected \"auto\", \"serial\" or \"openmp\"");
  const auto s = j.get<std::string>();
  if (s == "auto") return kernels::Backend::Auto;
  if (s == "serial") return kernels::Backend::Serial;
  if (s == "openmp") return kernels::Backend::OpenMP;
  schema(path, "unknown backend '" + s + "'");
}

std::string backend_name(kernels::Backend b) {
  switch (b) {
    case kernels::Backend::Serial: return "serial";
    case kernels::Backend::OpenMP: return "openmp";
    case kernels::Backend::Auto: return "auto";
  }
  return "auto";
}

DelayFunction delay(const json& j, const std::string& path) {
  if (j.is_number()) return DelayFunction::constant(number(j, path));
  allow_keys(j, path, {"offset", "amplitude", "frequency"});
  DelayFunction d;
  d.offset = number(require(j, path, "offset"), join(path, "offset"));
  if (j.contains("amplitude")) d.amplitude = number(j["amplitude"], join(path, "amplitude"));
  if (j.contains("frequency")) d.frequency = number(j["frequency"], join(path, "frequency"));
  return d;
}

json to_json(const DelayFunction& d) {
  if (d.amplitude == 0.0 && d.frequency == 0.0) return d.offset;
  return json{{"offset", d.offset}, {"amplitude", d.amplitude}, {"frequency", d.frequency}};
}

std::vector<VectorXd> axes(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected one diagonal per spatial axis");
  std::vector<VectorXd> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(diagonal(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void check_len(Index got, Index want, const std::string& path) {
  if (got != want) {
    dimension(path, "has " + std::to_string(got) + " entries, expected " + std::to_string(want));
  }
}

void check_shape(const MatrixXd& m, Index rows, Index cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << "is " << m.rows() << "x" << m.cols() << ", expected " << rows << "x" << cols;
    dimension(path, os.str());
  }
}

void parse_model(const json& j, RunConfig& c) {
  const std::string p = "model";
  allow_keys(j, p, {"A", "B", "C", "W", "D", "D_star", "L", "hill", "q"});
  auto& m = c.problem.model;
  m.mrna_decay = diagonal(require(j, p, "A"), "model.A");
  const Index n = m.mrna_decay.size();
  if (n < 1) dimension("model.A", "needs at least one gene");
  m.translation = diagonal(require(j, p, "B"), "model.B");
  check_len(m.translation.size(), n, "model.B");
  m.protein_decay = diagonal(require(j, p, "C"), "model.C");
  check_len(m.protein_decay.size(), n, "model.C");
  m.coupling = matrix(require(j, p, "W"), "model.W");
  check_shape(m.coupling, n, n, "model.W");
  m.mrna_diffusion = axes(require(j, p, "D"), "model.D");
  m.protein_diffusion = axes(require(j, p, "D_star"), "model.D_star");
  const VectorXd half = vector(require(j, p, "L"), "model.L");
  m.half_widths.assign(half.data(), half.data() + half.size());
  const auto l = static_cast<Index>(m.half_widths.size());
  if (l < 1) dimension("model.L", "needs at least one axis");
  check_len(static_cast<Index>(m.mrna_diffusion.size()), l, "model.D");
  check_len(static_cast<Index>(m.protein_diffusion.size()), l, "model.D_star");
  for (Index k = 0; k < l; ++k) {
    const std::string idx = "[" + std::to_string(k) + "]";
    check_len(m.mrna_diffusion[static_cast<std::size_t>(k)].size(), n, "model.D" + idx);
    check_len(m.protein_diffusion[static_cast<std::size_t>(k)].size(), n, "model.D_star" + idx);
  }
  m.hill = j.contains("hill") ? integer(j["hill"], "model.hill") : 2;
  if (j.contains("q")) {
    m.basal = vector(j["q"], "model.q");
    check_len(m.basal.size(), n, "model.q");
  } else {
    m.basal = VectorXd();
  }
}

void parse_solver(const json& j, SolverConfig& s) {
  const std::string p = "solver";
  allow_keys(j, p,
             {"max_outer_iterations", "max_newton_iterations", "gap_tolerance", "newton_tolerance",
              "margin_target", "barrier_initial", "barrier_growth", "radius", "backend"});
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j[key], join(p, key));
  };
  auto whole = [&](const char* key, int& out) {
    if (j.contains(key)) out = integer(j[key], join(p, key));
  };
  whole("max_outer_iterations", s.max_outer_iterations);
  whole("max_newton_iterations", s.max_newton_iterations);
  num("gap_tolerance", s.gap_tolerance);
  num("newton_tolerance", s.newton_tolerance);
  num("margin_target", s.margin_target);
  num("barrier_initial", s.barrier_initial);
  num("barrier_growth", s.barrier_growth);
  num("radius", s.radius);
  if (j.contains("backend")) s.backend = backend(j["backend"], "solver.backend");
  try {
    s.validate();
  } catch (const Error& e) {
    schema(p, e.what());
  }
}

void parse_simulation(const json& j, SimulationSettings& s, Index n) {
  const std::string p = "simulation";
  allow_keys(j, p,
             {"interior_nodes", "dt", "horizon", "tau", "sigma", "mrna_amplitude",
              "protein_amplitude", "snapshot_interval", "norms_interval", "decay_fraction",
              "operating_point"});
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j[key], join(p, key));
  };
  if (j.contains("interior_nodes")) {
    s.interior_nodes = integer(j["interior_nodes"], "simulation.interior_nodes");
  }
  num("dt", s.dt);
  num("horizon", s.horizon);
  num("mrna_amplitude", s.mrna_amplitude);
  num("protein_amplitude", s.protein_amplitude);
  num("snapshot_interval", s.snapshot_interval);
  num("norms_interval", s.norms_interval);
  num("decay_fraction", s.decay_fraction);
  if (j.contains("tau")) s.tau = delay(j["tau"], "simulation.tau");
  if (j.contains("sigma")) s.sigma = delay(j["sigma"], "simulation.sigma");
  if (j.contains("operating_point")) {
    s.operating_point = vector(j["operating_point"], "simulation.operating_point");
    check_len(s.operating_point.size(), n, "simulation.operating_point");
  }
  if (s.interior_nodes < 3) schema("simulation.interior_nodes", "must be at least 3");
  for (const auto& [key, v] : {std::pair<const char*, double>{"dt", s.dt},
                               {"horizon", s.horizon},
                               {"snapshot_interval", s.snapshot_interval},
                               {"norms_interval", s.norms_interval},
                               {"decay_fraction", s.decay_fraction}}) {
    if (!(v > 0.0)) schema(join(p, key), "must be positive");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(Kind::Parse, "", e.what());
  }
  allow_keys(doc, "",
             {"model", "measurement", "delays", "sector", "solver", "simulation", "gains",
              "assignment", "output_dir"});

  RunConfig c;
  parse_model(require(doc, "", "model"), c);
  auto& m = c.problem.model;
  const Index n = m.genes();

  {
    const auto& j = require(doc, "", "measurement");
    allow_keys(j, "measurement", {"M", "N"});
    c.problem.measurement.mrna_output = matrix(require(j, "measurement", "M"), "measurement.M");
    c.problem.measurement.protein_output = matrix(require(j, "measurement", "N"), "measurement.N");
    if (c.problem.measurement.mrna_output.cols() != n) {
      dimension("measurement.M", "must have one column per gene");
    }
    if (c.problem.measurement.protein_output.cols() != n) {
      dimension("measurement.N", "must have one column per gene");
    }
  }
  {
    const auto& j = require(doc, "", "delays");
    allow_keys(j, "delays", {"tau_bar", "sigma_bar", "mu1", "mu2"});
    auto& d = c.problem.delays;
    d.tau_bar = number(require(j, "delays", "tau_bar"), "delays.tau_bar");
    d.sigma_bar = number(require(j, "delays", "sigma_bar"), "delays.sigma_bar");
    d.mu1 = number(require(j, "delays", "mu1"), "delays.mu1");
    d.mu2 = number(require(j, "delays", "mu2"), "delays.mu2");
    if (d.tau_bar < 0.0) schema("delays.tau_bar", "must be nonnegative");
    if (d.sigma_bar < 0.0) schema("delays.sigma_bar", "must be nonnegative");
  }
  if (doc.contains("sector")) {
    const auto& j = doc["sector"];
    allow_keys(j, "sector", {"K"});
    c.problem.sector.slopes = diagonal(require(j, "sector", "K"), "sector.K");
    check_len(c.problem.sector.slopes.size(), n, "sector.K");
    c.sector_given = true;
  } else {
    if (m.hill < 1 || m.hill > kMaxHill) schema("model.hill", "must be in 1.." + std::to_string(kMaxHill));
    c.problem.sector = sector_from_hill(m);
  }

  const auto report = validate_problem(m, c.problem.measurement, c.problem.delays, c.problem.sector);
  if (!report.ok()) schema("model", report.summary());

  if (doc.contains("solver")) parse_solver(doc["solver"], c.solver);
  if (doc.contains("simulation")) parse_simulation(doc["simulation"], c.simulation, n);

  if (doc.contains("gains")) {
    const auto& j = doc["gains"];
    allow_keys(j, "gains", {"K1", "K2"});
    GainSettings g;
    g.mrna_gain = matrix(require(j, "gains", "K1"), "gains.K1");
    g.protein_gain = matrix(require(j, "gains", "K2"), "gains.K2");
    check_shape(g.mrna_gain, n, c.problem.measurement.mrna_output.rows(), "gains.K1");
    check_shape(g.protein_gain, n, c.problem.measurement.protein_output.rows(), "gains.K2");
    c.gains = std::move(g);
  }

  if (doc.contains("assignment")) {
    const auto& j = doc["assignment"];
    AssignmentSettings a;
    if (j.is_string()) {
      if (j.get<std::string>() != "identity") schema("assignment", "expected \"identity\" or an object");
      a.identity = true;
    } else {
      if (!j.is_object()) schema("assignment", "expected \"identity\" or an object");
      const DecisionLayout layout(static_cast<int>(n),
                                  static_cast<int>(c.problem.measurement.mrna_output.rows()),
                                  static_cast<int>(c.problem.measurement.protein_output.rows()));
      for (const auto& [key, value] : j.items()) {
        const std::string path = join("assignment", key);
        const auto slot = layout.find(key);
        if (!slot) schema(path, "unknown decision slot");
        const auto& info = layout.slot(*slot);
        MatrixXd mat;
        if (info.kind == SlotKind::Diagonal) {
          mat = diagonal(value, path).asDiagonal();
        } else {
          mat = matrix(value, path);
        }
        check_shape(mat, info.rows, info.cols, path);
        a.slots.emplace(key, std::move(mat));
      }
    }
    c.assignment = std::move(a);
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) schema("output_dir", "expected a string");
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::Parse, "", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  const auto& m = c.problem.model;
  json model{{"A", to_json(m.mrna_decay)},
             {"B", to_json(m.translation)},
             {"C", to_json(m.protein_decay)},
             {"W", to_json(m.coupling)},
             {"L", m.half_widths},
             {"hill", m.hill}};
  json d = json::array(), ds = json::array();
  for (const auto& v : m.mrna_diffusion) d.push_back(to_json(v));
  for (const auto& v : m.protein_diffusion) ds.push_back(to_json(v));
  model["D"] = d;
  model["D_star"] = ds;
  if (m.basal.size() > 0) model["q"] = to_json(m.basal);

  json doc{{"model", model},
           {"measurement",
            {{"M", to_json(c.problem.measurement.mrna_output)},
             {"N", to_json(c.problem.measurement.protein_output)}}},
           {"delays",
            {{"tau_bar", c.problem.delays.tau_bar},
             {"sigma_bar", c.problem.delays.sigma_bar},
             {"mu1", c.problem.delays.mu1},
             {"mu2", c.problem.delays.mu2}}}};
  if (c.sector_given) doc["sector"] = {{"K", to_json(c.problem.sector.slopes)}};

  const auto& s = c.solver;
  doc["solver"] = {{"max_outer_iterations", s.max_outer_iterations},
                   {"max_newton_iterations", s.max_newton_iterations},
                   {"gap_tolerance", s.gap_tolerance},
                   {"newton_tolerance", s.newton_tolerance},
                   {"margin_target", s.margin_target},
                   {"barrier_initial", s.barrier_initial},
                   {"barrier_growth", s.barrier_growth},
                   {"radius", s.radius},
                   {"backend", backend_name(s.backend)}};

  const auto& sim = c.simulation;
  json simj{{"interior_nodes", sim.interior_nodes},
            {"dt", sim.dt},
            {"horizon", sim.horizon},
            {"tau", to_json(sim.tau)},
            {"sigma", to_json(sim.sigma)},
            {"mrna_amplitude", sim.mrna_amplitude},
            {"protein_amplitude", sim.protein_amplitude},
            {"snapshot_interval", sim.snapshot_interval},
            {"norms_interval", sim.norms_interval},
            {"decay_fraction", sim.decay_fraction}};
  if (sim.operating_point.size() > 0) simj["operating_point"] = to_json(sim.operating_point);
  doc["simulation"] = simj;

  if (c.gains) {
    doc["gains"] = {{"K1", to_json(c.gains->mrna_gain)}, {"K2", to_json(c.gains->protein_gain)}};
  }
  if (c.assignment) {
    if (c.assignment->identity) {
      doc["assignment"] = "identity";
    } else {
      json a = json::object();
      for (const auto& [k, v] : c.assignment->slots) a[k] = to_json(v);
      doc["assignment"] = a;
    }
  }
  if (!c.output_dir.empty()) doc["output_dir"] = c.output_dir;
  return doc.dump(2);
}

namespace {

bool same(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool same(const DelayFunction& a, const DelayFunction& b) {
  return a.offset == b.offset && a.amplitude == b.amplitude && a.frequency == b.frequency;
}

bool same_axes(const std::vector<VectorXd>& a, const std::vector<VectorXd>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!same(a[k], b[k])) return false;
  }
  return true;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  const auto& ma = a.problem.model;
  const auto& mb = b.problem.model;
  const bool model = same(ma.mrna_decay, mb.mrna_decay) && same(ma.translation, mb.translation) &&
                     same(ma.protein_decay, mb.protein_decay) && same(ma.coupling, mb.coupling) &&
                     same_axes(ma.mrna_diffusion, mb.mrna_diffusion) &&
                     same_axes(ma.protein_diffusion, mb.protein_diffusion) &&
                     ma.half_widths == mb.half_widths && ma.hill == mb.hill &&
                     same(ma.basal, mb.basal);
  const auto& da = a.problem.delays;
  const auto& db = b.problem.delays;
  const bool problem = model &&
                       same(a.problem.measurement.mrna_output, b.problem.measurement.mrna_output) &&
                       same(a.problem.measurement.protein_output,
                            b.problem.measurement.protein_output) &&
                       da.tau_bar == db.tau_bar && da.sigma_bar == db.sigma_bar &&
                       da.mu1 == db.mu1 && da.mu2 == db.mu2 &&
                       same(a.problem.sector.slopes, b.problem.sector.slopes) &&
                       a.sector_given == b.sector_given;
  const auto& sa = a.solver;
  const auto& sb = b.solver;
  const bool solver = sa.max_outer_iterations == sb.max_outer_iterations &&
                      sa.max_newton_iterations == sb.max_newton_iterations &&
                      sa.gap_tolerance == sb.gap_tolerance &&
                      sa.newton_tolerance == sb.newton_tolerance &&
                      sa.margin_target == sb.margin_target &&
                      sa.barrier_initial == sb.barrier_initial &&
                      sa.barrier_growth == sb.barrier_growth && sa.radius == sb.radius &&
                      sa.backend == sb.backend;
  const auto& xa = a.simulation;
  const auto& xb = b.simulation;
  const bool sim = xa.interior_nodes == xb.interior_nodes && xa.dt == xb.dt &&
                   xa.horizon == xb.horizon && same(xa.tau, xb.tau) && same(xa.sigma, xb.sigma) &&
                   xa.mrna_amplitude == xb.mrna_amplitude &&
                   xa.protein_amplitude == xb.protein_amplitude &&
                   xa.snapshot_interval == xb.snapshot_interval &&
                   xa.norms_interval == xb.norms_interval &&
                   xa.decay_fraction == xb.decay_fraction &&
                   same(xa.operating_point, xb.operating_point);
  bool gains = a.gains.has_value() == b.gains.has_value();
  if (gains && a.gains) {
    gains = same(a.gains->mrna_gain, b.gains->mrna_gain) &&
            same(a.gains->protein_gain, b.gains->protein_gain);
  }
  bool assignment = a.assignment.has_value() == b.assignment.has_value();
  if (assignment && a.assignment) {
    assignment = a.assignment->identity == b.assignment->identity &&
                 a.assignment->slots.size() == b.assignment->slots.size();
    for (const auto& [k, v] : a.assignment->slots) {
      const auto it = b.assignment->slots.find(k);
      assignment = assignment && it != b.assignment->slots.end() && same(v, it->second);
    }
  }
  return problem && solver && sim && gains && assignment && a.output_dir == b.output_dir;
}

VectorXd build_assignment(const AssignmentSettings& settings, const DecisionLayout& layout) {
  if (settings.identity) return layout.identity_assignment();
  VectorXd x = VectorXd::Zero(layout.size());
  for (const auto& [name, value] : settings.slots) {
    const auto slot = layout.find(name);
    if (!slot) throw ConfigError(Kind::Schema, "assignment." + name, "unknown decision slot");
    layout.pack(*slot, value, x);
  }
  return x;
}

}  // namespace grnobs
