#include "grnobs/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace grnobs {

using Eigen::Index;
using Eigen::MatrixXd;

bool DecaySummary::decayed() const {
  return final_mrna <= fraction * initial_mrna && final_protein <= fraction * initial_protein;
}

DecaySummary summarize_decay(const Trajectory& trajectory, double fraction) {
  if (trajectory.times.empty()) throw Error("trajectory has no samples");
  DecaySummary d;
  d.fraction = fraction;
  d.initial_mrna = trajectory.error_mrna_norm.front();
  d.initial_protein = trajectory.error_protein_norm.front();
  d.final_mrna = trajectory.error_mrna_norm.back();
  d.final_protein = trajectory.error_protein_norm.back();
  return d;
}

std::string format_matrix(const MatrixXd& m, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits);
  for (Index r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << "]\n";
  }
  return os.str();
}

void write_report_text(std::ostream& out, const RunReport& report) {
  out << std::setprecision(6);
  out << "command: " << report.command << "\n";
  if (report.status) out << "status: " << to_string(*report.status) << "\n";
  if (report.margin) out << "margin: " << *report.margin << "\n";
  if (!report.margins.empty()) {
    double worst = report.margins.front().margin;
    std::string name = report.margins.front().name;
    for (const auto& m : report.margins) {
      if (m.margin < worst) {
        worst = m.margin;
        name = m.name;
      }
    }
    out << (report.command == "oracles" ? "min slack: " : "min constraint margin: ") << worst << " (" << name << ")\n";
  }
  if (report.mrna_gain) {
    out << "K1 (" << report.mrna_gain->rows() << "x" << report.mrna_gain->cols() << "):\n"
        << format_matrix(*report.mrna_gain);
  }
  if (report.protein_gain) {
    out << "K2 (" << report.protein_gain->rows() << "x" << report.protein_gain->cols() << "):\n"
        << format_matrix(*report.protein_gain);
  }
  if (report.decay) {
    const auto& d = *report.decay;
    out << "error norm mRNA: " << d.initial_mrna << " -> " << d.final_mrna << "\n";
    out << "error norm protein: " << d.initial_protein << " -> " << d.final_protein << "\n";
    out << "decay below " << d.fraction << " of initial: " << (d.decayed() ? "yes" : "no") << "\n";
  }
  for (const auto& note : report.notes) out << note << "\n";
}

void write_margins_csv(std::ostream& out, const std::vector<ConstraintMargin>& margins) {
  out << "constraint,margin\n" << std::setprecision(17);
  for (const auto& m : margins) out << m.name << "," << m.margin << "\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const auto& grid = trajectory.grid;
  const Index genes =
      trajectory.snapshots.empty() ? 0 : trajectory.snapshots.front().plant_mrna.rows();
  out << "t,x";
  for (const char* field : {"m_bar", "p_bar", "m_hat", "p_hat"}) {
    if (genes == 1) {
      out << "," << field;
    } else {
      for (Index i = 0; i < genes; ++i) out << "," << field << "_" << (i + 1);
    }
  }
  out << "\n" << std::setprecision(17);
  for (const auto& s : trajectory.snapshots) {
    for (int j = 0; j < grid.nodes(); ++j) {
      out << s.t << "," << grid.node(j);
      for (const MatrixXd* f : {&s.plant_mrna, &s.plant_protein, &s.observer_mrna, &s.observer_protein}) {
        for (Index i = 0; i < genes; ++i) out << "," << (*f)(i, j);
      }
      out << "\n";
    }
  }
}

void write_norms_csv(std::ostream& out, const Trajectory& trajectory, double interval) {
  out << "t,err_m,err_p\n" << std::setprecision(17);
  const auto& t = trajectory.times;
  if (t.empty()) return;
  const double dt = t.size() > 1 ? t[1] - t[0] : 1.0;
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval / dt)));
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k % stride != 0 && k + 1 != t.size()) continue;
    out << t[k] << "," << trajectory.error_mrna_norm[k] << "," << trajectory.error_protein_norm[k]
        << "\n";
  }
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void emit_report(const std::filesystem::path& dir, const RunReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "report.txt", [&](std::ostream& o) { write_report_text(o, report); });
  write_file(dir / "margins.csv", [&](std::ostream& o) { write_margins_csv(o, report.margins); });
  if (report.trajectory) {
    write_file(dir / "trajectory.csv",
               [&](std::ostream& o) { write_trajectory_csv(o, *report.trajectory); });
    write_file(dir / "norms.csv", [&](std::ostream& o) {
      write_norms_csv(o, *report.trajectory, report.norms_interval);
    });
  }
}

}  // namespace grnobs
