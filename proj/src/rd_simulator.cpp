#include "grnobs/rd_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace grnobs {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void Grid1D::validate() const {
  if (!(half_width > 0.0)) throw Error("grid half-width must be positive");
  if (interior < 3) throw Error("grid needs at least 3 interior nodes");
}

// ---------------------------------------------------------------------------

HistoryBuffer::HistoryBuffer(double step, double depth, Index state_size) : step_(step) {
  if (!(step > 0.0)) throw Error("history step must be positive");
  if (!(depth >= 0.0)) throw Error("history depth must be nonnegative");
  const auto samples = static_cast<Index>(std::ceil(depth / step - 1e-9)) + 2;
  data_ = MatrixXd::Zero(state_size, samples);
}

void HistoryBuffer::push(double t, const VectorXd& state) {
  if (state.size() != data_.rows()) throw Error("history push: state size mismatch");
  if (count_ > 0 && std::abs(t - (newest_time_ + step_)) > 1e-6 * step_) {
    throw Error("history push: samples must be one step apart");
  }
  head_ = count_ == 0 ? 0 : (head_ + 1) % capacity();
  data_.col(static_cast<Index>(head_)) = state;
  count_ = std::min(count_ + 1, capacity());
  newest_time_ = t;
}

double HistoryBuffer::newest() const {
  if (empty()) throw Error("history buffer is empty");
  return newest_time_;
}

double HistoryBuffer::oldest() const { return time_of(count_ - 1); }

double HistoryBuffer::time_of(std::size_t age) const {
  if (empty()) throw Error("history buffer is empty");
  return newest_time_ - static_cast<double>(age) * step_;
}

Index HistoryBuffer::column_of(std::size_t age) const {
  const std::size_t cap = capacity();
  return static_cast<Index>((head_ + cap - age % cap) % cap);
}

void HistoryBuffer::lookup(double t, Eigen::Ref<VectorXd> out) const {
  if (empty()) throw Error("history buffer is empty");
  const double slack = 1e-9 * step_;
  const double lo = oldest();
  if (t > newest_time_ + slack || t < lo - slack) {
    std::ostringstream os;
    os << "history lookup at t = " << t << " outside [" << lo << ", " << newest_time_ << "]";
    throw Error(os.str());
  }
  const double age = std::clamp((newest_time_ - t) / step_, 0.0, static_cast<double>(count_ - 1));
  if (count_ == 1) {
    out = data_.col(column_of(0));
    return;
  }
  // Queries that land on a sample (up to rounding in the time arithmetic)
  // return it verbatim.
  const double nearest = std::round(age);
  if (std::abs(age - nearest) <= 1e-9) {
    out = data_.col(column_of(static_cast<std::size_t>(nearest)));
    return;
  }
  auto i = static_cast<std::size_t>(std::floor(age));
  if (i >= count_ - 1) i = count_ - 2;
  const double frac = age - static_cast<double>(i);
  out = (1.0 - frac) * data_.col(column_of(i)) + frac * data_.col(column_of(i + 1));
}

VectorXd HistoryBuffer::at(double t) const {
  VectorXd out(data_.rows());
  lookup(t, out);
  return out;
}

// ---------------------------------------------------------------------------

double DelayFunction::operator()(double t) const {
  return offset + amplitude * std::sin(frequency * t);
}
double DelayFunction::max_value() const { return offset + std::abs(amplitude); }
double DelayFunction::min_value() const { return offset - std::abs(amplitude); }
double DelayFunction::max_rate() const { return std::abs(amplitude * frequency); }

InitialCondition cosine_profile(double amplitude, double half_width) {
  const double k = std::numbers::pi / (2.0 * half_width);
  return [amplitude, k](int, double, double x) { return amplitude * std::cos(k * x); };
}

InitialCondition zero_profile() {
  return [](int, double, double) { return 0.0; };
}

double spatial_l2_norm(const MatrixXd& field, const Grid1D& grid) {
  if (field.cols() != grid.nodes()) throw Error("field does not match grid node count");
  const double h = grid.spacing();
  double acc = 0.0;
  for (Index i = 0; i < field.rows(); ++i) {
    const auto row = field.row(i);
    acc += row.squaredNorm() - 0.5 * (row(0) * row(0) + row(field.cols() - 1) * row(field.cols() - 1));
  }
  return std::sqrt(h * acc);
}

NormSeries error_norms(const Trajectory& trajectory) {
  NormSeries out;
  for (const auto& snap : trajectory.snapshots) {
    out.times.push_back(snap.t);
    out.mrna.push_back(spatial_l2_norm(snap.error_mrna, trajectory.grid));
    out.protein.push_back(spatial_l2_norm(snap.error_protein, trajectory.grid));
  }
  return out;
}

double stable_time_step(const GrnModel& model, const Grid1D& grid) {
  double dmax = 0.0;
  for (const auto& d : model.mrna_diffusion) dmax = std::max(dmax, d.maxCoeff());
  for (const auto& d : model.protein_diffusion) dmax = std::max(dmax, d.maxCoeff());
  const double h = grid.spacing();
  if (dmax <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.9 * h * h / (2.0 * dmax);
}

// ---------------------------------------------------------------------------

namespace {

enum class Mode { Observer, Error };

// Own checks: the simulator also accepts zero reaction rates (pure diffusion).
void check_inputs(const GrnModel& model, const MeasurementModel& meas, const MatrixXd& k1,
                  const MatrixXd& k2) {
  const Index n = model.genes();
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw Error("simulate: " + what);
  };
  need(n >= 1, "model has no genes");
  need(model.half_widths.size() == 1 && model.mrna_diffusion.size() == 1 &&
           model.protein_diffusion.size() == 1,
       "simulation supports one spatial dimension only");
  need(model.translation.size() == n && model.protein_decay.size() == n,
       "dimension mismatch in rate vectors");
  need(model.coupling.rows() == n && model.coupling.cols() == n, "dimension mismatch in W");
  need(model.mrna_diffusion[0].size() == n && model.protein_diffusion[0].size() == n,
       "dimension mismatch in diffusion rates");
  need(model.mrna_decay.minCoeff() >= 0.0 && model.protein_decay.minCoeff() >= 0.0 &&
           model.mrna_diffusion[0].minCoeff() >= 0.0 &&
           model.protein_diffusion[0].minCoeff() >= 0.0,
       "rates must be nonnegative");
  need(model.hill >= 1 && model.hill <= kMaxHill, "Hill coefficient out of range");
  need(meas.mrna_output.cols() == n && meas.protein_output.cols() == n,
       "dimension mismatch in output maps");
  need(k1.rows() == n && k1.cols() == meas.mrna_output.rows(), "mRNA gain has wrong shape");
  need(k2.rows() == n && k2.cols() == meas.protein_output.rows(), "protein gain has wrong shape");
}

// out = sign * m * x, or out += sign * m * x. Gene counts are tiny, so a
// plain loop beats the general product kernels.
void apply_small(const MatrixXd& m, Eigen::Ref<const MatrixXd> x, double sign, bool accumulate,
                 Eigen::Ref<MatrixXd> out) {
  const Index rows = m.rows(), inner = m.cols();
  const double* md = m.data();
  for (Index j = 0; j < x.cols(); ++j) {
    const double* xc = x.data() + j * x.outerStride();
    double* oc = out.data() + j * out.outerStride();
    for (Index i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (Index l = 0; l < inner; ++l) acc += md[l * rows + i] * xc[l];
      oc[i] = accumulate ? oc[i] + sign * acc : sign * acc;
    }
  }
}

class Integrator {
 public:
  Integrator(const GrnModel& model, const MeasurementModel& meas, const MatrixXd& k1,
             const MatrixXd& k2, const Grid1D& grid, const SimConfig& config, Mode mode)
      : model_(model), grid_(grid), config_(config), mode_(mode) {
    check_inputs(model, meas, k1, k2);
    grid.validate();
    if (!(config.dt > 0.0) || !(config.horizon > 0.0)) {
      throw Error("simulate: time step and horizon must be positive");
    }
    if (!(config.snapshot_interval > 0.0)) throw Error("simulate: snapshot interval must be positive");
    if (model.half_widths[0] != grid.half_width) {
      throw Error("simulate: grid half-width differs from the model domain");
    }
    const double bound = stable_time_step(model, grid);
    if (config.dt > bound) {
      std::ostringstream os;
      os << "simulate: time step " << config.dt << " exceeds stability bound " << bound;
      throw Error(os.str());
    }
    depth_ = std::max(config.tau.max_value(), config.sigma.max_value());
    if (config.tau.min_value() < 0.0 || config.sigma.min_value() < 0.0) {
      throw Error("simulate: delay out of range (negative delay)");
    }
    if (config.bounds) {
      if (config.tau.max_value() > config.bounds->tau_bar + 1e-12 ||
          config.sigma.max_value() > config.bounds->sigma_bar + 1e-12) {
        throw Error("simulate: delay out of range (exceeds its bound)");
      }
      depth_ = std::max(config.bounds->tau_bar, config.bounds->sigma_bar);
    }

    n_ = model.genes();
    nodes_ = grid.interior;
    block_ = n_ * nodes_;
    inv_h2_ = 1.0 / (grid.spacing() * grid.spacing());
    k1m_ = k1 * meas.mrna_output;
    k2n_ = k2 * meas.protein_output;
    b_ = model_.translation.asDiagonal();
    op_ = config.protein_operating_point.size() == 0
              ? VectorXd::Constant(n_, 1.0 / std::sqrt(3.0))
              : config.protein_operating_point;
    if (op_.size() != n_) throw Error("simulate: operating point has wrong size");

    const Index total = 4 * block_;
    y_.setZero(total);
    for (auto* v : {&k_[0], &k_[1], &k_[2], &k_[3], &stage_, &delay_tau_, &delay_sigma_}) {
      v->setZero(total);
    }
    src_.setZero(n_, nodes_);
    hill_a_.setZero(n_, nodes_);
    hill_b_.setZero(n_, nodes_);
    tmp_.setZero(n_, nodes_);
  }

  Trajectory run() {
    const double dt = config_.dt;
    const auto steps = static_cast<long>(std::llround(config_.horizon / dt));
    const auto history_steps = static_cast<long>(std::ceil(depth_ / dt - 1e-9));
    HistoryBuffer history(dt, depth_, 4 * block_);
    history_ = &history;

    for (long k = -history_steps; k <= 0; ++k) {
      fill_initial(k * dt, y_);
      history.push(k * dt, y_);
    }

    Trajectory traj;
    traj.grid = grid_;
    traj.times.reserve(static_cast<std::size_t>(steps + 1));
    traj.error_mrna_norm.reserve(static_cast<std::size_t>(steps + 1));
    traj.error_protein_norm.reserve(static_cast<std::size_t>(steps + 1));
    const long snap_every =
        std::max(1L, static_cast<long>(std::llround(config_.snapshot_interval / dt)));

    record(0.0, traj, true);
    for (long k = 0; k < steps; ++k) {
      const double t = k * dt;
      step(t, dt);
      const double t_next = (k + 1) * dt;
      history.push(t_next, y_);
      const bool snap = (k + 1) % snap_every == 0 || k + 1 == steps;
      record(t_next, traj, snap);
    }
    history_ = nullptr;
    return traj;
  }

 private:
  Eigen::Map<MatrixXd> blk(VectorXd& v, int k) {
    return {v.data() + k * block_, n_, nodes_};
  }
  Eigen::Map<const MatrixXd> blk(const VectorXd& v, int k) const {
    return {v.data() + k * block_, n_, nodes_};
  }

  void fill_initial(double s, VectorXd& y) const {
    const double L = grid_.half_width;
    const InitialCondition pm = config_.plant_mrna ? config_.plant_mrna
                                                   : cosine_profile(config_.mrna_amplitude, L);
    const InitialCondition pp = config_.plant_protein
                                    ? config_.plant_protein
                                    : cosine_profile(config_.protein_amplitude, L);
    const InitialCondition om = config_.observer_mrna ? config_.observer_mrna : zero_profile();
    const InitialCondition otp =
        config_.observer_protein ? config_.observer_protein : zero_profile();
    for (Index j = 0; j < nodes_; ++j) {
      const double x = grid_.node(static_cast<int>(j + 1));
      for (Index i = 0; i < n_; ++i) {
        const int g = static_cast<int>(i);
        const Index at = j * n_ + i;
        const double m = pm(g, s, x), p = pp(g, s, x);
        const double mh = om(g, s, x), ph = otp(g, s, x);
        y[at] = m;
        y[block_ + at] = p;
        if (mode_ == Mode::Observer) {
          y[2 * block_ + at] = mh;
          y[3 * block_ + at] = ph;
        } else {
          y[2 * block_ + at] = m - mh;
          y[3 * block_ + at] = p - ph;
        }
      }
    }
  }

  // State at `query`, taken from history or, past its newest sample, by
  // interpolating towards the current stage state.
  void delayed(double query, double t_stage, const VectorXd& y_stage, VectorXd& out) const {
    const double newest = history_->newest();
    if (query <= newest) {
      history_->lookup(query, out);
      return;
    }
    const double span = t_stage - newest;
    const double w = span > 0.0 ? std::clamp((query - newest) / span, 0.0, 1.0) : 1.0;
    history_->lookup(newest, out);
    out = (1.0 - w) * out + w * y_stage;
  }

  void rhs(double ts, const VectorXd& y, VectorXd& dy) {
    delayed(ts - config_.tau(ts), ts, y, delay_tau_);
    delayed(ts - config_.sigma(ts), ts, y, delay_sigma_);
    const auto backend = config_.backend;
    const VectorXd& dm = model_.mrna_diffusion[0];
    const VectorXd& dp = model_.protein_diffusion[0];

    kernels::shifted_hill(blk(delay_sigma_, 1), op_, model_.hill, hill_a_, backend);
    apply_small(model_.coupling, hill_a_, 1.0, false, src_);
    kernels::diffusion_reaction(blk(y, 0), dm, model_.mrna_decay, inv_h2_, src_, blk(dy, 0),
                                backend);
    apply_small(b_, blk(delay_tau_, 0), 1.0, false, src_);
    kernels::diffusion_reaction(blk(y, 1), dp, model_.protein_decay, inv_h2_, src_, blk(dy, 1),
                                backend);

    if (mode_ == Mode::Observer) {
      kernels::shifted_hill(blk(delay_sigma_, 3), op_, model_.hill, hill_b_, backend);
      tmp_ = blk(y, 0) - blk(y, 2);
      apply_small(model_.coupling, hill_b_, 1.0, false, src_);
      apply_small(k1m_, tmp_, 1.0, true, src_);
      kernels::diffusion_reaction(blk(y, 2), dm, model_.mrna_decay, inv_h2_, src_, blk(dy, 2),
                                  backend);
      tmp_ = blk(y, 1) - blk(y, 3);
      apply_small(b_, blk(delay_tau_, 2), 1.0, false, src_);
      apply_small(k2n_, tmp_, 1.0, true, src_);
      kernels::diffusion_reaction(blk(y, 3), dp, model_.protein_decay, inv_h2_, src_, blk(dy, 3),
                                  backend);
    } else {
      tmp_ = blk(delay_sigma_, 1) - blk(delay_sigma_, 3);
      kernels::shifted_hill(tmp_, op_, model_.hill, hill_b_, backend);
      tmp_ = hill_a_ - hill_b_;
      apply_small(model_.coupling, tmp_, 1.0, false, src_);
      apply_small(k1m_, blk(y, 2), -1.0, true, src_);
      kernels::diffusion_reaction(blk(y, 2), dm, model_.mrna_decay, inv_h2_, src_, blk(dy, 2),
                                  backend);
      apply_small(b_, blk(delay_tau_, 2), 1.0, false, src_);
      apply_small(k2n_, blk(y, 3), -1.0, true, src_);
      kernels::diffusion_reaction(blk(y, 3), dp, model_.protein_decay, inv_h2_, src_, blk(dy, 3),
                                  backend);
    }
  }

  void step(double t, double dt) {
    rhs(t, y_, k_[0]);
    stage_ = y_ + 0.5 * dt * k_[0];
    rhs(t + 0.5 * dt, stage_, k_[1]);
    stage_ = y_ + 0.5 * dt * k_[1];
    rhs(t + 0.5 * dt, stage_, k_[2]);
    stage_ = y_ + dt * k_[2];
    rhs(t + dt, stage_, k_[3]);
    y_ += (dt / 6.0) * (k_[0] + 2.0 * k_[1] + 2.0 * k_[2] + k_[3]);
  }

  MatrixXd padded(const MatrixXd& interior) const {
    MatrixXd out = MatrixXd::Zero(n_, nodes_ + 2);
    out.middleCols(1, nodes_) = interior;
    return out;
  }

  void record(double t, Trajectory& traj, bool snapshot) {
    MatrixXd em, ep;
    if (mode_ == Mode::Observer) {
      em = blk(y_, 0) - blk(y_, 2);
      ep = blk(y_, 1) - blk(y_, 3);
    } else {
      em = blk(y_, 2);
      ep = blk(y_, 3);
    }
    const double h = grid_.spacing();
    traj.times.push_back(t);
    traj.error_mrna_norm.push_back(std::sqrt(h * em.squaredNorm()));
    traj.error_protein_norm.push_back(std::sqrt(h * ep.squaredNorm()));
    if (!snapshot) return;

    Snapshot s;
    s.t = t;
    s.plant_mrna = padded(blk(y_, 0));
    s.plant_protein = padded(blk(y_, 1));
    s.error_mrna = padded(em);
    s.error_protein = padded(ep);
    if (mode_ == Mode::Observer) {
      s.observer_mrna = padded(blk(y_, 2));
      s.observer_protein = padded(blk(y_, 3));
    } else {
      s.observer_mrna = s.plant_mrna - s.error_mrna;
      s.observer_protein = s.plant_protein - s.error_protein;
    }
    traj.snapshots.push_back(std::move(s));
  }

  const GrnModel& model_;
  Grid1D grid_;
  const SimConfig& config_;
  Mode mode_;
  double depth_ = 0.0;
  Index n_ = 0, nodes_ = 0, block_ = 0;
  double inv_h2_ = 0.0;
  MatrixXd k1m_, k2n_, b_;
  VectorXd op_;
  const HistoryBuffer* history_ = nullptr;

  VectorXd y_, stage_, delay_tau_, delay_sigma_;
  VectorXd k_[4];
  MatrixXd src_, hill_a_, hill_b_, tmp_;
};

}  // namespace

Trajectory simulate(const GrnModel& model, const MeasurementModel& meas, const MatrixXd& mrna_gain,
                    const MatrixXd& protein_gain, const Grid1D& grid, const SimConfig& config) {
  return Integrator(model, meas, mrna_gain, protein_gain, grid, config, Mode::Observer).run();
}

Trajectory simulate_error_system(const GrnModel& model, const MeasurementModel& meas,
                                 const MatrixXd& mrna_gain, const MatrixXd& protein_gain,
                                 const Grid1D& grid, const SimConfig& config) {
  return Integrator(model, meas, mrna_gain, protein_gain, grid, config, Mode::Error).run();
}

}  // namespace grnobs
