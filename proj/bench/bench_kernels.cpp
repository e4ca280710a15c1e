// Serial reference vs OpenMP variant of each kernel, plus one solver run per backend.

#include <random>

#include <benchmark/benchmark.h>

#include "grnobs/kernels.hpp"
#include "grnobs/sdp_solver.hpp"

using namespace grnobs;
using namespace grnobs::kernels;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd noise(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return MatrixXd::NullaryExpr(r, c, [&] { return u(rng); });
}

template <bool Parallel>
void diffusion(benchmark::State& state) {
  const Eigen::Index genes = 3, nodes = state.range(0);
  const MatrixXd u = noise(genes, nodes, 1), src = noise(genes, nodes, 2);
  const VectorXd d = VectorXd::Constant(genes, 0.1), a = VectorXd::Constant(genes, 0.3);
  MatrixXd out(genes, nodes);
  for (auto _ : state) {
    if constexpr (Parallel) diffusion_reaction_parallel(u, d, a, 1e4, src, out);
    else diffusion_reaction_serial(u, d, a, 1e4, src, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * genes * nodes);
}

template <bool Parallel>
void hill(benchmark::State& state) {
  const MatrixXd y = noise(3, state.range(0), 3);
  const VectorXd op = VectorXd::Constant(3, 0.577);
  MatrixXd out(y.rows(), y.cols());
  for (auto _ : state) {
    if constexpr (Parallel) shifted_hill_parallel(y, op, 2, out);
    else shifted_hill_serial(y, op, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * y.size());
}

template <bool Parallel>
void barrier(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0)), m = 200;
  std::vector<int> coords(m);
  std::vector<Eigen::SparseMatrix<double>> coeffs;
  for (int k = 0; k < m; ++k) {
    coords[k] = k;
    const MatrixXd g = noise(dim, dim, 10 + k);
    MatrixXd s = 0.5 * (g + g.transpose());
    s = s.unaryExpr([](double v) { return std::abs(v) > 0.8 ? v : 0.0; });
    coeffs.push_back(s.sparseView());
  }
  const MatrixXd g = noise(dim, dim, 5);
  const MatrixXd s_inv = (g * g.transpose() + MatrixXd::Identity(dim, dim)).inverse();
  const BarrierBlockView view{&coords, &coeffs};
  for (auto _ : state) {
    auto r = Parallel ? barrier_block_parallel(view, s_inv) : barrier_block_serial(view, s_inv);
    benchmark::DoNotOptimize(r.hessian.data());
  }
}

LmiSystem small_system() {
  // Example 2 data.
  ObserverProblem p;
  p.model.mrna_decay = VectorXd::Constant(1, 0.2);
  p.model.translation = VectorXd::Constant(1, 1.0);
  p.model.protein_decay = VectorXd::Constant(1, 0.3);
  p.model.coupling = MatrixXd::Constant(1, 1, -0.5);
  p.model.mrna_diffusion = {VectorXd::Constant(1, 0.1)};
  p.model.protein_diffusion = {VectorXd::Constant(1, 0.2)};
  p.model.half_widths = {1.0};
  p.measurement = {MatrixXd::Zero(1, 1), MatrixXd::Constant(1, 1, 0.7)};
  p.delays = {1.0, 1.0, 2.0, 2.0};
  p.sector.slopes = VectorXd::Constant(1, 0.65);
  return assemble_lmi_system(p);
}

template <Backend B>
void solve(benchmark::State& state) {
  const auto sys = small_system();
  SolverConfig cfg;
  cfg.backend = B;
  for (auto _ : state) benchmark::DoNotOptimize(solve_margin(sys, cfg).margin);
}

}  // namespace

BENCHMARK(diffusion<false>)->Arg(100)->Arg(10000)->Arg(200000);
BENCHMARK(diffusion<true>)->Arg(100)->Arg(10000)->Arg(200000);
BENCHMARK(hill<false>)->Arg(100)->Arg(100000);
BENCHMARK(hill<true>)->Arg(100)->Arg(100000);
BENCHMARK(barrier<false>)->Arg(14)->Arg(42);
BENCHMARK(barrier<true>)->Arg(14)->Arg(42);
BENCHMARK(solve<Backend::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(solve<Backend::OpenMP>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
