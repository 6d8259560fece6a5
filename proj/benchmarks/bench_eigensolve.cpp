#include <benchmark/benchmark.h>

#include "agmon/assemble.hpp"
#include "agmon/decay.hpp"
#include "agmon/eigensolve.hpp"

using namespace agmon;

namespace {

SparseMatrix well_operator(int points) {
    const MatrixField phi(1, 1, [](const Point& x) { return CMatrix::Constant(1, 1, 2.0 - 3.0 / (1.0 + x.squaredNorm())); }, true);
    return assemble_schrodinger(MetricField::identity(1), VectorField::zero(1), phi, Grid{1, 40.0, points, 1}).matrix;
}

void BM_GapEigenpairsWell(benchmark::State& state) {
    const SparseMatrix a = well_operator(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gap_eigenpairs(a, GapQuery{-1.0, 1.95}));
}
BENCHMARK(BM_GapEigenpairsWell)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_CountBelow(benchmark::State& state) {
    const SparseMatrix a = well_operator(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_below(a, 1.0));
}
BENCHMARK(BM_CountBelow)->Arg(4001)->Arg(16001)->Unit(benchmark::kMillisecond);

void BM_RefineEigenvector(benchmark::State& state) {
    const SparseMatrix a = well_operator(4001);
    GapQuery q{-1.0, 1.0};
    q.max_pairs = 1;
    const EigenPair p = gap_eigenpairs(a, q).front();
    for (auto _ : state) benchmark::DoNotOptimize(refine_eigenvector(a, p));
}
BENCHMARK(BM_RefineEigenvector)->Unit(benchmark::kMillisecond);

void BM_GapEigenpairsDirac1D(benchmark::State& state) {
    const ScalarField attract(1, [](const Point& x) { return cplx(-0.8 / (1.0 + x.squaredNorm())); });
    const auto op = assemble_dirac(MetricField::identity(1), VectorField::zero(1), attract, PhysicalConstants::natural(), dirac_basis_standard(),
                                   Grid{1, 30.0, static_cast<int>(state.range(0)), 4});
    for (auto _ : state) benchmark::DoNotOptimize(gap_eigenpairs(op, GapQuery{-0.95, 0.95}));
}
BENCHMARK(BM_GapEigenpairsDirac1D)->Arg(401)->Arg(1201)->Unit(benchmark::kMillisecond);

void BM_FitDecay(benchmark::State& state) {
    const Grid grid{3, 10.0, 81, 1};
    CVector u(static_cast<Eigen::Index>(grid.nodes()));
    for (std::size_t n = 0; n < grid.nodes(); ++n) u(static_cast<Eigen::Index>(n)) = std::exp(-1.5 * grid.point(n).norm());
    for (auto _ : state) benchmark::DoNotOptimize(fit_decay_exponent(radial_profile(u, grid), default_fit_window(grid)));
}
BENCHMARK(BM_FitDecay)->Unit(benchmark::kMillisecond);

}  // namespace
