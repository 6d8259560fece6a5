#include <benchmark/benchmark.h>

#include "agmon/assemble.hpp"

using namespace agmon;

namespace {

ScalarField well(int n) {
    return ScalarField(n, [](const Point& x) { return cplx(2.0 - 3.0 / (1.0 + x.squaredNorm())); });
}

void BM_SchrodingerWell1D(benchmark::State& state) {
    const MatrixField phi = MatrixField::scalar_times_identity(well(1), 1);
    const Grid grid{1, 40.0, static_cast<int>(state.range(0)), 1};
    for (auto _ : state) benchmark::DoNotOptimize(assemble_schrodinger(MetricField::identity(1), VectorField::zero(1), phi, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SchrodingerWell1D)->Arg(1001)->Arg(4001)->Arg(16001)->Unit(benchmark::kMillisecond);

void BM_MagneticSchrodinger2D(benchmark::State& state) {
    const VectorField rot(2, [](const Point& x) { return RVector((RVector(2) << -0.3 * x(1), 0.3 * x(0)).finished() / japanese_bracket(x)); });
    const MatrixField phi = MatrixField::scalar_times_identity(well(2), 2);
    const Grid grid{2, 12.0, static_cast<int>(state.range(0)), 2};
    for (auto _ : state) benchmark::DoNotOptimize(assemble_schrodinger(MetricField::identity(2), rot, phi, grid));
}
BENCHMARK(BM_MagneticSchrodinger2D)->Arg(49)->Arg(97)->Unit(benchmark::kMillisecond);

void BM_Dirac3D(benchmark::State& state) {
    const Grid grid{3, 4.0, static_cast<int>(state.range(0)), 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_dirac(MetricField::identity(3), VectorField::zero(3), well(3), PhysicalConstants::natural(),
                                                dirac_basis_standard(), grid));
}
BENCHMARK(BM_Dirac3D)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_MoisilTheodorescu3D(benchmark::State& state) {
    const VectorField a(3, [](const Point&) { return RVector(RVector::Ones(3)); });
    const auto phi = [](const Point&) { return 20.0 * Quaternion::basis(1); };
    const Grid grid{3, 10.0, static_cast<int>(state.range(0)), 4};
    for (auto _ : state) benchmark::DoNotOptimize(assemble_mt(a, phi, grid));
}
BENCHMARK(BM_MoisilTheodorescu3D)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

}  // namespace
