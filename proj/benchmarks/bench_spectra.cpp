#include <benchmark/benchmark.h>

#include "agmon/spectra.hpp"

using namespace agmon;

namespace {

LimitPoint free_point(int n) {
    LimitPoint p;
    p.rho = RMatrix::Identity(n, n);
    p.magnetic = RVector::Zero(n);
    p.potential = CMatrix::Zero(1, 1);
    return p;
}

void BM_DiracScanRadialWeight(benchmark::State& state) {
    FamilyScanConfig cfg;
    cfg.kind = OperatorKind::DiracMinusLambda;
    cfg.lambda = 0.8;
    cfg.xi.points_per_axis = static_cast<int>(state.range(0));
    const LimitSet set = attach_weight_limits(LimitSet{{free_point(3)}}, make_radial_weight(0.5, 3), 6);
    std::size_t evaluations = 0;
    for (auto _ : state) evaluations += family_invertibility_scan(set, cfg).evaluations;
    state.counters["symbols/s"] = benchmark::Counter(static_cast<double>(evaluations), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_DiracScanRadialWeight)->Arg(7)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_MtFredholmCheck(benchmark::State& state) {
    LimitPoint p = free_point(3);
    p.principal = RVector::Ones(3);
    p.quaternion = 20.0 * Quaternion::basis(1);
    const LimitSet set{{p}};
    for (auto _ : state) benchmark::DoNotOptimize(mt_fredholm_check(set, XiGrid{static_cast<int>(state.range(0)), 0.0}, 1e-8));
}
BENCHMARK(BM_MtFredholmCheck)->Arg(9)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_DiracEigs(benchmark::State& state) {
    const LimitPoint p = free_point(3);
    const RVector xi = RVector::Constant(3, 0.7);
    const auto k = PhysicalConstants::natural();
    for (auto _ : state) benchmark::DoNotOptimize(dirac_eigs(p, k, xi));
}
BENCHMARK(BM_DiracEigs);

}  // namespace

BENCHMARK_MAIN();
