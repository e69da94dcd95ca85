#include <benchmark/benchmark.h>

#include "pbed/cases.hpp"
#include "pbed/library.hpp"
#include "pbed/selector.hpp"
#include "pbed/solver.hpp"

namespace {

using namespace pbed;

DensityField small_breakage_field() {
    CaseSpec spec = find_case("e").spec;
    return simulate(spec);
}

void BM_AggBirthConvolution(benchmark::State& state) {
    const auto j = static_cast<std::size_t>(state.range(0));
    InternalGrid xg = InternalGrid::uniform(0.01, 0.01, j);
    TemporalGrid tg = TemporalGrid::uniform(0.0, 0.1, 5);
    Eigen::MatrixXd v(j, 5);
    for (std::size_t i = 0; i < j; ++i)
        for (int m = 0; m < 5; ++m) v(static_cast<Eigen::Index>(i), m) = std::exp(-xg[i]);
    DensityField field(xg, tg, v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(agg_birth_convolution(field, 0));
    }
}
BENCHMARK(BM_AggBirthConvolution)->Arg(200)->Arg(500)->Arg(1000);

void BM_FixedPivotBreakage(benchmark::State& state) {
    CaseSpec spec = find_case("e").spec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_breakage_aggregation(spec));
    }
}
BENCHMARK(BM_FixedPivotBreakage);

void BM_SweepBreakageLibrary(benchmark::State& state) {
    const DensityField field = small_breakage_field();
    const DerivativeVector ndot = time_derivative(field);
    const RowMask mask = subsample_rows(field.flat_size(), 1.0, 0);
    const BasisCatalog catalog = BasisCatalog::standard();
    CombinationPlan plan = CombinationPlan::standard();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_solutions(field, ndot, plan, catalog, mask));
    }
}
BENCHMARK(BM_SweepBreakageLibrary);

}  // namespace

BENCHMARK_MAIN();
