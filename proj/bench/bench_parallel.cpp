// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <vector>

#include "solarsched/forecast.hpp"
#include "solarsched/quantile_forest.hpp"
#include "solarsched/simulation.hpp"
#include "solarsched/synthetic.hpp"
#include "solarsched/tariff.hpp"

using namespace solarsched;

namespace {

const TrainingSet& pv_rows() {
    static const TrainingSet rows = [] {
        const auto fx = make_fixture({.site_id = "bench", .days = 61, .seed = 1});
        return training_rows(fx.data, fx.nwp, FeatureKind::pv, fx.data.start().day_start() + 24 * 60,
                             TrainingWindow{});
    }();
    return rows;
}

struct MatrixInputs {
    std::vector<SiteInput> sites;
    std::vector<TariffSchedule> tariffs;
    std::vector<StrategyKind> strategies{StrategyKind::automatic, StrategyKind::pv_persist,
                                         StrategyKind::perfect};
};

const MatrixInputs& matrix_inputs() {
    static const MatrixInputs in = [] {
        MatrixInputs m;
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto fx = make_fixture({.site_id = "s" + std::to_string(seed), .days = 14, .seed = seed});
            m.sites.push_back({std::move(fx.data), std::move(fx.nwp)});
        }
        m.tariffs = {bundled_tariff("tariff1"), bundled_tariff("tariff6")};
        return m;
    }();
    return in;
}

void BM_ForestParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(QuantileForest::train(pv_rows()));
}

void BM_ForestSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(QuantileForest::train_serial(pv_rows()));
}

void BM_MatrixParallel(benchmark::State& state) {
    const auto& in = matrix_inputs();
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_matrix(in.sites, in.tariffs, in.strategies, BatteryConfig{}));
}

void BM_MatrixSerial(benchmark::State& state) {
    const auto& in = matrix_inputs();
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_matrix_serial(in.sites, in.tariffs, in.strategies, BatteryConfig{}));
}

}  // namespace

BENCHMARK(BM_ForestParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
