#include <benchmark/benchmark.h>

#include <vector>

#include <irrisim/design.hpp>
#include <irrisim/engine.hpp>
#include <irrisim/rng.hpp>
#include <irrisim/soil.hpp>
#include <irrisim/stats.hpp>

using namespace irrisim;

namespace {

SoilParams silt() {
    return {0.145, 0.31, 0.475, 0.0024, 0.158, 0.175, 1650.0, 0.425};
}

void BM_soil_step(benchmark::State& state) {
    const SoilParams p = silt();
    const CropParams crop{0.675, 0.2};
    const Forcing forcing{0.05, 0.0, 0.0042};
    SoilState s;
    s.soil_water = 0.26 * p.root_zone;
    for (auto _ : state) {
        s = step(s, p, crop, forcing);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_soil_step);

void BM_engine_run(benchmark::State& state) {
    Scenario sc;
    sc.soil = silt();
    sc.crop = {0.675, 0.2};
    sc.forcing = {{0, {0.0042, 0.0, 25.0}}};
    sc.wake_period = 40;
    sc.irrigation_rate = 0.0945;
    sc.initial_theta = 0.2402;
    for (auto _ : state) {
        const RunResult r = run(sc);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_engine_run)->Unit(benchmark::kMillisecond);

void BM_find_generators(benchmark::State& state) {
    for (auto _ : state) {
        const GeneratorSet gens = find_generators();
        benchmark::DoNotOptimize(gens);
    }
}
BENCHMARK(BM_find_generators);

void BM_anova_full(benchmark::State& state) {
    const auto design = build_design(find_generators());
    std::vector<std::vector<int>> levels;
    std::vector<std::string> names;
    for (const DesignRow& r : design) levels.emplace_back(r.begin(), r.end());
    for (int i = 0; i < kFactors; ++i) {
        names.emplace_back(factor_name(static_cast<Factor>(i)));
    }
    SplitMix64 rng(7);
    std::vector<double> y;
    for (const auto& r : levels) {
        y.push_back(100.0 + 8.0 * r[0] - 5.0 * r[1] + rng.next_normal());
    }
    for (auto _ : state) {
        const AnovaTable t = anova(levels, y, names);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_anova_full);

} // namespace

BENCHMARK_MAIN();
