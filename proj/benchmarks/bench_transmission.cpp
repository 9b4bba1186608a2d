#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "ringflux/bethe.hpp"
#include "ringflux/negf.hpp"

namespace {

ringflux::ScatteringSystem ring(std::size_t n) {
    return ringflux::ring_system(n, 1.0, 0.0, std::numbers::pi / 2, ringflux::FluxDistribution::uniform,
                                 {{0, 1.0, 1.0}, {n / 3, 1.0, 1.0}, {2 * n / 3, 1.0, 1.0}});
}

void BM_Transmission(benchmark::State& state) {
    const auto s = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ringflux::transmission(s, 0.3));
    }
}
BENCHMARK(BM_Transmission)->Arg(3)->Arg(12)->Arg(48)->Arg(192);

void BM_TransmissionTrace(benchmark::State& state) {
    const auto s = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ringflux::transmission_trace(s, 0.3));
    }
}
BENCHMARK(BM_TransmissionTrace)->Arg(3)->Arg(12)->Arg(48);

void BM_Bethe(benchmark::State& state) {
    const auto s = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ringflux::bethe_transmission(s, 0.3));
    }
}
BENCHMARK(BM_Bethe)->Arg(3)->Arg(12)->Arg(48);

void BM_Sweep(benchmark::State& state) {
    const auto s = ring(24);
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) {
        grid.push_back(-1.99 + 3.98 * i / 999.0);
    }
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ringflux::sweep(s, grid, threads));
    }
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
