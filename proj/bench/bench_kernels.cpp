// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick a family.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "rdp/binary_rdp.hpp"
#include "rdp/kernels.hpp"

namespace {

using namespace rdp;

const EnvelopeModel& envelope()
{
    static const EnvelopeModel env = build_envelope(256);
    return env;
}

template <auto Fn>
void bm_hbar_grid(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(n, 0.6));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>((n + 1) * (n + 1)));
}

template <auto Fn>
void bm_hull_mask(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto z = kernels::serial::hbar_grid(n, 0.6);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(n, z));
}

template <auto Fn>
void bm_envelope_batch(benchmark::State& state)
{
    const auto m = static_cast<std::size_t>(state.range(0));
    std::vector<double> D(m), P(m), out(m);
    for (std::size_t i = 0; i < m; ++i) {
        D[i] = 0.5 * static_cast<double>(i) / static_cast<double>(m);
        P[i] = 0.5 * static_cast<double>((i * 7919) % m) / static_cast<double>(m);
    }
    const auto& env = envelope();
    for (auto _ : state) {
        Fn(env, D, P, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}

template <auto Fn>
void bm_categorical(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> mass{0.1, 0.05, 0.2, 0.15, 0.3, 0.05, 0.1, 0.05};
    for (auto _ : state) benchmark::DoNotOptimize(Fn(mass, n, 42, 32));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Fn>
void bm_gaussian(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> u_sd{1.0, 0.7, 0.3}, v_sd{0.5, 0.4, 0.2}, vh_sd{0.5, 0.4, 0.2};
    std::vector<std::vector<double>> u, v, vh;
    for (auto _ : state) {
        Fn(n, 7, u_sd, v_sd, vh_sd, u, v, vh);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * 3));
}

} // namespace

BENCHMARK(bm_hbar_grid<kernels::serial::hbar_grid>)->Name("hbar_grid/serial")->Arg(128)->Arg(512);
BENCHMARK(bm_hbar_grid<kernels::omp::hbar_grid>)->Name("hbar_grid/omp")->Arg(128)->Arg(512);
BENCHMARK(bm_hull_mask<kernels::serial::hull_candidate_mask>)->Name("hull_mask/serial")->Arg(128)->Arg(512);
BENCHMARK(bm_hull_mask<kernels::omp::hull_candidate_mask>)->Name("hull_mask/omp")->Arg(128)->Arg(512);
BENCHMARK(bm_envelope_batch<kernels::serial::envelope_batch>)->Name("envelope_batch/serial")->Arg(1 << 16);
BENCHMARK(bm_envelope_batch<kernels::omp::envelope_batch>)->Name("envelope_batch/omp")->Arg(1 << 16);
BENCHMARK(bm_categorical<kernels::serial::categorical_counts>)->Name("categorical/serial")->Arg(1 << 20);
BENCHMARK(bm_categorical<kernels::omp::categorical_counts>)->Name("categorical/omp")->Arg(1 << 20);
BENCHMARK(bm_gaussian<kernels::serial::gaussian_draws>)->Name("gaussian_draws/serial")->Arg(1 << 18);
BENCHMARK(bm_gaussian<kernels::omp::gaussian_draws>)->Name("gaussian_draws/omp")->Arg(1 << 18);

BENCHMARK_MAIN();
