// Microbenchmarks for the hot paths: character evaluation, the exhaustive
// coefficient scan, curve sampling with point counts, exact moment tables,
// and the cubic-family kernels. Run manually (`./qrlab_bench`); not part of
// the test suite.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "qrlab/exceptional.hpp"
#include "qrlab/field.hpp"
#include "qrlab/moments.hpp"
#include "qrlab/sampler.hpp"
#include "qrlab/scan.hpp"

using namespace qrlab;

namespace {

std::vector<elem> prefix_subset(const Field& F, std::uint64_t n) {
    std::vector<elem> S(n);
    for (std::uint64_t i = 0; i < n; ++i) S[i] = i;
    return S;
}

void BM_chi_table(benchmark::State& state) {
    const Field F = Field::make(10007);
    std::uint64_t x = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(F.chi(x));
        x = x % 10006 + 1;
    }
}
BENCHMARK(BM_chi_table);

void BM_chi_euler(benchmark::State& state) {
    const Field F = Field::make((1ull << 31) - 1);
    std::uint64_t x = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(F.chi_euler(x));
        x = x * 2862933555777941757ull % F.q();
        if (x == 0) x = 1;
    }
}
BENCHMARK(BM_chi_euler);

void BM_exhaustive_scan(benchmark::State& state) {
    const Field F = Field::make(5);
    const std::vector<elem> S = prefix_subset(F, 5);
    for (auto _ : state) {
        const THist h = exhaustive_t_histogram(F, 2, S, Conditioning::AllPolys);
        benchmark::DoNotOptimize(h.included);
    }
    state.SetItemsProcessed(state.iterations() * 390625);
}
BENCHMARK(BM_exhaustive_scan)->Unit(benchmark::kMillisecond);

void BM_curve_sample_and_count(benchmark::State& state) {
    const Field F = Field::make(10007);
    const std::vector<elem> S = seeded_subset(F, 2000, RngSpec{1});
    std::uint64_t trial = 0;
    const RngSpec rng{42};
    for (auto _ : state) {
        SplitMix64 g = rng.stream(trial++);
        const Poly f = sample_curve(F, 1, g);
        benchmark::DoNotOptimize(discrepancy(F, f, S));
    }
}
BENCHMARK(BM_curve_sample_and_count);

void BM_moment_table_deep(benchmark::State& state) {
    for (auto _ : state) {
        const MomentTable t = MomentTable::compute(1'000'000, 1'000'003, 4);
        benchmark::DoNotOptimize(t.values.size());
    }
}
BENCHMARK(BM_moment_table_deep)->Unit(benchmark::kMillisecond);

void BM_profile_census(benchmark::State& state) {
    const Field F = Field::make(101);
    for (auto _ : state) {
        const ProfileCensus pc = profile_census(F);
        benchmark::DoNotOptimize(pc.total);
    }
    state.SetItemsProcessed(state.iterations() * 101 * 101 * 100);
}
BENCHMARK(BM_profile_census)->Unit(benchmark::kMillisecond);

void BM_subset_degree(benchmark::State& state) {
    const Field F = Field::make(101);
    const std::vector<elem> S = seeded_subset(F, 6, RngSpec{7});
    for (auto _ : state) benchmark::DoNotOptimize(subset_degree(F, S, 1));
    state.SetItemsProcessed(state.iterations() * 101 * 101 * 100);
}
BENCHMARK(BM_subset_degree)->Unit(benchmark::kMillisecond);

} // namespace
