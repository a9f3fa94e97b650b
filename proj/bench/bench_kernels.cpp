// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "extremal/kernels.hpp"

using namespace extremal;

namespace {

std::vector<cplx> nodes(const ExteriorMap& map, int M) {
    std::vector<cplx> z(M);
    for (int j = 0; j < M; ++j) z[j] = map.psi(std::polar(1.0, kTwoPi * j / M));
    return z;
}

template <bool Parallel>
void BM_faber_basis(benchmark::State& state) {
    const auto map = ExteriorMap::ellipse(1.0, 0.25);
    const auto z = nodes(map, static_cast<int>(state.range(0)));
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto V = Parallel ? kernels::faber_basis(map, z, n) : kernels::serial::faber_basis(map, z, n);
        benchmark::DoNotOptimize(V.data());
    }
}

template <bool Parallel>
void BM_weighted_gram(benchmark::State& state) {
    const auto map = ExteriorMap::ellipse(1.0, 0.25);
    const auto z = nodes(map, static_cast<int>(state.range(0)));
    const auto V = kernels::serial::faber_basis(map, z, static_cast<int>(state.range(1)));
    const std::vector<double> w(z.size(), 1.0 / z.size());
    for (auto _ : state) {
        auto G = Parallel ? kernels::weighted_gram(V, w) : kernels::serial::weighted_gram(V, w);
        benchmark::DoNotOptimize(G.data());
    }
}

template <bool Parallel>
void BM_weighted_power_sum(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const Eigen::VectorXcd v = Eigen::VectorXcd::Random(M);
    const std::vector<double> w(M, 1.0 / M);
    for (auto _ : state) {
        double s = Parallel ? kernels::weighted_power_sum(v, w, 4.0) : kernels::serial::weighted_power_sum(v, w, 4.0);
        benchmark::DoNotOptimize(s);
    }
}

}  // namespace

BENCHMARK(BM_faber_basis<false>)->Args({1024, 40})->Args({4096, 128});
BENCHMARK(BM_faber_basis<true>)->Args({1024, 40})->Args({4096, 128});
BENCHMARK(BM_weighted_gram<false>)->Args({1024, 40})->Args({4096, 128});
BENCHMARK(BM_weighted_gram<true>)->Args({1024, 40})->Args({4096, 128});
BENCHMARK(BM_weighted_power_sum<false>)->Arg(1 << 16);
BENCHMARK(BM_weighted_power_sum<true>)->Arg(1 << 16);

BENCHMARK_MAIN();
