// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "qdeph/kernels.hpp"
#include "qdeph/random.hpp"

namespace {

using namespace qdeph;

void BM_MultiplySerial(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::multiply(a, b));
}

void BM_MultiplyOmp(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::multiply(a, b));
}

void BM_KronSerial(benchmark::State& state) {
    Rng rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::kron(a, b));
}

void BM_KronOmp(benchmark::State& state) {
    Rng rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::kron(a, b));
}

void BM_SchurSerial(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::schur(a, b));
}

void BM_SchurOmp(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = gaussian_matrix(rng, n, n);
    const ComplexMatrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::schur(a, b));
}

// One qubit gate on the middle site of an 8-qubit register, full density matrix.
void BM_ApplySiteSerial(benchmark::State& state) {
    Rng rng(4);
    const ComplexMatrix f = gaussian_matrix(rng, 2, 2);
    const ComplexMatrix m = gaussian_matrix(rng, 256, 256);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::apply_site(f, m, 8, 16));
}

void BM_ApplySiteOmp(benchmark::State& state) {
    Rng rng(4);
    const ComplexMatrix f = gaussian_matrix(rng, 2, 2);
    const ComplexMatrix m = gaussian_matrix(rng, 256, 256);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::apply_site(f, m, 8, 16));
}

}  // namespace

BENCHMARK(BM_MultiplySerial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_MultiplyOmp)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_KronSerial)->Arg(8)->Arg(32);
BENCHMARK(BM_KronOmp)->Arg(8)->Arg(32);
BENCHMARK(BM_SchurSerial)->Arg(64)->Arg(512);
BENCHMARK(BM_SchurOmp)->Arg(64)->Arg(512);
BENCHMARK(BM_ApplySiteSerial);
BENCHMARK(BM_ApplySiteOmp);

BENCHMARK_MAIN();
