#include <benchmark/benchmark.h>

#include <random>

#include "oracles/oracles.hpp"
#include "symcalc/kernels.hpp"
#include "symcalc/ncalc.hpp"
#include "symcalc/polynorm.hpp"
#include "symcalc/search.hpp"

using namespace symcalc;

namespace {

MatrixTuple random_pair(Eigen::Index d)
{
    std::mt19937_64 rng(1);
    return MatrixTuple({oracle::random_matrix(d, rng), oracle::random_matrix(d, rng)});
}

void BM_SymmDP(benchmark::State &state)
{
    const auto k = static_cast<MultiIndex::value_type>(state.range(0));
    const auto t = random_pair(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(symm_monomial({k, k}, t));
    }
}
BENCHMARK(BM_SymmDP)->DenseRange(1, 5);

void BM_SymmBrute(benchmark::State &state)
{
    const auto k = static_cast<unsigned>(state.range(0));
    const auto t = random_pair(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::brute_symm({k, k}, t.matrices()));
    }
}
BENCHMARK(BM_SymmBrute)->DenseRange(1, 5);

void BM_SupNormP7(benchmark::State &state)
{
    const Poly p = example7_poly();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_norm(p, Domain::polydisk(2, 1.0), static_cast<int>(state.range(0)), 1));
    }
}
BENCHMARK(BM_SupNormP7)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SupNormRandom3(benchmark::State &state)
{
    std::mt19937_64 rng(5);
    const Poly p = random_poly(3, 4, CoeffDistribution::Gaussian, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_norm(p, Domain::torus(3), 32, 1));
    }
}
BENCHMARK(BM_SupNormRandom3)->Unit(benchmark::kMillisecond);

void BM_CertifyLPrime2(benchmark::State &state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_positivity({KernelKind::LPrime, 2, 60}, 0.5406));
    }
}
BENCHMARK(BM_CertifyLPrime2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
