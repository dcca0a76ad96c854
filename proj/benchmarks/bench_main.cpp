#include <benchmark/benchmark.h>

#include "ergo/freefermion.hpp"
#include "ergo/manybody.hpp"
#include "ergo/numkern.hpp"

namespace {

void BM_eigh_dense(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
    a = (a + a.transpose()).eval();
    const ergo::numkern::SymMatrix m{a};
    for (auto _ : state) benchmark::DoNotOptimize(ergo::numkern::eigh(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_eigh_dense)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_eigh_tridiagonal(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> d(n, 0.0);
    const std::vector<double> e(n - 1, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(ergo::numkern::eigh_tridiagonal(d, e));
}
BENCHMARK(BM_eigh_tridiagonal)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_freefermion_decompose(benchmark::State& state) {
    const auto spec = ergo::freefermion::ChainSpec::half_chain(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ergo::freefermion::decompose(spec));
}
BENCHMARK(BM_freefermion_decompose)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

template <ergo::manybody::ModelKind Kind>
void BM_spin_matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto model = Kind == ergo::manybody::ModelKind::ising ? ergo::manybody::SpinModel::ising(n)
                                                               : ergo::manybody::SpinModel::heisenberg(n);
    const auto basis = ergo::manybody::ground_state_basis(model);
    const Eigen::VectorXd v = ergo::numkern::seeded_vector(basis.size(), 1);
    Eigen::VectorXd out(v.size());
    for (auto _ : state) {
        ergo::manybody::apply_hamiltonian(model, basis, {v.data(), basis.size()}, {out.data(), basis.size()});
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(basis.size()));
}
BENCHMARK(BM_spin_matvec<ergo::manybody::ModelKind::ising>)->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_spin_matvec<ergo::manybody::ModelKind::heisenberg>)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);

void BM_schmidt_values(benchmark::State& state) {
    const auto half = static_cast<std::size_t>(state.range(0));
    const std::size_t dim = std::size_t{1} << half;
    Eigen::VectorXd psi = ergo::numkern::seeded_vector(dim * dim, 2);
    psi.normalize();
    for (auto _ : state) benchmark::DoNotOptimize(ergo::numkern::schmidt_values({psi.data(), dim * dim}, dim, dim));
}
BENCHMARK(BM_schmidt_values)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
