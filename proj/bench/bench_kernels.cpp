// Serial reference kernels against their OpenMP versions on tomography-sized inputs.

#include <random>

#include <benchmark/benchmark.h>

#include "cisim/kernels.hpp"

using namespace cisim;
using namespace cisim::kernels;

namespace {

constexpr int kLevels = 14;

const DenseOp& sample_density() {
    static const DenseOp rho = [] {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        const int dim = kLevels * kLevels;
        DenseOp a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
        DenseOp r = a * a.adjoint();
        return DenseOp(r / r.trace());
    }();
    return rho;
}

std::vector<KPoint> k_grid(int points, double k_max) {
    std::vector<KPoint> ks;
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j)
            ks.push_back({-k_max + 2.0 * k_max * i / (points - 1), -k_max + 2.0 * k_max * j / (points - 1)});
    return ks;
}

void BM_CharacteristicSerial(benchmark::State& state) {
    const auto ks = k_grid(25, 2.8);
    for (auto _ : state) benchmark::DoNotOptimize(characteristic_scan_serial(sample_density(), kLevels, kLevels, ks));
}

void BM_CharacteristicParallel(benchmark::State& state) {
    const auto ks = k_grid(25, 2.8);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(characteristic_scan_parallel(sample_density(), kLevels, kLevels, ks, threads));
}

void BM_FourierSerial(benchmark::State& state) {
    const auto ks = k_grid(25, 2.8);
    const std::vector<cplx> c(ks.size(), cplx(1e-3, 2e-4));
    const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(101, -4.0, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(fourier_sum_serial(ks, c, axis, axis));
}

void BM_FourierParallel(benchmark::State& state) {
    const auto ks = k_grid(25, 2.8);
    const std::vector<cplx> c(ks.size(), cplx(1e-3, 2e-4));
    const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(101, -4.0, 4.0);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fourier_sum_parallel(ks, c, axis, axis, threads));
}

struct DensityInputs {
    std::vector<DenseOp> comps;
    std::vector<double> weights;
    Eigen::MatrixXd phi;
};

const DensityInputs& density_inputs() {
    static const DensityInputs in = [] {
        DensityInputs d;
        for (int c = 0; c < 8; ++c) d.comps.push_back(DenseOp::Random(kLevels, kLevels));
        d.weights.assign(8, 0.125);
        d.phi = hermite_functions(Eigen::VectorXd::LinSpaced(101, -4.0, 4.0), kLevels);
        return d;
    }();
    return in;
}

void BM_DensitySerial(benchmark::State& state) {
    const auto& d = density_inputs();
    for (auto _ : state) benchmark::DoNotOptimize(position_density_serial(d.comps, d.weights, d.phi, d.phi));
}

void BM_DensityParallel(benchmark::State& state) {
    const auto& d = density_inputs();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(position_density_parallel(d.comps, d.weights, d.phi, d.phi, threads));
}

}  // namespace

BENCHMARK(BM_CharacteristicSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CharacteristicParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensityParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
