#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "smallscat/continuum_solver.hpp"
#include "smallscat/coupling.hpp"
#include "smallscat/discrete_solver.hpp"
#include "smallscat/greens.hpp"

using namespace smallscat;

namespace {

WaveParameters wave2()
{
    WaveParameters w;
    w.omega = 2.0;
    return w;
}

std::vector<Vec3> points(std::size_t n)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> p(n);
    for (auto& x : p)
        x = Vec3(u(rng), u(rng), u(rng));
    return p;
}

void BM_DyadicGreen(benchmark::State& state)
{
    const auto p = points(1024);
    const Wavenumber k(2.0);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dyadic_green(p[i % 1024], p[(i + 1) % 1024], k));
        ++i;
    }
}
BENCHMARK(BM_DyadicGreen);

void BM_DyadicApply(benchmark::State& state)
{
    const auto p = points(1024);
    const Wavenumber k(2.0);
    const CVec3 q(1.0, cplx{0, 1}, 0.5);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dyadic_apply(p[i % 1024], p[(i + 1) % 1024], k, q));
        ++i;
    }
}
BENCHMARK(BM_DyadicApply);

CouplingOperator make_operator(std::size_t sites)
{
    return CouplingOperator(points(sites), std::vector<cplx>(sites, cplx{1e-4, 0}), wave2(), 1e-12);
}

void BM_Assemble(benchmark::State& state)
{
    const auto op = make_operator(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(op.assemble());
}
BENCHMARK(BM_Assemble)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MatrixFreeApply(benchmark::State& state)
{
    const auto op = make_operator(static_cast<std::size_t>(state.range(0)));
    const Eigen::VectorXcd in = Eigen::VectorXcd::Ones(op.rows());
    Eigen::VectorXcd out(op.rows());
    for (auto _ : state) {
        op.apply(in, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_MatrixFreeApply)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_DirectSolve(benchmark::State& state)
{
    const auto op = make_operator(static_cast<std::size_t>(state.range(0)));
    const Eigen::MatrixXcd A = op.assemble();
    const Eigen::VectorXcd b = Eigen::VectorXcd::Ones(op.rows());
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_dense(A, b));
}
BENCHMARK(BM_DirectSolve)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ContinuumSolve(benchmark::State& state)
{
    const WaveParameters w = wave2();
    const EffectiveMedium med(ScalarFieldProfile::parse("gauss(0.5,0.5,0.5,0.3)"), ScalarFieldProfile::constant(0.002),
                              w, Box{});
    const CollocationGrid grid(Box{}, static_cast<int>(state.range(0)), med);
    const auto inc = std::make_shared<PlaneWave>(CVec3(1, 0, 0), Vec3(0, 0, 1), w.wavenumber());
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_limit_curl(grid, w, inc));
}
BENCHMARK(BM_ContinuumSolve)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
