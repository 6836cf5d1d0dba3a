#include "mitest/calculus.hpp"
#include "mitest/inference.hpp"
#include "mitest/measures.hpp"
#include "mitest/nulldist.hpp"
#include "mitest/rng.hpp"
#include "mitest/sim.hpp"
#include "mitest/table.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mitest;

ProbTable random_table(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = 0.1 - std::log(rng.uniform01());
    m /= m.sum();
    return ProbTable(m);
}

void bm_mi_gradient(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ProbTable p = random_table(d, d, 1);
    for (auto _ : state) benchmark::DoNotOptimize(mi_gradient(p));
}
BENCHMARK(bm_mi_gradient)->Arg(2)->Arg(5)->Arg(10);

void bm_mi_hessian(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ProbTable p = random_table(d, d, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mi_hessian(p));
}
BENCHMARK(bm_mi_hessian)->Arg(2)->Arg(5)->Arg(10);

void bm_chi_bar_weights(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ProbTable p = random_table(d, d, 3);
    const Eigen::MatrixXd h = mi_hessian(p);
    const Eigen::MatrixXd sigma = multinomial_cov(p);
    for (auto _ : state) benchmark::DoNotOptimize(chi_bar_weights(h, sigma));
}
BENCHMARK(bm_chi_bar_weights)->Arg(5)->Arg(10);

void bm_series_cdf(benchmark::State& state) {
    ChiBarWeights w;
    const int k = static_cast<int>(state.range(0));
    Rng rng(4);
    w.lambdas.resize(k);
    for (int i = 0; i < k; ++i) w.lambdas(i) = 0.1 + 2.9 * rng.uniform01();
    std::sort(w.lambdas.data(), w.lambdas.data() + k, std::greater<double>());
    const double x = w.sum();
    for (auto _ : state) benchmark::DoNotOptimize(cdf(w, x, 1e-6));
}
BENCHMARK(bm_series_cdf)->Arg(4)->Arg(16)->Arg(64);

void bm_independence_test_series(benchmark::State& state) {
    SimConfig cfg;
    cfg.dist_x = MarginalDist::uniform(5);
    cfg.dist_y = MarginalDist::uniform(5);
    cfg.n = 1000;
    cfg.seed = 5;
    const JointTable t = sample_pairs(cfg, 0).table;
    TestOptions opts;
    opts.method = PValueMethod::Series;
    for (auto _ : state)
        benchmark::DoNotOptimize(independence_test(t, Statistic::T1, opts));
}
BENCHMARK(bm_independence_test_series);

void bm_replicates(benchmark::State& state) {
    SimConfig cfg;
    cfg.dist_x = MarginalDist::uniform(5);
    cfg.dist_y = MarginalDist::uniform(5);
    cfg.n = static_cast<std::int64_t>(state.range(0));
    cfg.reps = 100;
    cfg.seed = 6;
    for (auto _ : state) benchmark::DoNotOptimize(replicate_statistics(cfg));
}
BENCHMARK(bm_replicates)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
