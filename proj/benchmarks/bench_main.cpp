#include <lpball/experiments.hpp>
#include <lpball/objectives.hpp>
#include <lpball/projection.hpp>
#include <lpball/solver.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace lpball;

Vector gaussian(Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

void BM_ProjectWeightedL1(benchmark::State &state) {
    const Index n = state.range(0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> weight(0.1, 10.0);
    const Vector v = gaussian(n, rng);
    WeightedL1Ball ball;
    ball.weights.resize(n);
    for (Index i = 0; i < n; ++i) ball.weights[i] = weight(rng);
    ball.radius = 0.1 * ball.weights.cwiseProduct(v.cwiseAbs()).sum();
    for (auto _ : state) benchmark::DoNotOptimize(project_weighted_l1(v, ball));
    state.SetComplexityN(n);
}
BENCHMARK(BM_ProjectWeightedL1)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

void BM_ProjectBisectionOracle(benchmark::State &state) {
    const Index n = state.range(0);
    std::mt19937_64 rng(2);
    const Vector v = gaussian(n, rng);
    WeightedL1Ball ball;
    ball.weights = Vector::Ones(n);
    ball.radius = 0.1 * v.cwiseAbs().sum();
    for (auto _ : state) benchmark::DoNotOptimize(bisection_oracle_project(v, ball, 1e-12));
}
BENCHMARK(BM_ProjectBisectionOracle)->RangeMultiplier(4)->Range(64, 16384);

void BM_Ir1bRecoverySolve(benchmark::State &state) {
    const Index n = state.range(0);
    const Index m = n / 2;
    const Index d = n / 32;
    std::mt19937_64 rng(3);
    const RecoveryInstance inst = gen_recovery_instance(n, m, d, 1e-2, rng);
    const auto obj = least_squares_objective({inst.A, inst.y});
    SolverConfig cfg;
    cfg.p = 0.5;
    cfg.r = static_cast<double>(d);
    cfg.record_trace = false;
    const Vector x0 = default_init_recovery(n, d, cfg.p, rng);
    for (auto _ : state) {
        const SolveReport rep = ir1b_solve(obj, cfg, x0);
        state.counters["iterations"] = static_cast<double>(rep.iterations);
        benchmark::DoNotOptimize(rep.x_final);
    }
}
BENCHMARK(BM_Ir1bRecoverySolve)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_LogisticValueAndGradient(benchmark::State &state) {
    const Index m = state.range(0);
    std::mt19937_64 rng(4);
    LogisticData data{Matrix(m, 30), Vector(m)};
    for (Index i = 0; i < m; ++i) {
        data.X.row(i) = gaussian(30, rng).transpose();
        data.labels[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    const auto obj = logistic_objective(data);
    const Vector theta = gaussian(30, rng);
    Vector grad;
    for (auto _ : state) benchmark::DoNotOptimize(obj.value_and_gradient(theta, grad));
}
BENCHMARK(BM_LogisticValueAndGradient)->Arg(341)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
