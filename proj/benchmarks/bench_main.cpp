#include <benchmark/benchmark.h>

#include "bh/bridges.hpp"
#include "bh/coding.hpp"
#include "bh/geometry.hpp"
#include "bh/perturb.hpp"
#include "bh/schedule.hpp"
#include "bh/stats.hpp"
#include "bh/wasserstein.hpp"

#include <random>

namespace {

const bh::ModelParams kP;

void BM_BridgeInterval(benchmark::State& state) {
    std::string word;
    std::mt19937_64 rng(7);
    for (long i = 0; i < state.range(0); ++i) word.push_back((rng() & 1) ? '1' : '0');
    for (auto _ : state) {
        auto iv = bh::bridge_interval<double>(kP, word);
        benchmark::DoNotOptimize(iv);
    }
}
BENCHMARK(BM_BridgeInterval)->Arg(10)->Arg(30);

void BM_ZetaApplyWide(benchmark::State& state) {
    std::string word;
    std::mt19937_64 rng(7);
    for (long i = 0; i < state.range(0); ++i) word.push_back((rng() & 1) ? '1' : '0');
    bh::bigfloat z(0.5);
    for (auto _ : state) {
        auto v = bh::zeta_apply(kP, word, z);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ZetaApplyWide)->Arg(100)->Arg(500);

void BM_Step(benchmark::State& state) {
    bh::Point pt{0.171, 0.3, 0.42};
    for (auto _ : state) {
        auto st = bh::step(kP, pt);
        benchmark::DoNotOptimize(st);
    }
}
BENCHMARK(BM_Step);

void BM_Bump3d(benchmark::State& state) {
    bh::Mollifier m;
    bh::BumpCube cube{{0.5, 0.4, 0.9}, 1e-3, 1};
    bh::Point pt{0.5004, 0.4002, 0.8997};
    for (auto _ : state) {
        double v = bh::bump_3d(m, cube, pt);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_Bump3d);

void BM_W1Exact(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bh::EmpiricalMeasure a, b;
    for (long i = 0; i < state.range(0); ++i) {
        a.support.push_back({u(rng), u(rng), u(rng)});
        b.support.push_back({u(rng), u(rng), u(rng)});
    }
    for (auto _ : state) {
        auto r = bh::w1(a, b);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_W1Exact)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MajoritySeries(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<char> code;
    for (long i = 0; i < 200000; ++i) code.push_back((rng() & 3) ? '0' : '1');
    auto cps = bh::checkpoint_grid(200000);
    for (auto _ : state) {
        auto s = bh::majority_series(code, cps);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_MajoritySeries)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
