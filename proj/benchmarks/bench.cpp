#include <benchmark/benchmark.h>

#include "betanorm/expansion.hpp"
#include "betanorm/measure.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/rng.hpp"
#include "betanorm/wf.hpp"

using namespace betanorm;

namespace {

BasePtr golden(int d) { return make_base(MinimalPolynomial({-1, -1, 1}), d); }
BasePtr tribonacci() { return make_base(MinimalPolynomial({-1, -1, -1, 1}), 2); }

DigitWord random_word(int d, std::size_t n, std::uint64_t seed) {
    Philox rng(seed);
    DigitWord w(n);
    for (auto& x : w) x = static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
    return w;
}

void BM_NormalizeFinite(benchmark::State& state) {
    auto base = golden(3);
    const auto w = random_word(3, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(normalize_finite(*base, w));
}
BENCHMARK(BM_NormalizeFinite)->Arg(16)->Arg(64)->Arg(256);

void BM_PrefixNormalizerPush(benchmark::State& state) {
    auto base = tribonacci();
    const auto w = random_word(2, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        PrefixNormalizer pn(*base);
        for (int x : w) {
            pn.push(x);
            benchmark::DoNotOptimize(pn.finite());
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_PrefixNormalizerPush)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_BlockSplit(benchmark::State& state) {
    auto base = golden(2);
    const auto w = random_word(2, 1 << 14, 3);
    for (auto _ : state) {
        SpanSource src(w);
        benchmark::DoNotOptimize(block_split(*base, src, 1, 1 << 20));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_BlockSplit);

void BM_GreedyExpand(benchmark::State& state) {
    auto base = tribonacci();
    const auto x = parse_element(base->context(), "1/7,-2/7,1/7");
    for (auto _ : state) benchmark::DoNotOptimize(greedy_expand(*base, x));
}
BENCHMARK(BM_GreedyExpand);

void BM_TwoSidedWindow(benchmark::State& state) {
    auto base = golden(2);
    Window w;
    w.left = 64;
    w.digits = random_word(2, 128, 4);
    for (auto _ : state) benchmark::DoNotOptimize(two_sided_normalize(*base, w, 1));
}
BENCHMARK(BM_TwoSidedWindow);

void BM_SampleErdos(benchmark::State& state) {
    const auto real = RealBase::of(*golden(2));
    for (auto _ : state) benchmark::DoNotOptimize(sample_erdos(real, 100000, 24, 8, 1));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleErdos)->Unit(benchmark::kMillisecond);

void BM_WfCheck(benchmark::State& state) {
    for (auto _ : state) {
        auto base = make_base(MinimalPolynomial({1, -3, 1}), 3);
        benchmark::DoNotOptimize(wf_check(*base));
    }
}
BENCHMARK(BM_WfCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
