#include <benchmark/benchmark.h>

#include "ptpsim/attacks.hpp"
#include "ptpsim/scenario.hpp"

using namespace ptpsim;

static void BM_Tick(benchmark::State& state)
{
    World w(builtin_scenario("jitter-500ns"));
    for (auto _ : state) {
        w.tick();
        benchmark::DoNotOptimize(w.true_now());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Tick);

static void BM_DispatchRead(benchmark::State& state)
{
    PayloadChain chain;
    for (int i = 0; i < state.range(0); ++i)
        chain.install(HookPoint::ReadSys,
                      std::make_unique<ConstantOffsetPayload>(1, ConstantOffsetPayload::Variant::ReadShift));
    SimTime t{0};
    for (auto _ : state) {
        t = chain.dispatch_read(HookPoint::ReadSys, t);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_DispatchRead)->Arg(0)->Arg(1)->Arg(8);

static void BM_RunScenario(benchmark::State& state)
{
    const auto cfg = builtin_scenario("skew-50ppb");
    for (auto _ : state)
        benchmark::DoNotOptimize(run_scenario(cfg));
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

static void BM_Mtie(benchmark::State& state)
{
    std::vector<std::int64_t> x;
    RngStream rng(1, "bench");
    for (int i = 0; i < 10'000; ++i)
        x.push_back(static_cast<std::int64_t>(rng.next_u64() % 1000));
    const auto tau = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(tie_mtie(x, tau));
}
BENCHMARK(BM_Mtie)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PaperSuite(benchmark::State& state)
{
    const auto configs = figure_suite();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_suite(configs));
}
BENCHMARK(BM_PaperSuite)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
