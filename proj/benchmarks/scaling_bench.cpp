#include <benchmark/benchmark.h>

#include "compas/baselines.hpp"
#include "compas/compas_sampler.hpp"
#include "compas/stream_io.hpp"

using namespace compas;

namespace {

const EdgeStream& stream() {
    static const EdgeStream s = [] {
        PlantedPartitionParams p;
        p.n_nodes = 40000;
        p.k_comms = 800;
        p.p_in = 0.3;
        p.p_out = 1.5e-4;
        p.seed = 11;
        return generate_planted_partition(p).stream;
    }();
    return s;
}

void run_prefix(StreamSampler& sampler, std::size_t len) {
    const auto& events = stream().events;
    for (std::size_t i = 0; i < len; ++i) sampler.process(events[i]);
    benchmark::DoNotOptimize(sampler.finish());
}

void BM_Compas(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        CompasSampler sampler(SamplerConfig::with_defaults(4000, 1));
        run_prefix(sampler, len);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <typename Sampler>
void BM_Baseline(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        BaselineConfig c;
        c.budget = 4000;
        c.seed = 1;
        Sampler sampler(c);
        run_prefix(sampler, len);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Compas)->RangeMultiplier(2)->Range(50000, 400000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline<StreamingNodeSampler>)->Arg(50000)->Arg(400000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline<StreamingEdgeSampler>)->Arg(50000)->Arg(400000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline<StreamingBfsSampler>)->Arg(50000)->Arg(400000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline<PiesSampler>)->Arg(50000)->Arg(400000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
