#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <random>

#include "cges/data.hpp"
#include "cges/fusion.hpp"
#include "cges/ges.hpp"
#include "cges/partition.hpp"
#include "cges/ring.hpp"
#include "cges/scoring.hpp"

using namespace cges;

namespace {

const Dataset& sample(std::size_t n, std::size_t rows) {
    static std::map<std::pair<std::size_t, std::size_t>, Dataset> cache;
    auto it = cache.find({n, rows});
    if (it == cache.end()) it = cache.emplace(std::pair{n, rows}, forward_sample(random_network(n, 3, 3, n), rows, 1)).first;
    return it->second;
}

Dag random_dag(std::size_t n, double density, std::mt19937_64& rng) {
    std::vector<VariableId> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<VariableId>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(density);
    Dag g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) g.add_arc(perm[i], perm[j]);
    return g;
}

}  // namespace

// Uncached family score with three parents.
static void BM_LocalBdeu(benchmark::State& state) {
    const Dataset& d = sample(20, static_cast<std::size_t>(state.range(0)));
    const std::vector<VariableId> parents = {1, 2, 3};
    for (auto _ : state) {
        ScoreCache cache;
        benchmark::DoNotOptimize(local_bdeu(0, parents, d, {}, cache));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LocalBdeu)->Arg(1000)->Arg(5000)->Arg(20000);

static void BM_GesFromEmpty(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Dataset& d = sample(n, 5000);
    for (auto _ : state) {
        ScoreCache cache;
        benchmark::DoNotOptimize(ges(Dag(n), BdeuScore(d, {}, cache), {}).score);
    }
}
BENCHMARK(BM_GesFromEmpty)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Fuse(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    const Dag a = random_dag(n, 4.0 / static_cast<double>(n), rng);
    const Dag b = random_dag(n, 4.0 / static_cast<double>(n), rng);
    for (auto _ : state) benchmark::DoNotOptimize(fuse(a, b).num_arcs());
}
BENCHMARK(BM_Fuse)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_PartitionEdges(benchmark::State& state) {
    const Dataset& d = sample(50, 5000);
    for (auto _ : state) {
        ScoreCache cache;
        benchmark::DoNotOptimize(partition_edges(BdeuScore(d, {}, cache), static_cast<std::size_t>(state.range(0))).k());
    }
}
BENCHMARK(BM_PartitionEdges)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Cges(benchmark::State& state) {
    const Dataset& d = sample(50, 5000);
    RingConfig cfg;
    cfg.k = static_cast<std::size_t>(state.range(0));
    cfg.limit_enabled = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_cges(d, cfg).score);
}
BENCHMARK(BM_Cges)->ArgsProduct({{2, 4}, {0, 1}})->ArgNames({"k", "limit"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
