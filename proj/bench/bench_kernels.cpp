#include <benchmark/benchmark.h>

#include <set>

#include "fm/engine.hpp"
#include "fm/oracle.hpp"
#include "random_models.hpp"

using namespace fm;
using namespace fm::testing;

namespace {

/// A fixed random tree with `clauses` distinct two- or three-literal clauses.
FeatureTree model(std::size_t nodes, std::size_t clauses, std::size_t max_leaves) {
    Rng rng(42);
    FeatureTree t = random_tree(rng, {nodes, max_leaves});
    std::set<std::vector<std::pair<std::size_t, bool>>> seen;
    while (t.constraints.size() < clauses) {
        std::vector<std::pair<std::size_t, bool>> lits;
        std::set<std::size_t> used;
        const auto width = uniform(rng, 2, 3);
        while (lits.size() < width) {
            const auto v = uniform(rng, 1, t.size() - 1);
            if (used.insert(v).second)
                lits.emplace_back(v, uniform(rng, 0, 1) == 1);
        }
        std::sort(lits.begin(), lits.end());
        if (!seen.insert(lits).second)
            continue;
        std::vector<Formula> ops;
        for (auto [v, pos] : lits) {
            auto var = Formula::var(t.nodes[v].name);
            ops.push_back(pos ? std::move(var) : Formula::negation(std::move(var)));
        }
        t.constraints.push_back(Formula::disjunction(std::move(ops)));
    }
    return t;
}

void engine(benchmark::State& state, Execution execution) {
    const auto t = model(100, static_cast<std::size_t>(state.range(0)), 100);
    const auto clauses = constraint_clauses(t);
    EngineOptions o;
    o.execution = execution;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_engine(t, clauses, o));
    state.counters["clauses"] = static_cast<double>(clauses.size());
}

void oracle(benchmark::State& state, Execution execution) {
    const auto t = model(static_cast<std::size_t>(state.range(0)), 4, 12);
    OracleOptions o;
    o.execution = execution;
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate(t, o));
}

void BM_EngineSerial(benchmark::State& state) { engine(state, Execution::Serial); }
void BM_EngineParallel(benchmark::State& state) { engine(state, Execution::Parallel); }
void BM_OracleSerial(benchmark::State& state) { oracle(state, Execution::Serial); }
void BM_OracleParallel(benchmark::State& state) { oracle(state, Execution::Parallel); }

} // namespace

BENCHMARK(BM_EngineSerial)->DenseRange(6, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EngineParallel)->DenseRange(6, 14, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleSerial)->DenseRange(14, 20, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->DenseRange(14, 20, 3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
