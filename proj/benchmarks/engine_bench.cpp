// Microbenchmarks for the hot paths: the interpreter, the ranking machinery,
// whole-search throughput, and mutation scoring. Run with --benchmark_filter
// to narrow; numbers are for spotting regressions, not publication.

#include "minimosa/fitness.hpp"
#include "minimosa/mutation.hpp"
#include "minimosa/rng.hpp"
#include "minimosa/search.hpp"
#include "minimosa/subject.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace minimosa;

namespace {

// a loop, two guards, some arithmetic: representative of the corpus shapes
const char* kSource = R"(
class Meter {
    field int total;
    field int peak;

    ctor() {
        this.total = 0;
        this.peak = 0;
    }

    method int feed(int v) {
        if (v < 0) {
            v = 0 - v;
        }
        this.total = this.total + v;
        if (v > this.peak) {
            this.peak = v;
        }
        return this.total;
    }

    method int drain(int rounds) {
        var int i = 0;
        while (i < rounds) {
            if (this.total > 0) {
                this.total = this.total - 1;
            }
            i = i + 1;
        }
        return this.total;
    }
}
)";

const Subject& subject() {
    static Subject s = subjectFromSource(kSource, CriteriaSet::all(), "meter");
    return s;
}

void BM_ParseAndBuild(benchmark::State& state) {
    for (auto _ : state) {
        Subject s = subjectFromSource(kSource, CriteriaSet::all(), "meter");
        benchmark::DoNotOptimize(s.mutants.size());
    }
}
BENCHMARK(BM_ParseAndBuild);

void BM_ExecuteTest(benchmark::State& state) {
    const Subject& s = subject();
    RandomSource rng(1);
    TestCase t = randomTest(s.program, rng, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ExecutionTrace trace = executeTest(s, t, InterpLimits{});
        benchmark::DoNotOptimize(trace.cost.steps);
    }
}
BENCHMARK(BM_ExecuteTest)->Arg(5)->Arg(20)->Arg(40);

void BM_PreferenceSorting(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    RandomSource rng(2);
    std::vector<std::vector<double>> objs(n, std::vector<double>(8));
    std::vector<double> lengths(n);
    for (int i = 0; i < n; ++i) {
        for (double& x : objs[i]) x = static_cast<double>(rng.below(6));
        lengths[i] = static_cast<double>(1 + rng.below(40));
    }
    for (auto _ : state) {
        SortResult r = preferenceSorting(objs, lengths);
        benchmark::DoNotOptimize(r.fronts.size());
    }
}
BENCHMARK(BM_PreferenceSorting)->Arg(50)->Arg(100);

void BM_PerformanceHeuristic(benchmark::State& state) {
    RandomSource rng(3);
    std::vector<ProxyVector> group(static_cast<size_t>(state.range(0)));
    for (ProxyVector& v : group)
        for (double& x : v) x = static_cast<double>(rng.below(100));
    for (auto _ : state) {
        std::vector<double> h = performanceHeuristic(group);
        benchmark::DoNotOptimize(h.data());
    }
}
BENCHMARK(BM_PerformanceHeuristic)->Arg(50);

void BM_Search(benchmark::State& state) {
    const Subject& s = subject();
    SearchConfig cfg;
    cfg.budget = static_cast<int>(state.range(0));
    cfg.populationSize = 20;
    uint64_t seed = 1;
    for (auto _ : state) {
        SearchResult r = runSearch(s, Algorithm::AdaptiveDynamosa, seed++, cfg);
        benchmark::DoNotOptimize(r.evaluations);
    }
}
BENCHMARK(BM_Search)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_StrongMutationScore(benchmark::State& state) {
    const Subject& s = subject();
    RandomSource rng(4);
    std::vector<TestCase> tests;
    for (int i = 0; i < 10; ++i) tests.push_back(randomTest(s.program, rng, 10));
    for (auto _ : state) {
        MutationResult r = strongMutationScore(s, tests, InterpLimits{});
        benchmark::DoNotOptimize(r.mutationScore);
    }
}
BENCHMARK(BM_StrongMutationScore)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
