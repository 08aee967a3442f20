#include "minimosa/fitness.hpp"

#include "minimosa/rng.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

using namespace minimosa;

namespace {

// a dominates b: no objective worse, at least one strictly better
bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool better = false;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) better = true;
    }
    return better;
}

// reference non-dominated ranking by repeated peeling
std::vector<int> rankOracle(const std::vector<std::vector<double>>& objs) {
    int n = static_cast<int>(objs.size());
    std::vector<int> rank(n, -1);
    int assigned = 0, level = 0;
    while (assigned < n) {
        std::vector<int> now;
        for (int i = 0; i < n; ++i) {
            if (rank[i] >= 0) continue;
            bool dom = false;
            for (int j = 0; j < n; ++j)
                if (j != i && rank[j] < 0 && dominates(objs[j], objs[i])) dom = true;
            if (!dom) now.push_back(i);
        }
        for (int i : now) rank[i] = level;
        assigned += static_cast<int>(now.size());
        level++;
    }
    return rank;
}

std::vector<std::vector<double>> randomInstance(RandomSource& rng, int maxRows, int maxCols,
                                                int* colsOut = nullptr) {
    int rows = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(maxRows - 1)));
    int cols = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(maxCols)));
    if (colsOut) *colsOut = cols;
    std::vector<std::vector<double>> objs(rows, std::vector<double>(cols));
    for (auto& row : objs)
        for (double& v : row) v = static_cast<double>(rng.below(6)); // ties on purpose
    return objs;
}

double heuristicOracle(const std::vector<ProxyVector>& group, int member) {
    double score = 0.0;
    for (int k = 0; k < 7; ++k) {
        double lo = group[0][k], hi = group[0][k];
        for (const ProxyVector& v : group) {
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
        if (hi > lo) score += (hi - group[member][k]) / (hi - lo);
    }
    return score;
}

} // namespace

TEST_CASE("performance score is the sum of saturating terms") {
    RandomSource rng(101);
    for (int i = 0; i < 300; ++i) {
        ProxyVector v;
        for (double& x : v) x = static_cast<double>(rng.below(50));
        double direct = 0.0;
        for (double x : v) direct += x / (x + 1.0);
        double got = performanceScore(v);
        CHECK(got == doctest::Approx(direct).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got < 7.0);
    }

    // each proxy strictly increases the score
    ProxyVector base{1, 2, 3, 4, 5, 6, 7};
    double s0 = performanceScore(base);
    for (int k = 0; k < 7; ++k) {
        ProxyVector up = base;
        up[k] += 1;
        CHECK(performanceScore(up) > s0);
    }
    CHECK(performanceScore(ProxyVector{0, 0, 0, 0, 0, 0, 0}) == 0.0);
}

TEST_CASE("performance heuristic normalizes within the group") {
    RandomSource rng(202);
    for (int i = 0; i < 300; ++i) {
        int n = 1 + static_cast<int>(rng.below(12));
        std::vector<ProxyVector> group(n);
        for (ProxyVector& v : group)
            for (double& x : v) x = static_cast<double>(rng.below(9));
        std::vector<double> got = performanceHeuristic(group);
        REQUIRE(got.size() == group.size());
        for (int m = 0; m < n; ++m) {
            CHECK(got[m] == doctest::Approx(heuristicOracle(group, m)).epsilon(1e-12));
            CHECK(got[m] >= 0.0);
            CHECK(got[m] <= 7.0);
        }
    }
}

TEST_CASE("heuristic anchors: cheapest scores 7, dearest 0") {
    // construct a group where one member holds every column minimum and one
    // every maximum, with all columns varying
    std::vector<ProxyVector> group;
    group.push_back(ProxyVector{0, 1, 2, 0, 1, 2, 0}); // all minima
    group.push_back(ProxyVector{9, 8, 7, 9, 8, 7, 9}); // all maxima
    group.push_back(ProxyVector{4, 5, 3, 2, 6, 4, 3});
    std::vector<double> h = performanceHeuristic(group);
    CHECK(h[0] == 7.0);
    CHECK(h[1] == 0.0);
    CHECK(h[2] > 0.0);
    CHECK(h[2] < 7.0);

    // constant columns contribute nothing
    std::vector<ProxyVector> flat(3, ProxyVector{5, 5, 5, 5, 5, 5, 5});
    for (double v : performanceHeuristic(flat)) CHECK(v == 0.0);
}

TEST_CASE("fast non-dominated sort matches the peeling oracle") {
    RandomSource rng(303);
    for (int i = 0; i < 80; ++i) {
        auto objs = randomInstance(rng, 24, 8);
        SortResult got = fastNondominatedSort(objs);
        std::vector<int> want = rankOracle(objs);
        REQUIRE(got.rank.size() == want.size());
        for (size_t j = 0; j < want.size(); ++j) CHECK(got.rank[j] == want[j]);

        // fronts partition the population and agree with the ranks
        std::set<int> seen;
        for (size_t f = 0; f < got.fronts.size(); ++f)
            for (int idx : got.fronts[f]) {
                CHECK(got.rank[idx] == static_cast<int>(f));
                CHECK(seen.insert(idx).second);
            }
        CHECK(seen.size() == objs.size());
    }
}

TEST_CASE("preference sorting puts per-target winners first") {
    RandomSource rng(404);
    for (int i = 0; i < 80; ++i) {
        auto objs = randomInstance(rng, 20, 6);
        int n = static_cast<int>(objs.size());
        int cols = static_cast<int>(objs[0].size());
        std::vector<double> lengths(n);
        for (double& L : lengths) L = 1 + static_cast<double>(rng.below(30));

        SortResult got = preferenceSorting(objs, lengths);

        // oracle: per objective, the minimal value; ties by shorter test,
        // then lower index
        std::set<int> winners;
        for (int k = 0; k < cols; ++k) {
            int best = 0;
            for (int j = 1; j < n; ++j) {
                if (objs[j][k] < objs[best][k] ||
                    (objs[j][k] == objs[best][k] && lengths[j] < lengths[best]))
                    best = j;
            }
            winners.insert(best);
        }
        REQUIRE_FALSE(got.fronts.empty());
        std::set<int> front0(got.fronts[0].begin(), got.fronts[0].end());
        CHECK(front0 == winners);

        // everyone is ranked, winners strictly first
        for (int j = 0; j < n; ++j) {
            if (winners.count(j))
                CHECK(got.rank[j] == 0);
            else
                CHECK(got.rank[j] >= 1);
        }
    }
}

TEST_CASE("subvector crowding counts minimal strict wins") {
    auto oracle = [](const std::vector<std::vector<double>>& front, int i) {
        if (front.size() == 1) return 0.0;
        int best = static_cast<int>(front[0].size()) + 1;
        for (int j = 0; j < static_cast<int>(front.size()); ++j) {
            if (j == i) continue;
            int wins = 0;
            for (size_t k = 0; k < front[0].size(); ++k)
                if (front[i][k] < front[j][k]) wins++;
            best = std::min(best, wins);
        }
        return static_cast<double>(best);
    };

    RandomSource rng(505);
    for (int i = 0; i < 200; ++i) {
        auto front = randomInstance(rng, 10, 5);
        std::vector<double> got = subvectorCrowding(front);
        REQUIRE(got.size() == front.size());
        for (size_t m = 0; m < front.size(); ++m)
            CHECK(got[m] == oracle(front, static_cast<int>(m)));
    }

    CHECK(subvectorCrowding({{1.0, 2.0}}) == std::vector<double>{0.0});
}

TEST_CASE("objective value rule table") {
    Subject s = fixtures::make(fixtures::kNested, "nested");
    int open = -1;
    for (int g = 0; g < s.program.numMethods(); ++g)
        if (s.program.method(g).qualifiedName == "Gate.open") open = g;
    REQUIRE(open >= 0);

    const MethodCfg& mc = s.cfg.methods[open];
    REQUIRE(mc.conditionalBlocks.size() == 2);
    int innerBlock = mc.conditionalBlocks[1];
    int innerTrue = s.cfg.edgeIndex(open, innerBlock, true);
    int tInner = s.targets.branchEdgeTarget[innerTrue];
    REQUIRE(tInner >= 0);
    REQUIRE(s.cdg.guardChain[tInner].size() == 2);

    auto trace = [&](int a, int b) {
        TestCase t;
        TestStatement ctor;
        ctor.kind = TestStatement::Kind::Construct;
        ctor.classIndex = 0;
        ctor.varType = Type::object(0);
        t.statements.push_back(ctor);
        TestStatement call;
        call.kind = TestStatement::Kind::MethodCall;
        call.methodIndex = open;
        call.receiver = 0;
        call.args = {TestArg::ofInt(a), TestArg::ofInt(b)};
        call.varType = Type::intType();
        t.statements.push_back(call);
        ExecOptions opts;
        opts.trackInfection = true;
        return executeTest(s, t, InterpLimits{}, opts);
    };

    SUBCASE("covered target scores zero") {
        ExecutionTrace tr = trace(11, 21); // both guards taken
        REQUIRE(tr.coveredTargets[tInner] == 1);
        CHECK(objectiveValue(s, tInner, tr) == 0.0);
    }
    SUBCASE("executed innermost guard: pure branch distance") {
        ExecutionTrace tr = trace(11, 0); // outer taken, inner missed by 21
        REQUIRE(tr.coveredTargets[tInner] == 0);
        CHECK(objectiveValue(s, tInner, tr) == doctest::Approx(21.0 / 22.0));
    }
    SUBCASE("one unexecuted guard level") {
        ExecutionTrace tr = trace(0, 0); // outer missed by 11, inner never ran
        CHECK(objectiveValue(s, tInner, tr) == doctest::Approx(1.0 + 11.0 / 12.0));
    }
    SUBCASE("method never called") {
        TestCase t;
        TestStatement ctor;
        ctor.kind = TestStatement::Kind::Construct;
        ctor.classIndex = 0;
        ctor.varType = Type::object(0);
        t.statements.push_back(ctor);
        ExecutionTrace tr = executeTest(s, t, InterpLimits{});
        // no guard executed: chain length + 1
        CHECK(objectiveValue(s, tInner, tr) == 3.0);
    }
    SUBCASE("guard satisfied but target untouched adds one half") {
        // a mutant of the inner condition that agrees on b = 21: its weak
        // target sits behind an executed, zero-distance guard yet stays
        // uncovered, which must not read as "distance zero"
        int mi = -1;
        for (const Mutant& m : s.mutants)
            if (m.op == MutationOperator::ReplaceComparisonOperator &&
                m.replacementOp == BinaryOp::Ge && m.blockIndex == innerBlock &&
                m.methodIndex == open)
                mi = m.index;
        REQUIRE(mi >= 0);
        int tWeak = s.targets.weakTarget[mi];
        REQUIRE(tWeak >= 0);

        ExecutionTrace tr = trace(11, 21); // b > 20 and b >= 20 agree on 21
        REQUIRE(tr.coveredTargets[tWeak] == 0);
        CHECK(objectiveValue(s, tWeak, tr) == 0.5);
    }
}
