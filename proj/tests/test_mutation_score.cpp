#include "minimosa/mutation.hpp"

#include "minimosa/interp.hpp"
#include "minimosa/testcase.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <algorithm>
#include <array>

using namespace minimosa;

namespace {

// One field write in the ctor, one guarded return, one never-called method:
// small enough that every mutant's fate under every test fits on paper.
const std::string kLatch = R"(
class Latch {
    field int v;

    ctor() {
        this.v = 2;
    }

    method int probe(int x) {
        if (x > this.v) {
            return 10;
        }
        return 0;
    }

    method int idle(int a) {
        return a;
    }
}
)";

TestCase probeTest(const Subject& s, int64_t x) {
    int probeM = -1;
    for (int g = 0; g < s.program.numMethods(); ++g)
        if (s.program.method(g).qualifiedName == "Latch.probe") probeM = g;
    REQUIRE(probeM >= 0);
    TestCase t;
    TestStatement ctor;
    ctor.kind = TestStatement::Kind::Construct;
    ctor.classIndex = 0;
    ctor.varType = Type::object(0);
    t.statements.push_back(ctor);
    TestStatement call;
    call.kind = TestStatement::Kind::MethodCall;
    call.methodIndex = probeM;
    call.receiver = 0;
    call.args = {TestArg::ofInt(x)};
    call.varType = Type::intType();
    t.statements.push_back(call);
    return t;
}

} // namespace

TEST_CASE("fixture kill matrix matches the paper-and-pencil result") {
    Subject s = fixtures::make(kLatch, "latch");
    REQUIRE(s.mutants.size() == 16);

    // tests: probe(5) -> 10, probe(2) -> 0, probe(-1) -> 0; field v stays 2
    std::vector<TestCase> tests{probeTest(s, 5), probeTest(s, 2), probeTest(s, -1)};
    MutationResult res = strongMutationScore(s, tests, InterpLimits{});

    // Expected outcome of every mutant, derived by hand:
    //  m0  ctor 2->0    field differs in the final state dump: all tests kill
    //  m1  ctor 2->3    same (return values agree on t1/t2, the dump differs)
    //  m2  ctor 2->-2   same
    //  m3  > -> <       t0: 5<2 F ret 0 (kill); t1: 2<2 F agrees; t2: -1<2 T ret 10 (kill)
    //  m4  > -> <=      flips every test's branch: all kill
    //  m5  > -> >=      only t1 differs (2>=2 T ret 10)
    //  m6  > -> ==      t0: F ret 0 (kill); t1: T ret 10 (kill); t2 agrees
    //  m7  > -> !=      t0, t1 agree; t2: -1!=2 T ret 10 (kill)
    //  m8  negate x     t0: -5>2 F ret 0 (kill); t1, t2 infect but agree on F
    //  m9  .v read -> 0 t0: 5>0 agrees; t1: 2>0 T ret 10 (kill); t2: -1>0 agrees
    //  m10 negate .v    t0 agrees (5>-2); t1: 2>-2 T (kill); t2: -1>-2 T (kill)
    //  m11 10 -> 0      only t0 reaches the return: kill
    //  m12 10 -> 11     same
    //  m13 10 -> -10    same
    //  m14 0 -> 1       t1 and t2 reach it: both kill
    //  m15 negate a     idle is never called: survives
    struct Row {
        const char* killer;          // first killing test, "-" for survivors
        std::array<bool, 3> strong;  // per test
        std::array<bool, 3> weak;
    };
    const Row expected[16] = {
        {"t0", {1, 1, 1}, {1, 1, 1}}, // m0
        {"t0", {1, 1, 1}, {1, 1, 1}}, // m1
        {"t0", {1, 1, 1}, {1, 1, 1}}, // m2
        {"t0", {1, 0, 1}, {1, 0, 1}}, // m3
        {"t0", {1, 1, 1}, {1, 1, 1}}, // m4
        {"t1", {0, 1, 0}, {0, 1, 0}}, // m5
        {"t0", {1, 1, 0}, {1, 1, 0}}, // m6
        {"t2", {0, 0, 1}, {0, 0, 1}}, // m7
        {"t0", {1, 0, 0}, {1, 1, 1}}, // m8: infected everywhere, kills once
        {"t1", {0, 1, 0}, {1, 1, 1}}, // m9
        {"t1", {0, 1, 1}, {1, 1, 1}}, // m10
        {"t0", {1, 0, 0}, {1, 0, 0}}, // m11
        {"t0", {1, 0, 0}, {1, 0, 0}}, // m12
        {"t0", {1, 0, 0}, {1, 0, 0}}, // m13
        {"t1", {0, 1, 1}, {0, 1, 1}}, // m14
        {"-", {0, 0, 0}, {0, 0, 0}},  // m15
    };

    REQUIRE(res.kills.size() == 16);
    for (int mi = 0; mi < 16; ++mi) {
        INFO("mutant ", mi, ": ", s.mutants[mi].description);
        const Row& want = expected[mi];
        if (std::string(want.killer) == "-") {
            CHECK_FALSE(res.kills[mi].killed);
        } else {
            CHECK(res.kills[mi].killed);
            CHECK(res.kills[mi].killingTest == want.killer);
        }
    }

    REQUIRE(res.pairOutcomes.size() == 16 * 3);
    for (const auto& [mi, ti, weak, strong] : res.pairOutcomes) {
        INFO("mutant ", mi, " test ", ti);
        CHECK(weak == expected[mi].weak[ti]);
        CHECK(strong == expected[mi].strong[ti]);
    }

    CHECK(res.mutationScore == doctest::Approx(15.0 / 16.0));

    // export reflects the same matrix
    std::string matrix = exportKillMatrix(s.mutants, res);
    CHECK(matrix.find("m5\tReplaceComparisonOperator\tt1") != std::string::npos);
    CHECK(matrix.find("m15\tInsertUnaryOperator\t-") != std::string::npos);
}

TEST_CASE("strong kills imply weak infection") {
    Subject s = fixtures::make(fixtures::kLoopExit, "loopexit");
    RandomSource rng(41);
    std::vector<TestCase> tests;
    for (int i = 0; i < 12; ++i) tests.push_back(randomTest(s.program, rng, 10));

    MutationResult res = strongMutationScore(s, tests, InterpLimits{});
    for (const auto& [mi, ti, weak, strong] : res.pairOutcomes) {
        if (strong) CHECK(weak);
    }
}

TEST_CASE("mutation score is monotone under test addition") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    RandomSource rng(43);
    std::vector<TestCase> pool;
    for (int i = 0; i < 10; ++i) pool.push_back(randomTest(s.program, rng, 8));

    for (int round = 0; round < 10; ++round) {
        // random growth order
        std::vector<TestCase> order = pool;
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);

        double last = 0.0;
        std::vector<TestCase> prefix;
        for (const TestCase& t : order) {
            prefix.push_back(t);
            double score = strongMutationScore(s, prefix, InterpLimits{}).mutationScore;
            CHECK(score >= last);
            last = score;
        }
    }
}

TEST_CASE("empty suites and mutant-free subjects behave") {
    Subject s = fixtures::make(kLatch, "latch");
    MutationResult res = strongMutationScore(s, {}, InterpLimits{});
    CHECK(res.mutationScore == 0.0);
    CHECK(res.pairOutcomes.empty());
    for (const KillRecord& k : res.kills) CHECK_FALSE(k.killed);
}
