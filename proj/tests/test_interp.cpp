#include "minimosa/interp.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <cmath>

using namespace minimosa;

namespace {

int methodIndexOf(const Program& p, const std::string& qualified) {
    for (int g = 0; g < p.numMethods(); ++g)
        if (p.method(g).qualifiedName == qualified) return g;
    return -1;
}

TestStatement construct(int cls) {
    TestStatement s;
    s.kind = TestStatement::Kind::Construct;
    s.classIndex = cls;
    s.varType = Type::object(cls);
    return s;
}

TestStatement callM(int method, int receiver, std::vector<TestArg> args, Type ret) {
    TestStatement s;
    s.kind = TestStatement::Kind::MethodCall;
    s.methodIndex = method;
    s.receiver = receiver;
    s.args = std::move(args);
    s.varType = ret;
    return s;
}

// construct the CUT, then one call with integer arguments
TestCase oneCall(const Subject& s, const std::string& qualified, std::vector<int64_t> args,
                 Type ret = Type::intType()) {
    int m = methodIndexOf(s.program, qualified);
    REQUIRE(m >= 0);
    TestCase t;
    t.statements.push_back(construct(s.program.cutClass));
    std::vector<TestArg> a;
    for (int64_t v : args) a.push_back(TestArg::ofInt(v));
    t.statements.push_back(callM(m, 0, std::move(a), ret));
    return t;
}

// first mutant in `method` with the given comparison replacement
int comparisonMutant(const Subject& s, int method, BinaryOp repl) {
    for (const Mutant& m : s.mutants)
        if (m.methodIndex == method && m.op == MutationOperator::ReplaceComparisonOperator &&
            m.replacementOp == repl)
            return m.index;
    return -1;
}

} // namespace

TEST_CASE("hand-counted costs and frequencies") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    int signM = methodIndexOf(s.program, "Signum.sign");
    int ctorM = methodIndexOf(s.program, "Signum.ctor");
    TestCase t = oneCall(s, "Signum.sign", {5});

    ExecutionTrace tr = executeTest(s, t, InterpLimits{});

    // 2 test statements + ctor assign + sign's assign, condition, return
    CHECK(tr.cost.steps == 6);
    // one Signum instance: 1 + 1 field
    CHECK(tr.cost.allocUnits == 2);
    CHECK(tr.executedTestStatements == 2);
    // ctor assign, sign assign, the executed if, the taken return
    CHECK(tr.coveredStatementCount == 4);
    CHECK(tr.methodCallFrequency[ctorM] == 1);
    CHECK(tr.methodCallFrequency[signM] == 1);
    CHECK(tr.fault.kind == FaultKind::None);
    CHECK_FALSE(tr.budgetExhausted);
}

TEST_CASE("branch frequencies and distances") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    int signM = methodIndexOf(s.program, "Signum.sign");
    const MethodCfg& mc = s.cfg.methods[signM];
    REQUIRE(mc.conditionalBlocks.size() == 2);
    int gt0True = s.cfg.edgeIndex(signM, mc.conditionalBlocks[0], true);
    int lt0True = s.cfg.edgeIndex(signM, mc.conditionalBlocks[1], true);

    SUBCASE("taken edge has distance zero, sibling gets a positive distance") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Signum.sign", {5}), InterpLimits{});
        CHECK(tr.branchFrequency[gt0True] == 1);
        CHECK(tr.branchFrequency[gt0True + 1] == 0);
        CHECK(tr.minBranchDistance[gt0True] == 0.0);
        // distance to `5 <= 0`: non-strict, so no offset
        CHECK(tr.minBranchDistance[gt0True + 1] == 5.0);
        // the second conditional never ran
        CHECK(tr.branchFrequency[lt0True] == 0);
        CHECK(std::isinf(tr.minBranchDistance[lt0True]));
    }
    SUBCASE("near miss yields a small distance") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Signum.sign", {0}), InterpLimits{});
        // 0 > 0 false: distance to true is 0 - 0 + 1
        CHECK(tr.minBranchDistance[gt0True] == 1.0);
        CHECK(tr.minBranchDistance[gt0True + 1] == 0.0);
        // 0 < 0 false, same near miss on the second conditional
        CHECK(tr.minBranchDistance[lt0True] == 1.0);
    }
}

TEST_CASE("comparison distance table") {
    // offset 1 for strict operators only: at a == b a non-strict comparison
    // is already satisfied, so it needs no epsilon to escape zero
    CHECK(comparisonDistance(BinaryOp::Gt, 5, 0) == 0.0);
    CHECK(comparisonDistance(BinaryOp::Gt, 0, 5) == 6.0);
    CHECK(comparisonDistance(BinaryOp::Ge, 3, 3) == 0.0);
    CHECK(comparisonDistance(BinaryOp::Ge, 2, 4) == 2.0);
    CHECK(comparisonDistance(BinaryOp::Lt, 3, 3) == 1.0);
    CHECK(comparisonDistance(BinaryOp::Le, 4, 3) == 1.0);
    CHECK(comparisonDistance(BinaryOp::Eq, 7, 10) == 3.0);
    CHECK(comparisonDistance(BinaryOp::Eq, 7, 7) == 0.0);
    CHECK(comparisonDistance(BinaryOp::Ne, 7, 7) == 1.0);
    CHECK(comparisonDistance(BinaryOp::Ne, 7, 8) == 0.0);
    CHECK(negateComparison(BinaryOp::Gt) == BinaryOp::Le);
    CHECK(negateComparison(BinaryOp::Eq) == BinaryOp::Ne);
}

TEST_CASE("loop accounting feeds the dynamic counters") {
    Subject s = fixtures::make(fixtures::kAccum, "accum");
    int scaledM = methodIndexOf(s.program, "Accum.scaled");
    TestCase t;
    t.statements.push_back(construct(0));
    t.statements.push_back(callM(scaledM, 0, {TestArg::ofInt(3)}, Type::floatType()));

    ExecutionTrace tr = executeTest(s, t, InterpLimits{});
    DynamicCounters c = dynamicCounters(s, tr);

    // for-loop iterating edge taken 3 times: counts as cycle mass
    CHECK(c.loopCycles == 3);
    // ctor + scaled
    CHECK(c.methodCalls == 2);
    // a single Accum instance is not a hot allocation site
    CHECK(c.instantiations == 0);
    CHECK(c.coveredStatements == tr.coveredStatementCount);
}

TEST_CASE("faults carry their location") {
    Subject s = fixtures::make(fixtures::kFaulty, "faulty");
    int divideM = methodIndexOf(s.program, "Faulty.divide");

    SUBCASE("division by zero") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.divide", {1, 0}), InterpLimits{});
        CHECK(tr.fault.kind == FaultKind::DivisionByZero);
        CHECK(tr.fault.testStatement == 1);
        REQUIRE(tr.fault.stmtId >= 0);
        CHECK(s.methodOfStmt[tr.fault.stmtId] == divideM);
        CHECK(tr.executedTestStatements == 2);
    }
    SUBCASE("modulo by zero is the same fault") {
        // exercised through the mutant interpreter in other tests; here the
        // direct operator: 1 / 0 and 1 % 0 both fault
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.divide", {7, 0}), InterpLimits{});
        CHECK(tr.fault.kind == FaultKind::DivisionByZero);
    }
    SUBCASE("index out of bounds") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.pick", {3, 5}), InterpLimits{});
        CHECK(tr.fault.kind == FaultKind::IndexOutOfBounds);
        // object (1+1) + int[3] (1+3)
        CHECK(tr.cost.allocUnits == 6);
    }
    SUBCASE("negative array length") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.pick", {-1, 0}), InterpLimits{});
        CHECK(tr.fault.kind == FaultKind::IndexOutOfBounds);
    }
    SUBCASE("array length above the limit") {
        InterpLimits lim;
        lim.maxArrayLength = 10;
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.pick", {11, 0}), lim);
        CHECK(tr.fault.kind == FaultKind::IndexOutOfBounds);
    }
    SUBCASE("null dereference") {
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.poke", {}), InterpLimits{});
        CHECK(tr.fault.kind == FaultKind::NullDereference);
    }
    SUBCASE("runaway recursion") {
        InterpLimits lim;
        lim.maxCallDepth = 30;
        ExecutionTrace tr = executeTest(s, oneCall(s, "Faulty.sink", {0}), lim);
        CHECK(tr.fault.kind == FaultKind::CallDepthExceeded);
    }
}

TEST_CASE("step budget exhaustion is not a fault") {
    Subject s = fixtures::make(fixtures::kAccum, "accum");
    int scaledM = methodIndexOf(s.program, "Accum.scaled");
    TestCase t;
    t.statements.push_back(construct(0));
    t.statements.push_back(callM(scaledM, 0, {TestArg::ofInt(8)}, Type::floatType()));

    InterpLimits lim;
    lim.maxSteps = 10;
    ExecutionTrace tr = executeTest(s, t, lim);
    CHECK(tr.budgetExhausted);
    CHECK(tr.fault.kind == FaultKind::None);
    CHECK(tr.cost.steps <= 11); // the step that crossed the limit, nothing after
}

TEST_CASE("weak-mutation infection at the mutation point") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    int signM = methodIndexOf(s.program, "Signum.sign");
    int toLt = comparisonMutant(s, signM, BinaryOp::Lt); // x > 0 becomes x < 0
    int toGe = comparisonMutant(s, signM, BinaryOp::Ge); // x > 0 becomes x >= 0
    REQUIRE(toLt >= 0);
    REQUIRE(toGe >= 0);

    ExecOptions opts;
    opts.trackInfection = true;
    ExecutionTrace tr = executeTest(s, oneCall(s, "Signum.sign", {5}), InterpLimits{}, opts);

    // 5 < 0 differs from 5 > 0; 5 >= 0 agrees
    CHECK(tr.infectedMutants[toLt] == 1);
    CHECK(tr.infectedMutants[toGe] == 0);

    // infection covers exactly the matching weak targets
    for (int mi : {toLt, toGe}) {
        int tgt = s.targets.weakTarget[mi];
        REQUIRE(tgt >= 0);
        CHECK(tr.coveredTargets[tgt] == tr.infectedMutants[mi]);
    }

    // off by default: no infection vector unless asked for
    ExecutionTrace plain = executeTest(s, oneCall(s, "Signum.sign", {5}), InterpLimits{});
    CHECK(plain.infectedMutants.empty());
}

TEST_CASE("observations distinguish behaviour, not implementation") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    int signM = methodIndexOf(s.program, "Signum.sign");
    TestCase t = oneCall(s, "Signum.sign", {5});

    ObservedRun a = observeTest(s, t, InterpLimits{});
    ObservedRun b = observeTest(s, t, InterpLimits{});
    CHECK(a.observation == b.observation);

    // a mutant that changes the return value changes the observation
    int toLt = comparisonMutant(s, signM, BinaryOp::Lt);
    ExecOptions opts;
    opts.activeMutant = toLt;
    ObservedRun m = observeTest(s, t, InterpLimits{}, opts);
    CHECK_FALSE(m.observation == a.observation);

    // a mutant whose replacement agrees on this input leaves it untouched
    ExecOptions idle;
    idle.activeMutant = comparisonMutant(s, signM, BinaryOp::Ge);
    ObservedRun n = observeTest(s, oneCall(s, "Signum.sign", {-2}), InterpLimits{}, idle);
    ObservedRun base = observeTest(s, oneCall(s, "Signum.sign", {-2}), InterpLimits{});
    // x > 0 vs x >= 0 on -2: both false, identical behaviour
    CHECK(n.observation == base.observation);
}

TEST_CASE("execution is deterministic") {
    Subject s = fixtures::make(fixtures::kAccum, "accum");
    int addM = methodIndexOf(s.program, "Accum.add");
    int scaledM = methodIndexOf(s.program, "Accum.scaled");
    TestCase t;
    t.statements.push_back(construct(0));
    t.statements.push_back(callM(addM, 0, {TestArg::ofFloat(1.5)}, Type::voidType()));
    t.statements.push_back(callM(scaledM, 0, {TestArg::ofInt(4)}, Type::floatType()));

    ExecutionTrace a = executeTest(s, t, InterpLimits{});
    ExecutionTrace b = executeTest(s, t, InterpLimits{});
    CHECK(a.cost.steps == b.cost.steps);
    CHECK(a.cost.allocUnits == b.cost.allocUnits);
    CHECK(a.coveredTargets == b.coveredTargets);
    CHECK(a.branchFrequency == b.branchFrequency);
    CHECK(a.minBranchDistance == b.minBranchDistance);
}

TEST_CASE("trace dump lists every branch target") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    ExecutionTrace tr = executeTest(s, oneCall(s, "Signum.sign", {5}), InterpLimits{});
    std::string dump = exportTraceDump(s, tr);

    int lines = 0;
    for (char c : dump)
        if (c == '\n') lines++;
    CHECK(lines == s.targets.countOfKind(TargetKind::Branch));
    // the unexecuted second conditional shows up as "inf"
    CHECK(dump.find("inf") != std::string::npos);
    CHECK(dump.find("\t0\n") != std::string::npos);
}
