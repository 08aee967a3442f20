#pragma once

// Instrumented interpreter. Every execution produces a trace holding coverage
// bits, per-edge branch distances, frequency counters for the dynamic
// performance proxies, the cost sample (steps, allocation units), and fault
// information. Mutants run as overrides at their mutation point — the program
// itself is never rewritten.

#include "minimosa/subject.hpp"
#include "minimosa/testcase.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace minimosa {

struct InterpLimits {
    uint64_t maxSteps = 20000; // statements + condition evaluations, tests included
    int maxCallDepth = 200;
    int64_t maxArrayLength = 65536;
};

enum class FaultKind : uint8_t {
    None,
    DivisionByZero,
    NullDereference,
    IndexOutOfBounds,
    CallDepthExceeded,
};

const char* faultKindName(FaultKind k);

struct FaultInfo {
    FaultKind kind = FaultKind::None;
    int testStatement = -1; // test statement that was executing
    int stmtId = -1;        // production statement at fault, -1 at test level
};

struct CostSample {
    uint64_t steps = 0;
    uint64_t allocUnits = 0; // object: 1 + #fields, array: 1 + length
};

struct ExecutionTrace {
    std::vector<uint8_t> coveredTargets;        // per target index
    std::vector<uint32_t> branchFrequency;      // per global branch edge
    std::vector<double> minBranchDistance;      // per edge; +inf until evaluated
    std::vector<uint32_t> methodCallFrequency;  // per global method
    std::vector<uint32_t> instantiationFrequency; // per production allocation site
    std::vector<uint8_t> coveredStmt;           // per production statement id
    std::vector<uint8_t> infectedMutants;       // per mutant (trackInfection only)
    uint32_t coveredStatementCount = 0;
    uint32_t executedTestStatements = 0;
    CostSample cost;
    FaultInfo fault;
    bool budgetExhausted = false;

    bool covered(int target) const { return coveredTargets[target] != 0; }
    int coveredCount() const;
};

struct ExecOptions {
    bool trackInfection = false; // record weak-mutation infection on the clean program
    int activeMutant = -1;       // >= 0: execute this mutant instead of the original
};

ExecutionTrace executeTest(const Subject& subject, const TestCase& test,
                           const InterpLimits& limits, const ExecOptions& opts = {});

// Behavioural fingerprint for strong-mutation kills: per-statement results,
// the fault (if any), and a deep dump of every test variable's final state.
struct Observation {
    std::vector<int64_t> blob;
    bool operator==(const Observation& o) const { return blob == o.blob; }
};

struct ObservedRun {
    ExecutionTrace trace;
    Observation observation;
};

ObservedRun observeTest(const Subject& subject, const TestCase& test, const InterpLimits& limits,
                        const ExecOptions& opts = {});

// Counters feeding the dynamic performance proxies.
struct DynamicCounters {
    uint64_t loopCycles = 0;        // frequency mass of loop edges taken more than once
    uint64_t methodCalls = 0;       // total invocations, constructors included
    uint64_t instantiations = 0;    // frequency mass of hot allocation sites
    uint64_t coveredStatements = 0; // distinct production statements executed
};

DynamicCounters dynamicCounters(const Subject& subject, const ExecutionTrace& trace);

// Distance to making `op(a,b)` true, with offset K = 1 for ordered operators.
double comparisonDistance(BinaryOp op, double a, double b);
BinaryOp negateComparison(BinaryOp op);

// "target-id<TAB>frequency<TAB>distance" per branch target (frequency of the
// edge; best distance seen for it, "inf" when its conditional never ran).
std::string exportTraceDump(const Subject& subject, const ExecutionTrace& trace);

} // namespace minimosa
