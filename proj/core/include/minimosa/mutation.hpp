#pragma once

// Mutation analysis: deterministic enumeration of single-location mutants of
// the class under test (eight operators) plus weak- and strong-mutation
// scoring. Mutants are interpreted as expression/statement-level overrides —
// the original program is never rewritten.

#include "minimosa/ast.hpp"
#include "minimosa/targets.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace minimosa {

struct Subject;   // subject.hpp
struct TestCase;  // testcase.hpp
struct InterpLimits;

enum class MutationOperator : uint8_t {
    DeleteCall,
    DeleteField,
    InsertUnaryOperator,
    ReplaceArithmeticOperator,
    ReplaceBitwiseOperator,
    ReplaceComparisonOperator,
    ReplaceConstant,
    ReplaceVariable,
};

const char* mutationOperatorName(MutationOperator op);

struct Mutant {
    int index = -1;
    std::string id; // "m<index>"
    MutationOperator op;

    // location
    int methodIndex = -1;
    int blockIndex = -1; // CFG block containing the statement
    int stmtId = -1;
    int exprId = -1; // mutated expression; -1 for statement-level DeleteCall

    // payloads
    BinaryOp replacementOp = BinaryOp::Add;  // operator replacements
    int64_t replacementInt = 0;              // ReplaceConstant (int)
    double replacementFloat = 0.0;           // ReplaceConstant (float)
    bool replacementBool = false;            // ReplaceConstant (bool)
    int replacementSlot = -1;                // ReplaceVariable

    std::string description;
};

std::vector<Mutant> generateMutants(const Program& p, const ProgramCfg& cfg);

// One coverage target per mutant; covered = infection observed at the
// mutation point during execution of the unmutated program.
std::vector<CoverageTarget> weakMutationTargets(const std::vector<Mutant>& mutants);

struct KillRecord {
    int mutantIndex = -1;
    bool killed = false;
    std::string killingTest; // test id, empty when surviving
};

struct MutationResult {
    std::vector<KillRecord> kills; // by mutant index
    double mutationScore = 0.0;    // killed / generated (0 when no mutants)
    // (mutant, test) pairs examined, with weak/strong outcome — feeds the
    // strong ⊆ weak containment property
    std::vector<std::tuple<int, int, bool, bool>> pairOutcomes; // mutant, test, weak, strong
};

MutationResult strongMutationScore(const Subject& subject, const std::vector<TestCase>& tests,
                                   const InterpLimits& limits);

// "mutant-id<TAB>operator<TAB>killed-by" (test id or "-")
std::string exportKillMatrix(const std::vector<Mutant>& mutants, const MutationResult& result);

} // namespace minimosa
