#pragma once

// Test cases are straight-line statement sequences over the subject's API:
// construct objects, call methods, define primitive/array inputs. Arguments
// are literals or backward references to variables defined by earlier
// statements, so every test is trivially executable and serializable.

#include "minimosa/ast.hpp"
#include "minimosa/rng.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace minimosa {

struct TestArg {
    enum class Kind : uint8_t { IntLit, FloatLit, BoolLit, Null, Ref };
    Kind kind = Kind::IntLit;
    int64_t i = 0;
    double f = 0.0;
    bool b = false;
    int ref = -1; // index of the defining statement

    static TestArg ofInt(int64_t v) { TestArg a; a.kind = Kind::IntLit; a.i = v; return a; }
    static TestArg ofFloat(double v) { TestArg a; a.kind = Kind::FloatLit; a.f = v; return a; }
    static TestArg ofBool(bool v) { TestArg a; a.kind = Kind::BoolLit; a.b = v; return a; }
    static TestArg null() { TestArg a; a.kind = Kind::Null; return a; }
    static TestArg ofRef(int stmt) { TestArg a; a.kind = Kind::Ref; a.ref = stmt; return a; }

    bool operator==(const TestArg& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::IntLit: return i == o.i;
            case Kind::FloatLit: return f == o.f;
            case Kind::BoolLit: return b == o.b;
            case Kind::Null: return true;
            case Kind::Ref: return ref == o.ref;
        }
        return false;
    }
};

struct TestStatement {
    enum class Kind : uint8_t { Construct, MethodCall, PrimitiveAssign, ArrayCreate };
    Kind kind = Kind::Construct;

    int classIndex = -1;  // Construct
    int methodIndex = -1; // MethodCall: global method index
    int receiver = -1;    // MethodCall: defining statement of the receiver

    // Construct/MethodCall: call arguments; PrimitiveAssign: the value;
    // ArrayCreate: the length
    std::vector<TestArg> args;

    Type varType; // type this statement defines; Void when it defines nothing

    bool definesVar() const { return varType.kind != TypeKind::Void; }
    bool isCall() const { return kind == Kind::Construct || kind == Kind::MethodCall; }

    bool operator==(const TestStatement& o) const {
        return kind == o.kind && classIndex == o.classIndex && methodIndex == o.methodIndex &&
               receiver == o.receiver && args == o.args && varType == o.varType;
    }
};

struct TestCase {
    std::vector<TestStatement> statements;

    int length() const { return static_cast<int>(statements.size()); }
    bool operator==(const TestCase& o) const { return statements == o.statements; }
};

struct TestSuite {
    std::string subject;
    std::string algorithm;
    uint64_t seed = 0;
    std::vector<TestCase> tests;
};

// Knobs for the variation operators; statementProb < 0 means 1/length.
struct GenomeParams {
    int maxLength = 40;
    double insertionProb = 0.3;
    double deletionProb = 0.1;
    double statementProb = -1.0;
};

// Statement counts that depend only on the test's shape: calls, non-call
// statements, and total length.
struct StaticProxies {
    double calls = 0;
    double nonCalls = 0;
    double length = 0;
};

StaticProxies staticProxies(const TestCase& t);

// Random test with 1..maxLength statements; the first statement always
// constructs the class under test.
TestCase randomTest(const Program& p, RandomSource& rng, int maxLength);

// Single-point crossover over absolute statement positions, followed by
// reference repair on both children.
std::pair<TestCase, TestCase> crossoverSinglePoint(const TestCase& a, const TestCase& b,
                                                   const Program& p, RandomSource& rng);

// Per-statement rewrites with probability `statementProb`, then one optional
// insertion and one optional deletion (deletion never empties the test).
TestCase mutateUniform(const TestCase& t, const Program& p, RandomSource& rng,
                       const GenomeParams& params);

// Deletes one statement and remaps later backward references. References to
// the deleted statement itself become dangling, so callers must re-validate.
TestCase removeStatement(const TestCase& t, int pos);

// Structural validity: backward references, argument/receiver type agreement,
// and at least one construction of the class under test.
bool validateTest(const Program& p, const TestCase& t, std::string* error = nullptr);

// Reads a human-oriented rendering ("v0 = new Stack()" style) for CLI output.
std::string formatTest(const Program& p, const TestCase& t);

std::string suiteToJson(const Program& p, const TestSuite& suite);
// Throws std::runtime_error on malformed input or statements that do not
// validate against `p`.
TestSuite suiteFromJson(const Program& p, const std::string& text);

} // namespace minimosa
