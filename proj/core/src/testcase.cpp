#include "minimosa/testcase.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace minimosa {

using nlohmann::json;

namespace {

// indices of earlier statements whose variable can feed a parameter of type t
std::vector<int> providersOf(const std::vector<TestStatement>& stmts, int upto, const Type& t) {
    std::vector<int> out;
    for (int i = 0; i < upto; ++i) {
        const TestStatement& s = stmts[i];
        if (!s.definesVar()) continue;
        if (s.varType == t || (t.kind == TypeKind::Float && s.varType.kind == TypeKind::Int))
            out.push_back(i);
    }
    return out;
}

int64_t pickIntLiteral(const Program& p, RandomSource& rng) {
    switch (rng.below(4)) {
        case 0: return rng.intIn(-2, 9);
        case 1: return rng.intIn(-100, 100);
        default: {
            if (p.intConstants.empty()) return rng.intIn(-2, 9);
            int64_t c = p.intConstants[rng.below(p.intConstants.size())];
            return c + rng.intIn(-1, 1);
        }
    }
}

double pickFloatLiteral(const Program& p, RandomSource& rng) {
    switch (rng.below(4)) {
        case 0: return static_cast<double>(rng.intIn(-8, 8)) / 2.0;
        case 1: return static_cast<double>(rng.intIn(-100, 100));
        default: {
            if (p.floatConstants.empty()) return static_cast<double>(rng.intIn(-8, 8)) / 2.0;
            double c = p.floatConstants[rng.below(p.floatConstants.size())];
            return c + static_cast<double>(rng.intIn(-1, 1));
        }
    }
}

TestArg literalFor(const Program& p, const Type& t, RandomSource& rng) {
    switch (t.kind) {
        case TypeKind::Int: return TestArg::ofInt(pickIntLiteral(p, rng));
        case TypeKind::Float: return TestArg::ofFloat(pickFloatLiteral(p, rng));
        case TypeKind::Bool: return TestArg::ofBool(rng.below(2) == 1);
        default: return TestArg::null();
    }
}

// Nudge an existing numeric literal instead of resampling it.  Small moves
// let the search follow branch-distance gradients (an equality guard pulls
// the argument towards the satisfying value step by step); resampling alone
// would turn every comparison into a lottery.
TestArg nudgeLiteral(const Program& p, const Type& t, const TestArg& cur, RandomSource& rng) {
    if (cur.kind == TestArg::Kind::IntLit && t.kind == TypeKind::Int) {
        switch (rng.below(8)) {
            case 0:
            case 1:
            case 2: return TestArg::ofInt(cur.i + rng.intIn(1, 3) * (rng.below(2) ? 1 : -1));
            case 3:
            case 4: return TestArg::ofInt(cur.i + rng.intIn(1, 25) * (rng.below(2) ? 1 : -1));
            case 5: return TestArg::ofInt(cur.i + rng.intIn(1, 200) * (rng.below(2) ? 1 : -1));
            default: return literalFor(p, t, rng);
        }
    }
    if (cur.kind == TestArg::Kind::FloatLit && t.kind == TypeKind::Float) {
        switch (rng.below(8)) {
            case 0:
            case 1:
            case 2: return TestArg::ofFloat(cur.f + static_cast<double>(rng.intIn(1, 4)) / 2.0 *
                                                        (rng.below(2) ? 1.0 : -1.0));
            case 3:
            case 4: return TestArg::ofFloat(cur.f + static_cast<double>(rng.intIn(1, 25)) *
                                                        (rng.below(2) ? 1.0 : -1.0));
            case 5: return TestArg::ofFloat(cur.f + static_cast<double>(rng.intIn(1, 200)) *
                                                        (rng.below(2) ? 1.0 : -1.0));
            default: return literalFor(p, t, rng);
        }
    }
    return literalFor(p, t, rng);
}

// neutral fallback when a dangling reference cannot be re-bound
TestArg fallbackFor(const Type& t) {
    switch (t.kind) {
        case TypeKind::Int: return TestArg::ofInt(0);
        case TypeKind::Float: return TestArg::ofFloat(0.0);
        case TypeKind::Bool: return TestArg::ofBool(false);
        default: return TestArg::null();
    }
}

int classOfMethod(const Program& p, int global) { return p.methodTable[global].first; }

// Builds statements against the current tail of `out`, creating providers for
// object/array parameters on demand (bounded by maxLen and recursion depth).
class Gen {
public:
    Gen(const Program& p, RandomSource& rng, std::vector<TestStatement>& out, int maxLen)
        : p_(p), rng_(rng), out_(out), maxLen_(maxLen) {}

    int appendConstruct(int classIndex, int depth) {
        if (!reserve()) return -1;
        const ClassDef& cls = p_.classes[classIndex];
        const MethodDef& ctor = cls.methods[cls.ctorLocal];
        TestStatement st;
        st.kind = TestStatement::Kind::Construct;
        st.classIndex = classIndex;
        st.varType = Type::object(classIndex);
        for (int i = 0; i < ctor.numParams; ++i) st.args.push_back(makeArg(ctor.localTypes[i], depth));
        pending_--;
        out_.push_back(std::move(st));
        return static_cast<int>(out_.size()) - 1;
    }

    int appendArrayCreate() {
        if (!reserve()) return -1;
        TestStatement st;
        st.kind = TestStatement::Kind::ArrayCreate;
        st.varType = Type::intArray();
        st.args.push_back(TestArg::ofInt(static_cast<int64_t>(rng_.below(9))));
        pending_--;
        out_.push_back(std::move(st));
        return static_cast<int>(out_.size()) - 1;
    }

    void appendPrimitive() {
        if (!reserve()) return;
        TestStatement st;
        st.kind = TestStatement::Kind::PrimitiveAssign;
        switch (rng_.below(3)) {
            case 0: st.varType = Type::floatType(); break;
            case 1: st.varType = Type::boolType(); break;
            default: st.varType = Type::intType(); break;
        }
        st.args.push_back(literalFor(p_, st.varType, rng_));
        pending_--;
        out_.push_back(std::move(st));
    }

    void appendMethodCall() {
        std::vector<int> receivers;
        for (int i = 0; i < static_cast<int>(out_.size()); ++i)
            if (out_[i].varType.kind == TypeKind::Object) receivers.push_back(i);
        if (receivers.empty()) {
            if (appendConstruct(p_.cutClass, 0) < 0) appendPrimitive();
            return;
        }
        if (!reserve()) return;
        int recv = receivers[rng_.below(receivers.size())];
        const ClassDef& cls = p_.classes[out_[recv].varType.cls];
        std::vector<int> methods;
        for (int i = 0; i < static_cast<int>(cls.methods.size()); ++i)
            if (!cls.methods[i].isCtor) methods.push_back(i);
        if (methods.empty()) {
            pending_--;
            appendPrimitive();
            return;
        }
        const MethodDef& m = cls.methods[methods[rng_.below(methods.size())]];
        TestStatement st;
        st.kind = TestStatement::Kind::MethodCall;
        st.methodIndex = m.globalIndex;
        st.receiver = recv;
        st.varType = m.returnType;
        for (int i = 0; i < m.numParams; ++i) st.args.push_back(makeArg(m.localTypes[i], 0));
        pending_--;
        out_.push_back(std::move(st));
    }

    TestArg makeArg(const Type& t, int depth) {
        std::vector<int> prov = providersOf(out_, static_cast<int>(out_.size()), t);
        if (t.isNumeric() || t.kind == TypeKind::Bool) {
            if (!prov.empty() && rng_.chance(0.5)) return TestArg::ofRef(prov[rng_.below(prov.size())]);
            return literalFor(p_, t, rng_);
        }
        if (!prov.empty() && rng_.chance(0.7)) return TestArg::ofRef(prov[rng_.below(prov.size())]);
        if (depth < 3) {
            int idx = t.kind == TypeKind::IntArray ? appendArrayCreate()
                                                   : appendConstruct(t.cls, depth + 1);
            if (idx >= 0) return TestArg::ofRef(idx);
        }
        return TestArg::null();
    }

private:
    const Program& p_;
    RandomSource& rng_;
    std::vector<TestStatement>& out_;
    int maxLen_;
    // statements reserved by in-flight appends, so provider creation for
    // arguments can never push the test past maxLen_
    int pending_ = 0;

    bool reserve() {
        if (static_cast<int>(out_.size()) + pending_ >= maxLen_) return false;
        pending_++;
        return true;
    }
};

// One statement valid against stmts[0..pos); never creates providers, so the
// caller's index bookkeeping stays trivial.
TestStatement simpleStatement(const Program& p, const std::vector<TestStatement>& stmts, int pos,
                              RandomSource& rng) {
    auto argAgainstPrefix = [&](const Type& t) {
        std::vector<int> prov = providersOf(stmts, pos, t);
        if (t.isNumeric() || t.kind == TypeKind::Bool) {
            if (!prov.empty() && rng.chance(0.5)) return TestArg::ofRef(prov[rng.below(prov.size())]);
            return literalFor(p, t, rng);
        }
        if (!prov.empty()) return TestArg::ofRef(prov[rng.below(prov.size())]);
        return TestArg::null();
    };

    std::vector<int> receivers;
    for (int i = 0; i < pos; ++i)
        if (stmts[i].varType.kind == TypeKind::Object) receivers.push_back(i);

    uint64_t roll = rng.below(10);
    if (roll < 6 && !receivers.empty()) {
        int recv = receivers[rng.below(receivers.size())];
        const ClassDef& cls = p.classes[stmts[recv].varType.cls];
        std::vector<int> methods;
        for (int i = 0; i < static_cast<int>(cls.methods.size()); ++i)
            if (!cls.methods[i].isCtor) methods.push_back(i);
        if (!methods.empty()) {
            const MethodDef& m = cls.methods[methods[rng.below(methods.size())]];
            TestStatement st;
            st.kind = TestStatement::Kind::MethodCall;
            st.methodIndex = m.globalIndex;
            st.receiver = recv;
            st.varType = m.returnType;
            for (int i = 0; i < m.numParams; ++i) st.args.push_back(argAgainstPrefix(m.localTypes[i]));
            return st;
        }
    }
    if (roll == 6) {
        int cls = static_cast<int>(rng.below(p.classes.size()));
        const MethodDef& ctor = p.classes[cls].methods[p.classes[cls].ctorLocal];
        TestStatement st;
        st.kind = TestStatement::Kind::Construct;
        st.classIndex = cls;
        st.varType = Type::object(cls);
        for (int i = 0; i < ctor.numParams; ++i) st.args.push_back(argAgainstPrefix(ctor.localTypes[i]));
        return st;
    }
    if (roll == 7) {
        TestStatement st;
        st.kind = TestStatement::Kind::ArrayCreate;
        st.varType = Type::intArray();
        st.args.push_back(TestArg::ofInt(static_cast<int64_t>(rng.below(9))));
        return st;
    }
    TestStatement st;
    st.kind = TestStatement::Kind::PrimitiveAssign;
    switch (rng.below(3)) {
        case 0: st.varType = Type::floatType(); break;
        case 1: st.varType = Type::boolType(); break;
        default: st.varType = Type::intType(); break;
    }
    st.args.push_back(literalFor(p, st.varType, rng));
    return st;
}

bool assignableVar(const Type& def, const Type& want) {
    return def == want || (want.kind == TypeKind::Float && def.kind == TypeKind::Int);
}

// Rebuilds a possibly-inconsistent statement list: re-bind or neutralize
// dangling references, drop statements whose receiver cannot be recovered,
// and guarantee at least one construction of the class under test.
TestCase repair(const Program& p, const TestCase& raw, RandomSource& rng) {
    TestCase out;
    std::vector<int> remap(raw.statements.size(), -1);

    for (int i = 0; i < static_cast<int>(raw.statements.size()); ++i) {
        TestStatement st = raw.statements[i];
        bool drop = false;

        auto mapRef = [&](int r) -> int {
            if (r < 0 || r >= i) return -1;
            return remap[r];
        };
        auto fixArg = [&](TestArg& a, const Type& want) {
            if (a.kind != TestArg::Kind::Ref) return;
            int m = mapRef(a.ref);
            if (m >= 0 && out.statements[m].definesVar() &&
                assignableVar(out.statements[m].varType, want)) {
                a.ref = m;
                return;
            }
            std::vector<int> cands;
            for (int j = 0; j < static_cast<int>(out.statements.size()); ++j)
                if (out.statements[j].definesVar() &&
                    assignableVar(out.statements[j].varType, want))
                    cands.push_back(j);
            if (!cands.empty()) {
                a.ref = cands[rng.below(cands.size())];
                return;
            }
            a = fallbackFor(want);
        };

        switch (st.kind) {
            case TestStatement::Kind::Construct: {
                const ClassDef& cls = p.classes[st.classIndex];
                const MethodDef& ctor = cls.methods[cls.ctorLocal];
                for (int k = 0; k < static_cast<int>(st.args.size()); ++k)
                    fixArg(st.args[k], ctor.localTypes[k]);
                break;
            }
            case TestStatement::Kind::MethodCall: {
                Type need = Type::object(classOfMethod(p, st.methodIndex));
                int m = mapRef(st.receiver);
                if (m >= 0 && out.statements[m].varType == need) {
                    st.receiver = m;
                } else {
                    std::vector<int> cands;
                    for (int j = 0; j < static_cast<int>(out.statements.size()); ++j)
                        if (out.statements[j].varType == need) cands.push_back(j);
                    if (cands.empty()) {
                        drop = true;
                        break;
                    }
                    st.receiver = cands[rng.below(cands.size())];
                }
                const MethodDef& md = p.method(st.methodIndex);
                for (int k = 0; k < static_cast<int>(st.args.size()); ++k)
                    fixArg(st.args[k], md.localTypes[k]);
                break;
            }
            case TestStatement::Kind::PrimitiveAssign:
                break;
            case TestStatement::Kind::ArrayCreate:
                fixArg(st.args[0], Type::intType());
                break;
        }

        if (!drop) {
            remap[i] = static_cast<int>(out.statements.size());
            out.statements.push_back(std::move(st));
        }
    }

    bool hasCut = false;
    for (const TestStatement& st : out.statements)
        if (st.kind == TestStatement::Kind::Construct && st.classIndex == p.cutClass) hasCut = true;
    if (!hasCut) {
        Gen g(p, rng, out.statements, static_cast<int>(out.statements.size()) + 8);
        g.appendConstruct(p.cutClass, 2);
    }
    return out;
}

void shiftAfterInsert(std::vector<TestStatement>& stmts, int pos) {
    for (int j = pos + 1; j < static_cast<int>(stmts.size()); ++j) {
        TestStatement& st = stmts[j];
        if (st.receiver >= pos) st.receiver++;
        for (TestArg& a : st.args)
            if (a.kind == TestArg::Kind::Ref && a.ref >= pos) a.ref++;
    }
}

void shiftAfterDelete(std::vector<TestStatement>& stmts, int del) {
    for (int j = del; j < static_cast<int>(stmts.size()); ++j) {
        TestStatement& st = stmts[j];
        if (st.receiver == del)
            st.receiver = -1;
        else if (st.receiver > del)
            st.receiver--;
        for (TestArg& a : st.args) {
            if (a.kind != TestArg::Kind::Ref) continue;
            if (a.ref == del)
                a.ref = -1;
            else if (a.ref > del)
                a.ref--;
        }
    }
}

void rewriteStatement(const Program& p, std::vector<TestStatement>& stmts, int i,
                      RandomSource& rng) {
    TestStatement& st = stmts[i];
    auto argAgainstPrefix = [&](const Type& t, const TestArg& cur) {
        std::vector<int> prov = providersOf(stmts, i, t);
        if (t.isNumeric() || t.kind == TypeKind::Bool) {
            if (!prov.empty() && rng.chance(0.25)) return TestArg::ofRef(prov[rng.below(prov.size())]);
            return nudgeLiteral(p, t, cur, rng);
        }
        if (!prov.empty()) return TestArg::ofRef(prov[rng.below(prov.size())]);
        return TestArg::null();
    };

    switch (st.kind) {
        case TestStatement::Kind::PrimitiveAssign:
            st.args[0] = nudgeLiteral(p, st.varType, st.args[0], rng);
            return;
        case TestStatement::Kind::ArrayCreate:
            st.args[0] = argAgainstPrefix(Type::intType(), st.args[0]);
            if (st.args[0].kind == TestArg::Kind::IntLit)
                st.args[0].i = static_cast<int64_t>(rng.below(9));
            return;
        case TestStatement::Kind::Construct: {
            if (st.args.empty()) return;
            const ClassDef& cls = p.classes[st.classIndex];
            const MethodDef& ctor = cls.methods[cls.ctorLocal];
            int k = static_cast<int>(rng.below(st.args.size()));
            st.args[k] = argAgainstPrefix(ctor.localTypes[k], st.args[k]);
            return;
        }
        case TestStatement::Kind::MethodCall: {
            uint64_t choice = rng.below(3);
            if (choice == 0 || (choice == 1 && st.args.empty())) {
                Type need = Type::object(classOfMethod(p, st.methodIndex));
                std::vector<int> cands;
                for (int j = 0; j < i; ++j)
                    if (stmts[j].varType == need) cands.push_back(j);
                if (!cands.empty()) st.receiver = cands[rng.below(cands.size())];
                return;
            }
            if (choice == 1) {
                const MethodDef& m = p.method(st.methodIndex);
                int k = static_cast<int>(rng.below(st.args.size()));
                st.args[k] = argAgainstPrefix(m.localTypes[k], st.args[k]);
                return;
            }
            // switch to a sibling method on the same class
            const ClassDef& cls = p.classes[classOfMethod(p, st.methodIndex)];
            std::vector<int> methods;
            for (int j = 0; j < static_cast<int>(cls.methods.size()); ++j)
                if (!cls.methods[j].isCtor) methods.push_back(j);
            const MethodDef& m = cls.methods[methods[rng.below(methods.size())]];
            st.methodIndex = m.globalIndex;
            st.varType = m.returnType;
            st.args.clear();
            for (int k = 0; k < m.numParams; ++k)
                st.args.push_back(argAgainstPrefix(m.localTypes[k], TestArg::null()));
            return;
        }
    }
}

} // namespace

StaticProxies staticProxies(const TestCase& t) {
    StaticProxies s;
    for (const TestStatement& st : t.statements)
        (st.isCall() ? s.calls : s.nonCalls) += 1.0;
    s.length = static_cast<double>(t.statements.size());
    return s;
}

TestCase randomTest(const Program& p, RandomSource& rng, int maxLength) {
    TestCase t;
    Gen g(p, rng, t.statements, maxLength);
    g.appendConstruct(p.cutClass, 0);
    int targetLen = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(maxLength)));
    while (static_cast<int>(t.statements.size()) < targetLen) {
        uint64_t roll = rng.below(10);
        if (roll < 7)
            g.appendMethodCall();
        else if (roll == 7)
            g.appendConstruct(static_cast<int>(rng.below(p.classes.size())), 0);
        else if (roll == 8)
            g.appendPrimitive();
        else
            g.appendArrayCreate();
    }
    return t;
}

std::pair<TestCase, TestCase> crossoverSinglePoint(const TestCase& a, const TestCase& b,
                                                   const Program& p, RandomSource& rng) {
    int point = static_cast<int>(rng.below(static_cast<uint64_t>(std::min(a.length(), b.length()))));
    TestCase rawA, rawB;
    rawA.statements.assign(a.statements.begin(), a.statements.begin() + point);
    rawA.statements.insert(rawA.statements.end(), b.statements.begin() + point, b.statements.end());
    rawB.statements.assign(b.statements.begin(), b.statements.begin() + point);
    rawB.statements.insert(rawB.statements.end(), a.statements.begin() + point, a.statements.end());
    return {repair(p, rawA, rng), repair(p, rawB, rng)};
}

TestCase mutateUniform(const TestCase& t, const Program& p, RandomSource& rng,
                       const GenomeParams& params) {
    TestCase work = t;
    double pStmt = params.statementProb >= 0.0
                       ? params.statementProb
                       : 1.0 / static_cast<double>(std::max(1, work.length()));
    for (int i = 0; i < work.length(); ++i)
        if (rng.chance(pStmt)) rewriteStatement(p, work.statements, i, rng);

    if (rng.chance(params.insertionProb) && work.length() < 2 * params.maxLength) {
        int pos = static_cast<int>(rng.below(static_cast<uint64_t>(work.length() + 1)));
        TestStatement st = simpleStatement(p, work.statements, pos, rng);
        work.statements.insert(work.statements.begin() + pos, std::move(st));
        shiftAfterInsert(work.statements, pos);
    }
    if (rng.chance(params.deletionProb) && work.length() > 1) {
        int del = static_cast<int>(rng.below(static_cast<uint64_t>(work.length())));
        work.statements.erase(work.statements.begin() + del);
        shiftAfterDelete(work.statements, del);
    }
    return repair(p, work, rng);
}

TestCase removeStatement(const TestCase& t, int pos) {
    TestCase out = t;
    out.statements.erase(out.statements.begin() + pos);
    shiftAfterDelete(out.statements, pos);
    return out;
}

bool validateTest(const Program& p, const TestCase& t, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (t.statements.empty()) return fail("empty test");

    auto checkArg = [&](const TestArg& a, const Type& want, int i, int k) -> bool {
        switch (a.kind) {
            case TestArg::Kind::Ref: {
                if (a.ref < 0 || a.ref >= i)
                    return fail("statement " + std::to_string(i) + ": forward or invalid reference");
                const TestStatement& def = t.statements[a.ref];
                if (!def.definesVar() || !assignableVar(def.varType, want))
                    return fail("statement " + std::to_string(i) + ": argument " +
                                std::to_string(k) + " type mismatch");
                return true;
            }
            case TestArg::Kind::IntLit:
                if (want.kind != TypeKind::Int && want.kind != TypeKind::Float)
                    return fail("statement " + std::to_string(i) + ": int literal for non-numeric");
                return true;
            case TestArg::Kind::FloatLit:
                if (want.kind != TypeKind::Float)
                    return fail("statement " + std::to_string(i) + ": float literal mismatch");
                return true;
            case TestArg::Kind::BoolLit:
                if (want.kind != TypeKind::Bool)
                    return fail("statement " + std::to_string(i) + ": bool literal mismatch");
                return true;
            case TestArg::Kind::Null:
                if (!want.isReference())
                    return fail("statement " + std::to_string(i) + ": null for value type");
                return true;
        }
        return false;
    };

    bool hasCut = false;
    for (int i = 0; i < t.length(); ++i) {
        const TestStatement& st = t.statements[i];
        switch (st.kind) {
            case TestStatement::Kind::Construct: {
                if (st.classIndex < 0 || st.classIndex >= static_cast<int>(p.classes.size()))
                    return fail("statement " + std::to_string(i) + ": unknown class");
                const ClassDef& cls = p.classes[st.classIndex];
                const MethodDef& ctor = cls.methods[cls.ctorLocal];
                if (static_cast<int>(st.args.size()) != ctor.numParams)
                    return fail("statement " + std::to_string(i) + ": constructor arity");
                for (int k = 0; k < ctor.numParams; ++k)
                    if (!checkArg(st.args[k], ctor.localTypes[k], i, k)) return false;
                if (st.varType != Type::object(st.classIndex))
                    return fail("statement " + std::to_string(i) + ": wrong defined type");
                if (st.classIndex == p.cutClass) hasCut = true;
                break;
            }
            case TestStatement::Kind::MethodCall: {
                if (st.methodIndex < 0 || st.methodIndex >= p.numMethods())
                    return fail("statement " + std::to_string(i) + ": unknown method");
                const MethodDef& m = p.method(st.methodIndex);
                if (m.isCtor) return fail("statement " + std::to_string(i) + ": calls a constructor");
                if (st.receiver < 0 || st.receiver >= i)
                    return fail("statement " + std::to_string(i) + ": invalid receiver");
                if (t.statements[st.receiver].varType != Type::object(m.classIndex))
                    return fail("statement " + std::to_string(i) + ": receiver class mismatch");
                if (static_cast<int>(st.args.size()) != m.numParams)
                    return fail("statement " + std::to_string(i) + ": call arity");
                for (int k = 0; k < m.numParams; ++k)
                    if (!checkArg(st.args[k], m.localTypes[k], i, k)) return false;
                if (st.varType != m.returnType)
                    return fail("statement " + std::to_string(i) + ": wrong defined type");
                break;
            }
            case TestStatement::Kind::PrimitiveAssign: {
                if (st.varType.kind != TypeKind::Int && st.varType.kind != TypeKind::Float &&
                    st.varType.kind != TypeKind::Bool)
                    return fail("statement " + std::to_string(i) + ": non-primitive assign");
                if (st.args.size() != 1 || st.args[0].kind == TestArg::Kind::Ref ||
                    st.args[0].kind == TestArg::Kind::Null)
                    return fail("statement " + std::to_string(i) + ": assign needs one literal");
                if (!checkArg(st.args[0], st.varType, i, 0)) return false;
                break;
            }
            case TestStatement::Kind::ArrayCreate: {
                if (st.varType.kind != TypeKind::IntArray)
                    return fail("statement " + std::to_string(i) + ": wrong defined type");
                if (st.args.size() != 1) return fail("statement " + std::to_string(i) + ": length");
                if (st.args[0].kind != TestArg::Kind::IntLit && st.args[0].kind != TestArg::Kind::Ref)
                    return fail("statement " + std::to_string(i) + ": length must be int");
                if (!checkArg(st.args[0], Type::intType(), i, 0)) return false;
                break;
            }
        }
    }
    if (!hasCut) return fail("no construction of the class under test");
    return true;
}

std::string formatTest(const Program& p, const TestCase& t) {
    std::ostringstream out;
    auto argText = [&](const TestArg& a) -> std::string {
        switch (a.kind) {
            case TestArg::Kind::IntLit: return std::to_string(a.i);
            case TestArg::Kind::FloatLit: {
                std::ostringstream s;
                s << a.f;
                return s.str();
            }
            case TestArg::Kind::BoolLit: return a.b ? "true" : "false";
            case TestArg::Kind::Null: return "null";
            case TestArg::Kind::Ref: return "v" + std::to_string(a.ref);
        }
        return "?";
    };
    for (int i = 0; i < t.length(); ++i) {
        const TestStatement& st = t.statements[i];
        std::string head = st.definesVar() ? "v" + std::to_string(i) + " = " : "";
        switch (st.kind) {
            case TestStatement::Kind::Construct:
                out << head << "new " << p.classes[st.classIndex].name << "(";
                break;
            case TestStatement::Kind::MethodCall:
                out << head << "v" << st.receiver << "."
                    << p.method(st.methodIndex).name << "(";
                break;
            case TestStatement::Kind::PrimitiveAssign:
                out << head << argText(st.args[0]) << "\n";
                continue;
            case TestStatement::Kind::ArrayCreate:
                out << head << "new int[" << argText(st.args[0]) << "]\n";
                continue;
        }
        for (size_t k = 0; k < st.args.size(); ++k) out << (k ? ", " : "") << argText(st.args[k]);
        out << ")\n";
    }
    return out.str();
}

namespace {

json argToJson(const TestArg& a) {
    switch (a.kind) {
        case TestArg::Kind::IntLit: return json{{"int", a.i}};
        case TestArg::Kind::FloatLit: return json{{"float", a.f}};
        case TestArg::Kind::BoolLit: return json{{"bool", a.b}};
        case TestArg::Kind::Null: return json{{"null", true}};
        case TestArg::Kind::Ref: return json{{"ref", a.ref}};
    }
    return json();
}

TestArg argFromJson(const json& j) {
    if (!j.is_object() || j.size() != 1) throw std::runtime_error("malformed argument");
    if (j.contains("int")) return TestArg::ofInt(j["int"].get<int64_t>());
    if (j.contains("float")) return TestArg::ofFloat(j["float"].get<double>());
    if (j.contains("bool")) return TestArg::ofBool(j["bool"].get<bool>());
    if (j.contains("null")) return TestArg::null();
    if (j.contains("ref")) return TestArg::ofRef(j["ref"].get<int>());
    throw std::runtime_error("malformed argument");
}

const char* primName(TypeKind k) {
    switch (k) {
        case TypeKind::Int: return "int";
        case TypeKind::Float: return "float";
        case TypeKind::Bool: return "bool";
        default: return "?";
    }
}

} // namespace

std::string suiteToJson(const Program& p, const TestSuite& suite) {
    json root;
    root["format"] = "minimosa-suite/1";
    root["subject"] = suite.subject;
    root["algorithm"] = suite.algorithm;
    root["seed"] = suite.seed;
    json tests = json::array();
    for (const TestCase& t : suite.tests) {
        json stmts = json::array();
        for (const TestStatement& st : t.statements) {
            json s;
            switch (st.kind) {
                case TestStatement::Kind::Construct:
                    s["kind"] = "construct";
                    s["class"] = p.classes[st.classIndex].name;
                    break;
                case TestStatement::Kind::MethodCall:
                    s["kind"] = "call";
                    s["method"] = p.method(st.methodIndex).qualifiedName;
                    s["recv"] = st.receiver;
                    break;
                case TestStatement::Kind::PrimitiveAssign:
                    s["kind"] = "assign";
                    s["type"] = primName(st.varType.kind);
                    break;
                case TestStatement::Kind::ArrayCreate:
                    s["kind"] = "array";
                    break;
            }
            if (st.kind == TestStatement::Kind::PrimitiveAssign) {
                s["value"] = argToJson(st.args[0]);
            } else if (st.kind == TestStatement::Kind::ArrayCreate) {
                s["length"] = argToJson(st.args[0]);
            } else {
                json args = json::array();
                for (const TestArg& a : st.args) args.push_back(argToJson(a));
                s["args"] = args;
            }
            stmts.push_back(std::move(s));
        }
        tests.push_back(json{{"statements", std::move(stmts)}});
    }
    root["tests"] = std::move(tests);
    return root.dump(2) + "\n";
}

namespace {
void parseTests(const Program& p, const json& root, TestSuite& suite);
}

TestSuite suiteFromJson(const Program& p, const std::string& text) {
    json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded() || !root.is_object() ||
        root.value("format", "") != "minimosa-suite/1")
        throw std::runtime_error("not a minimosa-suite/1 document");

    TestSuite suite;
    suite.subject = root.value("subject", "");
    suite.algorithm = root.value("algorithm", "");
    suite.seed = root.value("seed", uint64_t{0});

    try {
        parseTests(p, root, suite);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed suite document: ") + e.what());
    }
    return suite;
}

namespace {

void parseTests(const Program& p, const json& root, TestSuite& suite) {
    for (const json& jt : root.at("tests")) {
        TestCase t;
        for (const json& js : jt.at("statements")) {
            TestStatement st;
            std::string kind = js.at("kind").get<std::string>();
            if (kind == "construct") {
                st.kind = TestStatement::Kind::Construct;
                st.classIndex = p.findClass(js.at("class").get<std::string>());
                if (st.classIndex < 0) throw std::runtime_error("unknown class in suite");
                st.varType = Type::object(st.classIndex);
                for (const json& ja : js.at("args")) st.args.push_back(argFromJson(ja));
            } else if (kind == "call") {
                st.kind = TestStatement::Kind::MethodCall;
                std::string name = js.at("method").get<std::string>();
                st.methodIndex = -1;
                for (int g = 0; g < p.numMethods(); ++g)
                    if (p.method(g).qualifiedName == name) st.methodIndex = g;
                if (st.methodIndex < 0) throw std::runtime_error("unknown method in suite: " + name);
                st.receiver = js.at("recv").get<int>();
                st.varType = p.method(st.methodIndex).returnType;
                for (const json& ja : js.at("args")) st.args.push_back(argFromJson(ja));
            } else if (kind == "assign") {
                st.kind = TestStatement::Kind::PrimitiveAssign;
                std::string ty = js.at("type").get<std::string>();
                if (ty == "int")
                    st.varType = Type::intType();
                else if (ty == "float")
                    st.varType = Type::floatType();
                else if (ty == "bool")
                    st.varType = Type::boolType();
                else
                    throw std::runtime_error("unknown primitive type in suite");
                st.args.push_back(argFromJson(js.at("value")));
            } else if (kind == "array") {
                st.kind = TestStatement::Kind::ArrayCreate;
                st.varType = Type::intArray();
                st.args.push_back(argFromJson(js.at("length")));
            } else {
                throw std::runtime_error("unknown statement kind in suite");
            }
            t.statements.push_back(std::move(st));
        }
        std::string err;
        if (!validateTest(p, t, &err)) throw std::runtime_error("invalid test: " + err);
        suite.tests.push_back(std::move(t));
    }
}

} // namespace

} // namespace minimosa
