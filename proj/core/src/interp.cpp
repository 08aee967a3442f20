#include "minimosa/interp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace minimosa {

const char* faultKindName(FaultKind k) {
    switch (k) {
        case FaultKind::None: return "none";
        case FaultKind::DivisionByZero: return "div-by-zero";
        case FaultKind::NullDereference: return "null-deref";
        case FaultKind::IndexOutOfBounds: return "index-out-of-bounds";
        case FaultKind::CallDepthExceeded: return "call-depth-exceeded";
    }
    return "?";
}

int ExecutionTrace::coveredCount() const {
    int n = 0;
    for (uint8_t c : coveredTargets) n += c;
    return n;
}

double comparisonDistance(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Lt: return a < b ? 0.0 : a - b + 1.0;
        case BinaryOp::Le: return a <= b ? 0.0 : a - b;
        case BinaryOp::Gt: return a > b ? 0.0 : b - a + 1.0;
        case BinaryOp::Ge: return a >= b ? 0.0 : b - a;
        case BinaryOp::Eq: return std::fabs(a - b);
        case BinaryOp::Ne: return a != b ? 0.0 : 1.0;
        default: return 0.0;
    }
}

BinaryOp negateComparison(BinaryOp op) {
    switch (op) {
        case BinaryOp::Lt: return BinaryOp::Ge;
        case BinaryOp::Le: return BinaryOp::Gt;
        case BinaryOp::Gt: return BinaryOp::Le;
        case BinaryOp::Ge: return BinaryOp::Lt;
        case BinaryOp::Eq: return BinaryOp::Ne;
        case BinaryOp::Ne: return BinaryOp::Eq;
        default: return op;
    }
}

namespace {

constexpr double kK = 1.0; // offset for "just missed" ordered comparisons
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Obj;
struct Arr;

struct Value {
    TypeKind tag = TypeKind::Void;
    union {
        int64_t i;
        double f;
        bool b;
        Obj* o;
        Arr* a;
    };
    Value() : i(0) {}

    static Value ofInt(int64_t v) { Value x; x.tag = TypeKind::Int; x.i = v; return x; }
    static Value ofFloat(double v) { Value x; x.tag = TypeKind::Float; x.f = v; return x; }
    static Value ofBool(bool v) { Value x; x.tag = TypeKind::Bool; x.b = v; return x; }
    static Value ofObj(Obj* p) { Value x; x.tag = TypeKind::Object; x.o = p; return x; }
    static Value ofArr(Arr* p) { Value x; x.tag = TypeKind::IntArray; x.a = p; return x; }
    static Value null() { Value x; x.tag = TypeKind::Null; x.o = nullptr; return x; }
};

struct Obj {
    int classIndex = -1;
    int seq = 0; // allocation order, stable across identical runs
    std::vector<Value> fields;
};

struct Arr {
    int seq = 0;
    std::vector<int64_t> elems;
};

bool isNullRef(const Value& v) {
    return v.tag == TypeKind::Null || (v.tag == TypeKind::Object && v.o == nullptr) ||
           (v.tag == TypeKind::IntArray && v.a == nullptr);
}

double asFloat(const Value& v) { return v.tag == TypeKind::Int ? static_cast<double>(v.i) : v.f; }

int64_t wrapNeg(int64_t v) { return static_cast<int64_t>(0 - static_cast<uint64_t>(v)); }

bool valueEq(const Value& x, const Value& y) {
    bool xr = x.tag == TypeKind::Null || x.tag == TypeKind::Object || x.tag == TypeKind::IntArray;
    bool yr = y.tag == TypeKind::Null || y.tag == TypeKind::Object || y.tag == TypeKind::IntArray;
    if (xr || yr) {
        if (!(xr && yr)) return false;
        if (isNullRef(x) || isNullRef(y)) return isNullRef(x) && isNullRef(y);
        if (x.tag != y.tag) return false;
        return x.tag == TypeKind::Object ? x.o == y.o : x.a == y.a;
    }
    if (x.tag == TypeKind::Bool || y.tag == TypeKind::Bool)
        return x.tag == y.tag && x.b == y.b;
    if (x.tag == TypeKind::Int && y.tag == TypeKind::Int) return x.i == y.i;
    return asFloat(x) == asFloat(y);
}

struct FaultSignal {
    FaultKind kind;
    int stmtId;
};
struct BudgetSignal {};

struct Frame {
    Value self;
    std::vector<Value> locals;
    Value ret;
};

struct PredVal {
    bool v;
    double dT;
    double dF;
};

class Interp {
public:
    Interp(const Subject& s, const InterpLimits& lim, const ExecOptions& opts, Observation* obs)
        : S_(s), lim_(lim), obs_(obs) {
        if (opts.activeMutant >= 0) active_ = &S_.mutants[opts.activeMutant];
        trackInfection_ = opts.trackInfection;
    }

    ExecutionTrace run(const TestCase& test) {
        tr_.coveredTargets.assign(S_.targets.size(), 0);
        tr_.branchFrequency.assign(S_.cfg.numEdges(), 0);
        tr_.minBranchDistance.assign(S_.cfg.numEdges(), kInf);
        tr_.methodCallFrequency.assign(S_.program.numMethods(), 0);
        tr_.instantiationFrequency.assign(S_.numAllocSites, 0);
        tr_.coveredStmt.assign(S_.program.stmtCount, 0);
        if (trackInfection_) tr_.infectedMutants.assign(S_.mutants.size(), 0);

        testVars_.assign(test.statements.size(), Value());
        try {
            for (size_t i = 0; i < test.statements.size(); ++i) {
                curTestStmt_ = static_cast<int>(i);
                curStmtId_ = -1;
                step();
                tr_.executedTestStatements++;
                Value v = execTestStatement(test.statements[i]);
                if (test.statements[i].definesVar()) testVars_[i] = v;
                if (obs_) recordStatement(static_cast<int>(i), v);
            }
        } catch (const FaultSignal& f) {
            tr_.fault.kind = f.kind;
            tr_.fault.testStatement = curTestStmt_;
            tr_.fault.stmtId = f.stmtId;
        } catch (const BudgetSignal&) {
            tr_.budgetExhausted = true;
        }
        if (obs_) recordFinal();
        return std::move(tr_);
    }

private:
    const Subject& S_;
    const InterpLimits& lim_;
    Observation* obs_;
    const Mutant* active_ = nullptr;
    bool trackInfection_ = false;

    ExecutionTrace tr_;
    std::deque<Obj> objs_;
    std::deque<Arr> arrs_;
    std::vector<Value> testVars_;
    int depth_ = 0;
    int curTestStmt_ = -1;
    int curStmtId_ = -1;

    // ---- bookkeeping -------------------------------------------------------

    void step() {
        if (++tr_.cost.steps > lim_.maxSteps) throw BudgetSignal{};
    }

    [[noreturn]] void fault(FaultKind k) { throw FaultSignal{k, curStmtId_}; }

    void cover(int target) { tr_.coveredTargets[target] = 1; }

    void markStmt(const Stmt& s) {
        curStmtId_ = s.id;
        if (!tr_.coveredStmt[s.id]) {
            tr_.coveredStmt[s.id] = 1;
            tr_.coveredStatementCount++;
            int tgt = S_.targets.lineTargetOfStmt[s.id];
            if (tgt >= 0) cover(tgt);
        }
    }

    void infect(int mutant) {
        if (!trackInfection_ || tr_.infectedMutants[mutant]) return;
        tr_.infectedMutants[mutant] = 1;
        if (!S_.targets.weakTarget.empty()) {
            int tgt = S_.targets.weakTarget[mutant];
            if (tgt >= 0) cover(tgt);
        }
    }

    bool activeAt(const Expr& e) const { return active_ && active_->exprId == e.id; }

    // ---- values ------------------------------------------------------------

    Value defaultOf(const Type& t) {
        switch (t.kind) {
            case TypeKind::Int: return Value::ofInt(0);
            case TypeKind::Float: return Value::ofFloat(0.0);
            case TypeKind::Bool: return Value::ofBool(false);
            default: return Value::null();
        }
    }

    Value coerce(const Value& v, const Type& t) {
        if (t.kind == TypeKind::Float && v.tag == TypeKind::Int)
            return Value::ofFloat(static_cast<double>(v.i));
        return v;
    }

    Value negate(const Value& v) {
        switch (v.tag) {
            case TypeKind::Int: return Value::ofInt(wrapNeg(v.i));
            case TypeKind::Float: return Value::ofFloat(-v.f);
            case TypeKind::Bool: return Value::ofBool(!v.b);
            default: return v;
        }
    }

    Obj* allocObj(int classIndex) {
        const ClassDef& cls = S_.program.classes[classIndex];
        tr_.cost.allocUnits += 1 + cls.fields.size();
        Obj& o = objs_.emplace_back();
        o.classIndex = classIndex;
        o.seq = static_cast<int>(objs_.size()) - 1;
        o.fields.reserve(cls.fields.size());
        for (const FieldDef& f : cls.fields) o.fields.push_back(defaultOf(f.type));
        return &o;
    }

    Arr* allocArr(int64_t len) {
        if (len < 0 || len > lim_.maxArrayLength) fault(FaultKind::IndexOutOfBounds);
        tr_.cost.allocUnits += 1 + static_cast<uint64_t>(len);
        Arr& a = arrs_.emplace_back();
        a.seq = static_cast<int>(arrs_.size()) - 1;
        a.elems.assign(static_cast<size_t>(len), 0);
        return &a;
    }

    // ---- arithmetic --------------------------------------------------------

    // applies an integer binary operator; returns false when it would fault
    bool applyIntOp(BinaryOp op, int64_t a, int64_t b, int64_t& out) {
        uint64_t ua = static_cast<uint64_t>(a), ub = static_cast<uint64_t>(b);
        switch (op) {
            case BinaryOp::Add: out = static_cast<int64_t>(ua + ub); return true;
            case BinaryOp::Sub: out = static_cast<int64_t>(ua - ub); return true;
            case BinaryOp::Mul: out = static_cast<int64_t>(ua * ub); return true;
            case BinaryOp::Div:
                if (b == 0) return false;
                if (a == std::numeric_limits<int64_t>::min() && b == -1) { out = a; return true; }
                out = a / b;
                return true;
            case BinaryOp::Mod:
                if (b == 0) return false;
                if (a == std::numeric_limits<int64_t>::min() && b == -1) { out = 0; return true; }
                out = a % b;
                return true;
            case BinaryOp::BitAnd: out = a & b; return true;
            case BinaryOp::BitOr: out = a | b; return true;
            case BinaryOp::BitXor: out = a ^ b; return true;
            case BinaryOp::Shl: out = static_cast<int64_t>(ua << (ub & 63)); return true;
            case BinaryOp::Shr: out = a >> (ub & 63); return true;
            default: out = 0; return true;
        }
    }

    double applyFloatOp(BinaryOp op, double a, double b) {
        switch (op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div: return a / b; // IEEE: yields inf/nan, no fault
            default: return 0.0;
        }
    }

    bool compareValues(BinaryOp op, const Value& l, const Value& r) {
        if (l.tag == TypeKind::Int && r.tag == TypeKind::Int) {
            switch (op) {
                case BinaryOp::Lt: return l.i < r.i;
                case BinaryOp::Le: return l.i <= r.i;
                case BinaryOp::Gt: return l.i > r.i;
                case BinaryOp::Ge: return l.i >= r.i;
                case BinaryOp::Eq: return l.i == r.i;
                case BinaryOp::Ne: return l.i != r.i;
                default: return false;
            }
        }
        if ((l.tag == TypeKind::Int || l.tag == TypeKind::Float) &&
            (r.tag == TypeKind::Int || r.tag == TypeKind::Float)) {
            double a = asFloat(l), b = asFloat(r);
            switch (op) {
                case BinaryOp::Lt: return a < b;
                case BinaryOp::Le: return a <= b;
                case BinaryOp::Gt: return a > b;
                case BinaryOp::Ge: return a >= b;
                case BinaryOp::Eq: return a == b;
                case BinaryOp::Ne: return a != b;
                default: return false;
            }
        }
        // bool / reference equality
        bool eq = valueEq(l, r);
        return op == BinaryOp::Eq ? eq : !eq;
    }

    // ---- expressions -------------------------------------------------------

    Value evalExpr(const Expr& e, Frame& fr) {
        switch (e.kind) {
            case ExprKind::IntLit: {
                Value v = Value::ofInt(e.intValue);
                if (trackInfection_)
                    for (int mi : S_.mutantsAtExpr[e.id]) infect(mi); // any replacement differs
                if (activeAt(e)) return Value::ofInt(active_->replacementInt);
                return v;
            }
            case ExprKind::FloatLit: {
                if (trackInfection_)
                    for (int mi : S_.mutantsAtExpr[e.id]) infect(mi);
                if (activeAt(e)) return Value::ofFloat(active_->replacementFloat);
                return Value::ofFloat(e.floatValue);
            }
            case ExprKind::BoolLit: return Value::ofBool(e.boolValue);
            case ExprKind::NullLit: return Value::null();
            case ExprKind::ThisRef: return fr.self;
            case ExprKind::LocalRef: {
                Value v = fr.locals[e.slot];
                if (trackInfection_) {
                    for (int mi : S_.mutantsAtExpr[e.id]) {
                        const Mutant& m = S_.mutants[mi];
                        Value alt = m.op == MutationOperator::ReplaceVariable
                                        ? fr.locals[m.replacementSlot]
                                        : negate(v);
                        if (!valueEq(alt, v)) infect(mi);
                    }
                }
                if (activeAt(e)) {
                    if (active_->op == MutationOperator::ReplaceVariable)
                        return fr.locals[active_->replacementSlot];
                    return negate(v);
                }
                return v;
            }
            case ExprKind::FieldRef: {
                Value obj = evalExpr(*e.lhs, fr);
                if (isNullRef(obj)) fault(FaultKind::NullDereference);
                Value v = obj.o->fields[e.fieldIndex];
                if (trackInfection_) {
                    for (int mi : S_.mutantsAtExpr[e.id]) {
                        const Mutant& m = S_.mutants[mi];
                        Value alt = m.op == MutationOperator::DeleteField ? defaultOf(e.type)
                                                                          : negate(v);
                        if (!valueEq(alt, v)) infect(mi);
                    }
                }
                if (activeAt(e)) {
                    if (active_->op == MutationOperator::DeleteField) return defaultOf(e.type);
                    return negate(v);
                }
                return v;
            }
            case ExprKind::ArrayIndex: {
                Value arr = evalExpr(*e.lhs, fr);
                if (isNullRef(arr)) fault(FaultKind::NullDereference);
                Value idx = evalExpr(*e.rhs, fr);
                if (idx.i < 0 || idx.i >= static_cast<int64_t>(arr.a->elems.size()))
                    fault(FaultKind::IndexOutOfBounds);
                Value v = Value::ofInt(arr.a->elems[static_cast<size_t>(idx.i)]);
                if (trackInfection_) {
                    for (int mi : S_.mutantsAtExpr[e.id])
                        if (!valueEq(negate(v), v)) infect(mi);
                }
                if (activeAt(e)) return negate(v);
                return v;
            }
            case ExprKind::Unary: {
                Value v = evalExpr(*e.lhs, fr);
                switch (e.uop) {
                    case UnaryOp::Neg: return negate(v);
                    case UnaryOp::Not: return Value::ofBool(!v.b);
                    case UnaryOp::BitNot: return Value::ofInt(~v.i);
                }
                return v;
            }
            case ExprKind::Binary: return evalBinary(e, fr);
            case ExprKind::Call: return evalCall(e, fr);
            case ExprKind::NewObject: {
                std::vector<Value> args;
                args.reserve(e.args.size());
                for (const ExprPtr& a : e.args) args.push_back(evalExpr(*a, fr));
                tr_.instantiationFrequency[S_.allocSiteOfExpr[e.id]]++;
                Obj* o = allocObj(e.classIndex);
                const ClassDef& cls = S_.program.classes[e.classIndex];
                callMethod(cls.methods[cls.ctorLocal].globalIndex, Value::ofObj(o), args);
                return Value::ofObj(o);
            }
            case ExprKind::NewArray: {
                Value len = evalExpr(*e.lhs, fr);
                tr_.instantiationFrequency[S_.allocSiteOfExpr[e.id]]++;
                return Value::ofArr(allocArr(len.i));
            }
        }
        return Value();
    }

    Value evalBinary(const Expr& e, Frame& fr) {
        BinaryOp op = e.bop;
        if (op == BinaryOp::And || op == BinaryOp::Or) {
            Value l = evalExpr(*e.lhs, fr);
            if (op == BinaryOp::And && !l.b) return Value::ofBool(false);
            if (op == BinaryOp::Or && l.b) return Value::ofBool(true);
            return Value::ofBool(evalExpr(*e.rhs, fr).b);
        }
        Value l = evalExpr(*e.lhs, fr);
        Value r = evalExpr(*e.rhs, fr);
        if (isComparison(op)) {
            bool v = compareValues(op, l, r);
            if (trackInfection_) {
                for (int mi : S_.mutantsAtExpr[e.id]) {
                    const Mutant& m = S_.mutants[mi];
                    if (compareValues(m.replacementOp, l, r) != v) infect(mi);
                }
            }
            if (activeAt(e)) v = compareValues(active_->replacementOp, l, r);
            return Value::ofBool(v);
        }
        // arithmetic / bitwise
        if (e.type.kind == TypeKind::Float) {
            double a = asFloat(l), b = asFloat(r);
            double v = applyFloatOp(op, a, b);
            if (trackInfection_) {
                for (int mi : S_.mutantsAtExpr[e.id]) {
                    if (applyFloatOp(S_.mutants[mi].replacementOp, a, b) != v) infect(mi);
                }
            }
            if (activeAt(e)) v = applyFloatOp(active_->replacementOp, a, b);
            return Value::ofFloat(v);
        }
        if (trackInfection_) {
            int64_t orig;
            bool origOk = applyIntOp(op, l.i, r.i, orig);
            for (int mi : S_.mutantsAtExpr[e.id]) {
                int64_t alt;
                bool altOk = applyIntOp(S_.mutants[mi].replacementOp, l.i, r.i, alt);
                // a mutant that faults where the original does not (or vice
                // versa, or that changes the value) infects the state
                if (altOk != origOk || (altOk && origOk && alt != orig)) infect(mi);
            }
        }
        BinaryOp eff = activeAt(e) ? active_->replacementOp : op;
        int64_t out;
        if (!applyIntOp(eff, l.i, r.i, out)) fault(FaultKind::DivisionByZero);
        return Value::ofInt(out);
    }

    Value evalCall(const Expr& e, Frame& fr) {
        if (trackInfection_) {
            // deleting a call also deletes its side effects, so reaching the
            // site counts as infection
            for (int mi : S_.mutantsAtExpr[e.id]) infect(mi);
        }
        if (activeAt(e) && active_->op == MutationOperator::DeleteCall)
            return defaultOf(e.type); // call skipped entirely
        Value recv = evalExpr(*e.object, fr);
        if (isNullRef(recv)) fault(FaultKind::NullDereference);
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const ExprPtr& a : e.args) args.push_back(evalExpr(*a, fr));
        return callMethod(e.methodIndex, recv, args);
    }

    Value callMethod(int global, const Value& self, const std::vector<Value>& args) {
        if (++depth_ > lim_.maxCallDepth) fault(FaultKind::CallDepthExceeded);
        tr_.methodCallFrequency[global]++;
        int tgt = S_.targets.methodTarget[global];
        if (tgt >= 0) cover(tgt);

        const MethodDef& m = S_.program.method(global);
        Frame fr;
        fr.self = self;
        fr.locals.reserve(m.localTypes.size());
        for (size_t i = 0; i < m.localTypes.size(); ++i) {
            if (i < static_cast<size_t>(m.numParams))
                fr.locals.push_back(coerce(args[i], m.localTypes[i]));
            else
                fr.locals.push_back(defaultOf(m.localTypes[i]));
        }
        int savedStmt = curStmtId_;
        execBody(m.body, fr);
        depth_--;
        curStmtId_ = savedStmt;
        return fr.ret;
    }

    // ---- predicates with branch distances ----------------------------------

    PredVal evalPred(const Expr& e, Frame& fr) {
        if (e.kind == ExprKind::Binary && (e.bop == BinaryOp::And || e.bop == BinaryOp::Or)) {
            PredVal l = evalPred(*e.lhs, fr);
            if (e.bop == BinaryOp::And) {
                if (!l.v) return {false, l.dT + kK, 0.0}; // rhs unevaluated: adds K
                PredVal r = evalPred(*e.rhs, fr);
                return {r.v, l.dT + r.dT, std::min(l.dF, r.dF)};
            }
            if (l.v) return {true, 0.0, l.dF + kK};
            PredVal r = evalPred(*e.rhs, fr);
            return {r.v, std::min(l.dT, r.dT), l.dF + r.dF};
        }
        if (e.kind == ExprKind::Binary && isComparison(e.bop) && e.lhs->type.isNumeric() &&
            e.rhs->type.isNumeric()) {
            Value l = evalExpr(*e.lhs, fr);
            Value r = evalExpr(*e.rhs, fr);
            bool v = compareValues(e.bop, l, r);
            if (trackInfection_) {
                for (int mi : S_.mutantsAtExpr[e.id]) {
                    const Mutant& m = S_.mutants[mi];
                    if (compareValues(m.replacementOp, l, r) != v) infect(mi);
                }
            }
            BinaryOp eff = e.bop;
            if (activeAt(e)) {
                eff = active_->replacementOp;
                v = compareValues(eff, l, r);
            }
            double a = asFloat(l), b = asFloat(r);
            return {v, comparisonDistance(eff, a, b), comparisonDistance(negateComparison(eff), a, b)};
        }
        if (e.kind == ExprKind::Unary && e.uop == UnaryOp::Not) {
            PredVal p = evalPred(*e.lhs, fr);
            return {!p.v, p.dF, p.dT};
        }
        bool v = evalExpr(e, fr).b;
        return {v, v ? 0.0 : kK, v ? kK : 0.0};
    }

    bool evalCond(const Stmt& s, Frame& fr) {
        markStmt(s);
        step();
        PredVal pv = evalPred(*s.expr, fr);
        int method = S_.methodOfStmt[s.id];
        int block = S_.condBlockOfStmt[s.id];
        int trueEdge = S_.cfg.edgeIndex(method, block, true);
        int falseEdge = trueEdge + 1;
        tr_.branchFrequency[pv.v ? trueEdge : falseEdge]++;
        tr_.minBranchDistance[trueEdge] = std::min(tr_.minBranchDistance[trueEdge], pv.dT);
        tr_.minBranchDistance[falseEdge] = std::min(tr_.minBranchDistance[falseEdge], pv.dF);
        int tgt = S_.targets.branchEdgeTarget[pv.v ? trueEdge : falseEdge];
        if (tgt >= 0) cover(tgt);
        return pv.v;
    }

    // ---- statements --------------------------------------------------------

    bool execBody(const std::vector<StmtPtr>& body, Frame& fr) {
        for (const StmtPtr& s : body)
            if (execStmt(*s, fr)) return true;
        return false;
    }

    bool execStmt(const Stmt& s, Frame& fr) {
        switch (s.kind) {
            case StmtKind::VarDecl:
                markStmt(s);
                step();
                fr.locals[s.slot] = coerce(evalExpr(*s.expr, fr), s.declType);
                return false;
            case StmtKind::Assign: {
                markStmt(s);
                step();
                execAssign(s, fr);
                return false;
            }
            case StmtKind::If:
                if (evalCond(s, fr)) return execBody(s.body, fr);
                return execBody(s.elseBody, fr);
            case StmtKind::While:
                while (evalCond(s, fr))
                    if (execBody(s.body, fr)) return true;
                return false;
            case StmtKind::For:
                if (execStmt(*s.init, fr)) return true;
                while (evalCond(s, fr)) {
                    if (execBody(s.body, fr)) return true;
                    if (execStmt(*s.update, fr)) return true;
                }
                return false;
            case StmtKind::Return:
                markStmt(s);
                step();
                if (s.expr) {
                    const MethodDef& m = S_.program.method(S_.methodOfStmt[s.id]);
                    fr.ret = coerce(evalExpr(*s.expr, fr), m.returnType);
                }
                return true;
            case StmtKind::ExprStmt:
                markStmt(s);
                step();
                if (trackInfection_)
                    for (int mi : S_.mutantsAtStmt[s.id]) infect(mi); // deletion: reached = infected
                if (active_ && active_->exprId < 0 && active_->stmtId == s.id)
                    return false; // whole call statement deleted
                evalExpr(*s.expr, fr);
                return false;
        }
        return false;
    }

    void execAssign(const Stmt& s, Frame& fr) {
        const Expr& target = *s.lhs;
        switch (target.kind) {
            case ExprKind::LocalRef: {
                Value v = coerce(evalExpr(*s.expr, fr), target.type);
                fr.locals[target.slot] = v;
                return;
            }
            case ExprKind::FieldRef: {
                Value obj = evalExpr(*target.lhs, fr);
                if (isNullRef(obj)) fault(FaultKind::NullDereference);
                Value v = coerce(evalExpr(*s.expr, fr), target.type);
                obj.o->fields[target.fieldIndex] = v;
                return;
            }
            case ExprKind::ArrayIndex: {
                Value arr = evalExpr(*target.lhs, fr);
                if (isNullRef(arr)) fault(FaultKind::NullDereference);
                Value idx = evalExpr(*target.rhs, fr);
                if (idx.i < 0 || idx.i >= static_cast<int64_t>(arr.a->elems.size()))
                    fault(FaultKind::IndexOutOfBounds);
                Value v = evalExpr(*s.expr, fr);
                arr.a->elems[static_cast<size_t>(idx.i)] = v.i;
                return;
            }
            default: return;
        }
    }

    // ---- test statements ---------------------------------------------------

    Value argValue(const TestArg& a, const Type& want) {
        switch (a.kind) {
            case TestArg::Kind::IntLit: return coerce(Value::ofInt(a.i), want);
            case TestArg::Kind::FloatLit: return Value::ofFloat(a.f);
            case TestArg::Kind::BoolLit: return Value::ofBool(a.b);
            case TestArg::Kind::Null: return Value::null();
            case TestArg::Kind::Ref: return coerce(testVars_[a.ref], want);
        }
        return Value();
    }

    Value execTestStatement(const TestStatement& st) {
        switch (st.kind) {
            case TestStatement::Kind::PrimitiveAssign:
                return argValue(st.args[0], st.varType);
            case TestStatement::Kind::ArrayCreate: {
                Value len = argValue(st.args[0], Type::intType());
                return Value::ofArr(allocArr(len.i));
            }
            case TestStatement::Kind::Construct: {
                const ClassDef& cls = S_.program.classes[st.classIndex];
                const MethodDef& ctor = cls.methods[cls.ctorLocal];
                std::vector<Value> args;
                args.reserve(st.args.size());
                for (size_t i = 0; i < st.args.size(); ++i)
                    args.push_back(argValue(st.args[i], ctor.localTypes[i]));
                Obj* o = allocObj(st.classIndex);
                callMethod(ctor.globalIndex, Value::ofObj(o), args);
                return Value::ofObj(o);
            }
            case TestStatement::Kind::MethodCall: {
                Value recv = testVars_[st.receiver];
                if (isNullRef(recv)) fault(FaultKind::NullDereference);
                const MethodDef& m = S_.program.method(st.methodIndex);
                std::vector<Value> args;
                args.reserve(st.args.size());
                for (size_t i = 0; i < st.args.size(); ++i)
                    args.push_back(argValue(st.args[i], m.localTypes[i]));
                return callMethod(st.methodIndex, recv, args);
            }
        }
        return Value();
    }

    // ---- observations ------------------------------------------------------

    enum ObsTag : int64_t {
        kObsStmt = 1,
        kObsFinal = 2,
        kObsFault = 3,
        kObsBudget = 4,
        kObsVoid = 10,
        kObsInt = 11,
        kObsFloat = 12,
        kObsBool = 13,
        kObsNull = 14,
        kObsObj = 15,
        kObsArr = 16,
        kObsBackref = 17,
    };

    void pushShallow(const Value& v) {
        auto& b = obs_->blob;
        switch (v.tag) {
            case TypeKind::Void: b.push_back(kObsVoid); break;
            case TypeKind::Int:
                b.push_back(kObsInt);
                b.push_back(v.i);
                break;
            case TypeKind::Float:
                b.push_back(kObsFloat);
                b.push_back(std::bit_cast<int64_t>(v.f));
                break;
            case TypeKind::Bool:
                b.push_back(kObsBool);
                b.push_back(v.b ? 1 : 0);
                break;
            default:
                if (isNullRef(v)) {
                    b.push_back(kObsNull);
                } else if (v.tag == TypeKind::Object) {
                    b.push_back(kObsObj);
                    b.push_back(v.o->classIndex);
                    b.push_back(v.o->seq);
                } else {
                    b.push_back(kObsArr);
                    b.push_back(v.a->seq);
                }
        }
    }

    void pushDeep(const Value& v, std::unordered_map<const void*, int64_t>& seen) {
        auto& b = obs_->blob;
        if (v.tag == TypeKind::Object && v.o != nullptr) {
            auto [it, fresh] = seen.emplace(v.o, static_cast<int64_t>(seen.size()));
            if (!fresh) {
                b.push_back(kObsBackref);
                b.push_back(it->second);
                return;
            }
            b.push_back(kObsObj);
            b.push_back(v.o->classIndex);
            for (const Value& f : v.o->fields) pushDeep(f, seen);
            return;
        }
        if (v.tag == TypeKind::IntArray && v.a != nullptr) {
            auto [it, fresh] = seen.emplace(v.a, static_cast<int64_t>(seen.size()));
            if (!fresh) {
                b.push_back(kObsBackref);
                b.push_back(it->second);
                return;
            }
            b.push_back(kObsArr);
            b.push_back(static_cast<int64_t>(v.a->elems.size()));
            for (int64_t x : v.a->elems) b.push_back(x);
            return;
        }
        pushShallow(v);
    }

    void recordStatement(int index, const Value& v) {
        obs_->blob.push_back(kObsStmt);
        obs_->blob.push_back(index);
        pushShallow(v);
    }

    void recordFinal() {
        auto& b = obs_->blob;
        b.push_back(kObsFinal);
        std::unordered_map<const void*, int64_t> seen;
        for (const Value& v : testVars_) pushDeep(v, seen);
        b.push_back(kObsFault);
        b.push_back(static_cast<int64_t>(tr_.fault.kind));
        b.push_back(tr_.fault.testStatement);
        b.push_back(tr_.fault.stmtId);
        b.push_back(kObsBudget);
        b.push_back(tr_.budgetExhausted ? 1 : 0);
    }
};

} // namespace

ExecutionTrace executeTest(const Subject& subject, const TestCase& test,
                           const InterpLimits& limits, const ExecOptions& opts) {
    return Interp(subject, limits, opts, nullptr).run(test);
}

ObservedRun observeTest(const Subject& subject, const TestCase& test, const InterpLimits& limits,
                        const ExecOptions& opts) {
    ObservedRun r;
    r.trace = Interp(subject, limits, opts, &r.observation).run(test);
    return r;
}

DynamicCounters dynamicCounters(const Subject& subject, const ExecutionTrace& trace) {
    DynamicCounters c;
    for (int e = 0; e < subject.cfg.numEdges(); ++e) {
        if (subject.cfg.branchEdges[e].isLoopEdge && trace.branchFrequency[e] > 1)
            c.loopCycles += trace.branchFrequency[e];
    }
    for (uint32_t f : trace.methodCallFrequency) c.methodCalls += f;
    for (uint32_t f : trace.instantiationFrequency)
        if (f > 1) c.instantiations += f;
    c.coveredStatements = trace.coveredStatementCount;
    return c;
}

std::string exportTraceDump(const Subject& subject, const ExecutionTrace& trace) {
    std::ostringstream out;
    for (const CoverageTarget& t : subject.targets.targets) {
        if (t.kind != TargetKind::Branch) continue;
        double d = trace.minBranchDistance[t.branchEdge];
        out << t.id << '\t' << trace.branchFrequency[t.branchEdge] << '\t';
        if (d == kInf)
            out << "inf";
        else
            out << d;
        out << '\n';
    }
    return out.str();
}

} // namespace minimosa
