#include "minimosa/mutation.hpp"

#include "minimosa/cfg.hpp"
#include "minimosa/interp.hpp"
#include "minimosa/subject.hpp"
#include "minimosa/testcase.hpp"

#include <algorithm>
#include <sstream>

namespace minimosa {

const char* mutationOperatorName(MutationOperator op) {
    switch (op) {
        case MutationOperator::DeleteCall: return "DeleteCall";
        case MutationOperator::DeleteField: return "DeleteField";
        case MutationOperator::InsertUnaryOperator: return "InsertUnaryOperator";
        case MutationOperator::ReplaceArithmeticOperator: return "ReplaceArithmeticOperator";
        case MutationOperator::ReplaceBitwiseOperator: return "ReplaceBitwiseOperator";
        case MutationOperator::ReplaceComparisonOperator: return "ReplaceComparisonOperator";
        case MutationOperator::ReplaceConstant: return "ReplaceConstant";
        case MutationOperator::ReplaceVariable: return "ReplaceVariable";
    }
    return "?";
}

namespace {

// Enumerates mutants for one class in a fixed order: methods in declaration
// order, statements in source order, expressions pre-order. The order defines
// mutant indices, so it must never depend on container iteration quirks.
class Enumerator {
public:
    Enumerator(const Program& p, const ProgramCfg& cfg, std::vector<Mutant>& out)
        : p_(p), cfg_(cfg), out_(out) {}

    void run() {
        const ClassDef& cut = p_.classes[p_.cutClass];
        for (const MethodDef& m : cut.methods) {
            method_ = &m;
            mapBlocks(cfg_.methods[m.globalIndex]);
            for (const StmtPtr& s : m.body) visitStmt(*s);
        }
    }

private:
    const Program& p_;
    const ProgramCfg& cfg_;
    std::vector<Mutant>& out_;
    const MethodDef* method_ = nullptr;
    std::vector<int> stmtBlock_; // stmt id -> CFG block (current method only)
    int curStmt_ = -1;           // innermost statement being visited

    void mapBlocks(const MethodCfg& mcfg) {
        stmtBlock_.assign(p_.stmtCount, -1);
        for (const CfgBlock& b : mcfg.blocks) {
            for (const Stmt* s : b.stmts) stmtBlock_[s->id] = b.index;
            if (b.branch) stmtBlock_[b.branch->id] = b.index;
        }
    }

    Mutant& add(MutationOperator op, int exprId, const std::string& what) {
        Mutant m;
        m.index = static_cast<int>(out_.size());
        m.id = "m" + std::to_string(m.index);
        m.op = op;
        m.methodIndex = method_->globalIndex;
        m.stmtId = curStmt_;
        m.blockIndex = stmtBlock_[curStmt_];
        m.exprId = exprId;
        std::ostringstream d;
        d << method_->qualifiedName << ": " << what;
        m.description = d.str();
        out_.push_back(std::move(m));
        return out_.back();
    }

    void visitStmts(const std::vector<StmtPtr>& body) {
        for (const StmtPtr& s : body) visitStmt(*s);
    }

    void visitStmt(const Stmt& s) {
        int saved = curStmt_;
        curStmt_ = s.id;
        switch (s.kind) {
            case StmtKind::VarDecl:
                visitExpr(*s.expr, false);
                break;
            case StmtKind::Assign:
                // the target itself is a write; its subexpressions are reads
                visitChildrenOfLvalue(*s.lhs);
                visitExpr(*s.expr, false);
                break;
            case StmtKind::If:
                visitExpr(*s.expr, false);
                curStmt_ = saved;
                visitStmts(s.body);
                visitStmts(s.elseBody);
                break;
            case StmtKind::While:
                visitExpr(*s.expr, false);
                curStmt_ = saved;
                visitStmts(s.body);
                break;
            case StmtKind::For:
                visitStmt(*s.init);
                curStmt_ = s.id;
                visitExpr(*s.expr, false);
                visitStmt(*s.update);
                curStmt_ = saved;
                visitStmts(s.body);
                break;
            case StmtKind::Return:
                if (s.expr) visitExpr(*s.expr, false);
                break;
            case StmtKind::ExprStmt:
                // a call in statement position: deletable as a whole
                add(MutationOperator::DeleteCall, -1,
                    "delete call " + callName(*s.expr) + " (line " + std::to_string(s.line) + ")");
                visitCallChildren(*s.expr);
                break;
        }
        curStmt_ = saved;
    }

    void visitChildrenOfLvalue(const Expr& e) {
        if (e.kind == ExprKind::FieldRef) {
            visitExpr(*e.lhs, false);
        } else if (e.kind == ExprKind::ArrayIndex) {
            visitExpr(*e.lhs, false);
            visitExpr(*e.rhs, false);
        }
        // LocalRef target: nothing to visit
    }

    void visitCallChildren(const Expr& call) {
        visitExpr(*call.object, false);
        for (const ExprPtr& a : call.args) visitExpr(*a, false);
    }

    std::string callName(const Expr& call) const {
        return p_.method(call.methodIndex).qualifiedName;
    }

    // exprAsWrite: true when `e` is the root of an assignment target
    void visitExpr(const Expr& e, bool exprAsWrite) {
        switch (e.kind) {
            case ExprKind::IntLit: {
                int64_t c = e.intValue;
                for (int64_t repl : {int64_t{0}, c + 1, -c}) {
                    if (repl == c) continue;
                    bool dup = false;
                    for (const Mutant& m : out_)
                        if (m.exprId == e.id && m.op == MutationOperator::ReplaceConstant &&
                            m.replacementInt == repl)
                            dup = true;
                    if (dup) continue;
                    Mutant& m = add(MutationOperator::ReplaceConstant, e.id,
                                    std::to_string(c) + " -> " + std::to_string(repl));
                    m.replacementInt = repl;
                }
                break;
            }
            case ExprKind::FloatLit: {
                double c = e.floatValue;
                for (double repl : {0.0, c + 1.0, -c}) {
                    if (repl == c) continue;
                    bool dup = false;
                    for (const Mutant& m : out_)
                        if (m.exprId == e.id && m.op == MutationOperator::ReplaceConstant &&
                            m.replacementFloat == repl)
                            dup = true;
                    if (dup) continue;
                    Mutant& m = add(MutationOperator::ReplaceConstant, e.id,
                                    std::to_string(c) + " -> " + std::to_string(repl));
                    m.replacementFloat = repl;
                }
                break;
            }
            case ExprKind::BoolLit:
            case ExprKind::NullLit:
            case ExprKind::ThisRef:
                break;
            case ExprKind::LocalRef: {
                if (exprAsWrite) break;
                if (e.type.isNumeric()) {
                    add(MutationOperator::InsertUnaryOperator, e.id, "negate " + e.name);
                } else if (e.type.kind == TypeKind::Bool) {
                    add(MutationOperator::InsertUnaryOperator, e.id, "invert " + e.name);
                }
                if (e.id < static_cast<int>(p_.scopes.sameTypeSlots.size())) {
                    for (int slot : p_.scopes.sameTypeSlots[e.id]) {
                        Mutant& m = add(MutationOperator::ReplaceVariable, e.id,
                                        e.name + " -> " + method_->localNames[slot]);
                        m.replacementSlot = slot;
                    }
                }
                break;
            }
            case ExprKind::FieldRef: {
                visitExpr(*e.lhs, false);
                if (exprAsWrite) break;
                add(MutationOperator::DeleteField, e.id, "read of ." + e.name + " -> default");
                if (e.type.isNumeric()) {
                    add(MutationOperator::InsertUnaryOperator, e.id, "negate ." + e.name);
                } else if (e.type.kind == TypeKind::Bool) {
                    add(MutationOperator::InsertUnaryOperator, e.id, "invert ." + e.name);
                }
                break;
            }
            case ExprKind::ArrayIndex: {
                visitExpr(*e.lhs, false);
                visitExpr(*e.rhs, false);
                if (exprAsWrite) break;
                add(MutationOperator::InsertUnaryOperator, e.id, "negate element read");
                break;
            }
            case ExprKind::Unary:
                visitExpr(*e.lhs, false);
                break;
            case ExprKind::Binary: {
                enumerateOperatorReplacements(e);
                visitExpr(*e.lhs, false);
                visitExpr(*e.rhs, false);
                break;
            }
            case ExprKind::Call: {
                Mutant& m = add(MutationOperator::DeleteCall, e.id,
                                "call " + callName(e) + " -> default");
                (void)m;
                visitCallChildren(e);
                break;
            }
            case ExprKind::NewObject:
                for (const ExprPtr& a : e.args) visitExpr(*a, false);
                break;
            case ExprKind::NewArray:
                visitExpr(*e.lhs, false);
                break;
        }
    }

    void enumerateOperatorReplacements(const Expr& e) {
        BinaryOp op = e.bop;
        auto emit = [&](MutationOperator mop, BinaryOp repl) {
            Mutant& m = add(mop, e.id,
                            std::string("'") + opToken(op) + "' -> '" + opToken(repl) + "'");
            m.replacementOp = repl;
        };
        if (isArithmetic(op)) {
            bool floats = e.lhs->type.kind == TypeKind::Float || e.rhs->type.kind == TypeKind::Float;
            for (BinaryOp r : {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Mod}) {
                if (r == op) continue;
                if (floats && r == BinaryOp::Mod) continue; // % is integer-only
                emit(MutationOperator::ReplaceArithmeticOperator, r);
            }
        } else if (isComparison(op)) {
            bool ordered = e.lhs->type.isNumeric() && e.rhs->type.isNumeric();
            if (ordered) {
                for (BinaryOp r : {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge,
                                   BinaryOp::Eq, BinaryOp::Ne}) {
                    if (r == op) continue;
                    emit(MutationOperator::ReplaceComparisonOperator, r);
                }
            } else {
                // bool/reference equality: only the sense can flip
                emit(MutationOperator::ReplaceComparisonOperator,
                     op == BinaryOp::Eq ? BinaryOp::Ne : BinaryOp::Eq);
            }
        } else if (isBitwise(op)) {
            // stay within the logical / shift subgroup so typing is preserved
            if (op == BinaryOp::Shl || op == BinaryOp::Shr) {
                emit(MutationOperator::ReplaceBitwiseOperator,
                     op == BinaryOp::Shl ? BinaryOp::Shr : BinaryOp::Shl);
            } else {
                for (BinaryOp r : {BinaryOp::BitAnd, BinaryOp::BitOr, BinaryOp::BitXor}) {
                    if (r == op) continue;
                    emit(MutationOperator::ReplaceBitwiseOperator, r);
                }
            }
        }
    }
};

} // namespace

std::vector<Mutant> generateMutants(const Program& p, const ProgramCfg& cfg) {
    std::vector<Mutant> out;
    Enumerator(p, cfg, out).run();
    return out;
}

std::vector<CoverageTarget> weakMutationTargets(const std::vector<Mutant>& mutants) {
    std::vector<CoverageTarget> out;
    out.reserve(mutants.size());
    for (const Mutant& m : mutants) {
        CoverageTarget t;
        t.kind = TargetKind::WeakMutation;
        t.id = "weakmut:" + m.id;
        t.methodIndex = m.methodIndex;
        t.mutantIndex = m.index;
        t.blockIndex = m.blockIndex;
        out.push_back(std::move(t));
    }
    return out;
}

MutationResult strongMutationScore(const Subject& subject, const std::vector<TestCase>& tests,
                                   const InterpLimits& limits) {
    MutationResult r;
    int numMutants = static_cast<int>(subject.mutants.size());
    r.kills.resize(numMutants);
    for (int mi = 0; mi < numMutants; ++mi) r.kills[mi].mutantIndex = mi;

    for (int ti = 0; ti < static_cast<int>(tests.size()); ++ti) {
        ExecOptions orig;
        orig.trackInfection = true;
        ObservedRun base = observeTest(subject, tests[ti], limits, orig);

        for (int mi = 0; mi < numMutants; ++mi) {
            bool weak = base.trace.infectedMutants[mi] != 0;
            bool strong = false;
            if (weak) {
                InterpLimits ml = limits;
                // a mutant that loops is killed by timeout, but only when the
                // original run itself completed within budget
                if (!base.trace.budgetExhausted)
                    ml.maxSteps = 4 * std::max<uint64_t>(base.trace.cost.steps, 1);
                ExecOptions mo;
                mo.activeMutant = mi;
                ObservedRun mut = observeTest(subject, tests[ti], ml, mo);
                if (!base.trace.budgetExhausted && mut.trace.budgetExhausted)
                    strong = true;
                else
                    strong = !(mut.observation == base.observation);
            }
            r.pairOutcomes.emplace_back(mi, ti, weak, strong);
            if (strong && !r.kills[mi].killed) {
                r.kills[mi].killed = true;
                r.kills[mi].killingTest = "t" + std::to_string(ti);
            }
        }
    }

    int killed = 0;
    for (const KillRecord& k : r.kills) killed += k.killed ? 1 : 0;
    r.mutationScore = numMutants == 0 ? 0.0 : static_cast<double>(killed) / numMutants;
    return r;
}

std::string exportKillMatrix(const std::vector<Mutant>& mutants, const MutationResult& result) {
    std::ostringstream out;
    for (size_t i = 0; i < mutants.size(); ++i) {
        const KillRecord& k = result.kills[i];
        out << mutants[i].id << '\t' << mutationOperatorName(mutants[i].op) << '\t'
            << (k.killed ? k.killingTest : "-") << '\n';
    }
    return out.str();
}

} // namespace minimosa
