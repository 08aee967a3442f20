#include "minimosa/subject.hpp"

#include "minimosa/parser.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minimosa {

namespace {

// Allocation sites are NewObject/NewArray expressions in production code,
// numbered in (method, pre-order) order.
void indexAllocSites(const Expr& e, std::vector<int>& siteOf, int& next) {
    if (e.kind == ExprKind::NewObject || e.kind == ExprKind::NewArray) siteOf[e.id] = next++;
    if (e.lhs) indexAllocSites(*e.lhs, siteOf, next);
    if (e.rhs) indexAllocSites(*e.rhs, siteOf, next);
    if (e.object) indexAllocSites(*e.object, siteOf, next);
    for (const ExprPtr& a : e.args) indexAllocSites(*a, siteOf, next);
}

void indexAllocSites(const Stmt& s, std::vector<int>& siteOf, int& next) {
    if (s.lhs) indexAllocSites(*s.lhs, siteOf, next);
    if (s.init) indexAllocSites(*s.init, siteOf, next);
    if (s.expr) indexAllocSites(*s.expr, siteOf, next);
    if (s.update) indexAllocSites(*s.update, siteOf, next);
    for (const StmtPtr& c : s.body) indexAllocSites(*c, siteOf, next);
    for (const StmtPtr& c : s.elseBody) indexAllocSites(*c, siteOf, next);
}

void indexAllocSites(const std::vector<StmtPtr>& body, std::vector<int>& siteOf, int& next) {
    for (const StmtPtr& s : body) indexAllocSites(*s, siteOf, next);
}

} // namespace

Subject buildSubject(Program program, CriteriaSet criteria, std::string name) {
    Subject s;
    s.name = std::move(name);
    s.program = std::move(program);
    s.criteria = criteria;
    s.cfg = buildCfg(s.program);
    s.mutants = generateMutants(s.program, s.cfg);
    s.targets = enumerateTargets(s.program, s.cfg, criteria, s.mutants);
    s.cdg = buildCdg(s.program, s.cfg);
    attachTargets(s.cdg, s.targets, s.cfg);

    s.mutantsAtExpr.assign(s.program.exprCount, {});
    s.mutantsAtStmt.assign(s.program.stmtCount, {});
    for (const Mutant& m : s.mutants) {
        if (m.exprId >= 0)
            s.mutantsAtExpr[m.exprId].push_back(m.index);
        else
            s.mutantsAtStmt[m.stmtId].push_back(m.index);
    }

    s.allocSiteOfExpr.assign(s.program.exprCount, -1);
    int next = 0;
    for (const ClassDef& cls : s.program.classes)
        for (const MethodDef& m : cls.methods) indexAllocSites(m.body, s.allocSiteOfExpr, next);
    s.numAllocSites = next;

    s.condBlockOfStmt.assign(s.program.stmtCount, -1);
    s.methodOfStmt.assign(s.program.stmtCount, -1);
    for (const MethodCfg& mcfg : s.cfg.methods) {
        for (const CfgBlock& b : mcfg.blocks) {
            for (const Stmt* st : b.stmts) s.methodOfStmt[st->id] = mcfg.methodIndex;
            if (b.branch) {
                s.condBlockOfStmt[b.branch->id] = b.index;
                s.methodOfStmt[b.branch->id] = mcfg.methodIndex;
            }
        }
    }
    return s;
}

Subject subjectFromSource(const std::string& source, CriteriaSet criteria, std::string name) {
    Program p = parseOrThrow(source);
    return buildSubject(std::move(p), criteria, std::move(name));
}

Subject loadSubject(const std::string& path, CriteriaSet criteria) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return subjectFromSource(buf.str(), criteria, std::filesystem::path(path).stem().string());
}

} // namespace minimosa
