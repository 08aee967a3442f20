#include "minimosa/targets.hpp"

#include "minimosa/mutation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace minimosa {

const char* targetKindName(TargetKind k) {
    switch (k) {
        case TargetKind::Branch: return "branch";
        case TargetKind::Line: return "line";
        case TargetKind::Method: return "method";
        case TargetKind::WeakMutation: return "weakmut";
    }
    return "?";
}

bool CriteriaSet::contains(TargetKind k) const {
    switch (k) {
        case TargetKind::Branch: return branch;
        case TargetKind::Line: return line;
        case TargetKind::Method: return method;
        case TargetKind::WeakMutation: return weakMutation;
    }
    return false;
}

std::string CriteriaSet::toString() const {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ",";
        out += name;
    };
    add(branch, "branch");
    add(line, "line");
    add(method, "method");
    add(weakMutation, "weakmut");
    return out;
}

CriteriaSet CriteriaSet::parse(const std::string& text) {
    CriteriaSet c;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (item == "branch") c.branch = true;
        else if (item == "line") c.line = true;
        else if (item == "method") c.method = true;
        else if (item == "weakmut") c.weakMutation = true;
        else if (!item.empty()) throw std::runtime_error("unknown coverage criterion '" + item + "'");
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!c.branch && !c.line && !c.method && !c.weakMutation)
        throw std::runtime_error("empty criteria set");
    return c;
}

int TargetTable::indexOfId(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (targets[i].id == id) return i;
    return -1;
}

int TargetTable::countOfKind(TargetKind k) const {
    int n = 0;
    for (const auto& t : targets) n += t.kind == k;
    return n;
}

TargetTable enumerateTargets(const Program& p, const ProgramCfg& cfg, CriteriaSet criteria,
                             const std::vector<Mutant>& mutants) {
    TargetTable table;
    const ClassDef& cut = p.classes[p.cutClass];
    (void)cut;

    // CUT methods sorted by qualified name: manifest order is name-based
    std::vector<int> cutMethods;
    for (int g = 0; g < p.numMethods(); ++g)
        if (p.method(g).classIndex == p.cutClass) cutMethods.push_back(g);
    std::sort(cutMethods.begin(), cutMethods.end(), [&](int a, int b) {
        return p.method(a).qualifiedName < p.method(b).qualifiedName;
    });

    if (criteria.branch) {
        for (int g : cutMethods) {
            const MethodCfg& mc = cfg.methods[g];
            for (int b : mc.conditionalBlocks) {
                // label order: "F" sorts before "T"
                for (bool label : {false, true}) {
                    CoverageTarget t;
                    t.kind = TargetKind::Branch;
                    t.methodIndex = g;
                    t.branchEdge = cfg.edgeIndex(g, b, label);
                    t.blockIndex = b;
                    t.id = "branch:" + p.method(g).qualifiedName + ":b" + std::to_string(b) +
                           ":" + (label ? "T" : "F");
                    table.targets.push_back(std::move(t));
                }
            }
        }
    }

    if (criteria.line) {
        for (int g : cutMethods) {
            const MethodCfg& mc = cfg.methods[g];
            std::set<int> lines;
            for (const auto& b : mc.blocks) {
                for (const Stmt* s : b.stmts) lines.insert(s->line);
                if (b.branch) lines.insert(b.branch->line);
            }
            for (int line : lines) {
                CoverageTarget t;
                t.kind = TargetKind::Line;
                t.methodIndex = g;
                t.line = line;
                t.id = "line:" + p.method(g).qualifiedName + ":" + std::to_string(line);
                table.targets.push_back(std::move(t));
            }
        }
    }

    if (criteria.method) {
        for (int g : cutMethods) {
            CoverageTarget t;
            t.kind = TargetKind::Method;
            t.methodIndex = g;
            t.id = "method:" + p.method(g).qualifiedName;
            table.targets.push_back(std::move(t));
        }
    }

    if (criteria.weakMutation) {
        for (CoverageTarget& t : weakMutationTargets(mutants)) table.targets.push_back(std::move(t));
    }

    table.branchEdgeTarget.assign(cfg.numEdges(), -1);
    table.lineTargetOfStmt.assign(p.stmtCount, -1);
    table.methodTarget.assign(p.numMethods(), -1);
    table.weakTarget.assign(mutants.size(), -1);
    for (int i = 0; i < table.size(); ++i) {
        const CoverageTarget& t = table.targets[i];
        switch (t.kind) {
            case TargetKind::Branch:
                table.branchEdgeTarget[t.branchEdge] = i;
                break;
            case TargetKind::Line: {
                const MethodCfg& mc = cfg.methods[t.methodIndex];
                for (const auto& b : mc.blocks) {
                    for (const Stmt* s : b.stmts)
                        if (s->line == t.line) table.lineTargetOfStmt[s->id] = i;
                    if (b.branch && b.branch->line == t.line)
                        table.lineTargetOfStmt[b.branch->id] = i;
                }
                break;
            }
            case TargetKind::Method:
                table.methodTarget[t.methodIndex] = i;
                break;
            case TargetKind::WeakMutation:
                table.weakTarget[t.mutantIndex] = i;
                break;
        }
    }
    return table;
}

std::string exportTargetManifest(const TargetTable& t) {
    std::string out;
    for (const auto& target : t.targets) {
        out += targetKindName(target.kind);
        out += '\t';
        out += target.id;
        out += '\n';
    }
    return out;
}

} // namespace minimosa
