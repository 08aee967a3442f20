#pragma once

// Coverage targets: branch edges, executable lines, and methods of the class
// under test, plus one target per weak mutant. Target indices are dense and
// stable: the manifest order is the index order.

#include "minimosa/cfg.hpp"

#include <string>
#include <vector>

namespace minimosa {

struct Mutant; // mutation.hpp

enum class TargetKind : uint8_t { Branch, Line, Method, WeakMutation };

const char* targetKindName(TargetKind k);

struct CoverageTarget {
    TargetKind kind;
    std::string id;
    int methodIndex = -1; // branch/line/method/weak mutation
    int branchEdge = -1;  // branch: global edge index
    int line = -1;        // line
    int mutantIndex = -1; // weak mutation
    int blockIndex = -1;  // weak mutation: CFG block of the mutated statement
};

struct CriteriaSet {
    bool branch = false;
    bool line = false;
    bool method = false;
    bool weakMutation = false;

    bool contains(TargetKind k) const;
    std::string toString() const;
    // parses "branch,line,method,weakmut"; throws std::runtime_error on junk
    static CriteriaSet parse(const std::string& text);
    static CriteriaSet all() { return {true, true, true, true}; }
    static CriteriaSet branchOnly() { return {true, false, false, false}; }
};

struct TargetTable {
    std::vector<CoverageTarget> targets;

    // reverse lookups used by instrumentation (-1 = no target)
    std::vector<int> branchEdgeTarget; // per global branch edge
    std::vector<int> lineTargetOfStmt; // per stmt id (CUT statements only)
    std::vector<int> methodTarget;     // per global method index
    std::vector<int> weakTarget;       // per mutant index

    int size() const { return static_cast<int>(targets.size()); }
    int indexOfId(const std::string& id) const; // -1 if unknown

    // count of targets of a kind (for per-criterion coverage ratios)
    int countOfKind(TargetKind k) const;
};

TargetTable enumerateTargets(const Program& p, const ProgramCfg& cfg, CriteriaSet criteria,
                             const std::vector<Mutant>& mutants);

// Line-oriented manifest: "kind<TAB>id" per target, in index order.
std::string exportTargetManifest(const TargetTable& t);

} // namespace minimosa
