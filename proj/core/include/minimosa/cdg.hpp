#pragma once

// Whole-program control-dependency graph: a forest of branch-edge nodes per
// method (built from post-dominator analysis), rooted at method-entry nodes
// under a single program-entry node. Non-branch targets hang off region nodes
// via the φ mapping, so every target has a well-defined guard chain.

#include "minimosa/cfg.hpp"
#include "minimosa/targets.hpp"

#include <vector>

namespace minimosa {

enum class CdgNodeKind : uint8_t { ProgramEntry, MethodEntry, BranchEdge, Region };

struct CdgNode {
    CdgNodeKind kind;
    int methodIndex = -1;
    int branchEdge = -1; // BranchEdge: the edge; Region: the guarding edge
    int parent = -1;     // -1 only on the program entry node
};

struct Cdg {
    std::vector<CdgNode> nodes; // node 0 = program entry
    std::vector<int> methodEntryNode; // per method
    std::vector<int> edgeNode;        // per global branch edge
    std::vector<int> regionNode;      // per global branch edge (region guarded by it)
    std::vector<std::vector<int>> blockNode; // per (method, block): region/method-entry node
    std::vector<std::vector<int>> children;  // node -> child nodes

    // control-dependence facts retained for oracle checks: per method, per
    // block, the controlling edges (global indices) found by the analysis
    std::vector<std::vector<std::vector<int>>> controllingEdges;

    // φ: target -> node (filled by attachTargets)
    std::vector<int> phi;
    std::vector<std::vector<int>> nodeTargets; // node -> targets mapped to it

    // per target: guarding branch edges, innermost first, ending at the
    // method entry (used for approach levels)
    std::vector<std::vector<int>> guardChain;
};

Cdg buildCdg(const Program& p, const ProgramCfg& cfg);

// Fills φ, nodeTargets and guard chains for a target table.
void attachTargets(Cdg& cdg, const TargetTable& table, const ProgramCfg& cfg);

// Targets whose φ-node has no branch-edge node strictly above it: they are
// reachable without covering any other target first.
std::vector<int> entryPoints(const Cdg& cdg, const TargetTable& table);

// Targets directly activated by covering `target` (throws on unknown index).
std::vector<int> dominatedChildren(const Cdg& cdg, const TargetTable& table, int target);

// Post-dominator computation, exposed for oracle-backed tests.
// Returns the immediate post-dominator per block (exit maps to itself).
std::vector<int> postDominators(const MethodCfg& cfg);

} // namespace minimosa
