#pragma once

// Per-method control-flow graphs over basic blocks, with labeled true/false
// edges for conditionals, a virtual exit block, and loop back-edge detection.

#include "minimosa/ast.hpp"

#include <utility>
#include <vector>

namespace minimosa {

struct CfgBlock {
    int index = 0;
    std::vector<const Stmt*> stmts; // straight-line statements, in execution order
    const Stmt* branch = nullptr;   // the If/While/For owning this block's condition
    int trueSucc = -1;
    int falseSucc = -1;
    int jumpSucc = -1; // unconditional successor; -1 only on the exit block
    bool isLoopHeader = false;
    bool isExit = false;

    bool isConditional() const { return branch != nullptr; }
};

// Identity of one labeled conditional edge, program-wide.
struct BranchEdge {
    int methodIndex = -1;
    int blockIndex = -1;
    bool label = false;    // true edge / false edge
    bool isLoopEdge = false; // iterating edge of a loop header
};

struct MethodCfg {
    int methodIndex = -1;
    std::vector<CfgBlock> blocks; // blocks[0] = entry; exit block last
    int entry = 0;
    int exit = 0;
    std::vector<std::pair<int, int>> backEdges; // (from, loop header)
    std::vector<int> conditionalBlocks;         // ascending block indices
    // global index of a conditional block's true edge; false edge is +1
    std::vector<int> edgeBase; // per block, -1 for non-conditionals

    std::vector<int> successors(int block) const {
        std::vector<int> s;
        const CfgBlock& b = blocks[block];
        if (b.isConditional()) {
            s.push_back(b.trueSucc);
            s.push_back(b.falseSucc);
        } else if (b.jumpSucc >= 0) {
            s.push_back(b.jumpSucc);
        }
        return s;
    }
};

struct ProgramCfg {
    std::vector<MethodCfg> methods;       // by global method index
    std::vector<BranchEdge> branchEdges;  // global edge table

    int edgeIndex(int method, int block, bool label) const {
        int base = methods[method].edgeBase[block];
        return label ? base : base + 1;
    }
    int siblingEdge(int edge) const {
        return branchEdges[edge].label ? edge + 1 : edge - 1;
    }
    int numEdges() const { return static_cast<int>(branchEdges.size()); }
};

ProgramCfg buildCfg(const Program& p);

} // namespace minimosa
