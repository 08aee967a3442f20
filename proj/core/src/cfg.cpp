#include "minimosa/cfg.hpp"

#include <cassert>
#include <stdexcept>

namespace minimosa {
namespace {

// Builds one method's CFG. Statement lists are structured (no goto), so the
// construction is a single recursive walk; returns terminate the current
// path, everything else threads through.
class MethodBuilder {
public:
    explicit MethodBuilder(const MethodDef& m) : method_(m) {}

    MethodCfg run() {
        cfg_.methodIndex = method_.globalIndex;
        int entry = newBlock();
        cfg_.entry = entry;
        int end = buildList(method_.body, entry);
        int exit = newBlock();
        cfg_.exit = exit;
        cfg_.blocks[exit].isExit = true;
        if (end >= 0) cfg_.blocks[end].jumpSucc = exit;
        for (int b : returnBlocks_) cfg_.blocks[b].jumpSucc = exit;
        detectLoops();
        return std::move(cfg_);
    }

private:
    int newBlock() {
        int idx = static_cast<int>(cfg_.blocks.size());
        cfg_.blocks.emplace_back();
        cfg_.blocks.back().index = idx;
        return idx;
    }

    // Appends statements to `cur`, returning the open block after the list,
    // or -1 when every path through the list returns.
    int buildList(const std::vector<StmtPtr>& list, int cur) {
        for (const auto& sp : list) {
            const Stmt& s = *sp;
            switch (s.kind) {
                case StmtKind::VarDecl:
                case StmtKind::Assign:
                case StmtKind::ExprStmt:
                    cfg_.blocks[cur].stmts.push_back(&s);
                    break;
                case StmtKind::Return:
                    cfg_.blocks[cur].stmts.push_back(&s);
                    returnBlocks_.push_back(cur);
                    return -1;
                case StmtKind::If: {
                    cfg_.blocks[cur].branch = &s;
                    int thenEntry = newBlock();
                    cfg_.blocks[cur].trueSucc = thenEntry;
                    int thenEnd = buildList(s.body, thenEntry);
                    int elseEnd = -1;
                    bool hasElse = !s.elseBody.empty();
                    int elseEntry = -1;
                    if (hasElse) {
                        elseEntry = newBlock();
                        cfg_.blocks[cur].falseSucc = elseEntry;
                        elseEnd = buildList(s.elseBody, elseEntry);
                    }
                    if (thenEnd < 0 && hasElse && elseEnd < 0) return -1;
                    int join = newBlock();
                    if (thenEnd >= 0) cfg_.blocks[thenEnd].jumpSucc = join;
                    if (hasElse) {
                        if (elseEnd >= 0) cfg_.blocks[elseEnd].jumpSucc = join;
                    } else {
                        cfg_.blocks[cur].falseSucc = join;
                    }
                    cur = join;
                    break;
                }
                case StmtKind::While: {
                    int header = newBlock();
                    cfg_.blocks[cur].jumpSucc = header;
                    cfg_.blocks[header].branch = &s;
                    int bodyEntry = newBlock();
                    cfg_.blocks[header].trueSucc = bodyEntry;
                    int bodyEnd = buildList(s.body, bodyEntry);
                    if (bodyEnd >= 0) cfg_.blocks[bodyEnd].jumpSucc = header;
                    int after = newBlock();
                    cfg_.blocks[header].falseSucc = after;
                    cur = after;
                    break;
                }
                case StmtKind::For: {
                    if (s.init) cfg_.blocks[cur].stmts.push_back(s.init.get());
                    int header = newBlock();
                    cfg_.blocks[cur].jumpSucc = header;
                    cfg_.blocks[header].branch = &s;
                    int bodyEntry = newBlock();
                    cfg_.blocks[header].trueSucc = bodyEntry;
                    int bodyEnd = buildList(s.body, bodyEntry);
                    if (bodyEnd >= 0) {
                        if (s.update) {
                            cfg_.blocks[bodyEnd].stmts.push_back(s.update.get());
                        }
                        cfg_.blocks[bodyEnd].jumpSucc = header;
                    }
                    int after = newBlock();
                    cfg_.blocks[header].falseSucc = after;
                    cur = after;
                    break;
                }
            }
        }
        return cur;
    }

    // Depth-first traversal marking back edges (edge into a block currently
    // on the DFS stack) and their targets as loop headers.
    void detectLoops() {
        enum Color : uint8_t { White, Gray, Black };
        std::vector<Color> color(cfg_.blocks.size(), White);
        std::vector<std::pair<int, int>> stack; // (block, next successor index)
        color[cfg_.entry] = Gray;
        stack.emplace_back(cfg_.entry, 0);
        while (!stack.empty()) {
            int b = stack.back().first;
            int nextIdx = stack.back().second;
            std::vector<int> succs = succsOf(b);
            if (nextIdx >= static_cast<int>(succs.size())) {
                color[b] = Black;
                stack.pop_back();
                continue;
            }
            stack.back().second++;
            int to = succs[nextIdx];
            if (color[to] == White) {
                color[to] = Gray;
                stack.emplace_back(to, 0);
            } else if (color[to] == Gray) {
                cfg_.backEdges.emplace_back(b, to);
                cfg_.blocks[to].isLoopHeader = true;
            }
        }
        for (const auto& blk : cfg_.blocks) {
            if (color[blk.index] == White)
                throw std::logic_error("unreachable block in CFG construction");
        }
    }

    std::vector<int> succsOf(int b) const {
        std::vector<int> s;
        const CfgBlock& blk = cfg_.blocks[b];
        if (blk.isConditional()) {
            s.push_back(blk.trueSucc);
            s.push_back(blk.falseSucc);
        } else if (blk.jumpSucc >= 0) {
            s.push_back(blk.jumpSucc);
        }
        return s;
    }

    const MethodDef& method_;
    MethodCfg cfg_;
    std::vector<int> returnBlocks_;
};

} // namespace

ProgramCfg buildCfg(const Program& p) {
    ProgramCfg out;
    out.methods.resize(p.numMethods());
    for (int g = 0; g < p.numMethods(); ++g) {
        MethodCfg cfg = MethodBuilder(p.method(g)).run();
        cfg.edgeBase.assign(cfg.blocks.size(), -1);
        for (const auto& b : cfg.blocks) {
            if (!b.isConditional()) continue;
            cfg.conditionalBlocks.push_back(b.index);
            cfg.edgeBase[b.index] = static_cast<int>(out.branchEdges.size());
            bool loopEdge = b.isLoopHeader; // iterating edge is the body (true) edge
            out.branchEdges.push_back(BranchEdge{g, b.index, true, loopEdge});
            out.branchEdges.push_back(BranchEdge{g, b.index, false, false});
        }
        out.methods[g] = std::move(cfg);
    }
    return out;
}

} // namespace minimosa
