#include "minimosa/cdg.hpp"

#include <algorithm>
#include <stdexcept>

namespace minimosa {

namespace {

// Iterative immediate-dominator computation on the reversed CFG (Cooper,
// Harvey, Kennedy style). Every block reaches the virtual exit, so the
// reversed graph is rooted at the exit block. `succs` supplies the edge
// relation so callers can analyze either the real or the loop-free graph.
template <typename SuccFn>
std::vector<int> ipdomCompute(int n, int exitBlock, SuccFn succs) {
    std::vector<std::vector<int>> preds(n);
    for (int b = 0; b < n; ++b)
        for (int s : succs(b)) preds[s].push_back(b);

    // postorder of the reversed graph (children = original predecessors)
    std::vector<int> postorder;
    std::vector<uint8_t> seen(n, 0);
    std::vector<std::pair<int, size_t>> stack{{exitBlock, 0}};
    seen[exitBlock] = 1;
    while (!stack.empty()) {
        auto [v, next] = stack.back();
        if (next >= preds[v].size()) {
            postorder.push_back(v);
            stack.pop_back();
            continue;
        }
        stack.back().second++;
        int u = preds[v][next];
        if (!seen[u]) {
            seen[u] = 1;
            stack.emplace_back(u, 0);
        }
    }
    if (static_cast<int>(postorder.size()) != n)
        throw std::logic_error("CFG block cannot reach the exit");

    std::vector<int> rpo(n); // smaller = closer to the exit-root
    for (int i = 0; i < n; ++i) rpo[postorder[n - 1 - i]] = i;
    std::vector<int> order(postorder.rbegin(), postorder.rend());

    std::vector<int> ipdom(n, -1);
    ipdom[exitBlock] = exitBlock;
    auto intersect = [&](int a, int b) {
        while (a != b) {
            while (rpo[a] > rpo[b]) a = ipdom[a];
            while (rpo[b] > rpo[a]) b = ipdom[b];
        }
        return a;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : order) {
            if (v == exitBlock) continue;
            int newIdom = -1;
            for (int s : succs(v)) {
                if (ipdom[s] < 0) continue;
                newIdom = newIdom < 0 ? s : intersect(s, newIdom);
            }
            if (newIdom >= 0 && ipdom[v] != newIdom) {
                ipdom[v] = newIdom;
                changed = true;
            }
        }
    }
    return ipdom;
}

// Post-dominators of the loop-free view of the CFG: back edges are treated
// as jumps to the exit. Control dependence computed on this acyclic graph
// cannot cycle (a loop header never depends on edges inside its own body),
// which keeps guard chains finite.
std::vector<int> forwardPostDominators(const MethodCfg& cfg) {
    auto isBackEdge = [&](int from, int to) {
        for (const auto& [s, d] : cfg.backEdges)
            if (s == from && d == to) return true;
        return false;
    };
    return ipdomCompute(static_cast<int>(cfg.blocks.size()), cfg.exit, [&](int b) {
        std::vector<int> out = cfg.successors(b);
        for (int& s : out)
            if (isBackEdge(b, s)) s = cfg.exit;
        return out;
    });
}

} // namespace

std::vector<int> postDominators(const MethodCfg& cfg) {
    return ipdomCompute(static_cast<int>(cfg.blocks.size()), cfg.exit,
                        [&](int b) { return cfg.successors(b); });
}

namespace {

// Ferrante–Ottenstein–Warren control dependence from the post-dominator
// tree: nodes on the path succ(u,L) → ipdom(u) (exclusive) depend on edge
// (u,L). The caller passes post-dominators of the loop-free graph, so the
// resulting relation is acyclic and guard chains are well defined.
std::vector<std::vector<int>> controlDependence(const MethodCfg& cfg, const ProgramCfg& pcfg,
                                                const std::vector<int>& ipdom) {
    std::vector<std::vector<int>> deps(cfg.blocks.size());
    for (int u : cfg.conditionalBlocks) {
        for (bool label : {true, false}) {
            int v = label ? cfg.blocks[u].trueSucc : cfg.blocks[u].falseSucc;
            int edge = pcfg.edgeIndex(cfg.methodIndex, u, label);
            int w = v;
            while (w != ipdom[u]) {
                if (w != u) deps[w].push_back(edge);
                if (w == cfg.exit) throw std::logic_error("control dependence walk escaped");
                w = ipdom[w];
            }
        }
    }
    for (auto& d : deps) std::sort(d.begin(), d.end());
    return deps;
}

} // namespace

Cdg buildCdg(const Program& p, const ProgramCfg& cfg) {
    Cdg g;
    g.nodes.push_back(CdgNode{CdgNodeKind::ProgramEntry, -1, -1, -1});
    g.methodEntryNode.resize(p.numMethods(), -1);
    g.edgeNode.resize(cfg.numEdges(), -1);
    g.regionNode.resize(cfg.numEdges(), -1);
    g.blockNode.resize(p.numMethods());
    g.controllingEdges.resize(p.numMethods());

    for (int m = 0; m < p.numMethods(); ++m) {
        int entryNode = static_cast<int>(g.nodes.size());
        g.nodes.push_back(CdgNode{CdgNodeKind::MethodEntry, m, -1, 0});
        g.methodEntryNode[m] = entryNode;

        const MethodCfg& mc = cfg.methods[m];
        for (int b : mc.conditionalBlocks) {
            for (bool label : {true, false}) {
                int e = cfg.edgeIndex(m, b, label);
                g.edgeNode[e] = static_cast<int>(g.nodes.size());
                g.nodes.push_back(CdgNode{CdgNodeKind::BranchEdge, m, e, -1});
            }
        }
        for (int b : mc.conditionalBlocks) {
            for (bool label : {true, false}) {
                int e = cfg.edgeIndex(m, b, label);
                g.regionNode[e] = static_cast<int>(g.nodes.size());
                g.nodes.push_back(CdgNode{CdgNodeKind::Region, m, e, g.edgeNode[e]});
            }
        }

        std::vector<int> ipdom = forwardPostDominators(mc);
        auto deps = controlDependence(mc, cfg, ipdom);
        g.controllingEdges[m] = deps;

        // canonical guard of a block: its lowest-numbered controlling edge
        // (blocks with several controlling edges arise from early returns)
        g.blockNode[m].assign(mc.blocks.size(), g.methodEntryNode[m]);
        for (size_t b = 0; b < mc.blocks.size(); ++b)
            if (!deps[b].empty()) g.blockNode[m][b] = g.regionNode[deps[b].front()];

        // a conditional's edge nodes hang under the edge guarding the
        // conditional block itself
        for (int b : mc.conditionalBlocks) {
            int parent = deps[b].empty() ? g.methodEntryNode[m] : g.edgeNode[deps[b].front()];
            g.nodes[g.edgeNode[cfg.edgeIndex(m, b, true)]].parent = parent;
            g.nodes[g.edgeNode[cfg.edgeIndex(m, b, false)]].parent = parent;
        }
    }

    g.children.resize(g.nodes.size());
    for (size_t i = 1; i < g.nodes.size(); ++i) g.children[g.nodes[i].parent].push_back(static_cast<int>(i));
    return g;
}

namespace {

// Block holding the first statement (or condition) on a given source line,
// used to anchor line targets in the dependency forest.
int lineAnchorBlock(const MethodCfg& mc, int line) {
    for (const auto& b : mc.blocks) {
        for (const Stmt* s : b.stmts)
            if (s->line == line) return b.index;
        if (b.branch && b.branch->line == line) return b.index;
    }
    throw std::logic_error("line target without statements");
}

} // namespace

void attachTargets(Cdg& cdg, const TargetTable& table, const ProgramCfg& cfg) {
    cdg.phi.assign(table.size(), -1);
    cdg.nodeTargets.assign(cdg.nodes.size(), {});
    cdg.guardChain.assign(table.size(), {});

    for (int t = 0; t < table.size(); ++t) {
        const CoverageTarget& target = table.targets[t];
        int node = -1;
        switch (target.kind) {
            case TargetKind::Branch:
                node = cdg.edgeNode[target.branchEdge];
                break;
            case TargetKind::Method:
                node = cdg.methodEntryNode[target.methodIndex];
                break;
            case TargetKind::Line: {
                const MethodCfg& mc = cfg.methods[target.methodIndex];
                node = cdg.blockNode[target.methodIndex][lineAnchorBlock(mc, target.line)];
                break;
            }
            case TargetKind::WeakMutation:
                node = cdg.blockNode[target.methodIndex][target.blockIndex];
                break;
        }
        cdg.phi[t] = node;
        cdg.nodeTargets[node].push_back(t);

        // guard chain: innermost edge first, up to the method entry
        std::vector<int> chain;
        int walk = node;
        if (cdg.nodes[walk].kind == CdgNodeKind::Region) {
            chain.push_back(cdg.nodes[walk].branchEdge);
            walk = cdg.nodes[cdg.nodes[walk].parent].parent; // edge node's parent
        } else if (cdg.nodes[walk].kind == CdgNodeKind::BranchEdge) {
            chain.push_back(cdg.nodes[walk].branchEdge);
            walk = cdg.nodes[walk].parent;
        }
        while (walk >= 0 && cdg.nodes[walk].kind == CdgNodeKind::BranchEdge) {
            chain.push_back(cdg.nodes[walk].branchEdge);
            walk = cdg.nodes[walk].parent;
        }
        cdg.guardChain[t] = std::move(chain);
    }
}

std::vector<int> entryPoints(const Cdg& cdg, const TargetTable& table) {
    std::vector<int> out;
    for (int t = 0; t < table.size(); ++t) {
        // entry = no branch edge strictly above φ(t); a branch target's own
        // edge is φ(t) itself and does not count
        size_t own = cdg.nodes[cdg.phi[t]].kind == CdgNodeKind::BranchEdge ? 1 : 0;
        if (cdg.guardChain[t].size() == own) out.push_back(t);
    }
    return out;
}

std::vector<int> dominatedChildren(const Cdg& cdg, const TargetTable& table, int target) {
    if (target < 0 || target >= table.size())
        throw std::out_of_range("unknown target index " + std::to_string(target));
    int node = cdg.phi[target];
    if (cdg.nodes[node].kind != CdgNodeKind::BranchEdge) return {};
    std::vector<int> out;
    for (int child : cdg.children[node])
        for (int t : cdg.nodeTargets[child]) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace minimosa
