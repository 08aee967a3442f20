#include "minimosa/fitness.hpp"

#include <algorithm>
#include <limits>

namespace minimosa {

ProxyVector proxyVector(const Subject& subject, const ExecutionTrace& trace, const TestCase& test) {
    DynamicCounters d = dynamicCounters(subject, trace);
    StaticProxies s = staticProxies(test);
    return ProxyVector{
        static_cast<double>(d.loopCycles),   static_cast<double>(d.methodCalls),
        s.calls,                             static_cast<double>(d.instantiations),
        static_cast<double>(d.coveredStatements), s.nonCalls,
        s.length,
    };
}

double performanceScore(const ProxyVector& v) {
    double sum = 0.0;
    for (double x : v) sum += x / (x + 1.0);
    return sum;
}

std::vector<double> performanceHeuristic(const std::vector<ProxyVector>& group) {
    std::vector<double> out(group.size(), 0.0);
    if (group.empty()) return out;
    for (int k = 0; k < 7; ++k) {
        double lo = group[0][k], hi = group[0][k];
        for (const ProxyVector& v : group) {
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
        if (hi == lo) continue; // constant proxy carries no signal
        for (size_t i = 0; i < group.size(); ++i) out[i] += (hi - group[i][k]) / (hi - lo);
    }
    return out;
}

double objectiveValue(const Subject& subject, int target, const ExecutionTrace& trace) {
    if (trace.covered(target)) return 0.0;
    const std::vector<int>& chain = subject.cdg.guardChain[target];
    for (size_t level = 0; level < chain.size(); ++level) {
        int edge = chain[level];
        int sibling = subject.cfg.siblingEdge(edge);
        if (trace.branchFrequency[edge] + trace.branchFrequency[sibling] == 0) continue;
        double d = trace.minBranchDistance[edge];
        // a guard can sit at distance 0 while the target stayed uncovered
        // (e.g. a fault cut execution short); keep the objective positive
        double norm = d == 0.0 ? 0.5 : d / (d + 1.0);
        return static_cast<double>(level) + norm;
    }
    return static_cast<double>(chain.size()) + 1.0;
}

namespace {

// a dominates b: no worse everywhere, strictly better somewhere (minimizing)
bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strict = true;
    }
    return strict;
}

} // namespace

SortResult fastNondominatedSort(const std::vector<std::vector<double>>& objectives) {
    int n = static_cast<int>(objectives.size());
    SortResult r;
    r.rank.assign(n, 0);
    if (n == 0) return r;

    std::vector<std::vector<int>> dominated(n);
    std::vector<int> dominators(n, 0);
    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j]))
                dominated[i].push_back(j);
            else if (dominates(objectives[j], objectives[i]))
                dominators[i]++;
        }
        if (dominators[i] == 0) {
            r.rank[i] = 0;
            current.push_back(i);
        }
    }
    int frontIndex = 0;
    while (!current.empty()) {
        r.fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated[i]) {
                if (--dominators[j] == 0) {
                    r.rank[j] = frontIndex + 1;
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
        frontIndex++;
    }
    return r;
}

SortResult preferenceSorting(const std::vector<std::vector<double>>& objectives,
                             const std::vector<double>& lengths) {
    int n = static_cast<int>(objectives.size());
    SortResult r;
    r.rank.assign(n, 0);
    if (n == 0) return r;
    size_t m = objectives[0].size();
    if (m == 0) {
        // nothing left to optimize: a single front
        r.fronts.emplace_back();
        for (int i = 0; i < n; ++i) r.fronts[0].push_back(i);
        return r;
    }

    std::vector<uint8_t> preferred(n, 0);
    for (size_t k = 0; k < m; ++k) {
        int best = 0;
        for (int i = 1; i < n; ++i) {
            if (objectives[i][k] < objectives[best][k] ||
                (objectives[i][k] == objectives[best][k] && lengths[i] < lengths[best]))
                best = i;
        }
        preferred[best] = 1;
    }

    std::vector<int> front0, rest;
    for (int i = 0; i < n; ++i) (preferred[i] ? front0 : rest).push_back(i);
    r.fronts.push_back(front0);
    for (int i : front0) r.rank[i] = 0;

    if (!rest.empty()) {
        std::vector<std::vector<double>> sub;
        sub.reserve(rest.size());
        for (int i : rest) sub.push_back(objectives[i]);
        SortResult inner = fastNondominatedSort(sub);
        for (const std::vector<int>& f : inner.fronts) {
            std::vector<int> mapped;
            mapped.reserve(f.size());
            for (int local : f) mapped.push_back(rest[local]);
            r.fronts.push_back(std::move(mapped));
        }
        for (size_t local = 0; local < rest.size(); ++local)
            r.rank[rest[local]] = inner.rank[local] + 1;
    }
    return r;
}

std::vector<double> subvectorCrowding(const std::vector<std::vector<double>>& front) {
    int n = static_cast<int>(front.size());
    std::vector<double> out(n, 0.0);
    if (n <= 1) return out;
    for (int i = 0; i < n; ++i) {
        int best = std::numeric_limits<int>::max();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            int wins = 0;
            for (size_t k = 0; k < front[i].size(); ++k)
                if (front[i][k] < front[j][k]) wins++;
            best = std::min(best, wins);
        }
        out[i] = static_cast<double>(best);
    }
    return out;
}

} // namespace minimosa
