#pragma once

// Objective computation and ranking machinery for the many-objective search:
// approach-level + normalized-branch-distance objectives, preference sorting,
// fast non-dominated sorting, subvector-dominance crowding, and the
// performance score / performance heuristic over the seven proxies.

#include "minimosa/interp.hpp"
#include "minimosa/testcase.hpp"

#include <array>
#include <vector>

namespace minimosa {

// I1 loop cycles, I2 method calls, I3 test calls, I4 object/array creations,
// I5 covered statements, I6 non-call test statements, I7 test length
using ProxyVector = std::array<double, 7>;

ProxyVector proxyVector(const Subject& subject, const ExecutionTrace& trace, const TestCase& test);

// sum of Ik/(Ik+1): bounded to [0,7), strictly increasing in every proxy
double performanceScore(const ProxyVector& v);

// min-max normalized "how close to the cheapest" score within a group,
// one value per member, in [0,7]; proxies constant across the group add 0
std::vector<double> performanceHeuristic(const std::vector<ProxyVector>& group);

// 0 when covered; approach level + d/(d+1) toward the first executed guard;
// an executed-guard distance of 0 on an uncovered target counts as 0.5;
// no guard executed at all gives chain length + 1
double objectiveValue(const Subject& subject, int target, const ExecutionTrace& trace);

struct SortResult {
    std::vector<std::vector<int>> fronts; // individual indices per front
    std::vector<int> rank;                // per individual
};

// Deb's fast non-dominated sort, minimizing every column.
SortResult fastNondominatedSort(const std::vector<std::vector<double>>& objectives);

// Front 0 holds, per objective, the best individual (ties: shorter test,
// then lower index); everyone else is ranked by non-dominated sorting.
SortResult preferenceSorting(const std::vector<std::vector<double>>& objectives,
                             const std::vector<double>& lengths);

// Subvector-dominance crowding: an individual's score is the smallest number
// of objectives in which it strictly beats some other front member; singleton
// fronts score 0. Larger = more distinct.
std::vector<double> subvectorCrowding(const std::vector<std::vector<double>>& front);

} // namespace minimosa
