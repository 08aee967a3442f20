#pragma once

// The test-generation algorithms: many-objective genetic search over coverage
// targets with preference sorting, a coverage archive, and a switchable
// secondary ranking signal (crowding distance or the performance heuristic),
// plus a random-search baseline. One engine drives all GA variants; they
// differ only in how the secondary heuristic is chosen and which archive
// replacement rule applies.

#include "minimosa/fitness.hpp"
#include "minimosa/interp.hpp"
#include "minimosa/subject.hpp"
#include "minimosa/testcase.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace minimosa {

enum class Algorithm : uint8_t { RandomSearch, Dynamosa, AdaptiveDynamosa, NonAdaptive };

const char* algorithmName(Algorithm a);
// parses "random|dynamosa|adynamosa|nonadaptive"; throws std::runtime_error
Algorithm parseAlgorithm(const std::string& name);

// How the secondary ranking signal is picked each generation.
enum class SecondaryMode : uint8_t {
    AlwaysCrowding,    // classic behaviour
    AlwaysPerformance, // non-adaptive ablation: performance heuristic everywhere
    Adaptive,          // stagnation-driven switching between the two
};

// Archive replacement rule for an already-covered target.
enum class ArchivePolicy : uint8_t {
    PreferShorter, // strictly fewer statements wins
    PreferCheaper, // strictly lower performance score wins
};

struct SearchConfig {
    int budget = 10000; // test executions (the unit every run is charged in)
    int populationSize = 50;
    double crossoverRate = 0.75;
    int tournamentSize = 10;
    GenomeParams genome;
    InterpLimits limits;
    bool minimizeSuite = true;

    // Overrides for the per-algorithm defaults; used by experiments that pin
    // the adaptive variant to crowding + length to check it reduces to the
    // classic algorithm.
    std::optional<SecondaryMode> secondaryMode;
    std::optional<ArchivePolicy> archivePolicy;
};

// One line per generation: what the engine saw and which heuristic it used.
struct GenerationLog {
    int generation = 0;
    long evaluations = 0;  // cumulative executions after this generation
    int coveredTargets = 0;
    int activeTargets = 0;
    bool usedPerformance = false; // secondary signal of this generation
    bool stagnated = false;       // no uncovered objective improved vs. last offspring
    int performanceCounter = 0;   // stagnation counters after this generation
    int crowdingCounter = 0;
};

// Audit record for every archive replacement: `oldValue`/`newValue` are the
// compared quantities (performance score or length, per policy).
struct ArchiveReplacement {
    int target = -1;
    int generation = 0;
    double oldValue = 0.0;
    double newValue = 0.0;
};

struct SearchResult {
    TestSuite suite;                     // deduplicated (and minimized) archive
    std::vector<char> covered;           // per target
    std::vector<int> archiveTestOfTarget; // target -> index into suite.tests (-1 uncovered)
    long evaluations = 0;
    int generations = 0;
    std::vector<GenerationLog> log;
    std::vector<ArchiveReplacement> replacements;

    int coveredCount() const;
    // covered fraction among targets of one kind; 1.0 when the subject has none
    double coverageOf(const Subject& subject, TargetKind kind) const;
};

SearchResult runSearch(const Subject& subject, Algorithm algorithm, uint64_t seed,
                       const SearchConfig& config = {});

} // namespace minimosa
