#pragma once

// Repeated-run harness: deterministic per-cell seeding, an optional worker
// pool over (subject × algorithm × repetition) cells, per-run records,
// median-suite selection, deterministic suite profiling, pairwise statistical
// comparison, archive audits, and CSV emission.

#include "minimosa/search.hpp"
#include "minimosa/stats.hpp"
#include "minimosa/subject.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace minimosa {

struct ExperimentConfig {
    std::vector<std::string> subjectFiles;
    std::vector<Algorithm> algorithms;
    int repetitions = 20;
    uint64_t masterSeed = 1;
    CriteriaSet criteria = CriteriaSet::all();
    SearchConfig search;
    int workers = 1;
    bool mutationScore = false; // strong-mutation score per record (costly)
};

struct RunRecord {
    std::string subject;
    std::string algorithm;
    uint64_t seed = 0;
    int rep = 0;

    double branchCoverage = 1.0;
    double lineCoverage = 1.0;
    double methodCoverage = 1.0;
    double weakMutationCoverage = 1.0;
    double mutationScore = -1.0; // strong; -1 when not computed

    int suiteSize = 0;
    long suiteLength = 0; // total statements
    CostSample suiteCost; // minimized suite, deterministic re-execution
    long evaluations = 0;
    int generations = 0;
    int coveredTargets = 0;
    int totalTargets = 0;

    TestSuite suite;
    std::vector<GenerationLog> log;
    std::vector<ArchiveReplacement> replacements;
    std::vector<int> archiveTestOfTarget;
    std::vector<char> covered;
};

struct ExperimentResult {
    std::vector<RunRecord> records;    // cell order: subject, algorithm, repetition
    std::vector<std::string> subjects; // names of the subjects that loaded
    std::vector<std::string> skipped;  // "file: diagnostic" for subjects that did not
};

// Seed for one run cell, derived from the master seed and cell identity.
uint64_t runSeed(uint64_t masterSeed, const std::string& subject, const std::string& algorithm,
                 int rep);

ExperimentResult runExperiment(const ExperimentConfig& config);

// Indices of the records for one subject+algorithm, in repetition order.
std::vector<int> groupIndices(const std::vector<RunRecord>& records, const std::string& subject,
                              const std::string& algorithm);

// The lower-median-by-branch-coverage member of `group` (ties broken by
// smaller seed); returns an index into `records`. Throws on an empty group.
int selectMedianIndex(const std::vector<RunRecord>& records, const std::vector<int>& group);

// Deterministic whole-suite cost: per-test steps/allocation units summed.
// Re-executes `forks` times and throws if any fork disagrees.
CostSample profileSuite(const Subject& subject, const TestSuite& suite, const InterpLimits& limits,
                        int forks = 1);

struct MetricComparison {
    std::string subject;
    std::string metric; // branch|line|method|weakmut|mutscore|steps|allocunits
    double p = 1.0;
    double a12 = 0.5; // first algorithm against second
    EffectMagnitude magnitude = EffectMagnitude::Negligible;
    int verdict = 0;       // +1 first better, -1 first worse, 0 no difference
    bool marginal = false; // 0.05 < p < 0.1
};

struct ComparisonReport {
    std::string algoA;
    std::string algoB;
    double alpha = 0.05;
    std::vector<MetricComparison> rows;
    std::vector<std::string> paritySubjects; // branch-coverage p ≥ α

    int countVerdict(const std::string& metric, int verdict) const;
};

// Per-subject rank-sum + Â₁₂ rows for every metric; cost metrics (steps,
// allocation units) are emitted only for subjects whose branch coverage shows
// no significant difference. Throws when group sizes are mismatched.
ComparisonReport compareAlgorithms(const std::vector<RunRecord>& records, const std::string& algoA,
                                   const std::string& algoB, double alpha = 0.05);

struct ArchiveAuditResult {
    long targetChecks = 0;
    long replacementChecks = 0;
    long violations = 0;
};

// Re-executes the archived suite and confirms each covered target is still
// covered by its archived test, and that every logged replacement strictly
// improved the policy quantity.
ArchiveAuditResult auditArchive(const Subject& subject, const RunRecord& record,
                                const InterpLimits& limits);

std::string recordsCsv(const std::vector<RunRecord>& records);
std::string reportCsv(const ComparisonReport& report);
std::string reportSummary(const ComparisonReport& report);

} // namespace minimosa
