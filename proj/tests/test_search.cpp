#include "minimosa/search.hpp"

#include "minimosa/experiment.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <set>

using namespace minimosa;

namespace {

SearchConfig smallConfig(int budget = 3000) {
    SearchConfig cfg;
    cfg.budget = budget;
    cfg.populationSize = 20;
    return cfg;
}

} // namespace

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::RandomSearch, Algorithm::Dynamosa, Algorithm::AdaptiveDynamosa,
                        Algorithm::NonAdaptive})
        CHECK(parseAlgorithm(algorithmName(a)) == a);
    CHECK_THROWS_AS(parseAlgorithm("nsga3"), std::runtime_error);
}

TEST_CASE("search is seed-deterministic") {
    Subject s = fixtures::make(fixtures::kNested, "nested");
    for (Algorithm a : {Algorithm::RandomSearch, Algorithm::Dynamosa, Algorithm::AdaptiveDynamosa}) {
        SearchResult r1 = runSearch(s, a, 31, smallConfig());
        SearchResult r2 = runSearch(s, a, 31, smallConfig());
        CHECK(suiteToJson(s.program, r1.suite) == suiteToJson(s.program, r2.suite));
        CHECK(r1.evaluations == r2.evaluations);
        CHECK(r1.generations == r2.generations);
        CHECK(r1.covered == r2.covered);
        REQUIRE(r1.log.size() == r2.log.size());
        for (size_t i = 0; i < r1.log.size(); ++i) {
            CHECK(r1.log[i].usedPerformance == r2.log[i].usedPerformance);
            CHECK(r1.log[i].coveredTargets == r2.log[i].coveredTargets);
        }
    }
}

TEST_CASE("simple subjects reach full structural coverage") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    SearchResult r = runSearch(s, Algorithm::AdaptiveDynamosa, 7, smallConfig(5000));

    CHECK(r.coverageOf(s, TargetKind::Branch) == 1.0);
    CHECK(r.coverageOf(s, TargetKind::Line) == 1.0);
    CHECK(r.coverageOf(s, TargetKind::Method) == 1.0);
    CHECK(r.evaluations <= 5000);
    CHECK_FALSE(r.suite.tests.empty());

    // archived suite holds only valid, deduplicated tests
    std::set<std::string> seen;
    for (const TestCase& t : r.suite.tests) {
        CHECK(validateTest(s.program, t));
        CHECK(seen.insert(suiteToJson(s.program, TestSuite{"", "", 0, {t}})).second);
    }
}

TEST_CASE("coverage of an absent criterion reads as complete") {
    Subject s = fixtures::make(fixtures::kSign, "sign", CriteriaSet::branchOnly());
    SearchResult r = runSearch(s, Algorithm::Dynamosa, 3, smallConfig(1500));
    CHECK(r.coverageOf(s, TargetKind::WeakMutation) == 1.0);
    CHECK(r.coverageOf(s, TargetKind::Method) == 1.0);
}

TEST_CASE("pinned adaptive run reduces to the classic algorithm") {
    Subject s = fixtures::make(fixtures::kLoopExit, "loopexit");
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SearchConfig pinned = smallConfig();
        pinned.secondaryMode = SecondaryMode::AlwaysCrowding;
        pinned.archivePolicy = ArchivePolicy::PreferShorter;
        SearchResult a = runSearch(s, Algorithm::AdaptiveDynamosa, seed, pinned);
        SearchResult d = runSearch(s, Algorithm::Dynamosa, seed, smallConfig());

        // identical up to the algorithm label
        TestSuite relabeled = a.suite;
        relabeled.algorithm = d.suite.algorithm;
        CHECK(suiteToJson(s.program, relabeled) == suiteToJson(s.program, d.suite));
        CHECK(a.covered == d.covered);
        CHECK(a.evaluations == d.evaluations);
        CHECK(a.archiveTestOfTarget == d.archiveTestOfTarget);
        REQUIRE(a.replacements.size() == d.replacements.size());
        for (size_t i = 0; i < a.replacements.size(); ++i) {
            CHECK(a.replacements[i].target == d.replacements[i].target);
            CHECK(a.replacements[i].newValue == d.replacements[i].newValue);
        }
    }
}

TEST_CASE("secondary heuristic schedule follows the stagnation counters") {
    // an unsatisfiable conditional keeps the search hungry, so both progress
    // and stagnation generations occur
    Subject s = fixtures::make(fixtures::kStubborn, "stubborn");
    SearchConfig cfg = smallConfig(4000);
    SearchResult r = runSearch(s, Algorithm::AdaptiveDynamosa, 5, cfg);
    REQUIRE(r.log.size() >= 3);

    // the schedule starts on the performance heuristic with cleared counters
    CHECK(r.log[0].usedPerformance);
    CHECK(r.log[0].performanceCounter == 0);
    CHECK(r.log[0].crowdingCounter == 0);

    int stagnations = 0, switches = 0;
    for (size_t i = 1; i < r.log.size(); ++i) {
        const GenerationLog& prev = r.log[i - 1];
        const GenerationLog& cur = r.log[i];
        if (cur.stagnated) {
            stagnations++;
            // the counter of the heuristic in force was bumped
            if (prev.usedPerformance)
                CHECK(cur.performanceCounter == prev.performanceCounter + 1);
            else
                CHECK(cur.crowdingCounter == prev.crowdingCounter + 1);
            // switch iff the bumped counter overtook the other one
            CHECK(cur.usedPerformance == (cur.performanceCounter <= cur.crowdingCounter));
        } else {
            // progress: keep the heuristic, clear its counter
            CHECK(cur.usedPerformance == prev.usedPerformance);
            if (prev.usedPerformance)
                CHECK(cur.performanceCounter == 0);
            else
                CHECK(cur.crowdingCounter == 0);
        }
        if (cur.usedPerformance != prev.usedPerformance) switches++;
    }
    // the run must actually exercise the adaptive machinery
    CHECK(stagnations > 0);
    CHECK(switches > 0);
}

TEST_CASE("pinned modes never switch") {
    Subject s = fixtures::make(fixtures::kNested, "nested");

    SearchResult d = runSearch(s, Algorithm::Dynamosa, 11, smallConfig());
    for (const GenerationLog& g : d.log) CHECK_FALSE(g.usedPerformance);

    SearchResult n = runSearch(s, Algorithm::NonAdaptive, 11, smallConfig());
    for (const GenerationLog& g : n.log) CHECK(g.usedPerformance);
}

TEST_CASE("random search fills the archive without generations") {
    Subject s = fixtures::make(fixtures::kSign, "sign");
    SearchResult r = runSearch(s, Algorithm::RandomSearch, 13, smallConfig(2000));
    CHECK(r.generations == 0);
    CHECK(r.log.empty());
    CHECK(r.evaluations <= 2000);
    CHECK(r.coveredCount() > 0);
    for (const TestCase& t : r.suite.tests) CHECK(validateTest(s.program, t));
}

TEST_CASE("archive replacements strictly improve and the audit agrees") {
    Subject s = fixtures::make(fixtures::kLoopExit, "loopexit");

    SearchResult adaptive = runSearch(s, Algorithm::AdaptiveDynamosa, 17, smallConfig(4000));
    for (const ArchiveReplacement& r : adaptive.replacements) CHECK(r.newValue < r.oldValue);

    // package the result as a run record and re-run the audit end to end
    RunRecord rec;
    rec.suite = adaptive.suite;
    rec.archiveTestOfTarget = adaptive.archiveTestOfTarget;
    rec.covered = adaptive.covered;
    rec.replacements = adaptive.replacements;
    ArchiveAuditResult audit = auditArchive(s, rec, InterpLimits{});
    CHECK(audit.violations == 0);
    CHECK(audit.targetChecks == adaptive.coveredCount());
    CHECK(audit.replacementChecks == static_cast<long>(adaptive.replacements.size()));
}

TEST_CASE("suite minimization preserves the covered set") {
    Subject s = fixtures::make(fixtures::kLoopExit, "loopexit");

    SearchConfig raw = smallConfig();
    raw.minimizeSuite = false;
    SearchResult full = runSearch(s, Algorithm::Dynamosa, 19, raw);
    SearchResult mini = runSearch(s, Algorithm::Dynamosa, 19, smallConfig());

    CHECK(mini.covered == full.covered);
    long fullLen = 0, miniLen = 0;
    for (const TestCase& t : full.suite.tests) fullLen += t.length();
    for (const TestCase& t : mini.suite.tests) miniLen += t.length();
    CHECK(miniLen <= fullLen);
    for (const TestCase& t : mini.suite.tests) CHECK(validateTest(s.program, t));
}

TEST_CASE("every algorithm stays within the evaluation budget") {
    Subject s = fixtures::make(fixtures::kAccum, "accum");
    for (Algorithm a : {Algorithm::RandomSearch, Algorithm::Dynamosa, Algorithm::AdaptiveDynamosa,
                        Algorithm::NonAdaptive}) {
        SearchResult r = runSearch(s, a, 23, smallConfig(1000));
        CHECK(r.evaluations <= 1000);
        CHECK(r.suite.seed == 23);
        CHECK(r.suite.subject == "accum");
        CHECK(r.suite.algorithm == algorithmName(a));
    }
}
