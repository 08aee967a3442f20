#include "minimosa/search.hpp"

#include "minimosa/cdg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace minimosa {

const char* algorithmName(Algorithm a) {
    switch (a) {
        case Algorithm::RandomSearch: return "random";
        case Algorithm::Dynamosa: return "dynamosa";
        case Algorithm::AdaptiveDynamosa: return "adynamosa";
        case Algorithm::NonAdaptive: return "nonadaptive";
    }
    return "?";
}

Algorithm parseAlgorithm(const std::string& name) {
    if (name == "random") return Algorithm::RandomSearch;
    if (name == "dynamosa") return Algorithm::Dynamosa;
    if (name == "adynamosa") return Algorithm::AdaptiveDynamosa;
    if (name == "nonadaptive") return Algorithm::NonAdaptive;
    throw std::runtime_error("unknown algorithm: " + name);
}

int SearchResult::coveredCount() const {
    int n = 0;
    for (char c : covered) n += c ? 1 : 0;
    return n;
}

double SearchResult::coverageOf(const Subject& subject, TargetKind kind) const {
    int total = 0, hit = 0;
    for (int t = 0; t < subject.numTargets(); ++t) {
        if (subject.targets.targets[t].kind != kind) continue;
        total++;
        if (covered[t]) hit++;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(hit) / static_cast<double>(total);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual {
    TestCase test;
    ExecutionTrace trace;
    ProxyVector proxies{};
    double score = 0.0; // performance score, for archive comparisons
    int rank = 0;
    double secondary = 0.0;
};

struct ArchiveEntry {
    bool has = false;
    TestCase test;
    double score = 0.0;
    int length = 0;
};

class Engine {
public:
    Engine(const Subject& subject, Algorithm algorithm, uint64_t seed, const SearchConfig& config)
        : S_(subject), cfg_(config), rng_(seed) {
        switch (algorithm) {
            case Algorithm::RandomSearch:
            case Algorithm::Dynamosa:
                mode_ = SecondaryMode::AlwaysCrowding;
                policy_ = ArchivePolicy::PreferShorter;
                break;
            case Algorithm::AdaptiveDynamosa:
                mode_ = SecondaryMode::Adaptive;
                policy_ = ArchivePolicy::PreferCheaper;
                break;
            case Algorithm::NonAdaptive:
                mode_ = SecondaryMode::AlwaysPerformance;
                policy_ = ArchivePolicy::PreferCheaper;
                break;
        }
        if (cfg_.secondaryMode) mode_ = *cfg_.secondaryMode;
        if (cfg_.archivePolicy) policy_ = *cfg_.archivePolicy;

        int n = S_.numTargets();
        covered_.assign(n, 0);
        active_.assign(n, 0);
        processed_.assign(n, 0);
        archive_.assign(n, {});
        prevBest_.assign(n, kInf);

        result_.suite.subject = S_.name;
        result_.suite.algorithm = algorithmName(algorithm);
        result_.suite.seed = seed;
    }

    SearchResult runGenetic() {
        const int M = cfg_.populationSize;
        if (S_.numTargets() == 0) return finish();

        for (int t : entryPoints(S_.cdg, S_.targets)) active_[t] = 1;

        pop_.reserve(M);
        for (int k = 0; k < M; ++k)
            pop_.push_back(evaluate(randomTest(S_.program, rng_, cfg_.genome.maxLength)));
        updateArchive(pop_);
        updateTargets();
        // rank the initial population so the first tournament has something to
        // compare; the secondary signal matches the mode's first-generation one
        pop_ = selectNext(std::move(pop_), {}, mode_ != SecondaryMode::AlwaysCrowding);

        while (evaluations_ + M <= cfg_.budget && !allCovered()) {
            std::vector<Individual> offspring = makeOffspring();
            updateArchive(offspring);

            std::vector<double> best = bestObjectives(offspring);
            bool stagnated = generation_ > 0 && isStagnant(best);
            bool usePerf = pickHeuristic(stagnated);
            prevBest_ = std::move(best);

            updateTargets();
            pop_ = selectNext(std::move(pop_), std::move(offspring), usePerf);

            GenerationLog entry;
            entry.generation = generation_;
            entry.evaluations = evaluations_;
            entry.coveredTargets = coveredCount();
            entry.activeTargets = activeCount();
            entry.usedPerformance = usePerf;
            entry.stagnated = stagnated;
            entry.performanceCounter = perfCounter_;
            entry.crowdingCounter = crowdCounter_;
            result_.log.push_back(entry);
            generation_++;
        }
        return finish();
    }

    SearchResult runRandom() {
        if (S_.numTargets() == 0) return finish();
        while (evaluations_ < cfg_.budget && !allCovered()) {
            Individual ind = evaluate(randomTest(S_.program, rng_, cfg_.genome.maxLength));
            archiveOne(ind);
        }
        return finish();
    }

private:
    bool allCovered() const { return coveredCount() == S_.numTargets(); }

    int coveredCount() const {
        int n = 0;
        for (char c : covered_) n += c ? 1 : 0;
        return n;
    }

    int activeCount() const {
        int n = 0;
        for (char c : active_) n += c ? 1 : 0;
        return n;
    }

    Individual evaluate(TestCase t) {
        Individual ind;
        ind.test = std::move(t);
        ExecOptions opts;
        opts.trackInfection = S_.criteria.weakMutation;
        ind.trace = executeTest(S_, ind.test, cfg_.limits, opts);
        ind.proxies = proxyVector(S_, ind.trace, ind.test);
        ind.score = performanceScore(ind.proxies);
        evaluations_++;
        return ind;
    }

    void archiveOne(const Individual& ind) {
        for (int t = 0; t < S_.numTargets(); ++t) {
            if (!ind.trace.covered(t)) continue;
            ArchiveEntry& slot = archive_[t];
            if (!slot.has) {
                slot.has = true;
                slot.test = ind.test;
                slot.score = ind.score;
                slot.length = ind.test.length();
                covered_[t] = 1;
                continue;
            }
            bool better = policy_ == ArchivePolicy::PreferCheaper
                              ? ind.score < slot.score
                              : ind.test.length() < slot.length;
            if (!better) continue;
            ArchiveReplacement rec;
            rec.target = t;
            rec.generation = generation_;
            if (policy_ == ArchivePolicy::PreferCheaper) {
                rec.oldValue = slot.score;
                rec.newValue = ind.score;
            } else {
                rec.oldValue = slot.length;
                rec.newValue = ind.test.length();
            }
            result_.replacements.push_back(rec);
            slot.test = ind.test;
            slot.score = ind.score;
            slot.length = ind.test.length();
        }
    }

    void updateArchive(const std::vector<Individual>& group) {
        for (const Individual& ind : group) archiveOne(ind);
    }

    // Deactivates covered targets and activates their control-dependent
    // children, passing activation through children that are already covered.
    void updateTargets() {
        std::vector<int> work;
        for (int t = 0; t < S_.numTargets(); ++t)
            if (covered_[t] && !processed_[t]) work.push_back(t);
        while (!work.empty()) {
            int t = work.back();
            work.pop_back();
            if (processed_[t]) continue;
            processed_[t] = 1;
            active_[t] = 0;
            for (int c : dominatedChildren(S_.cdg, S_.targets, t)) {
                if (covered_[c]) {
                    if (!processed_[c]) work.push_back(c);
                } else {
                    active_[c] = 1;
                }
            }
        }
    }

    std::vector<int> activeTargets() const {
        std::vector<int> out;
        for (int t = 0; t < S_.numTargets(); ++t)
            if (active_[t]) out.push_back(t);
        return out;
    }

    const Individual& tournament() {
        int best = static_cast<int>(rng_.below(pop_.size()));
        for (int k = 1; k < cfg_.tournamentSize; ++k) {
            int j = static_cast<int>(rng_.below(pop_.size()));
            const Individual& a = pop_[j];
            const Individual& b = pop_[best];
            if (a.rank < b.rank || (a.rank == b.rank && a.secondary > b.secondary)) best = j;
        }
        return pop_[best];
    }

    std::vector<Individual> makeOffspring() {
        const int M = cfg_.populationSize;
        std::vector<Individual> off;
        off.reserve(M);
        while (static_cast<int>(off.size()) < M) {
            TestCase a = tournament().test;
            TestCase b = tournament().test;
            if (rng_.chance(cfg_.crossoverRate)) std::tie(a, b) = crossoverSinglePoint(a, b, S_.program, rng_);
            off.push_back(evaluate(mutateUniform(a, S_.program, rng_, cfg_.genome)));
            if (static_cast<int>(off.size()) < M)
                off.push_back(evaluate(mutateUniform(b, S_.program, rng_, cfg_.genome)));
        }
        return off;
    }

    // Best objective value per target over one offspring batch.
    std::vector<double> bestObjectives(const std::vector<Individual>& offspring) const {
        std::vector<double> best(S_.numTargets(), kInf);
        for (const Individual& ind : offspring)
            for (int t = 0; t < S_.numTargets(); ++t)
                best[t] = std::min(best[t], objectiveValue(S_, t, ind.trace));
        return best;
    }

    // Stagnation: no active uncovered target's best objective improved over
    // the previous offspring batch.
    bool isStagnant(const std::vector<double>& best) const {
        for (int t = 0; t < S_.numTargets(); ++t) {
            if (!active_[t] || covered_[t]) continue;
            if (best[t] < prevBest_[t]) return false;
        }
        return true;
    }

    // Picks this generation's secondary signal. In the adaptive mode the
    // signal switches toward whichever heuristic has stagnated less, counters
    // reset whenever a generation makes progress; generation 0 starts on the
    // performance heuristic with cleared counters.
    bool pickHeuristic(bool stagnated) {
        switch (mode_) {
            case SecondaryMode::AlwaysCrowding: return false;
            case SecondaryMode::AlwaysPerformance: return true;
            case SecondaryMode::Adaptive: break;
        }
        if (generation_ == 0) {
            perfCounter_ = 0;
            crowdCounter_ = 0;
            usingPerformance_ = true;
            return true;
        }
        if (!stagnated) {
            (usingPerformance_ ? perfCounter_ : crowdCounter_) = 0;
            return usingPerformance_;
        }
        (usingPerformance_ ? perfCounter_ : crowdCounter_)++;
        usingPerformance_ = perfCounter_ <= crowdCounter_;
        return usingPerformance_;
    }

    // Preference sorting over parents ∪ offspring against the active targets,
    // then front-by-front refill; the partial front is ordered by the active
    // secondary signal (crowding distance or performance heuristic).
    std::vector<Individual> selectNext(std::vector<Individual> parents,
                                       std::vector<Individual> offspring, bool usePerf) {
        const int M = cfg_.populationSize;
        std::vector<Individual> cand = std::move(parents);
        cand.reserve(cand.size() + offspring.size());
        for (Individual& ind : offspring) cand.push_back(std::move(ind));

        std::vector<int> act = activeTargets();
        std::vector<std::vector<double>> rows(cand.size());
        std::vector<double> lengths(cand.size());
        for (size_t i = 0; i < cand.size(); ++i) {
            rows[i].reserve(act.size());
            for (int t : act) rows[i].push_back(objectiveValue(S_, t, cand[i].trace));
            lengths[i] = cand[i].test.length();
        }
        SortResult sr = preferenceSorting(rows, lengths);

        std::vector<Individual> next;
        next.reserve(M);
        for (size_t f = 0; f < sr.fronts.size() && static_cast<int>(next.size()) < M; ++f) {
            const std::vector<int>& front = sr.fronts[f];
            std::vector<double> sec;
            if (usePerf) {
                std::vector<ProxyVector> group;
                group.reserve(front.size());
                for (int i : front) group.push_back(cand[i].proxies);
                sec = performanceHeuristic(group);
            } else {
                std::vector<std::vector<double>> group;
                group.reserve(front.size());
                for (int i : front) group.push_back(rows[i]);
                sec = subvectorCrowding(group);
            }

            std::vector<int> order(front.size());
            for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
            int room = M - static_cast<int>(next.size());
            if (static_cast<int>(front.size()) > room)
                std::stable_sort(order.begin(), order.end(),
                                 [&](int x, int y) { return sec[x] > sec[y]; });
            for (int k : order) {
                if (static_cast<int>(next.size()) >= M) break;
                Individual ind = std::move(cand[front[k]]);
                ind.rank = static_cast<int>(f);
                ind.secondary = sec[k];
                next.push_back(std::move(ind));
            }
        }
        return next;
    }

    // Drops trailing-first statements that are not needed to keep the test's
    // own covered-target set intact.
    TestCase minimizeTest(const TestCase& t) {
        ExecOptions opts;
        opts.trackInfection = S_.criteria.weakMutation;
        std::vector<uint8_t> need = executeTest(S_, t, cfg_.limits, opts).coveredTargets;
        TestCase cur = t;
        for (int idx = cur.length() - 1; idx >= 0; --idx) {
            if (cur.length() == 1) break;
            TestCase cand = removeStatement(cur, idx);
            if (!validateTest(S_.program, cand)) continue;
            ExecutionTrace tr = executeTest(S_, cand, cfg_.limits, opts);
            bool ok = true;
            for (int x = 0; x < S_.numTargets() && ok; ++x)
                if (need[x] && !tr.covered(x)) ok = false;
            if (ok) cur = std::move(cand);
        }
        return cur;
    }

    SearchResult finish() {
        result_.covered = covered_;
        result_.evaluations = evaluations_;
        result_.generations = generation_;
        result_.archiveTestOfTarget.assign(S_.numTargets(), -1);

        // unique archived tests in target-index order
        std::vector<TestCase> uniq;
        std::vector<int> slotOfTarget(S_.numTargets(), -1);
        for (int t = 0; t < S_.numTargets(); ++t) {
            if (!covered_[t]) continue;
            const TestCase& tc = archive_[t].test;
            int slot = -1;
            for (size_t u = 0; u < uniq.size(); ++u)
                if (uniq[u] == tc) { slot = static_cast<int>(u); break; }
            if (slot < 0) {
                slot = static_cast<int>(uniq.size());
                uniq.push_back(tc);
            }
            slotOfTarget[t] = slot;
        }

        if (cfg_.minimizeSuite)
            for (TestCase& tc : uniq) tc = minimizeTest(tc);

        // minimization can merge tests; dedup again and map slots through
        std::vector<int> finalOfSlot(uniq.size(), -1);
        for (size_t u = 0; u < uniq.size(); ++u) {
            int idx = -1;
            for (size_t v = 0; v < result_.suite.tests.size(); ++v)
                if (result_.suite.tests[v] == uniq[u]) { idx = static_cast<int>(v); break; }
            if (idx < 0) {
                idx = static_cast<int>(result_.suite.tests.size());
                result_.suite.tests.push_back(uniq[u]);
            }
            finalOfSlot[u] = idx;
        }
        for (int t = 0; t < S_.numTargets(); ++t)
            if (slotOfTarget[t] >= 0) result_.archiveTestOfTarget[t] = finalOfSlot[slotOfTarget[t]];
        return std::move(result_);
    }

    const Subject& S_;
    SearchConfig cfg_;
    SecondaryMode mode_ = SecondaryMode::Adaptive;
    ArchivePolicy policy_ = ArchivePolicy::PreferCheaper;
    RandomSource rng_;

    std::vector<Individual> pop_;
    std::vector<char> covered_;
    std::vector<char> active_;
    std::vector<char> processed_; // covered targets whose children were activated
    std::vector<ArchiveEntry> archive_;
    std::vector<double> prevBest_;

    long evaluations_ = 0;
    int generation_ = 0;
    int perfCounter_ = 0;
    int crowdCounter_ = 0;
    bool usingPerformance_ = false;

    SearchResult result_;
};

} // namespace

SearchResult runSearch(const Subject& subject, Algorithm algorithm, uint64_t seed,
                       const SearchConfig& config) {
    Engine engine(subject, algorithm, seed, config);
    if (algorithm == Algorithm::RandomSearch) return engine.runRandom();
    return engine.runGenetic();
}

} // namespace minimosa
