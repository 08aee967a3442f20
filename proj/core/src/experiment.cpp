#include "minimosa/experiment.hpp"

#include "minimosa/mutation.hpp"
#include "minimosa/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace minimosa {

uint64_t runSeed(uint64_t masterSeed, const std::string& subject, const std::string& algorithm,
                 int rep) {
    uint64_t cell = mixSeed(masterSeed, fnv1a(subject + "/" + algorithm));
    return mixSeed(cell, static_cast<uint64_t>(rep) + 1);
}

namespace {

RunRecord runCell(const Subject& subject, Algorithm algorithm, int rep,
                  const ExperimentConfig& config) {
    RunRecord rec;
    rec.subject = subject.name;
    rec.algorithm = algorithmName(algorithm);
    rec.rep = rep;
    rec.seed = runSeed(config.masterSeed, rec.subject, rec.algorithm, rep);

    SearchResult res = runSearch(subject, algorithm, rec.seed, config.search);
    rec.branchCoverage = res.coverageOf(subject, TargetKind::Branch);
    rec.lineCoverage = res.coverageOf(subject, TargetKind::Line);
    rec.methodCoverage = res.coverageOf(subject, TargetKind::Method);
    rec.weakMutationCoverage = res.coverageOf(subject, TargetKind::WeakMutation);
    rec.suiteSize = static_cast<int>(res.suite.tests.size());
    for (const TestCase& t : res.suite.tests) rec.suiteLength += t.length();
    rec.suiteCost = profileSuite(subject, res.suite, config.search.limits);
    rec.evaluations = res.evaluations;
    rec.generations = res.generations;
    rec.coveredTargets = res.coveredCount();
    rec.totalTargets = subject.numTargets();
    rec.suite = std::move(res.suite);
    rec.log = std::move(res.log);
    rec.replacements = std::move(res.replacements);
    rec.archiveTestOfTarget = std::move(res.archiveTestOfTarget);
    rec.covered = std::move(res.covered);

    if (config.mutationScore)
        rec.mutationScore =
            strongMutationScore(subject, rec.suite.tests, config.search.limits).mutationScore;
    return rec;
}

} // namespace

ExperimentResult runExperiment(const ExperimentConfig& config) {
    if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    ExperimentResult out;

    std::vector<Subject> subjects;
    for (const std::string& file : config.subjectFiles) {
        try {
            subjects.push_back(loadSubject(file, config.criteria));
            out.subjects.push_back(subjects.back().name);
        } catch (const std::exception& e) {
            out.skipped.push_back(file + ": " + e.what());
        }
    }

    struct Cell {
        int subject;
        Algorithm algorithm;
        int rep;
    };
    std::vector<Cell> cells;
    for (size_t s = 0; s < subjects.size(); ++s)
        for (Algorithm a : config.algorithms)
            for (int r = 0; r < config.repetitions; ++r)
                cells.push_back({static_cast<int>(s), a, r});

    out.records.resize(cells.size());
    int workers = std::max(1, config.workers);
    workers = std::min<int>(workers, static_cast<int>(cells.size()) > 0 ? static_cast<int>(cells.size()) : 1);

    if (workers == 1) {
        for (size_t i = 0; i < cells.size(); ++i)
            out.records[i] = runCell(subjects[cells[i].subject], cells[i].algorithm, cells[i].rep, config);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= cells.size()) break;
                out.records[i] =
                    runCell(subjects[cells[i].subject], cells[i].algorithm, cells[i].rep, config);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return out;
}

std::vector<int> groupIndices(const std::vector<RunRecord>& records, const std::string& subject,
                              const std::string& algorithm) {
    std::vector<int> out;
    for (size_t i = 0; i < records.size(); ++i)
        if (records[i].subject == subject && records[i].algorithm == algorithm)
            out.push_back(static_cast<int>(i));
    return out;
}

int selectMedianIndex(const std::vector<RunRecord>& records, const std::vector<int>& group) {
    if (group.empty()) throw std::invalid_argument("median selection over an empty group");
    std::vector<int> order = group;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (records[a].branchCoverage != records[b].branchCoverage)
            return records[a].branchCoverage < records[b].branchCoverage;
        return records[a].seed < records[b].seed;
    });
    return order[(order.size() - 1) / 2]; // lower median
}

CostSample profileSuite(const Subject& subject, const TestSuite& suite, const InterpLimits& limits,
                        int forks) {
    CostSample total;
    for (int f = 0; f < std::max(1, forks); ++f) {
        CostSample same;
        for (const TestCase& t : suite.tests) {
            ExecutionTrace tr = executeTest(subject, t, limits);
            same.steps += tr.cost.steps;
            same.allocUnits += tr.cost.allocUnits;
        }
        if (f == 0) {
            total = same;
        } else if (same.steps != total.steps || same.allocUnits != total.allocUnits) {
            throw std::runtime_error("nondeterministic suite cost for " + suite.subject);
        }
    }
    return total;
}

int ComparisonReport::countVerdict(const std::string& metric, int verdict) const {
    int n = 0;
    for (const MetricComparison& row : rows)
        if (row.metric == metric && row.verdict == verdict) n++;
    return n;
}

namespace {

std::vector<double> metricSample(const std::vector<RunRecord>& records,
                                 const std::vector<int>& group, const std::string& metric) {
    std::vector<double> out;
    out.reserve(group.size());
    for (int i : group) {
        const RunRecord& r = records[i];
        if (metric == "branch")
            out.push_back(r.branchCoverage);
        else if (metric == "line")
            out.push_back(r.lineCoverage);
        else if (metric == "method")
            out.push_back(r.methodCoverage);
        else if (metric == "weakmut")
            out.push_back(r.weakMutationCoverage);
        else if (metric == "mutscore")
            out.push_back(r.mutationScore);
        else if (metric == "steps")
            out.push_back(static_cast<double>(r.suiteCost.steps));
        else if (metric == "allocunits")
            out.push_back(static_cast<double>(r.suiteCost.allocUnits));
        else
            throw std::invalid_argument("unknown metric: " + metric);
    }
    return out;
}

MetricComparison compareMetric(const std::string& subject, const std::string& metric,
                               const std::vector<double>& a, const std::vector<double>& b,
                               bool lowerIsBetter, double alpha) {
    MetricComparison row;
    row.subject = subject;
    row.metric = metric;
    row.p = wilcoxonRankSum(a, b);
    row.a12 = varghaDelaneyA12(a, b);
    row.magnitude = effectMagnitude(row.a12);
    row.marginal = row.p > alpha && row.p < 2 * alpha;
    if (row.p < alpha && row.a12 != 0.5) {
        bool firstHigher = row.a12 > 0.5;
        row.verdict = (firstHigher != lowerIsBetter) ? 1 : -1;
    }
    return row;
}

} // namespace

ComparisonReport compareAlgorithms(const std::vector<RunRecord>& records, const std::string& algoA,
                                   const std::string& algoB, double alpha) {
    ComparisonReport report;
    report.algoA = algoA;
    report.algoB = algoB;
    report.alpha = alpha;

    std::vector<std::string> subjects;
    for (const RunRecord& r : records)
        if (std::find(subjects.begin(), subjects.end(), r.subject) == subjects.end())
            subjects.push_back(r.subject);

    for (const std::string& subject : subjects) {
        std::vector<int> ga = groupIndices(records, subject, algoA);
        std::vector<int> gb = groupIndices(records, subject, algoB);
        if (ga.empty() || gb.empty()) continue;
        if (ga.size() != gb.size())
            throw std::runtime_error("mismatched repetition counts for " + subject);

        static const char* kCoverage[] = {"branch", "line", "method", "weakmut"};
        MetricComparison branchRow;
        for (const char* metric : kCoverage) {
            MetricComparison row = compareMetric(subject, metric, metricSample(records, ga, metric),
                                                 metricSample(records, gb, metric), false, alpha);
            if (std::string(metric) == "branch") branchRow = row;
            report.rows.push_back(row);
        }

        std::vector<double> ma = metricSample(records, ga, "mutscore");
        std::vector<double> mb = metricSample(records, gb, "mutscore");
        bool haveScores = std::all_of(ma.begin(), ma.end(), [](double v) { return v >= 0; }) &&
                          std::all_of(mb.begin(), mb.end(), [](double v) { return v >= 0; });
        if (haveScores)
            report.rows.push_back(compareMetric(subject, "mutscore", ma, mb, false, alpha));

        // cost comparisons only make sense between suites of equivalent
        // branch coverage
        if (branchRow.p >= alpha) {
            report.paritySubjects.push_back(subject);
            for (const char* metric : {"steps", "allocunits"})
                report.rows.push_back(compareMetric(subject, metric,
                                                    metricSample(records, ga, metric),
                                                    metricSample(records, gb, metric), true, alpha));
        }
    }
    return report;
}

ArchiveAuditResult auditArchive(const Subject& subject, const RunRecord& record,
                                const InterpLimits& limits) {
    ArchiveAuditResult out;
    ExecOptions opts;
    opts.trackInfection = subject.criteria.weakMutation;

    std::vector<ExecutionTrace> traces;
    traces.reserve(record.suite.tests.size());
    for (const TestCase& t : record.suite.tests) traces.push_back(executeTest(subject, t, limits, opts));

    for (int t = 0; t < subject.numTargets(); ++t) {
        if (t >= static_cast<int>(record.covered.size()) || !record.covered[t]) continue;
        out.targetChecks++;
        int idx = record.archiveTestOfTarget[t];
        if (idx < 0 || idx >= static_cast<int>(traces.size()) || !traces[idx].covered(t))
            out.violations++;
    }
    for (const ArchiveReplacement& rep : record.replacements) {
        out.replacementChecks++;
        if (!(rep.newValue < rep.oldValue)) out.violations++;
    }
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::string recordsCsv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << "subject,algorithm,seed,rep,branch,line,method,weakmut,mutscore,suite_size,"
          "suite_length,steps,alloc_units,evaluations,generations,covered_targets,total_targets\n";
    for (const RunRecord& r : records) {
        os << r.subject << ',' << r.algorithm << ',' << r.seed << ',' << r.rep << ','
           << fmt(r.branchCoverage) << ',' << fmt(r.lineCoverage) << ',' << fmt(r.methodCoverage)
           << ',' << fmt(r.weakMutationCoverage) << ','
           << (r.mutationScore >= 0 ? fmt(r.mutationScore) : "") << ',' << r.suiteSize << ','
           << r.suiteLength << ',' << r.suiteCost.steps << ',' << r.suiteCost.allocUnits << ','
           << r.evaluations << ',' << r.generations << ',' << r.coveredTargets << ','
           << r.totalTargets << '\n';
    }
    return os.str();
}

std::string reportCsv(const ComparisonReport& report) {
    std::ostringstream os;
    os << "subject,metric,p,a12,magnitude,verdict,marginal\n";
    for (const MetricComparison& row : report.rows)
        os << row.subject << ',' << row.metric << ',' << fmt(row.p) << ',' << fmt(row.a12) << ','
           << effectMagnitudeName(row.magnitude) << ',' << row.verdict << ','
           << (row.marginal ? 1 : 0) << '\n';
    return os.str();
}

std::string reportSummary(const ComparisonReport& report) {
    std::ostringstream os;
    os << report.algoA << " vs " << report.algoB << " (alpha=" << report.alpha << ")\n";
    std::vector<std::string> metrics;
    for (const MetricComparison& row : report.rows)
        if (std::find(metrics.begin(), metrics.end(), row.metric) == metrics.end())
            metrics.push_back(row.metric);
    os << "metric      better  worse  no-diff\n";
    for (const std::string& metric : metrics) {
        int better = report.countVerdict(metric, 1);
        int worse = report.countVerdict(metric, -1);
        int nodiff = report.countVerdict(metric, 0);
        os << metric;
        for (size_t k = metric.size(); k < 12; ++k) os << ' ';
        os << better << "       " << worse << "      " << nodiff << '\n';
    }
    os << "branch-parity subjects (p >= " << report.alpha << "): " << report.paritySubjects.size()
       << '\n';
    for (const std::string& s : report.paritySubjects) os << "  " << s << '\n';
    return os.str();
}

} // namespace minimosa
