// Command-line front end: generate suites, list mutants, score suites against
// the mutant set, profile deterministic cost, run repeated experiments, and
// compare two numeric samples.

#include "CLI11.hpp"

#include "minimosa/experiment.hpp"
#include "minimosa/mutation.hpp"
#include "minimosa/search.hpp"
#include "minimosa/stats.hpp"
#include "minimosa/subject.hpp"
#include "minimosa/targets.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace minimosa;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<double> readNumbers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) throw std::runtime_error("no numbers in " + path);
    return out;
}

int envWorkers() {
    const char* raw = std::getenv("MINIMOSA_WORKERS");
    if (!raw) return 1;
    int v = std::atoi(raw);
    return v >= 1 ? v : 1;
}

std::string generationLogCsv(const std::vector<GenerationLog>& log) {
    std::ostringstream os;
    os << "generation,evaluations,covered,active,heuristic,stagnated,perf_counter,crowd_counter\n";
    for (const GenerationLog& g : log)
        os << g.generation << ',' << g.evaluations << ',' << g.coveredTargets << ','
           << g.activeTargets << ',' << (g.usedPerformance ? "performance" : "crowding") << ','
           << (g.stagnated ? 1 : 0) << ',' << g.performanceCounter << ',' << g.crowdingCounter
           << '\n';
    return os.str();
}

std::vector<std::string> corpusFiles(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".mini")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .mini files in " + dir);
    return files;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"search-based unit-test generation for the mini language"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    std::string genFile, genAlgo = "adynamosa", genCriteria = "branch,line,method,weakmut";
    std::string genOut, genManifest, genLog;
    uint64_t genSeed = 1;
    int genBudget = 10000, genPopulation = 50, genMaxLength = 40;
    CLI::App* gen = app.add_subcommand("gen", "generate a test suite for one subject");
    gen->add_option("file", genFile, "subject .mini file")->required();
    gen->add_option("--algo", genAlgo, "random|dynamosa|adynamosa|nonadaptive");
    gen->add_option("--seed", genSeed, "random seed");
    gen->add_option("--budget", genBudget, "test-execution budget");
    gen->add_option("--population", genPopulation, "population size");
    gen->add_option("--max-length", genMaxLength, "maximum test length");
    gen->add_option("--criteria", genCriteria, "comma list: branch,line,method,weakmut");
    gen->add_option("--out", genOut, "write the suite as JSON");
    gen->add_option("--manifest", genManifest, "write the coverage-target manifest");
    gen->add_option("--log", genLog, "write the per-generation log as CSV");
    gen->callback([&] {
        Subject subject = loadSubject(genFile, CriteriaSet::parse(genCriteria));
        SearchConfig cfg;
        cfg.budget = genBudget;
        cfg.populationSize = genPopulation;
        cfg.genome.maxLength = genMaxLength;
        SearchResult res = runSearch(subject, parseAlgorithm(genAlgo), genSeed, cfg);

        std::cout << subject.name << ": " << res.coveredCount() << "/" << subject.numTargets()
                  << " targets in " << res.evaluations << " evaluations, " << res.suite.tests.size()
                  << " tests\n";
        std::cout << "  branch " << res.coverageOf(subject, TargetKind::Branch) << "  line "
                  << res.coverageOf(subject, TargetKind::Line) << "  method "
                  << res.coverageOf(subject, TargetKind::Method) << "  weakmut "
                  << res.coverageOf(subject, TargetKind::WeakMutation) << "\n";
        for (const TestCase& t : res.suite.tests) std::cout << formatTest(subject.program, t) << "\n";
        if (!genOut.empty()) writeFile(genOut, suiteToJson(subject.program, res.suite));
        if (!genManifest.empty()) writeFile(genManifest, exportTargetManifest(subject.targets));
        if (!genLog.empty()) writeFile(genLog, generationLogCsv(res.log));
    });

    // ---- mutants ------------------------------------------------------
    std::string mutFile;
    CLI::App* mut = app.add_subcommand("mutants", "list the mutants of a subject");
    mut->add_option("file", mutFile, "subject .mini file")->required();
    mut->callback([&] {
        Subject subject = loadSubject(mutFile, CriteriaSet::all());
        for (const Mutant& m : subject.mutants)
            std::cout << m.id << "\t" << mutationOperatorName(m.op) << "\t" << m.description << "\n";
        std::cout << subject.mutants.size() << " mutants\n";
    });

    // ---- mutscore -----------------------------------------------------
    std::string msFile, msSuite, msMatrix;
    CLI::App* ms = app.add_subcommand("mutscore", "strong-mutation score of a suite");
    ms->add_option("file", msFile, "subject .mini file")->required();
    ms->add_option("suite", msSuite, "suite JSON")->required();
    ms->add_option("--matrix", msMatrix, "write the kill matrix");
    ms->callback([&] {
        Subject subject = loadSubject(msFile, CriteriaSet::all());
        TestSuite suite = suiteFromJson(subject.program, readFile(msSuite));
        MutationResult res = strongMutationScore(subject, suite.tests, InterpLimits{});
        int killed = 0;
        for (const KillRecord& k : res.kills) killed += k.killed ? 1 : 0;
        std::cout << "mutation score " << res.mutationScore << " (" << killed << "/"
                  << res.kills.size() << " killed, " << suite.tests.size() << " tests)\n";
        if (!msMatrix.empty()) writeFile(msMatrix, exportKillMatrix(subject.mutants, res));
    });

    // ---- profile ------------------------------------------------------
    std::string prFile, prSuite, prTrace;
    int prForks = 1;
    CLI::App* pr = app.add_subcommand("profile", "deterministic cost of a suite");
    pr->add_option("file", prFile, "subject .mini file")->required();
    pr->add_option("suite", prSuite, "suite JSON")->required();
    pr->add_option("--forks", prForks, "re-execution count (determinism check)");
    pr->add_option("--trace", prTrace, "write per-test trace dumps");
    pr->callback([&] {
        Subject subject = loadSubject(prFile, CriteriaSet::all());
        TestSuite suite = suiteFromJson(subject.program, readFile(prSuite));
        CostSample cost = profileSuite(subject, suite, InterpLimits{}, prForks);
        std::cout << "steps " << cost.steps << "  alloc-units " << cost.allocUnits << "  tests "
                  << suite.tests.size() << "\n";
        if (!prTrace.empty()) {
            std::ostringstream os;
            for (size_t i = 0; i < suite.tests.size(); ++i) {
                os << "# test " << i << "\n";
                os << exportTraceDump(subject, executeTest(subject, suite.tests[i], InterpLimits{}));
            }
            writeFile(prTrace, os.str());
        }
    });

    // ---- exp ----------------------------------------------------------
    std::string expCorpus, expOut = "report", expCriteria = "branch,line,method,weakmut";
    std::vector<std::string> expAlgos = {"dynamosa", "adynamosa"};
    uint64_t expSeed = 1;
    int expReps = 20, expBudget = 10000;
    bool expMutScore = false;
    CLI::App* exp = app.add_subcommand("exp", "repeated-run experiment over a corpus");
    exp->add_option("--corpus", expCorpus, "directory of .mini subjects")->required();
    exp->add_option("--algos", expAlgos, "algorithms to compare")->delimiter(',');
    exp->add_option("--reps", expReps, "repetitions per subject+algorithm");
    exp->add_option("--seed", expSeed, "master seed");
    exp->add_option("--budget", expBudget, "test-execution budget per run");
    exp->add_option("--criteria", expCriteria, "comma list: branch,line,method,weakmut");
    exp->add_option("--out", expOut, "output directory");
    exp->add_flag("--mutation-score", expMutScore, "also compute strong-mutation scores (slow)");
    exp->callback([&] {
        ExperimentConfig cfg;
        cfg.subjectFiles = corpusFiles(expCorpus);
        for (const std::string& a : expAlgos) cfg.algorithms.push_back(parseAlgorithm(a));
        cfg.repetitions = expReps;
        cfg.masterSeed = expSeed;
        cfg.criteria = CriteriaSet::parse(expCriteria);
        cfg.search.budget = expBudget;
        cfg.workers = envWorkers();
        cfg.mutationScore = expMutScore;

        ExperimentResult res = runExperiment(cfg);
        for (const std::string& s : res.skipped) std::cerr << "skipped " << s << "\n";

        fs::create_directories(expOut);
        writeFile((fs::path(expOut) / "records.csv").string(), recordsCsv(res.records));
        std::ostringstream summary;
        for (size_t i = 0; i < expAlgos.size(); ++i)
            for (size_t j = i + 1; j < expAlgos.size(); ++j) {
                ComparisonReport rep = compareAlgorithms(res.records, expAlgos[j], expAlgos[i]);
                std::string name = "report_" + expAlgos[j] + "_vs_" + expAlgos[i] + ".csv";
                writeFile((fs::path(expOut) / name).string(), reportCsv(rep));
                summary << reportSummary(rep) << "\n";
            }
        writeFile((fs::path(expOut) / "summary.txt").string(), summary.str());
        std::cout << res.records.size() << " runs over " << res.subjects.size()
                  << " subjects -> " << expOut << "\n";
    });

    // ---- stats --------------------------------------------------------
    std::string stA, stB;
    CLI::App* st = app.add_subcommand("stats", "rank-sum test and effect size of two samples");
    st->add_option("fileA", stA, "whitespace-separated numbers")->required();
    st->add_option("fileB", stB, "whitespace-separated numbers")->required();
    st->callback([&] {
        std::vector<double> a = readNumbers(stA);
        std::vector<double> b = readNumbers(stB);
        double p = wilcoxonRankSum(a, b);
        double a12 = varghaDelaneyA12(a, b);
        std::cout << "p " << p << "  A12 " << a12 << "  magnitude "
                  << effectMagnitudeName(effectMagnitude(a12)) << "\n";
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
