#pragma once

// A subject bundles everything derived from one source file: resolved program,
// CFGs, control-dependency graph, mutants, coverage targets, and the lookup
// tables the interpreter's instrumentation needs.

#include "minimosa/ast.hpp"
#include "minimosa/cdg.hpp"
#include "minimosa/cfg.hpp"
#include "minimosa/mutation.hpp"
#include "minimosa/targets.hpp"

#include <string>
#include <vector>

namespace minimosa {

struct Subject {
    std::string name;
    Program program;
    ProgramCfg cfg;
    Cdg cdg;
    std::vector<Mutant> mutants;
    TargetTable targets;
    CriteriaSet criteria;

    // instrumentation lookups, all indexed by program-unique ids
    std::vector<std::vector<int>> mutantsAtExpr; // expr id -> expression-level mutants
    std::vector<std::vector<int>> mutantsAtStmt; // stmt id -> statement-level mutants
    std::vector<int> allocSiteOfExpr;            // expr id -> allocation site (-1 = none)
    std::vector<int> condBlockOfStmt;            // stmt id -> owning conditional block
    std::vector<int> methodOfStmt;               // stmt id -> global method index
    int numAllocSites = 0;

    int numTargets() const { return targets.size(); }
};

Subject buildSubject(Program program, CriteriaSet criteria, std::string name);

// Parses and resolves `source`; throws std::runtime_error with a
// "line:col: message" diagnostic on invalid input.
Subject subjectFromSource(const std::string& source, CriteriaSet criteria, std::string name);

// Reads the file and builds a subject named after the file stem.
Subject loadSubject(const std::string& path, CriteriaSet criteria);

} // namespace minimosa
