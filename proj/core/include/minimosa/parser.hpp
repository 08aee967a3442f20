#pragma once

// Lexer + recursive-descent parser + resolver for .mini sources.
// parseProgram returns a fully resolved Program, or diagnostics with
// line/column positions when the source is malformed.

#include "minimosa/ast.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minimosa {

struct Diagnostic {
    int line = 0;
    int col = 0;
    std::string message;
};

struct ParseResult {
    std::optional<Program> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

ParseResult parseProgram(const std::string& source);

// Convenience for fixtures/tools: parse or throw std::runtime_error with the
// first diagnostic formatted as "line:col: message".
Program parseOrThrow(const std::string& source);

} // namespace minimosa
