#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "diagnostics.hpp"

namespace symm {

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value() && !has_errors(diagnostics); }
};

/// Parses a whole program. All independent syntax and name-resolution errors
/// are reported; `program` is absent when errors prevented building one.
ParseResult parse_program(const std::string& source,
                          const std::string& file = "<input>");

/// Parses a single command against the declarations of `program`.
/// Intended for tests and tools; throws Error when the input is invalid.
CmdPtr parse_command(const Program& program, const std::string& source);

/// Parses a single expression against the declarations of `program`.
/// Variables from `scope` are treated as bound. Throws Error on invalid input.
ExprPtr parse_expression(const Program& program, const std::string& source,
                         const std::vector<Name>& scope = {});

}  // namespace symm
