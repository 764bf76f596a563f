#pragma once

#include <string>

#include "ast.hpp"

namespace symm {

/// Canonical program rendering: fixed two-space indentation, one case per
/// line, declarations in stored order. parse(pretty(P)) is alpha-equal to P
/// and printing is idempotent.
std::string pretty_print(const Program& program);

/// Single-line renderings, used in traces and diagnostics.
std::string pretty_print(const CmdPtr& command);
std::string pretty_print(const ExprPtr& expression);

}  // namespace symm
