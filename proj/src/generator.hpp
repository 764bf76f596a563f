#pragma once

#include <cstdint>

#include "ast.hpp"

namespace symm {

struct GeneratorConfig {
  int max_declarations = 3;
  int max_xtors = 3;
  int max_term_depth = 4;
  uint64_t seed = 0;
};

/// Deterministically generates a well-formed program from the seed. The last
/// declared type is the designated pivot: it always carries at least one
/// nullary function and no local match on it is ever generated, so polarity
/// transforms apply to it unconditionally.
Program generate_program(const GeneratorConfig& config);

/// Name of the generated program's pivot type.
Name pivot_type(const Program& program);

}  // namespace symm
