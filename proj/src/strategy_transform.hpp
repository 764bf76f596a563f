#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace symm {

/// Names used for the generated single-xtor wrapper types: a cbv data
/// wrapper Down_T { CBV_T(x: prd T) } or a cbn codata wrapper
/// Up_T { CBN_T(x: con T) }.
struct ShiftSpec {
  Name shifted_type;
  Strategy wrapper_strategy;
  Name wrapper_type_name;
  Name wrapper_xtor_name;
};

ShiftSpec shift_spec(const Name& type_name, Strategy wrapper_strategy);

/// Adds the wrapper declaration for `type_name` right after it. Idempotent
/// when an identical declaration already exists; collides otherwise.
std::pair<Program, ShiftSpec> declare_shift(const Program& program,
                                            const Name& type_name,
                                            Strategy wrapper_strategy);

/// Embeds an expression of orientation `o` at type T into the corresponding
/// shifted type: producers into a cbv wrapper by the xtor, into a cbn
/// wrapper by forwarding through a comatch, and dually for consumers.
/// `avoid` is added to the freshness set of generated binders.
ExprPtr wrap_shift(const ExprPtr& expr, Orientation orientation,
                   Strategy wrapper_strategy, const Name& type_name,
                   const std::set<Name>& avoid = {});

struct PipelineStage {
  std::string transform;
  Name type_name;
  std::string detail;
};

struct PipelineReport {
  std::vector<PipelineStage> stages;
};

/// Switches the declared evaluation strategy of `type_name` to `target`,
/// threading every occurrence through a shift of the original strategy so
/// the operational behavior of existing code is retained.
/// Requires the type to currently have the flipped strategy.
std::pair<Program, PipelineReport> evaltrans(const Program& program,
                                             const Name& type_name,
                                             Strategy target);

/// Removes the double-shift wrappers around `type_name` left by a
/// polarity/strategy round trip, restoring direct uses of the type. All
/// occurrences must match the round-trip artifact shapes; otherwise the
/// program is left unmodified and an Error is thrown.
std::pair<Program, PipelineReport> remove_double_shifts(const Program& program,
                                                        const Name& type_name);

/// Full transformations: polarity flip followed by the matching strategy
/// switch. Defunctionalization takes a cbn codata type to cbv data;
/// refunctionalization takes a cbv data type to cbn codata.
std::pair<Program, PipelineReport> full_defunc(const Program& program,
                                               const Name& type_name);
std::pair<Program, PipelineReport> full_refunc(const Program& program,
                                               const Name& type_name);

std::string render(const PipelineReport& report);

}  // namespace symm
