#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace symm {

/// A declaration read as its xtor-by-function matrix: cell (i, j) is the body
/// of function j's case for xtor i.
struct XtorMatrix {
  std::vector<XtorSignature> xtor_labels;  // rows
  std::vector<XtorSignature> fun_labels;   // columns: function name + params
  std::vector<std::vector<CmdPtr>> cells;  // cells[xtor][fun]

  size_t rows() const { return xtor_labels.size(); }
  size_t columns() const { return fun_labels.size(); }
};

struct TransformReport {
  Name type_name;
  Polarity old_polarity;
  Polarity new_polarity;
  Strategy strategy;
  std::vector<std::string> warnings;
};

/// True iff a match on `type_name` occurs anywhere in expression position —
/// the declaration-level matches of the type's own functions do not count.
bool has_local_match_on(const Program& program, const Name& type_name);

/// Reads a declaration into matrix form. Case bodies are renamed so their
/// binders are the declared xtor parameter names.
XtorMatrix to_matrix(const Program& program, const TypeDeclaration& decl);

/// Flips the polarity of one type by transposing its matrix. The terms of
/// the program are untouched; only the declaration of `type_name` changes.
/// Throws Error when the type is missing or has local matches.
std::pair<Program, TransformReport> xfun(const Program& program,
                                         const Name& type_name);

/// xfun with a direction check: refuses unless flipping lands on `target`.
std::pair<Program, TransformReport> xfun_toward(const Program& program,
                                                const Name& type_name,
                                                Polarity target);

std::string render(const TransformReport& report);

}  // namespace symm
