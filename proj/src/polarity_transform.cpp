#include "polarity_transform.hpp"

#include <set>
#include <sstream>
#include <variant>

namespace symm {

namespace {

bool expr_has_match_on(const ExprPtr& expr, const Name& type_name);

bool cmd_has_match_on(const CmdPtr& cmd, const Name& type_name) {
  if (cmd->is_done()) return false;
  return expr_has_match_on(cmd->cut->producer, type_name) ||
         expr_has_match_on(cmd->cut->consumer, type_name);
}

bool expr_has_match_on(const ExprPtr& expr, const Name& type_name) {
  if (std::get_if<Var>(&expr->node)) return false;
  if (const auto* c = std::get_if<Call>(&expr->node)) {
    for (const auto& a : c->args) {
      if (expr_has_match_on(a, type_name)) return true;
    }
    return false;
  }
  if (const auto* m = std::get_if<Match>(&expr->node)) {
    if (m->type_name == type_name) return true;
    for (const auto& c : m->cases) {
      if (cmd_has_match_on(c.body, type_name)) return true;
    }
    return false;
  }
  return cmd_has_match_on(std::get<Mu>(expr->node).body, type_name);
}

std::set<Name> names_of(const Context& ctx) {
  std::set<Name> names;
  for (const auto& b : ctx.bindings) names.insert(b.name);
  return names;
}

}  // namespace

bool has_local_match_on(const Program& program, const Name& type_name) {
  for (const auto& decl : program.declarations) {
    for (const auto& fun : decl.functions) {
      for (const auto& c : fun.cases) {
        if (cmd_has_match_on(c.body, type_name)) return true;
      }
    }
  }
  return cmd_has_match_on(program.main, type_name);
}

XtorMatrix to_matrix(const Program& program, const TypeDeclaration& decl) {
  (void)program;
  XtorMatrix matrix;
  for (const auto& fun : decl.functions) {
    matrix.fun_labels.push_back(XtorSignature{fun.name, fun.params, fun.span});
  }
  for (const auto& xtor : decl.xtors) {
    // Free variables across the row, excluding each cell's own binders:
    // these are the function-parameter references the row labels must avoid.
    std::set<Name> row_free;
    for (const auto& fun : decl.functions) {
      const MatchCase* c = fun.find_case(xtor.name);
      if (c == nullptr) {
        throw Error("function '" + fun.name + "' has no case for xtor '" +
                    xtor.name + "'");
      }
      std::set<Name> fv = free_vars(c->body);
      for (const auto& bound : names_of(c->binders)) fv.erase(bound);
      row_free.insert(fv.begin(), fv.end());
    }

    Context label = xtor.params;
    std::set<Name> avoid = row_free;
    for (const auto& b : label.bindings) avoid.insert(b.name);
    for (auto& b : label.bindings) {
      if (row_free.count(b.name)) {
        b.name = fresh_name(b.name, avoid);
        avoid.insert(b.name);
      }
    }
    matrix.xtor_labels.push_back(XtorSignature{xtor.name, label, xtor.span});

    std::vector<CmdPtr> row;
    for (const auto& fun : decl.functions) {
      const MatchCase* c = fun.find_case(xtor.name);
      Substitution renaming;
      for (const auto& b : label.bindings) renaming.push_back(make_var(b.name));
      row.push_back(apply_substitution(c->body, renaming, c->binders));
    }
    matrix.cells.push_back(std::move(row));
  }
  return matrix;
}

std::pair<Program, TransformReport> xfun(const Program& program,
                                         const Name& type_name) {
  const TypeDeclaration* decl = lookup_type(program, type_name);
  if (decl == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  if (has_local_match_on(program, type_name)) {
    throw Error("program contains a local match on '" + type_name +
                "'; lift local matches into function declarations first");
  }

  XtorMatrix matrix = to_matrix(program, *decl);
  Polarity new_polarity = flip(decl->polarity);

  TypeDeclaration transposed;
  transposed.strategy = decl->strategy;
  transposed.polarity = new_polarity;
  transposed.name = decl->name;
  transposed.xtors = matrix.fun_labels;
  for (size_t i = 0; i < matrix.rows(); ++i) {
    FunctionDeclaration fun;
    fun.name = matrix.xtor_labels[i].name;
    fun.params = matrix.xtor_labels[i].params;
    fun.match_polarity = new_polarity;
    fun.matched_type = decl->name;
    for (size_t j = 0; j < matrix.columns(); ++j) {
      fun.cases.push_back(MatchCase{matrix.fun_labels[j].name,
                                    matrix.fun_labels[j].params,
                                    matrix.cells[i][j],
                                    {}});
    }
    transposed.functions.push_back(std::move(fun));
  }

  Program result = program;
  for (auto& d : result.declarations) {
    if (d.name == type_name) {
      d = std::move(transposed);
      break;
    }
  }

  TransformReport report{type_name, decl->polarity, new_polarity,
                         decl->strategy, {}};
  return {std::move(result), std::move(report)};
}

std::pair<Program, TransformReport> xfun_toward(const Program& program,
                                                const Name& type_name,
                                                Polarity target) {
  const TypeDeclaration* decl = lookup_type(program, type_name);
  if (decl == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  if (decl->polarity == target) {
    throw Error("type '" + type_name + "' is already " + to_string(target));
  }
  return xfun(program, type_name);
}

std::string render(const TransformReport& report) {
  std::ostringstream out;
  out << "transformed '" << report.type_name << "': "
      << to_string(report.old_polarity) << " -> "
      << to_string(report.new_polarity) << " (strategy "
      << to_string(report.strategy) << " unchanged)";
  for (const auto& w : report.warnings) out << "\nwarning: " << w;
  return out.str();
}

}  // namespace symm
