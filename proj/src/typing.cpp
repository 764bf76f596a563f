#include "typing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "printer.hpp"

namespace symm {

const char* to_string(StrategyMode mode) {
  switch (mode) {
    case StrategyMode::GlobalCbv: return "cbv";
    case StrategyMode::GlobalCbn: return "cbn";
    case StrategyMode::Polar: return "polar";
    case StrategyMode::Nominal: return "nominal";
  }
  return "?";
}

std::optional<StrategyMode> parse_mode(const std::string& text) {
  if (text == "cbv") return StrategyMode::GlobalCbv;
  if (text == "cbn") return StrategyMode::GlobalCbn;
  if (text == "polar") return StrategyMode::Polar;
  if (text == "nominal") return StrategyMode::Nominal;
  return std::nullopt;
}

Strategy effective_strategy(const Program& program, StrategyMode mode,
                            const Name& type_name) {
  switch (mode) {
    case StrategyMode::GlobalCbv:
      return Strategy::Cbv;
    case StrategyMode::GlobalCbn:
      return Strategy::Cbn;
    case StrategyMode::Polar: {
      const TypeDeclaration* decl = lookup_type(program, type_name);
      if (decl == nullptr) throw Error("unknown type '" + type_name + "'");
      return decl->polarity == Polarity::Data ? Strategy::Cbv : Strategy::Cbn;
    }
    case StrategyMode::Nominal: {
      const TypeDeclaration* decl = lookup_type(program, type_name);
      if (decl == nullptr) throw Error("unknown type '" + type_name + "'");
      return decl->strategy;
    }
  }
  throw Error("invalid strategy mode");
}

bool is_substitutable(const Program& program, StrategyMode mode,
                      const ExprPtr& expr) {
  const auto* mu = std::get_if<Mu>(&expr->node);
  if (mu == nullptr) return true;
  Strategy strategy = effective_strategy(program, mode, mu->type_name);
  // Under cbv the consumer abstraction (binding a producer) may be
  // substituted; under cbn the producer abstraction (binding a consumer).
  return strategy == Strategy::Cbv ? mu->binder_orientation == Orientation::Prd
                                   : mu->binder_orientation == Orientation::Con;
}

namespace {

Diagnostic error_at(std::string message, const Program& program, Span span) {
  return Diagnostic{Severity::Error, std::move(message), program.source_name,
                    span};
}

class Checker {
 public:
  Checker(const Program& program, StrategyMode mode)
      : program_(program), mode_(mode) {}

  std::vector<Diagnostic> take_diagnostics() { return std::move(diagnostics_); }

  void report(std::string message, Span span) {
    diagnostics_.push_back(error_at(std::move(message), program_, span));
  }

  void check_context(const Context& ctx) {
    std::set<Name> seen;
    for (const auto& b : ctx.bindings) {
      if (!seen.insert(b.name).second) {
        report("duplicate binder '" + b.name + "'", b.span);
      }
      if (lookup_type(program_, b.type_name) == nullptr) {
        report("unknown type '" + b.type_name + "' in binder '" + b.name + "'",
               b.span);
      }
      if (lookup_xtor(program_, b.name).has_value() ||
          lookup_fun(program_, b.name).has_value()) {
        report("binder '" + b.name +
                   "' collides with a declared xtor or function name",
               b.span);
      }
    }
  }

  void check_substitution(Scope& scope, const Substitution& subst,
                          const Context& target, Span span) {
    if (subst.size() != target.size()) {
      report("expected " + std::to_string(target.size()) + " arguments, got " +
                 std::to_string(subst.size()),
             span);
      return;
    }
    for (size_t i = 0; i < subst.size(); ++i) {
      const Binding& expected = target.bindings[i];
      auto judgement = infer(scope, subst[i]);
      if (!judgement.has_value()) continue;
      if (judgement->orientation != expected.orientation ||
          judgement->type_name != expected.type_name) {
        report("argument " + std::to_string(i + 1) + " has type " +
                   to_string(judgement->orientation) + " " +
                   judgement->type_name + ", expected " +
                   to_string(expected.orientation) + " " + expected.type_name,
               subst[i]->span);
      }
      if (!is_substitutable(program_, mode_, subst[i])) {
        report("argument " + std::to_string(i + 1) + " (" +
                   pretty_print(subst[i]) +
                   ") is not substitutable under this evaluation order",
               subst[i]->span);
      }
    }
  }

  std::optional<TypeJudgement> infer(Scope& scope, const ExprPtr& expr) {
    if (const auto* v = std::get_if<Var>(&expr->node)) {
      const Binding* binding = scope.lookup(v->name);
      if (binding == nullptr) {
        report("unbound variable '" + v->name + "'", expr->span);
        return std::nullopt;
      }
      return TypeJudgement{binding->orientation, binding->type_name};
    }
    if (const auto* c = std::get_if<Call>(&expr->node)) {
      if (auto xtor = lookup_xtor(program_, c->name)) {
        check_substitution(scope, c->args, xtor->signature->params, expr->span);
        return TypeJudgement{value_orientation(xtor->owner->polarity),
                             xtor->owner->name};
      }
      if (auto fun = lookup_fun(program_, c->name)) {
        check_substitution(scope, c->args, fun->declaration->params,
                           expr->span);
        return TypeJudgement{continuation_orientation(fun->owner->polarity),
                             fun->owner->name};
      }
      report("unknown name '" + c->name + "'", expr->span);
      return std::nullopt;
    }
    if (const auto* m = std::get_if<Match>(&expr->node)) {
      return infer_match(scope, *m, expr->span);
    }
    const auto& mu = std::get<Mu>(expr->node);
    if (lookup_type(program_, mu.type_name) == nullptr) {
      report("unknown type '" + mu.type_name + "' in mu binder", expr->span);
      return std::nullopt;
    }
    scope.push(Binding{mu.binder, mu.binder_orientation, mu.type_name,
                       expr->span});
    check_command(scope, mu.body);
    scope.pop(1);
    return TypeJudgement{flip(mu.binder_orientation), mu.type_name};
  }

  std::optional<TypeJudgement> infer_match(Scope& scope, const Match& match,
                                           Span span) {
    const TypeDeclaration* decl = lookup_type(program_, match.type_name);
    if (decl == nullptr) {
      report("unknown type '" + match.type_name + "' in match", span);
      return std::nullopt;
    }
    if (match.polarity != decl->polarity) {
      report("match tagged '" + std::string(to_string(match.polarity)) +
                 "' but type '" + decl->name + "' is declared " +
                 to_string(decl->polarity),
             span);
    }
    check_cases(scope, match.cases, *decl, span);
    return TypeJudgement{continuation_orientation(decl->polarity), decl->name};
  }

  // Shared by local matches and function bodies: exhaustiveness, binder
  // signature identity and the case commands.
  void check_cases(Scope& scope, const std::vector<MatchCase>& cases,
                   const TypeDeclaration& decl, Span span) {
    std::set<Name> covered;
    for (const auto& c : cases) {
      if (!covered.insert(c.xtor).second) {
        report("duplicate case for xtor '" + c.xtor + "'", c.span);
      }
    }
    for (const auto& xtor : decl.xtors) {
      if (!covered.count(xtor.name)) {
        report("non-exhaustive match on '" + decl.name + "': missing case '" +
                   xtor.name + "'",
               span);
      }
    }
    for (const auto& c : cases) {
      const XtorSignature* signature = decl.find_xtor(c.xtor);
      if (signature == nullptr) {
        report("'" + c.xtor + "' is not an xtor of type '" + decl.name + "'",
               c.span);
        continue;
      }
      if (c.binders.size() != signature->params.size()) {
        report("case '" + c.xtor + "' binds " +
                   std::to_string(c.binders.size()) + " names, signature has " +
                   std::to_string(signature->params.size()),
               c.span);
        continue;
      }
      bool shapes_ok = true;
      for (size_t i = 0; i < c.binders.size(); ++i) {
        const Binding& got = c.binders.bindings[i];
        const Binding& want = signature->params.bindings[i];
        if (got.orientation != want.orientation ||
            got.type_name != want.type_name) {
          report("case binder '" + got.name + "' has signature " +
                     to_string(got.orientation) + " " + got.type_name +
                     ", declared as " + to_string(want.orientation) + " " +
                     want.type_name,
                 c.span);
          shapes_ok = false;
        }
      }
      check_context(c.binders);
      if (!shapes_ok) continue;
      scope.push(c.binders);
      check_command(scope, c.body);
      scope.pop(c.binders.size());
    }
  }

  void check_command(Scope& scope, const CmdPtr& cmd) {
    if (cmd->is_done()) return;
    auto left = infer(scope, cmd->cut->producer);
    auto right = infer(scope, cmd->cut->consumer);
    if (left.has_value() && left->orientation != Orientation::Prd) {
      report("left side of cut is a consumer of " + left->type_name,
             cmd->cut->producer->span);
    }
    if (right.has_value() && right->orientation != Orientation::Con) {
      report("right side of cut is a producer of " + right->type_name,
             cmd->cut->consumer->span);
    }
    if (left.has_value() && right.has_value() &&
        left->orientation == Orientation::Prd &&
        right->orientation == Orientation::Con &&
        left->type_name != right->type_name) {
      report("cut connects a producer of " + left->type_name +
                 " with a consumer of " + right->type_name,
             cmd->span);
    }
  }

  void check_program() {
    check_global_names();
    for (const auto& decl : program_.declarations) check_declaration(decl);
    Scope scope;
    check_command(scope, program_.main);
  }

 private:
  void check_global_names() {
    std::set<Name> type_names;
    std::set<Name> member_names;
    for (const auto& decl : program_.declarations) {
      if (!type_names.insert(decl.name).second) {
        report("duplicate type name '" + decl.name + "'", decl.span);
      }
      for (const auto& xtor : decl.xtors) {
        if (!member_names.insert(xtor.name).second) {
          report("duplicate xtor/function name '" + xtor.name + "'", xtor.span);
        }
      }
      for (const auto& fun : decl.functions) {
        if (!member_names.insert(fun.name).second) {
          report("duplicate xtor/function name '" + fun.name + "'", fun.span);
        }
      }
    }
  }

  void check_declaration(const TypeDeclaration& decl) {
    for (const auto& xtor : decl.xtors) check_context(xtor.params);
    for (const auto& fun : decl.functions) {
      check_context(fun.params);
      if (fun.matched_type != decl.name) {
        report("function '" + fun.name + "' matches on '" + fun.matched_type +
                   "' but belongs to '" + decl.name + "'",
               fun.span);
        continue;
      }
      if (fun.match_polarity != decl.polarity) {
        report("function '" + fun.name + "' match tagged '" +
                   to_string(fun.match_polarity) + "' but type is " +
                   to_string(decl.polarity),
               fun.span);
      }
      // Function parameters and case binders may not share names; the case
      // contexts open underneath the parameter context.
      std::set<Name> param_names;
      for (const auto& b : fun.params.bindings) param_names.insert(b.name);
      for (const auto& c : fun.cases) {
        for (const auto& b : c.binders.bindings) {
          if (param_names.count(b.name)) {
            report("case binder '" + b.name + "' shadows a parameter of '" +
                       fun.name + "'",
                   c.span);
          }
        }
      }
      Scope scope;
      scope.push(fun.params);
      check_cases(scope, fun.cases, decl, fun.span);
    }
  }

  const Program& program_;
  StrategyMode mode_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

std::vector<Diagnostic> check_context(const Program& program,
                                      const Context& ctx) {
  Checker checker(program, StrategyMode::Nominal);
  checker.check_context(ctx);
  return checker.take_diagnostics();
}

std::vector<Diagnostic> check_substitution(const Program& program,
                                           StrategyMode mode,
                                           const Scope& scope,
                                           const Substitution& subst,
                                           const Context& target) {
  Checker checker(program, mode);
  Scope working = scope;
  checker.check_substitution(working, subst, target, Span{});
  return checker.take_diagnostics();
}

InferResult infer_expression(const Program& program, StrategyMode mode,
                             const Scope& scope, const ExprPtr& expr) {
  Checker checker(program, mode);
  Scope working = scope;
  InferResult result;
  result.judgement = checker.infer(working, expr);
  result.diagnostics = checker.take_diagnostics();
  if (has_errors(result.diagnostics)) result.judgement.reset();
  return result;
}

std::vector<Diagnostic> check_command(const Program& program, StrategyMode mode,
                                      const Scope& scope, const CmdPtr& cmd) {
  Checker checker(program, mode);
  Scope working = scope;
  checker.check_command(working, cmd);
  return checker.take_diagnostics();
}

std::vector<Diagnostic> check_program(const Program& program,
                                      StrategyMode mode) {
  Checker checker(program, mode);
  checker.check_program();
  return checker.take_diagnostics();
}

}  // namespace symm
