#include "eta.hpp"

#include <set>
#include <variant>

#include "machine.hpp"
#include "printer.hpp"

namespace symm {

EtaExpansion eta_expand(const Program& program, const ExprPtr& expr,
                        const Name& type_name) {
  const TypeDeclaration* decl = lookup_type(program, type_name);
  if (decl == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  EtaExpansion result;
  std::set<Name> unsafe = free_vars(expr);
  std::vector<MatchCase> cases;
  for (const auto& xtor : decl->xtors) {
    Context binders = xtor.params;
    std::set<Name> avoid = unsafe;
    for (const auto& b : binders.bindings) avoid.insert(b.name);
    for (auto& b : binders.bindings) {
      if (unsafe.count(b.name)) {
        Name renamed = fresh_name(b.name, avoid);
        avoid.insert(renamed);
        result.warnings.push_back("case binder '" + b.name + "' renamed to '" +
                                  renamed + "' to avoid capture");
        b.name = renamed;
      }
    }
    ExprPtr forward = make_call(xtor.name, identity_substitution(binders));
    CmdPtr body = decl->polarity == Polarity::Data
                      ? make_cut(forward, expr)
                      : make_cut(expr, forward);
    cases.push_back(MatchCase{xtor.name, std::move(binders), std::move(body),
                              {}});
  }
  result.expression =
      make_match(decl->polarity, decl->name, std::move(cases));
  return result;
}

// ---------------------------------------------------------------------------
// Contraction: recognize exactly the forwarding shapes built by eta_expand.

namespace {

bool is_identity_call(const ExprPtr& expr, const Name& xtor,
                      const Context& binders) {
  const auto* call = std::get_if<Call>(&expr->node);
  if (call == nullptr || call->name != xtor) return false;
  if (call->args.size() != binders.size()) return false;
  for (size_t i = 0; i < call->args.size(); ++i) {
    const auto* v = std::get_if<Var>(&call->args[i]->node);
    if (v == nullptr || v->name != binders.bindings[i].name) return false;
  }
  return true;
}

// A match is a forwarding match when every declared xtor is covered exactly
// once by a case `X(binders) => X(id) >> e` (data) or `X(binders) => e >> X(id)`
// (codata) with alpha-equal `e`s that do not use the case binders.
std::optional<ExprPtr> contract_once(const Program& program,
                                     const Match& match) {
  const TypeDeclaration* decl = lookup_type(program, match.type_name);
  if (decl == nullptr || decl->polarity != match.polarity) return std::nullopt;
  if (decl->xtors.empty()) return std::nullopt;
  if (match.cases.size() != decl->xtors.size()) return std::nullopt;
  std::set<Name> covered;
  for (const auto& c : match.cases) covered.insert(c.xtor);
  for (const auto& x : decl->xtors) {
    if (!covered.count(x.name)) return std::nullopt;
  }

  ExprPtr forwarded;
  for (const auto& c : match.cases) {
    if (c.body->is_done()) return std::nullopt;
    const ExprPtr& id_side = match.polarity == Polarity::Data
                                 ? c.body->cut->producer
                                 : c.body->cut->consumer;
    const ExprPtr& target = match.polarity == Polarity::Data
                                ? c.body->cut->consumer
                                : c.body->cut->producer;
    if (!is_identity_call(id_side, c.xtor, c.binders)) return std::nullopt;
    std::set<Name> fv = free_vars(target);
    for (const auto& b : c.binders.bindings) {
      if (fv.count(b.name)) return std::nullopt;
    }
    if (forwarded == nullptr) {
      forwarded = target;
    } else if (!alpha_equal(forwarded, target)) {
      return std::nullopt;
    }
  }
  return forwarded;
}

ExprPtr normalize_expr(const Program& program, const ExprPtr& expr);

CmdPtr normalize_cmd(const Program& program, const CmdPtr& cmd) {
  if (cmd->is_done()) return cmd;
  ExprPtr p = normalize_expr(program, cmd->cut->producer);
  ExprPtr c = normalize_expr(program, cmd->cut->consumer);
  if (p == cmd->cut->producer && c == cmd->cut->consumer) return cmd;
  return make_cut(std::move(p), std::move(c), cmd->span);
}

ExprPtr normalize_expr(const Program& program, const ExprPtr& expr) {
  if (std::get_if<Var>(&expr->node)) return expr;
  if (const auto* call = std::get_if<Call>(&expr->node)) {
    Substitution args;
    args.reserve(call->args.size());
    bool changed = false;
    for (const auto& a : call->args) {
      ExprPtr a2 = normalize_expr(program, a);
      changed |= a2 != a;
      args.push_back(std::move(a2));
    }
    if (!changed) return expr;
    return make_call(call->name, std::move(args), expr->span);
  }
  if (const auto* m = std::get_if<Match>(&expr->node)) {
    std::vector<MatchCase> cases;
    cases.reserve(m->cases.size());
    for (const auto& c : m->cases) {
      cases.push_back(MatchCase{c.xtor, c.binders,
                                normalize_cmd(program, c.body), c.span});
    }
    Match normalized{m->polarity, m->type_name, std::move(cases)};
    if (auto forwarded = contract_once(program, normalized)) {
      // The target was already normalized as part of the case bodies.
      return *forwarded;
    }
    return std::make_shared<Expression>(
        Expression{std::move(normalized), expr->span});
  }
  const auto& mu = std::get<Mu>(expr->node);
  CmdPtr body = normalize_cmd(program, mu.body);
  if (body == mu.body) return expr;
  return make_mu(mu.binder, mu.binder_orientation, mu.type_name,
                 std::move(body), expr->span);
}

}  // namespace

ExprPtr eta_normalize(const Program& program, const ExprPtr& expr) {
  return normalize_expr(program, expr);
}

CmdPtr eta_normalize(const Program& program, const CmdPtr& cmd) {
  return normalize_cmd(program, cmd);
}

bool eta_equal(const Program& program, const CmdPtr& a, const CmdPtr& b) {
  return alpha_equal(eta_normalize(program, a), eta_normalize(program, b));
}

bool eta_equal(const Program& program, const ExprPtr& a, const ExprPtr& b) {
  return alpha_equal(eta_normalize(program, a), eta_normalize(program, b));
}

Verdict check_subst_eta_lemma(const Program& program, const ExprPtr& e,
                              const ExprPtr& e_eta) {
  bool before = is_substitutable(program, StrategyMode::Polar, e);
  if (!before) {
    return Verdict{Verdict::Kind::Pass,
                   "hypothesis unmet: expression is not substitutable"};
  }
  bool after = is_substitutable(program, StrategyMode::Polar, e_eta);
  if (after) return Verdict{Verdict::Kind::Pass, ""};
  return Verdict{Verdict::Kind::Fail,
                 "substitutable " + pretty_print(e) +
                     " is eta-related to non-substitutable " +
                     pretty_print(e_eta)};
}

Verdict check_eta_simulation(const Program& program, const CmdPtr& c1,
                             const CmdPtr& c1_eta, uint64_t fuel) {
  StepResult first = step(program, StrategyMode::Polar, c1);
  if (first.kind != StepResult::Kind::Stepped) {
    return Verdict{Verdict::Kind::Pass, "command does not step"};
  }
  CmdPtr c2 = first.next;
  CmdPtr current = c1_eta;
  for (uint64_t i = 0; i <= fuel; ++i) {
    if (eta_equal(program, c2, current)) {
      return Verdict{Verdict::Kind::Pass, ""};
    }
    StepResult sr = step(program, StrategyMode::Polar, current);
    if (sr.kind == StepResult::Kind::Finished ||
        sr.kind == StepResult::Kind::Stuck) {
      return Verdict{Verdict::Kind::Fail,
                     "reducts of " + pretty_print(c1_eta) +
                         " terminated without reaching an eta-equal of " +
                         pretty_print(c2)};
    }
    current = sr.next;
  }
  return Verdict{Verdict::Kind::Inconclusive,
                 "fuel exhausted while searching for an eta-equal of " +
                     pretty_print(c2)};
}

}  // namespace symm
