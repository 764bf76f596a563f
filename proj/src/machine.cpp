#include "machine.hpp"

#include <sstream>
#include <variant>

#include <json.hpp>

#include "printer.hpp"

namespace symm {

namespace {

struct RuleMatch {
  std::string rule;
  CmdPtr next;
};

// The four (co)pattern rules plus the two mu rules. Each helper returns the
// result when its pattern applies, and nothing otherwise.

std::optional<RuleMatch> try_match_rule(const Program& program,
                                        const Cut& cut) {
  const auto* call = std::get_if<Call>(&cut.producer->node);
  const auto* match = std::get_if<Match>(&cut.consumer->node);
  if (call == nullptr || match == nullptr) return std::nullopt;
  if (match->polarity != Polarity::Data) return std::nullopt;
  auto xtor = lookup_xtor(program, call->name);
  if (!xtor.has_value() || xtor->owner->polarity != Polarity::Data) {
    return std::nullopt;
  }
  if (xtor->owner->name != match->type_name) return std::nullopt;
  for (const auto& c : match->cases) {
    if (c.xtor == call->name) {
      return RuleMatch{"Match", apply_substitution(c.body, call->args,
                                                   c.binders)};
    }
  }
  return std::nullopt;
}

std::optional<RuleMatch> try_comatch_rule(const Program& program,
                                          const Cut& cut) {
  const auto* match = std::get_if<Match>(&cut.producer->node);
  const auto* call = std::get_if<Call>(&cut.consumer->node);
  if (call == nullptr || match == nullptr) return std::nullopt;
  if (match->polarity != Polarity::Codata) return std::nullopt;
  auto xtor = lookup_xtor(program, call->name);
  if (!xtor.has_value() || xtor->owner->polarity != Polarity::Codata) {
    return std::nullopt;
  }
  if (xtor->owner->name != match->type_name) return std::nullopt;
  for (const auto& c : match->cases) {
    if (c.xtor == call->name) {
      return RuleMatch{"Comatch", apply_substitution(c.body, call->args,
                                                     c.binders)};
    }
  }
  return std::nullopt;
}

CmdPtr call_body(const FunctionDeclaration& fun, const MatchCase& matched,
                 const Substitution& xtor_args, const Substitution& fun_args) {
  // Case binders first, then function parameters, as the rules are written.
  CmdPtr body = apply_substitution(matched.body, xtor_args, matched.binders);
  return apply_substitution(body, fun_args, fun.params);
}

std::optional<RuleMatch> try_concall_rule(const Program& program,
                                          const Cut& cut) {
  const auto* ctor = std::get_if<Call>(&cut.producer->node);
  const auto* fun_call = std::get_if<Call>(&cut.consumer->node);
  if (ctor == nullptr || fun_call == nullptr) return std::nullopt;
  auto xtor = lookup_xtor(program, ctor->name);
  if (!xtor.has_value() || xtor->owner->polarity != Polarity::Data) {
    return std::nullopt;
  }
  const FunctionDeclaration* fun = xtor->owner->find_function(fun_call->name);
  if (fun == nullptr) return std::nullopt;
  const MatchCase* matched = fun->find_case(ctor->name);
  if (matched == nullptr) return std::nullopt;
  return RuleMatch{"ConCall",
                   call_body(*fun, *matched, ctor->args, fun_call->args)};
}

std::optional<RuleMatch> try_prdcall_rule(const Program& program,
                                          const Cut& cut) {
  const auto* fun_call = std::get_if<Call>(&cut.producer->node);
  const auto* dtor = std::get_if<Call>(&cut.consumer->node);
  if (fun_call == nullptr || dtor == nullptr) return std::nullopt;
  auto xtor = lookup_xtor(program, dtor->name);
  if (!xtor.has_value() || xtor->owner->polarity != Polarity::Codata) {
    return std::nullopt;
  }
  const FunctionDeclaration* fun = xtor->owner->find_function(fun_call->name);
  if (fun == nullptr) return std::nullopt;
  const MatchCase* matched = fun->find_case(dtor->name);
  if (matched == nullptr) return std::nullopt;
  return RuleMatch{"PrdCall",
                   call_body(*fun, *matched, dtor->args, fun_call->args)};
}

std::optional<RuleMatch> try_mu1_rule(const Program& program, StrategyMode mode,
                                      const Cut& cut) {
  const auto* mu = std::get_if<Mu>(&cut.producer->node);
  if (mu == nullptr || mu->binder_orientation != Orientation::Con) {
    return std::nullopt;
  }
  if (!is_substitutable(program, mode, cut.consumer)) return std::nullopt;
  Context binder;
  binder.bindings.push_back(
      Binding{mu->binder, mu->binder_orientation, mu->type_name, {}});
  return RuleMatch{"R-Mu1",
                   apply_substitution(mu->body, {cut.consumer}, binder)};
}

std::optional<RuleMatch> try_mu2_rule(const Program& program, StrategyMode mode,
                                      const Cut& cut) {
  const auto* mu = std::get_if<Mu>(&cut.consumer->node);
  if (mu == nullptr || mu->binder_orientation != Orientation::Prd) {
    return std::nullopt;
  }
  if (!is_substitutable(program, mode, cut.producer)) return std::nullopt;
  Context binder;
  binder.bindings.push_back(
      Binding{mu->binder, mu->binder_orientation, mu->type_name, {}});
  return RuleMatch{"R-Mu2",
                   apply_substitution(mu->body, {cut.producer}, binder)};
}

std::string head_form(const ExprPtr& expr) {
  if (std::get_if<Var>(&expr->node)) return "variable";
  if (const auto* c = std::get_if<Call>(&expr->node)) {
    return "call '" + c->name + "'";
  }
  if (const auto* m = std::get_if<Match>(&expr->node)) {
    return std::string("match_") + to_string(m->polarity) + " on " +
           m->type_name;
  }
  const auto& mu = std::get<Mu>(expr->node);
  return std::string("mu binding a ") + to_string(mu.binder_orientation) +
         " at " + mu.type_name;
}

std::vector<std::optional<RuleMatch>> all_rules(const Program& program,
                                                StrategyMode mode,
                                                const Cut& cut) {
  std::vector<std::optional<RuleMatch>> results;
  results.push_back(try_match_rule(program, cut));
  results.push_back(try_comatch_rule(program, cut));
  results.push_back(try_concall_rule(program, cut));
  results.push_back(try_prdcall_rule(program, cut));
  try {
    results.push_back(try_mu1_rule(program, mode, cut));
  } catch (const Error&) {
    results.push_back(std::nullopt);
  }
  try {
    results.push_back(try_mu2_rule(program, mode, cut));
  } catch (const Error&) {
    results.push_back(std::nullopt);
  }
  return results;
}

}  // namespace

StepResult step(const Program& program, StrategyMode mode, const CmdPtr& cmd) {
  if (cmd->is_done()) {
    return StepResult{StepResult::Kind::Finished, "", nullptr, ""};
  }
  std::set<Name> open = free_vars(cmd);
  if (!open.empty()) {
    return StepResult{StepResult::Kind::Stuck, "", nullptr,
                      "open term: free variable '" + *open.begin() + "'"};
  }
  for (auto& result : all_rules(program, mode, *cmd->cut)) {
    if (result.has_value()) {
      return StepResult{StepResult::Kind::Stepped, result->rule, result->next,
                        ""};
    }
  }
  return StepResult{StepResult::Kind::Stuck, "", nullptr,
                    "no rule applies to " + head_form(cmd->cut->producer) +
                        " >> " + head_form(cmd->cut->consumer)};
}

std::vector<std::string> applicable_rules(const Program& program,
                                          StrategyMode mode,
                                          const CmdPtr& cmd) {
  std::vector<std::string> names;
  if (cmd->is_done()) return names;
  for (const auto& result : all_rules(program, mode, *cmd->cut)) {
    if (result.has_value()) names.push_back(result->rule);
  }
  return names;
}

Outcome run(const Program& program, StrategyMode mode, const CmdPtr& cmd,
            uint64_t fuel) {
  CmdPtr current = cmd;
  for (uint64_t i = 0; i <= fuel; ++i) {
    StepResult result = step(program, mode, current);
    switch (result.kind) {
      case StepResult::Kind::Finished:
        return Outcome{Outcome::Kind::Completed, i, current, ""};
      case StepResult::Kind::Stuck:
        return Outcome{Outcome::Kind::StuckState, i, current, result.reason};
      case StepResult::Kind::Stepped:
        if (i == fuel) {
          return Outcome{Outcome::Kind::FuelExhausted, i, current, ""};
        }
        current = result.next;
        break;
    }
  }
  return Outcome{Outcome::Kind::FuelExhausted, fuel, current, ""};
}

Trace trace(const Program& program, StrategyMode mode, const CmdPtr& cmd,
            uint64_t fuel) {
  Trace result;
  result.initial = cmd;
  CmdPtr current = cmd;
  for (uint64_t i = 0; i <= fuel; ++i) {
    StepResult sr = step(program, mode, current);
    switch (sr.kind) {
      case StepResult::Kind::Finished:
        result.outcome = Outcome{Outcome::Kind::Completed, i, current, ""};
        return result;
      case StepResult::Kind::Stuck:
        result.outcome =
            Outcome{Outcome::Kind::StuckState, i, current, sr.reason};
        return result;
      case StepResult::Kind::Stepped:
        if (i == fuel) {
          result.outcome =
              Outcome{Outcome::Kind::FuelExhausted, i, current, ""};
          return result;
        }
        result.entries.push_back(TraceEntry{sr.rule, sr.next});
        current = sr.next;
        break;
    }
  }
  result.outcome = Outcome{Outcome::Kind::FuelExhausted, fuel, current, ""};
  return result;
}

std::string render_trace(const Trace& trace) {
  std::ostringstream out;
  for (const auto& entry : trace.entries) {
    out << entry.rule << " ⊢ " << pretty_print(entry.command) << '\n';
  }
  return out.str();
}

std::string render_trace_records(const Trace& trace) {
  std::ostringstream out;
  uint64_t index = 0;
  for (const auto& entry : trace.entries) {
    nlohmann::json record = {
        {"step", ++index},
        {"rule", entry.rule},
        {"command", pretty_print(entry.command)},
    };
    out << record.dump() << '\n';
  }
  return out.str();
}

std::string render_outcome(const Outcome& outcome) {
  std::ostringstream out;
  switch (outcome.kind) {
    case Outcome::Kind::Completed:
      out << "Completed(" << outcome.steps << ")";
      break;
    case Outcome::Kind::FuelExhausted:
      out << "FuelExhausted after " << outcome.steps
          << " steps at: " << pretty_print(outcome.last);
      break;
    case Outcome::Kind::StuckState:
      out << "Stuck after " << outcome.steps << " steps (" << outcome.reason
          << ") at: " << pretty_print(outcome.last);
      break;
  }
  return out.str();
}

}  // namespace symm
