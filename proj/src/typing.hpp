#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "diagnostics.hpp"

namespace symm {

/// How the Subst predicate resolves the evaluation order of a type:
/// globally fixed, by polarity, or by the per-declaration strategy tag.
enum class StrategyMode { GlobalCbv, GlobalCbn, Polar, Nominal };

const char* to_string(StrategyMode mode);
std::optional<StrategyMode> parse_mode(const std::string& text);

struct TypeJudgement {
  Orientation orientation;
  Name type_name;

  friend bool operator==(const TypeJudgement& a, const TypeJudgement& b) {
    return a.orientation == b.orientation && a.type_name == b.type_name;
  }
};

/// Typing environment; nested binders may shadow, lookup is innermost-first.
class Scope {
 public:
  Scope() = default;

  void push(const Binding& binding) { bindings_.push_back(binding); }
  void push(const Context& ctx) {
    for (const auto& b : ctx.bindings) bindings_.push_back(b);
  }
  void pop(size_t count) { bindings_.resize(bindings_.size() - count); }
  size_t size() const { return bindings_.size(); }

  const Binding* lookup(const Name& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

 private:
  std::vector<Binding> bindings_;
};

/// Effective evaluation strategy of `type_name` under `mode`. Throws Error
/// when the mode needs the declaration (Polar/Nominal) and it is missing.
Strategy effective_strategy(const Program& program, StrategyMode mode,
                            const Name& type_name);

/// The Subst predicate: variables, calls and matches are always
/// substitutable; a mu abstraction only against the flow of its type's
/// effective strategy (cbv substitutes the consumer abstraction, cbn the
/// producer abstraction).
bool is_substitutable(const Program& program, StrategyMode mode,
                      const ExprPtr& expr);

std::vector<Diagnostic> check_context(const Program& program,
                                      const Context& ctx);

std::vector<Diagnostic> check_substitution(const Program& program,
                                           StrategyMode mode,
                                           const Scope& scope,
                                           const Substitution& subst,
                                           const Context& target);

struct InferResult {
  std::optional<TypeJudgement> judgement;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return judgement.has_value() && !has_errors(diagnostics); }
};

InferResult infer_expression(const Program& program, StrategyMode mode,
                             const Scope& scope, const ExprPtr& expr);

std::vector<Diagnostic> check_command(const Program& program, StrategyMode mode,
                                      const Scope& scope, const CmdPtr& cmd);

/// Program well-formedness: name uniqueness, declaration signatures, function
/// bodies and the main command. Diagnostics aggregate instead of stopping at
/// the first error.
std::vector<Diagnostic> check_program(const Program& program, StrategyMode mode);

}  // namespace symm
