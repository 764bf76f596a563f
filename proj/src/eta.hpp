#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "typing.hpp"

namespace symm {

struct EtaStep {
  enum class Direction { Expand, Contract };
  Direction direction;
  std::vector<int> path;  // child indices from the command root
  Name type_name;
  Polarity polarity;
};

struct EtaExpansion {
  ExprPtr expression;
  std::vector<std::string> warnings;  // emitted when binders were renamed
};

/// Builds the forwarding match of `expr` at `type_name`: one case per xtor,
/// each cutting the xtor applied to the identity substitution of its binders
/// against `expr`. For a data type `expr` must be a consumer, for a codata
/// type a producer; the result has the same orientation and type.
EtaExpansion eta_expand(const Program& program, const ExprPtr& expr,
                        const Name& type_name);

/// Fully contracts recognizable forwarding matches, innermost first.
ExprPtr eta_normalize(const Program& program, const ExprPtr& expr);
CmdPtr eta_normalize(const Program& program, const CmdPtr& cmd);

/// Decides the congruence generated by expansion/contraction by comparing
/// normal forms up to alpha.
bool eta_equal(const Program& program, const CmdPtr& a, const CmdPtr& b);
bool eta_equal(const Program& program, const ExprPtr& a, const ExprPtr& b);

struct Verdict {
  enum class Kind { Pass, Fail, Inconclusive };
  Kind kind;
  std::string witness;

  bool passed() const { return kind == Kind::Pass; }
};

/// Substitutability is stable under eta: under the polar order,
/// Subst(e) and e =eta e' imply Subst(e').
Verdict check_subst_eta_lemma(const Program& program, const ExprPtr& e,
                              const ExprPtr& e_eta);

/// Single-step simulation: when c1 steps to c2 under the polar order and
/// c1 =eta c1', some reduct of c1' within `fuel` steps is =eta to c2.
Verdict check_eta_simulation(const Program& program, const CmdPtr& c1,
                             const CmdPtr& c1_eta, uint64_t fuel);

}  // namespace symm
