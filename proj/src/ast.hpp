#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace symm {

using Name = std::string;

/// Byte-free source position info, 1-based; zeroes mean "synthesized node".
struct Span {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool known() const { return start_line > 0; }
};

enum class Polarity { Data, Codata };
enum class Strategy { Cbv, Cbn };
enum class Orientation { Prd, Con };

Polarity flip(Polarity p);
Strategy flip(Strategy s);
Orientation flip(Orientation o);

/// Orientation of the canonical terms of a type: constructors of a data type
/// are producers, destructors of a codata type are consumers.
Orientation value_orientation(Polarity p);
/// Orientation of the non-canonical side: matches on a data type are
/// consumers, comatches on a codata type are producers.
Orientation continuation_orientation(Polarity p);

const char* to_string(Polarity p);
const char* to_string(Strategy s);
const char* to_string(Orientation o);

/// Error for violated preconditions of transforms and internal invariants.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Binding {
  Name name;
  Orientation orientation;
  Name type_name;
  Span span;

  friend bool operator==(const Binding& a, const Binding& b) {
    return a.name == b.name && a.orientation == b.orientation &&
           a.type_name == b.type_name;
  }
};

/// An ordered telescope of variable bindings. Names are expected to be
/// pairwise distinct within one context; this is enforced by the checker,
/// not the constructor.
struct Context {
  std::vector<Binding> bindings;

  bool empty() const { return bindings.empty(); }
  size_t size() const { return bindings.size(); }
  const Binding* find(const Name& name) const;

  friend bool operator==(const Context& a, const Context& b) {
    return a.bindings == b.bindings;
  }
};

struct Expression;
struct Command;
using ExprPtr = std::shared_ptr<const Expression>;
using CmdPtr = std::shared_ptr<const Command>;

/// A substitution is one expression per binding of some context.
using Substitution = std::vector<ExprPtr>;

struct Var {
  Name name;
};

/// Xtor or function call; the two share one name set and are told apart only
/// by program lookup, never syntactically.
struct Call {
  Name name;
  Substitution args;
};

struct MatchCase {
  Name xtor;
  Context binders;
  CmdPtr body;
  Span span;
};

struct Match {
  Polarity polarity;
  Name type_name;
  std::vector<MatchCase> cases;
};

/// mu(x: con T) => c binds a consumer variable and is itself a producer;
/// mu(x: prd T) => c binds a producer variable and is itself a consumer.
struct Mu {
  Name binder;
  Orientation binder_orientation;
  Name type_name;
  CmdPtr body;
};

struct Expression {
  std::variant<Var, Call, Match, Mu> node;
  Span span;
};

struct Cut {
  ExprPtr producer;
  ExprPtr consumer;
};

/// A command is either a cut `e >> e` or the terminal Done.
struct Command {
  std::optional<Cut> cut;
  Span span;

  bool is_done() const { return !cut.has_value(); }
};

ExprPtr make_var(Name name, Span span = {});
ExprPtr make_call(Name name, Substitution args = {}, Span span = {});
ExprPtr make_match(Polarity polarity, Name type_name,
                   std::vector<MatchCase> cases, Span span = {});
ExprPtr make_mu(Name binder, Orientation binder_orientation, Name type_name,
                CmdPtr body, Span span = {});
CmdPtr make_done(Span span = {});
CmdPtr make_cut(ExprPtr producer, ExprPtr consumer, Span span = {});

struct XtorSignature {
  Name name;
  Context params;
  Span span;
};

struct FunctionDeclaration {
  Name name;
  Context params;
  Polarity match_polarity;
  Name matched_type;
  std::vector<MatchCase> cases;
  Span span;

  const MatchCase* find_case(const Name& xtor) const;
};

struct TypeDeclaration {
  Strategy strategy;
  Polarity polarity;
  Name name;
  std::vector<XtorSignature> xtors;
  std::vector<FunctionDeclaration> functions;
  Span span;

  const XtorSignature* find_xtor(const Name& name) const;
  const FunctionDeclaration* find_function(const Name& name) const;
};

struct Program {
  std::vector<TypeDeclaration> declarations;
  CmdPtr main = make_done();
  std::string source_name = "<memory>";
};

// ---------------------------------------------------------------------------
// Lookup

const TypeDeclaration* lookup_type(const Program& program, const Name& name);

struct XtorLookup {
  const TypeDeclaration* owner;
  const XtorSignature* signature;
};
std::optional<XtorLookup> lookup_xtor(const Program& program, const Name& name);

struct FunLookup {
  const TypeDeclaration* owner;
  const FunctionDeclaration* declaration;
};
std::optional<FunLookup> lookup_fun(const Program& program, const Name& name);

// ---------------------------------------------------------------------------
// Variables and substitution

std::set<Name> free_vars(const ExprPtr& expr);
std::set<Name> free_vars(const CmdPtr& cmd);

/// Identity substitution of a context: one Var per binding.
Substitution identity_substitution(const Context& ctx);

/// Simultaneous capture-avoiding substitution of the context's variables by
/// the corresponding expressions. Throws Error on arity mismatch.
CmdPtr apply_substitution(const CmdPtr& cmd, const Substitution& subst,
                          const Context& ctx);
ExprPtr apply_substitution(const ExprPtr& expr, const Substitution& subst,
                           const Context& ctx);

/// Picks a name based on `base` that is not in `avoid` (appending primes).
Name fresh_name(const Name& base, const std::set<Name>& avoid);

// ---------------------------------------------------------------------------
// Alpha equivalence. Structural equality up to consistent renaming of bound
// variables; declaration order and case order are significant.

bool alpha_equal(const ExprPtr& a, const ExprPtr& b);
bool alpha_equal(const CmdPtr& a, const CmdPtr& b);
bool alpha_equal(const Program& a, const Program& b);

}  // namespace symm
