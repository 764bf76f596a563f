#include "ast.hpp"

#include <algorithm>
#include <map>

namespace symm {

Polarity flip(Polarity p) {
  return p == Polarity::Data ? Polarity::Codata : Polarity::Data;
}

Strategy flip(Strategy s) {
  return s == Strategy::Cbv ? Strategy::Cbn : Strategy::Cbv;
}

Orientation flip(Orientation o) {
  return o == Orientation::Prd ? Orientation::Con : Orientation::Prd;
}

Orientation value_orientation(Polarity p) {
  return p == Polarity::Data ? Orientation::Prd : Orientation::Con;
}

Orientation continuation_orientation(Polarity p) {
  return p == Polarity::Data ? Orientation::Con : Orientation::Prd;
}

const char* to_string(Polarity p) {
  return p == Polarity::Data ? "data" : "codata";
}

const char* to_string(Strategy s) { return s == Strategy::Cbv ? "cbv" : "cbn"; }

const char* to_string(Orientation o) {
  return o == Orientation::Prd ? "prd" : "con";
}

const Binding* Context::find(const Name& name) const {
  for (const auto& b : bindings) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

ExprPtr make_var(Name name, Span span) {
  return std::make_shared<Expression>(Expression{Var{std::move(name)}, span});
}

ExprPtr make_call(Name name, Substitution args, Span span) {
  return std::make_shared<Expression>(
      Expression{Call{std::move(name), std::move(args)}, span});
}

ExprPtr make_match(Polarity polarity, Name type_name,
                   std::vector<MatchCase> cases, Span span) {
  return std::make_shared<Expression>(
      Expression{Match{polarity, std::move(type_name), std::move(cases)}, span});
}

ExprPtr make_mu(Name binder, Orientation binder_orientation, Name type_name,
                CmdPtr body, Span span) {
  return std::make_shared<Expression>(Expression{
      Mu{std::move(binder), binder_orientation, std::move(type_name),
         std::move(body)},
      span});
}

CmdPtr make_done(Span span) {
  return std::make_shared<Command>(Command{std::nullopt, span});
}

CmdPtr make_cut(ExprPtr producer, ExprPtr consumer, Span span) {
  return std::make_shared<Command>(
      Command{Cut{std::move(producer), std::move(consumer)}, span});
}

const MatchCase* FunctionDeclaration::find_case(const Name& xtor) const {
  for (const auto& c : cases) {
    if (c.xtor == xtor) return &c;
  }
  return nullptr;
}

const XtorSignature* TypeDeclaration::find_xtor(const Name& xtor_name) const {
  for (const auto& x : xtors) {
    if (x.name == xtor_name) return &x;
  }
  return nullptr;
}

const FunctionDeclaration* TypeDeclaration::find_function(
    const Name& fun_name) const {
  for (const auto& f : functions) {
    if (f.name == fun_name) return &f;
  }
  return nullptr;
}

const TypeDeclaration* lookup_type(const Program& program, const Name& name) {
  for (const auto& d : program.declarations) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::optional<XtorLookup> lookup_xtor(const Program& program,
                                      const Name& name) {
  for (const auto& d : program.declarations) {
    if (const XtorSignature* x = d.find_xtor(name)) {
      return XtorLookup{&d, x};
    }
  }
  return std::nullopt;
}

std::optional<FunLookup> lookup_fun(const Program& program, const Name& name) {
  for (const auto& d : program.declarations) {
    if (const FunctionDeclaration* f = d.find_function(name)) {
      return FunLookup{&d, f};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const ExprPtr& expr, std::set<Name>& bound,
                  std::set<Name>& out);

void collect_free(const CmdPtr& cmd, std::set<Name>& bound,
                  std::set<Name>& out) {
  if (cmd->is_done()) return;
  collect_free(cmd->cut->producer, bound, out);
  collect_free(cmd->cut->consumer, bound, out);
}

void collect_free(const ExprPtr& expr, std::set<Name>& bound,
                  std::set<Name>& out) {
  if (const auto* v = std::get_if<Var>(&expr->node)) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (const auto* c = std::get_if<Call>(&expr->node)) {
    for (const auto& a : c->args) collect_free(a, bound, out);
  } else if (const auto* m = std::get_if<Match>(&expr->node)) {
    for (const auto& cs : m->cases) {
      std::vector<Name> added;
      for (const auto& b : cs.binders.bindings) {
        if (bound.insert(b.name).second) added.push_back(b.name);
      }
      collect_free(cs.body, bound, out);
      for (const auto& n : added) bound.erase(n);
    }
  } else {
    const auto& mu = std::get<Mu>(expr->node);
    bool added = bound.insert(mu.binder).second;
    collect_free(mu.body, bound, out);
    if (added) bound.erase(mu.binder);
  }
}

}  // namespace

std::set<Name> free_vars(const ExprPtr& expr) {
  std::set<Name> bound, out;
  collect_free(expr, bound, out);
  return out;
}

std::set<Name> free_vars(const CmdPtr& cmd) {
  std::set<Name> bound, out;
  collect_free(cmd, bound, out);
  return out;
}

Substitution identity_substitution(const Context& ctx) {
  Substitution result;
  result.reserve(ctx.size());
  for (const auto& b : ctx.bindings) result.push_back(make_var(b.name));
  return result;
}

Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  Name candidate = base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

// ---------------------------------------------------------------------------
// Capture-avoiding simultaneous substitution

namespace {

using SubstMap = std::map<Name, ExprPtr>;

std::set<Name> replacement_free_vars(const SubstMap& map) {
  std::set<Name> out;
  for (const auto& [name, expr] : map) {
    auto fv = free_vars(expr);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

ExprPtr subst_expr(const ExprPtr& expr, const SubstMap& map);

CmdPtr subst_cmd(const CmdPtr& cmd, const SubstMap& map) {
  if (map.empty()) return cmd;
  if (cmd->is_done()) return cmd;
  ExprPtr p = subst_expr(cmd->cut->producer, map);
  ExprPtr c = subst_expr(cmd->cut->consumer, map);
  if (p == cmd->cut->producer && c == cmd->cut->consumer) return cmd;
  return make_cut(std::move(p), std::move(c), cmd->span);
}

// Narrows `map` to the variables still visible under `binders`, renaming
// binders that would capture a free variable of some replacement. Returns
// the (possibly renamed) binder context and the body transformer input.
struct ScopedCase {
  Context binders;
  SubstMap map;
  SubstMap renames;  // old binder name -> Var(new name), applied first
};

ScopedCase enter_scope(const Context& binders, const SubstMap& map,
                       const std::set<Name>& body_free) {
  ScopedCase result;
  result.map = map;
  for (const auto& b : binders.bindings) result.map.erase(b.name);

  std::set<Name> replacement_fv = replacement_free_vars(result.map);
  std::set<Name> avoid = replacement_fv;
  avoid.insert(body_free.begin(), body_free.end());
  for (const auto& b : binders.bindings) avoid.insert(b.name);

  result.binders = binders;
  for (auto& b : result.binders.bindings) {
    if (replacement_fv.count(b.name)) {
      Name renamed = fresh_name(b.name, avoid);
      avoid.insert(renamed);
      result.renames[b.name] = make_var(renamed);
      b.name = renamed;
    }
  }
  return result;
}

CmdPtr subst_body(const CmdPtr& body, const Context& binders,
                  const SubstMap& map, Context& binders_out) {
  ScopedCase scoped = enter_scope(binders, map, free_vars(body));
  binders_out = std::move(scoped.binders);
  CmdPtr renamed =
      scoped.renames.empty() ? body : subst_cmd(body, scoped.renames);
  return subst_cmd(renamed, scoped.map);
}

ExprPtr subst_expr(const ExprPtr& expr, const SubstMap& map) {
  if (map.empty()) return expr;
  if (const auto* v = std::get_if<Var>(&expr->node)) {
    auto it = map.find(v->name);
    return it == map.end() ? expr : it->second;
  }
  if (const auto* c = std::get_if<Call>(&expr->node)) {
    Substitution args;
    args.reserve(c->args.size());
    bool changed = false;
    for (const auto& a : c->args) {
      ExprPtr a2 = subst_expr(a, map);
      changed |= a2 != a;
      args.push_back(std::move(a2));
    }
    if (!changed) return expr;
    return make_call(c->name, std::move(args), expr->span);
  }
  if (const auto* m = std::get_if<Match>(&expr->node)) {
    std::vector<MatchCase> cases;
    cases.reserve(m->cases.size());
    bool changed = false;
    for (const auto& cs : m->cases) {
      Context binders;
      CmdPtr body = subst_body(cs.body, cs.binders, map, binders);
      changed |= body != cs.body || !(binders == cs.binders);
      cases.push_back(MatchCase{cs.xtor, std::move(binders), std::move(body),
                                cs.span});
    }
    if (!changed) return expr;
    return make_match(m->polarity, m->type_name, std::move(cases), expr->span);
  }
  const auto& mu = std::get<Mu>(expr->node);
  Context single;
  single.bindings.push_back(
      Binding{mu.binder, mu.binder_orientation, mu.type_name, {}});
  Context renamed;
  CmdPtr body = subst_body(mu.body, single, map, renamed);
  if (body == mu.body && renamed.bindings[0].name == mu.binder) return expr;
  return make_mu(renamed.bindings[0].name, mu.binder_orientation, mu.type_name,
                 std::move(body), expr->span);
}

SubstMap build_map(const Substitution& subst, const Context& ctx,
                   const char* what) {
  if (subst.size() != ctx.size()) {
    throw Error(std::string(what) + ": substitution has " +
                std::to_string(subst.size()) + " entries for a context of " +
                std::to_string(ctx.size()));
  }
  SubstMap map;
  for (size_t i = 0; i < subst.size(); ++i) {
    map[ctx.bindings[i].name] = subst[i];
  }
  return map;
}

}  // namespace

CmdPtr apply_substitution(const CmdPtr& cmd, const Substitution& subst,
                          const Context& ctx) {
  return subst_cmd(cmd, build_map(subst, ctx, "apply_substitution"));
}

ExprPtr apply_substitution(const ExprPtr& expr, const Substitution& subst,
                           const Context& ctx) {
  return subst_expr(expr, build_map(subst, ctx, "apply_substitution"));
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

// Bound variables are identified by the index at which they were pushed;
// free variables must agree by name.
struct AlphaScope {
  std::map<Name, int> left;
  std::map<Name, int> right;
  int next = 0;

  struct Frame {
    std::vector<std::pair<Name, std::optional<int>>> left_saved;
    std::vector<std::pair<Name, std::optional<int>>> right_saved;
    int saved_next;
  };

  Frame push(const std::vector<Name>& lhs, const std::vector<Name>& rhs) {
    Frame frame;
    frame.saved_next = next;
    for (size_t i = 0; i < lhs.size(); ++i) {
      frame.left_saved.emplace_back(lhs[i], find(left, lhs[i]));
      frame.right_saved.emplace_back(rhs[i], find(right, rhs[i]));
      left[lhs[i]] = next;
      right[rhs[i]] = next;
      ++next;
    }
    return frame;
  }

  void pop(const Frame& frame) {
    for (auto it = frame.left_saved.rbegin(); it != frame.left_saved.rend();
         ++it) {
      restore(left, it->first, it->second);
    }
    for (auto it = frame.right_saved.rbegin(); it != frame.right_saved.rend();
         ++it) {
      restore(right, it->first, it->second);
    }
    next = frame.saved_next;
  }

  static std::optional<int> find(const std::map<Name, int>& m, const Name& n) {
    auto it = m.find(n);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  static void restore(std::map<Name, int>& m, const Name& n,
                      const std::optional<int>& v) {
    if (v.has_value()) {
      m[n] = *v;
    } else {
      m.erase(n);
    }
  }
};

bool context_shapes_equal(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.bindings[i].orientation != b.bindings[i].orientation) return false;
    if (a.bindings[i].type_name != b.bindings[i].type_name) return false;
  }
  return true;
}

std::vector<Name> binder_names(const Context& ctx) {
  std::vector<Name> names;
  names.reserve(ctx.size());
  for (const auto& b : ctx.bindings) names.push_back(b.name);
  return names;
}

bool alpha_expr(const ExprPtr& a, const ExprPtr& b, AlphaScope& scope);

bool alpha_cmd(const CmdPtr& a, const CmdPtr& b, AlphaScope& scope) {
  if (a->is_done() != b->is_done()) return false;
  if (a->is_done()) return true;
  return alpha_expr(a->cut->producer, b->cut->producer, scope) &&
         alpha_expr(a->cut->consumer, b->cut->consumer, scope);
}

bool alpha_case(const MatchCase& a, const MatchCase& b, AlphaScope& scope) {
  if (a.xtor != b.xtor) return false;
  if (!context_shapes_equal(a.binders, b.binders)) return false;
  auto frame = scope.push(binder_names(a.binders), binder_names(b.binders));
  bool ok = alpha_cmd(a.body, b.body, scope);
  scope.pop(frame);
  return ok;
}

bool alpha_expr(const ExprPtr& a, const ExprPtr& b, AlphaScope& scope) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* va = std::get_if<Var>(&a->node)) {
    const auto& vb = std::get<Var>(b->node);
    auto la = AlphaScope::find(scope.left, va->name);
    auto lb = AlphaScope::find(scope.right, vb.name);
    if (la.has_value() != lb.has_value()) return false;
    if (la.has_value()) return *la == *lb;
    return va->name == vb.name;
  }
  if (const auto* ca = std::get_if<Call>(&a->node)) {
    const auto& cb = std::get<Call>(b->node);
    if (ca->name != cb.name || ca->args.size() != cb.args.size()) return false;
    for (size_t i = 0; i < ca->args.size(); ++i) {
      if (!alpha_expr(ca->args[i], cb.args[i], scope)) return false;
    }
    return true;
  }
  if (const auto* ma = std::get_if<Match>(&a->node)) {
    const auto& mb = std::get<Match>(b->node);
    if (ma->polarity != mb.polarity || ma->type_name != mb.type_name ||
        ma->cases.size() != mb.cases.size()) {
      return false;
    }
    for (size_t i = 0; i < ma->cases.size(); ++i) {
      if (!alpha_case(ma->cases[i], mb.cases[i], scope)) return false;
    }
    return true;
  }
  const auto& mua = std::get<Mu>(a->node);
  const auto& mub = std::get<Mu>(b->node);
  if (mua.binder_orientation != mub.binder_orientation ||
      mua.type_name != mub.type_name) {
    return false;
  }
  auto frame = scope.push({mua.binder}, {mub.binder});
  bool ok = alpha_cmd(mua.body, mub.body, scope);
  scope.pop(frame);
  return ok;
}

bool alpha_fun(const FunctionDeclaration& a, const FunctionDeclaration& b,
               AlphaScope& scope) {
  if (a.name != b.name || a.match_polarity != b.match_polarity ||
      a.matched_type != b.matched_type || a.cases.size() != b.cases.size()) {
    return false;
  }
  if (!context_shapes_equal(a.params, b.params)) return false;
  auto frame = scope.push(binder_names(a.params), binder_names(b.params));
  bool ok = true;
  for (size_t i = 0; i < a.cases.size() && ok; ++i) {
    ok = alpha_case(a.cases[i], b.cases[i], scope);
  }
  scope.pop(frame);
  return ok;
}

bool alpha_decl(const TypeDeclaration& a, const TypeDeclaration& b,
                AlphaScope& scope) {
  if (a.strategy != b.strategy || a.polarity != b.polarity ||
      a.name != b.name || a.xtors.size() != b.xtors.size() ||
      a.functions.size() != b.functions.size()) {
    return false;
  }
  for (size_t i = 0; i < a.xtors.size(); ++i) {
    if (a.xtors[i].name != b.xtors[i].name) return false;
    // Signature binder names scope over nothing; only shapes must agree.
    if (!context_shapes_equal(a.xtors[i].params, b.xtors[i].params)) {
      return false;
    }
  }
  for (size_t i = 0; i < a.functions.size(); ++i) {
    if (!alpha_fun(a.functions[i], b.functions[i], scope)) return false;
  }
  return true;
}

}  // namespace

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  AlphaScope scope;
  return alpha_expr(a, b, scope);
}

bool alpha_equal(const CmdPtr& a, const CmdPtr& b) {
  AlphaScope scope;
  return alpha_cmd(a, b, scope);
}

bool alpha_equal(const Program& a, const Program& b) {
  if (a.declarations.size() != b.declarations.size()) return false;
  AlphaScope scope;
  for (size_t i = 0; i < a.declarations.size(); ++i) {
    if (!alpha_decl(a.declarations[i], b.declarations[i], scope)) return false;
  }
  return alpha_cmd(a.main, b.main, scope);
}

}  // namespace symm
