#include "strategy_transform.hpp"

#include <set>
#include <sstream>
#include <variant>

#include "polarity_transform.hpp"

namespace symm {

namespace {

std::set<Name> global_names(const Program& program) {
  std::set<Name> names;
  for (const auto& decl : program.declarations) {
    for (const auto& x : decl.xtors) names.insert(x.name);
    for (const auto& f : decl.functions) names.insert(f.name);
  }
  return names;
}

TypeDeclaration shift_declaration(const ShiftSpec& spec) {
  TypeDeclaration decl;
  decl.strategy = spec.wrapper_strategy;
  decl.polarity = spec.wrapper_strategy == Strategy::Cbv ? Polarity::Data
                                                         : Polarity::Codata;
  decl.name = spec.wrapper_type_name;
  Context payload;
  payload.bindings.push_back(Binding{
      "x", value_orientation(decl.polarity), spec.shifted_type, {}});
  decl.xtors.push_back(XtorSignature{spec.wrapper_xtor_name, payload, {}});
  return decl;
}

bool same_shift_declaration(const TypeDeclaration& a,
                            const TypeDeclaration& b) {
  return a.strategy == b.strategy && a.polarity == b.polarity &&
         a.functions.empty() && b.functions.empty() && a.xtors.size() == 1 &&
         b.xtors.size() == 1 && a.xtors[0].name == b.xtors[0].name &&
         a.xtors[0].params.size() == 1 && b.xtors[0].params.size() == 1 &&
         a.xtors[0].params.bindings[0].orientation ==
             b.xtors[0].params.bindings[0].orientation &&
         a.xtors[0].params.bindings[0].type_name ==
             b.xtors[0].params.bindings[0].type_name;
}

}  // namespace

ShiftSpec shift_spec(const Name& type_name, Strategy wrapper_strategy) {
  if (wrapper_strategy == Strategy::Cbv) {
    return ShiftSpec{type_name, wrapper_strategy, "Down_" + type_name,
                     "CBV_" + type_name};
  }
  return ShiftSpec{type_name, wrapper_strategy, "Up_" + type_name,
                   "CBN_" + type_name};
}

std::pair<Program, ShiftSpec> declare_shift(const Program& program,
                                            const Name& type_name,
                                            Strategy wrapper_strategy) {
  if (lookup_type(program, type_name) == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  ShiftSpec spec = shift_spec(type_name, wrapper_strategy);
  TypeDeclaration wanted = shift_declaration(spec);

  if (const TypeDeclaration* existing =
          lookup_type(program, spec.wrapper_type_name)) {
    if (same_shift_declaration(*existing, wanted)) {
      return {program, spec};
    }
    throw Error("declaration '" + spec.wrapper_type_name +
                "' already exists and is not the expected shift of '" +
                type_name + "'");
  }
  if (lookup_xtor(program, spec.wrapper_xtor_name).has_value() ||
      lookup_fun(program, spec.wrapper_xtor_name).has_value()) {
    throw Error("name '" + spec.wrapper_xtor_name + "' already in use");
  }

  Program result = program;
  for (size_t i = 0; i < result.declarations.size(); ++i) {
    if (result.declarations[i].name == type_name) {
      result.declarations.insert(result.declarations.begin() + i + 1,
                                 std::move(wanted));
      break;
    }
  }
  return {std::move(result), spec};
}

ExprPtr wrap_shift(const ExprPtr& expr, Orientation orientation,
                   Strategy wrapper_strategy, const Name& type_name,
                   const std::set<Name>& avoid) {
  ShiftSpec spec = shift_spec(type_name, wrapper_strategy);
  bool direct = (orientation == Orientation::Prd) ==
                (wrapper_strategy == Strategy::Cbv);
  if (direct) {
    // S^prd_cbv(e) = CBV(e),  S^con_cbn(e) = CBN(e)
    return make_call(spec.wrapper_xtor_name, {expr});
  }
  std::set<Name> unsafe = free_vars(expr);
  unsafe.insert(avoid.begin(), avoid.end());
  Name binder = fresh_name("x", unsafe);
  Context binders;
  binders.bindings.push_back(
      Binding{binder, value_orientation(wrapper_strategy == Strategy::Cbv
                                            ? Polarity::Data
                                            : Polarity::Codata),
              type_name,
              {}});
  CmdPtr body = orientation == Orientation::Prd
                    // S^prd_cbn(e) = match codata Up_T { CBN(x) => e >> x }
                    ? make_cut(expr, make_var(binder))
                    // S^con_cbv(e) = match data Down_T { CBV(x) => x >> e }
                    : make_cut(make_var(binder), expr);
  std::vector<MatchCase> cases;
  cases.push_back(MatchCase{spec.wrapper_xtor_name, std::move(binders),
                            std::move(body),
                            {}});
  Polarity wrapper_polarity = wrapper_strategy == Strategy::Cbv
                                  ? Polarity::Data
                                  : Polarity::Codata;
  return make_match(wrapper_polarity, spec.wrapper_type_name, std::move(cases));
}

// ---------------------------------------------------------------------------
// Changing the evaluation order of one type

namespace {

class EvalTrans {
 public:
  EvalTrans(const Program& program, const TypeDeclaration& decl)
      : target_type_(decl.name),
        polarity_(decl.polarity),
        original_strategy_(decl.strategy),
        spec_(shift_spec(decl.name, decl.strategy)),
        avoid_(global_names(program)) {
    // Which calls belong to the shifted type is decided by the input program.
    for (const auto& x : decl.xtors) xtor_names_.insert(x.name);
    for (const auto& f : decl.functions) fun_names_.insert(f.name);
  }

  Context rewrite(const Context& ctx) const {
    Context result = ctx;
    for (auto& b : result.bindings) {
      if (b.type_name == target_type_) b.type_name = spec_.wrapper_type_name;
    }
    return result;
  }

  CmdPtr rewrite(const CmdPtr& cmd) const {
    if (cmd->is_done()) return cmd;
    return make_cut(rewrite(cmd->cut->producer), rewrite(cmd->cut->consumer),
                    cmd->span);
  }

  ExprPtr rewrite(const ExprPtr& expr) const {
    if (std::get_if<Var>(&expr->node)) return expr;
    if (const auto* c = std::get_if<Call>(&expr->node)) {
      Substitution args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(rewrite(a));
      ExprPtr call = make_call(c->name, std::move(args), expr->span);
      if (xtor_names_.count(c->name)) {
        return wrap_shift(call, value_orientation(polarity_),
                          original_strategy_, target_type_, avoid_);
      }
      if (fun_names_.count(c->name)) {
        return wrap_shift(call, continuation_orientation(polarity_),
                          original_strategy_, target_type_, avoid_);
      }
      return call;
    }
    if (const auto* m = std::get_if<Match>(&expr->node)) {
      std::vector<MatchCase> cases;
      cases.reserve(m->cases.size());
      for (const auto& cs : m->cases) {
        cases.push_back(MatchCase{cs.xtor, rewrite(cs.binders),
                                  rewrite(cs.body), cs.span});
      }
      ExprPtr match =
          make_match(m->polarity, m->type_name, std::move(cases), expr->span);
      if (m->type_name == target_type_) {
        return wrap_shift(match, continuation_orientation(m->polarity),
                          original_strategy_, target_type_, avoid_);
      }
      return match;
    }
    const auto& mu = std::get<Mu>(expr->node);
    Name annotation = mu.type_name == target_type_ ? spec_.wrapper_type_name
                                                   : mu.type_name;
    return make_mu(mu.binder, mu.binder_orientation, annotation,
                   rewrite(mu.body), expr->span);
  }

  TypeDeclaration rewrite_declaration(const TypeDeclaration& decl,
                                      Strategy target) const {
    TypeDeclaration result;
    result.strategy = decl.name == target_type_ ? target : decl.strategy;
    result.polarity = decl.polarity;
    result.name = decl.name;
    result.span = decl.span;
    for (const auto& x : decl.xtors) {
      result.xtors.push_back(XtorSignature{x.name, rewrite(x.params), x.span});
    }
    for (const auto& f : decl.functions) {
      FunctionDeclaration fun;
      fun.name = f.name;
      fun.params = rewrite(f.params);
      fun.match_polarity = f.match_polarity;
      fun.matched_type = f.matched_type;
      fun.span = f.span;
      for (const auto& cs : f.cases) {
        fun.cases.push_back(MatchCase{cs.xtor, rewrite(cs.binders),
                                      rewrite(cs.body), cs.span});
      }
      result.functions.push_back(std::move(fun));
    }
    return result;
  }

 private:
  Name target_type_;
  Polarity polarity_;
  Strategy original_strategy_;
  ShiftSpec spec_;
  std::set<Name> avoid_;
  std::set<Name> xtor_names_;
  std::set<Name> fun_names_;
};

}  // namespace

std::pair<Program, PipelineReport> evaltrans(const Program& program,
                                             const Name& type_name,
                                             Strategy target) {
  const TypeDeclaration* decl = lookup_type(program, type_name);
  if (decl == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  if (decl->strategy == target) {
    throw Error("type '" + type_name + "' is already " + to_string(target));
  }

  EvalTrans pass(program, *decl);
  Program rewritten;
  rewritten.source_name = program.source_name;
  for (const auto& d : program.declarations) {
    rewritten.declarations.push_back(pass.rewrite_declaration(d, target));
  }
  rewritten.main = pass.rewrite(program.main);

  auto [result, spec] =
      declare_shift(rewritten, type_name, decl->strategy);

  PipelineReport report;
  report.stages.push_back(PipelineStage{
      "evaltrans", type_name,
      std::string(to_string(decl->strategy)) + " -> " + to_string(target) +
          " via " + spec.wrapper_type_name});
  return {std::move(result), std::move(report)};
}

// ---------------------------------------------------------------------------
// Double-shift removal

namespace {

// After a full round trip the program references the outer shift type, whose
// payload is the inner shift of the base type. For a type that was cbv the
// outer wrapper is Down_T over Up_T over T; for cbn it is Up_T over Down_T.
struct DoubleShift {
  Name base;
  ShiftSpec outer;
  ShiftSpec inner;
};

class ShiftRemover {
 public:
  explicit ShiftRemover(DoubleShift shape) : shape_(std::move(shape)) {}

  // Producer artifact at the outer shift:
  //   cbv base: CBV(match codata Up_T { CBN(k) => e >> k })  ~>  e
  //   cbn base: match codata Up_T { CBN(k) => CBV(e) >> k }  ~>  e
  // Consumer artifact at the outer shift:
  //   cbv base: match data Down_T { CBV(x) => x >> CBN(e) }  ~>  e
  //   cbn base: CBN(match data Down_T { CBV(x) => x >> e })  ~>  e
  // Plus mu binders annotated with the outer shift, which drop to the base.

  CmdPtr rewrite(const CmdPtr& cmd) {
    if (cmd->is_done()) return cmd;
    return make_cut(rewrite(cmd->cut->producer), rewrite(cmd->cut->consumer),
                    cmd->span);
  }

  ExprPtr rewrite(const ExprPtr& expr) {
    if (auto unwrapped = match_artifact(expr)) {
      return rewrite(*unwrapped);
    }
    if (std::get_if<Var>(&expr->node)) return expr;
    if (const auto* c = std::get_if<Call>(&expr->node)) {
      if (c->name == shape_.outer.wrapper_xtor_name ||
          c->name == shape_.inner.wrapper_xtor_name) {
        fail("call of shift xtor '" + c->name +
             "' outside a double-shift artifact");
      }
      Substitution args;
      for (const auto& a : c->args) args.push_back(rewrite(a));
      return make_call(c->name, std::move(args), expr->span);
    }
    if (const auto* m = std::get_if<Match>(&expr->node)) {
      if (m->type_name == shape_.outer.wrapper_type_name ||
          m->type_name == shape_.inner.wrapper_type_name) {
        fail("match on shift type '" + m->type_name +
             "' outside a double-shift artifact");
      }
      std::vector<MatchCase> cases;
      for (const auto& cs : m->cases) {
        cases.push_back(MatchCase{cs.xtor, rewrite_context(cs.binders),
                                  rewrite(cs.body), cs.span});
      }
      return make_match(m->polarity, m->type_name, std::move(cases),
                        expr->span);
    }
    const auto& mu = std::get<Mu>(expr->node);
    Name annotation = mu.type_name;
    if (annotation == shape_.outer.wrapper_type_name) {
      annotation = shape_.base;
    } else if (annotation == shape_.inner.wrapper_type_name) {
      fail("mu annotated with inner shift type '" + annotation + "'");
    }
    return make_mu(mu.binder, mu.binder_orientation, annotation,
                   rewrite(mu.body), expr->span);
  }

  Context rewrite_context(const Context& ctx) {
    Context result = ctx;
    for (auto& b : result.bindings) {
      if (b.type_name == shape_.outer.wrapper_type_name) {
        b.type_name = shape_.base;
      } else if (b.type_name == shape_.inner.wrapper_type_name) {
        fail("binder '" + b.name + "' typed at inner shift type");
      }
    }
    return result;
  }

  [[noreturn]] void fail(const std::string& reason) {
    throw Error("double-shift removal for '" + shape_.base +
                "' found a residual occurrence: " + reason);
  }

 private:
  // Recognizes both compositions of the shift embeddings at the outer type.
  std::optional<ExprPtr> match_artifact(const ExprPtr& expr) {
    bool outer_is_cbv = shape_.outer.wrapper_strategy == Strategy::Cbv;
    if (const auto* c = std::get_if<Call>(&expr->node)) {
      if (c->name != shape_.outer.wrapper_xtor_name) return std::nullopt;
      if (c->args.size() != 1) fail("wrapper call with wrong arity");
      // CBV(match Up { CBN(k) => e >> k }) or CBN(match Down { CBV(x) => x >> e })
      const ExprPtr& payload = c->args[0];
      const auto* m = std::get_if<Match>(&payload->node);
      if (m == nullptr || m->type_name != shape_.inner.wrapper_type_name) {
        fail("wrapper call around a non-forwarding payload");
      }
      if (m->cases.size() != 1 ||
          m->cases[0].xtor != shape_.inner.wrapper_xtor_name ||
          m->cases[0].binders.size() != 1) {
        fail("inner forwarding match has unexpected cases");
      }
      const MatchCase& c0 = m->cases[0];
      const Name& binder = c0.binders.bindings[0].name;
      if (c0.body->is_done()) fail("inner forwarding match body is Done");
      const ExprPtr& var_side =
          outer_is_cbv ? c0.body->cut->consumer : c0.body->cut->producer;
      const ExprPtr& payload_side =
          outer_is_cbv ? c0.body->cut->producer : c0.body->cut->consumer;
      const auto* v = std::get_if<Var>(&var_side->node);
      if (v == nullptr || v->name != binder) {
        fail("inner forwarding match does not forward to its binder");
      }
      if (free_vars(payload_side).count(binder)) {
        fail("forwarded expression captures the forwarding binder");
      }
      return payload_side;
    }
    if (const auto* m = std::get_if<Match>(&expr->node)) {
      if (m->type_name != shape_.outer.wrapper_type_name) return std::nullopt;
      // match Down { CBV(x) => x >> CBN(e) } or match Up { CBN(k) => CBV(e) >> k }
      if (m->cases.size() != 1 ||
          m->cases[0].xtor != shape_.outer.wrapper_xtor_name ||
          m->cases[0].binders.size() != 1) {
        fail("outer forwarding match has unexpected cases");
      }
      const MatchCase& c0 = m->cases[0];
      const Name& binder = c0.binders.bindings[0].name;
      if (c0.body->is_done()) fail("outer forwarding match body is Done");
      const ExprPtr& var_side =
          outer_is_cbv ? c0.body->cut->producer : c0.body->cut->consumer;
      const ExprPtr& wrapped_side =
          outer_is_cbv ? c0.body->cut->consumer : c0.body->cut->producer;
      const auto* v = std::get_if<Var>(&var_side->node);
      if (v == nullptr || v->name != binder) {
        fail("outer forwarding match does not forward to its binder");
      }
      const auto* inner_call = std::get_if<Call>(&wrapped_side->node);
      if (inner_call == nullptr ||
          inner_call->name != shape_.inner.wrapper_xtor_name ||
          inner_call->args.size() != 1) {
        fail("outer forwarding match does not wrap with the inner shift");
      }
      if (free_vars(inner_call->args[0]).count(binder)) {
        fail("forwarded expression captures the forwarding binder");
      }
      return inner_call->args[0];
    }
    return std::nullopt;
  }

  DoubleShift shape_;
};

std::optional<DoubleShift> find_double_shift(const Program& program,
                                             const Name& type_name) {
  ShiftSpec down = shift_spec(type_name, Strategy::Cbv);
  ShiftSpec up = shift_spec(type_name, Strategy::Cbn);
  const TypeDeclaration* down_decl = lookup_type(program, down.wrapper_type_name);
  const TypeDeclaration* up_decl = lookup_type(program, up.wrapper_type_name);
  if (down_decl == nullptr && up_decl == nullptr) return std::nullopt;
  if (down_decl == nullptr || up_decl == nullptr) {
    throw Error("type '" + type_name +
                "' has a single shift declaration, not a double shift");
  }
  auto payload_of = [](const TypeDeclaration& d) -> Name {
    if (d.xtors.size() != 1 || d.xtors[0].params.size() != 1) {
      throw Error("declaration '" + d.name + "' is not a shift wrapper");
    }
    return d.xtors[0].params.bindings[0].type_name;
  };
  Name down_payload = payload_of(*down_decl);
  Name up_payload = payload_of(*up_decl);
  if (down_payload == up.wrapper_type_name && up_payload == type_name) {
    return DoubleShift{type_name, down, up};  // Down over Up over T
  }
  if (up_payload == down.wrapper_type_name && down_payload == type_name) {
    return DoubleShift{type_name, up, down};  // Up over Down over T
  }
  throw Error("shift declarations around '" + type_name +
              "' do not form a double shift");
}

}  // namespace

std::pair<Program, PipelineReport> remove_double_shifts(const Program& program,
                                                        const Name& type_name) {
  if (lookup_type(program, type_name) == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  PipelineReport report;
  std::optional<DoubleShift> shape = find_double_shift(program, type_name);
  if (!shape.has_value()) {
    report.stages.push_back(
        PipelineStage{"simplify", type_name, "no shift declarations, unchanged"});
    return {program, std::move(report)};
  }

  ShiftRemover remover(*shape);
  Program result;
  result.source_name = program.source_name;
  for (const auto& decl : program.declarations) {
    if (decl.name == shape->outer.wrapper_type_name ||
        decl.name == shape->inner.wrapper_type_name) {
      continue;
    }
    TypeDeclaration d;
    d.strategy = decl.strategy;
    d.polarity = decl.polarity;
    d.name = decl.name;
    d.span = decl.span;
    for (const auto& x : decl.xtors) {
      d.xtors.push_back(
          XtorSignature{x.name, remover.rewrite_context(x.params), x.span});
    }
    for (const auto& f : decl.functions) {
      FunctionDeclaration fun;
      fun.name = f.name;
      fun.params = remover.rewrite_context(f.params);
      fun.match_polarity = f.match_polarity;
      fun.matched_type = f.matched_type;
      fun.span = f.span;
      for (const auto& cs : f.cases) {
        fun.cases.push_back(MatchCase{cs.xtor, remover.rewrite_context(cs.binders),
                                      remover.rewrite(cs.body), cs.span});
      }
      d.functions.push_back(std::move(fun));
    }
    result.declarations.push_back(std::move(d));
  }
  result.main = remover.rewrite(program.main);

  report.stages.push_back(PipelineStage{
      "simplify", type_name,
      "removed " + shape->outer.wrapper_type_name + " and " +
          shape->inner.wrapper_type_name});
  return {std::move(result), std::move(report)};
}

// ---------------------------------------------------------------------------
// Full pipelines

namespace {

std::pair<Program, PipelineReport> full_pipeline(const Program& program,
                                                 const Name& type_name,
                                                 Polarity target_polarity,
                                                 Strategy target_strategy) {
  const TypeDeclaration* decl = lookup_type(program, type_name);
  if (decl == nullptr) {
    throw Error("unknown type '" + type_name + "'");
  }
  if (decl->polarity == target_polarity ||
      decl->strategy == target_strategy) {
    throw Error("type '" + type_name + "' is " + to_string(decl->strategy) +
                " " + to_string(decl->polarity) + "; expected " +
                to_string(flip(target_strategy)) + " " +
                to_string(flip(target_polarity)));
  }
  auto [flipped, xfun_report] = xfun(program, type_name);
  auto [result, shift_report] = evaltrans(flipped, type_name, target_strategy);

  PipelineReport report;
  report.stages.push_back(PipelineStage{
      "xfun", type_name,
      std::string(to_string(xfun_report.old_polarity)) + " -> " +
          to_string(xfun_report.new_polarity)});
  for (const auto& stage : shift_report.stages) report.stages.push_back(stage);
  return {std::move(result), std::move(report)};
}

}  // namespace

std::pair<Program, PipelineReport> full_defunc(const Program& program,
                                               const Name& type_name) {
  return full_pipeline(program, type_name, Polarity::Data, Strategy::Cbv);
}

std::pair<Program, PipelineReport> full_refunc(const Program& program,
                                               const Name& type_name) {
  return full_pipeline(program, type_name, Polarity::Codata, Strategy::Cbn);
}

std::string render(const PipelineReport& report) {
  std::ostringstream out;
  for (size_t i = 0; i < report.stages.size(); ++i) {
    if (i > 0) out << '\n';
    const auto& stage = report.stages[i];
    out << "stage " << (i + 1) << ": " << stage.transform << " '"
        << stage.type_name << "' " << stage.detail;
  }
  return out.str();
}

}  // namespace symm
