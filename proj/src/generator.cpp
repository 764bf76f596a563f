#include "generator.hpp"

#include <random>
#include <string>
#include <vector>

#include "printer.hpp"
#include "typing.hpp"

namespace symm {

namespace {

class Generator {
 public:
  explicit Generator(const GeneratorConfig& config)
      : config_(config), rng_(config.seed) {}

  Program generate() {
    build_declarations();
    build_function_bodies();
    program_.main = gen_command(config_.max_term_depth);
    program_.source_name =
        "<generated seed " + std::to_string(config_.seed) + ">";
    return program_;
  }

 private:
  int pick(int bound) {  // uniform in [0, bound)
    return static_cast<int>(rng_() % static_cast<uint64_t>(bound));
  }

  bool chance(int percent) { return pick(100) < percent; }

  Name fresh(const char* prefix) {
    return std::string(prefix) + std::to_string(counter_++);
  }

  bool is_pivot(const Name& type_name) const {
    return type_name == program_.declarations.back().name;
  }

  const TypeDeclaration& decl_of(const Name& type_name) const {
    return *lookup_type(program_, type_name);
  }

  void build_declarations() {
    int count = 1 + pick(config_.max_declarations);
    for (int i = 0; i < count; ++i) {
      TypeDeclaration decl;
      decl.name = "T" + std::to_string(i);
      decl.polarity = chance(50) ? Polarity::Data : Polarity::Codata;
      decl.strategy = chance(50) ? Strategy::Cbv : Strategy::Cbn;
      int xtor_count = 1 + pick(config_.max_xtors);
      for (int x = 0; x < xtor_count; ++x) {
        XtorSignature sig;
        sig.name = fresh("C");
        // Payload types come from strictly earlier declarations, so canonical
        // terms of every type stay finite.
        int param_count = i == 0 ? 0 : pick(3);
        for (int p = 0; p < param_count; ++p) {
          sig.params.bindings.push_back(
              Binding{fresh("a"),
                      chance(50) ? Orientation::Prd : Orientation::Con,
                      "T" + std::to_string(pick(i)),
                      {}});
        }
        decl.xtors.push_back(std::move(sig));
      }
      program_.declarations.push_back(std::move(decl));
    }

    int last = count - 1;
    for (int i = 0; i < count; ++i) {
      bool pivot = i == last;
      int fun_count = pivot ? 1 + pick(2) : pick(2);
      for (int f = 0; f < fun_count; ++f) {
        FunctionDeclaration fun;
        fun.name = fresh("f");
        // The pivot keeps one parameterless function so its non-canonical
        // side is always expressible without a local match.
        int param_count = (pivot && f == 0) ? 0 : pick(3);
        for (int p = 0; p < param_count; ++p) {
          fun.params.bindings.push_back(
              Binding{fresh("p"),
                      chance(50) ? Orientation::Prd : Orientation::Con,
                      "T" + std::to_string(pick(count)),
                      {}});
        }
        auto& decl = program_.declarations[i];
        fun.match_polarity = decl.polarity;
        fun.matched_type = decl.name;
        decl.functions.push_back(std::move(fun));
      }
    }
  }

  void build_function_bodies() {
    for (auto& decl : program_.declarations) {
      for (auto& fun : decl.functions) {
        for (const auto& xtor : decl.xtors) {
          scope_ = fun.params.bindings;
          Context binders = xtor.params;  // case binders reuse declared names
          for (const auto& b : binders.bindings) scope_.push_back(b);
          CmdPtr body = gen_command(config_.max_term_depth - 1);
          scope_.clear();
          fun.cases.push_back(
              MatchCase{xtor.name, std::move(binders), std::move(body), {}});
        }
      }
    }
  }

  CmdPtr gen_command(int depth) {
    if (depth <= 0 || chance(15)) return make_done();
    const TypeDeclaration& at = program_.declarations[pick(
        static_cast<int>(program_.declarations.size()))];
    ExprPtr producer = gen_expr(Orientation::Prd, at.name, depth - 1, false);
    ExprPtr consumer = gen_expr(Orientation::Con, at.name, depth - 1, false);
    return make_cut(std::move(producer), std::move(consumer));
  }

  // Functions whose arguments can still be generated at this depth: all of
  // them while depth remains, only parameterless ones at the bottom.
  std::vector<const FunctionDeclaration*> callable_functions(
      const TypeDeclaration& decl, int depth) const {
    std::vector<const FunctionDeclaration*> result;
    for (const auto& fun : decl.functions) {
      if (depth > 0 || fun.params.empty()) result.push_back(&fun);
    }
    return result;
  }

  ExprPtr gen_expr(Orientation o, const Name& type_name, int depth,
                   bool argument_position) {
    const TypeDeclaration& decl = decl_of(type_name);
    enum Option { UseVar, UseXtor, UseFun, UseMatch, UseMu };
    std::vector<Option> options;

    std::vector<const Binding*> vars;
    for (const auto& b : scope_) {
      if (b.orientation == o && b.type_name == type_name) vars.push_back(&b);
    }
    if (!vars.empty()) {
      options.push_back(UseVar);
      options.push_back(UseVar);  // bias toward variables
    }
    if (o == value_orientation(decl.polarity)) {
      options.push_back(UseXtor);
      options.push_back(UseXtor);
    }
    std::vector<const FunctionDeclaration*> funs =
        callable_functions(decl, depth);
    if (o == continuation_orientation(decl.polarity)) {
      if (!funs.empty()) options.push_back(UseFun);
      if (!is_pivot(type_name)) options.push_back(UseMatch);
    }
    if (!argument_position && depth > 0) options.push_back(UseMu);

    // The only combination with no option so far is the non-canonical side
    // of the pivot without a matching variable; its parameterless function
    // covers that.
    if (options.empty()) options.push_back(UseFun);

    switch (options[pick(static_cast<int>(options.size()))]) {
      case UseVar:
        return make_var(vars[pick(static_cast<int>(vars.size()))]->name);
      case UseXtor: {
        const XtorSignature& xtor =
            decl.xtors[pick(static_cast<int>(decl.xtors.size()))];
        Substitution args;
        for (const auto& b : xtor.params.bindings) {
          args.push_back(gen_expr(b.orientation, b.type_name, depth - 1, true));
        }
        return make_call(xtor.name, std::move(args));
      }
      case UseFun: {
        const FunctionDeclaration* fun =
            funs[pick(static_cast<int>(funs.size()))];
        Substitution args;
        for (const auto& b : fun->params.bindings) {
          args.push_back(gen_expr(b.orientation, b.type_name, depth - 1, true));
        }
        return make_call(fun->name, std::move(args));
      }
      case UseMatch: {
        std::vector<MatchCase> cases;
        for (const auto& xtor : decl.xtors) {
          Context binders;
          for (const auto& b : xtor.params.bindings) {
            binders.bindings.push_back(
                Binding{fresh("x"), b.orientation, b.type_name, {}});
          }
          size_t mark = scope_.size();
          for (const auto& b : binders.bindings) scope_.push_back(b);
          CmdPtr body = gen_command(depth - 1);
          scope_.resize(mark);
          cases.push_back(
              MatchCase{xtor.name, std::move(binders), std::move(body), {}});
        }
        return make_match(decl.polarity, type_name, std::move(cases));
      }
      case UseMu: {
        Name binder = fresh("x");
        scope_.push_back(Binding{binder, flip(o), type_name, {}});
        CmdPtr body = gen_command(depth - 1);
        scope_.pop_back();
        return make_mu(binder, flip(o), type_name, std::move(body));
      }
    }
    throw Error("unreachable generator option");
  }

  GeneratorConfig config_;
  std::mt19937_64 rng_;
  Program program_;
  std::vector<Binding> scope_;
  int counter_ = 0;
};

}  // namespace

Program generate_program(const GeneratorConfig& config) {
  GeneratorConfig bounded = config;
  if (bounded.max_declarations < 1) bounded.max_declarations = 1;
  if (bounded.max_xtors < 1) bounded.max_xtors = 1;
  if (bounded.max_term_depth < 1) bounded.max_term_depth = 1;
  Generator generator(bounded);
  Program program = generator.generate();
  auto diagnostics = check_program(program, StrategyMode::Nominal);
  if (has_errors(diagnostics)) {
    throw Error("generated program is ill-formed (seed " +
                std::to_string(config.seed) + "):\n" + pretty_print(program));
  }
  return program;
}

Name pivot_type(const Program& program) {
  if (program.declarations.empty()) throw Error("program has no declarations");
  return program.declarations.back().name;
}

}  // namespace symm
