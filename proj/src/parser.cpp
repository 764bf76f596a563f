#include "parser.hpp"

#include <map>
#include <memory>
#include <set>
#include <utility>
#include <variant>

#include "lexer.hpp"

namespace symm {

namespace {

// ---------------------------------------------------------------------------
// Surface syntax. Cases carry bound names only; their full contexts are
// recovered from the xtor signatures during resolution. A bare identifier is
// kept as a call-like node and split into Var vs nullary Call by scope.

struct SurfaceExpr;
struct SurfaceCmd;
using SExprPtr = std::shared_ptr<SurfaceExpr>;
using SCmdPtr = std::shared_ptr<SurfaceCmd>;

struct SurfaceParam {
  Name name;
  Orientation orientation;
  Name type_name;
  Span span;
};

struct SurfaceCase {
  Name xtor;
  std::vector<Name> binders;
  SCmdPtr body;
  Span span;
};

struct SurfaceMatch {
  std::optional<Polarity> tag;
  Name type_name;
  std::vector<SurfaceCase> cases;
};

struct SurfaceCallLike {
  Name name;
  bool has_parens = false;
  std::vector<SExprPtr> args;
};

struct SurfaceMu {
  Name binder;
  Orientation binder_orientation;
  Name type_name;
  SCmdPtr body;
};

struct SurfaceExpr {
  std::variant<SurfaceCallLike, SurfaceMatch, SurfaceMu> node;
  Span span;
};

struct SurfaceCmd {
  std::optional<std::pair<SExprPtr, SExprPtr>> cut;
  Span span;
};

struct SurfaceXtor {
  Name name;
  std::vector<SurfaceParam> params;
  Span span;
};

struct SurfaceFun {
  Name name;
  std::vector<SurfaceParam> params;
  SurfaceMatch body;
  Span body_span;
  Span span;
};

struct SurfaceDecl {
  Strategy strategy;
  Polarity polarity;
  Name name;
  std::vector<SurfaceXtor> xtors;
  std::vector<SurfaceFun> functions;
  Span span;
};

struct SurfaceProgram {
  std::vector<SurfaceDecl> declarations;
  std::optional<SCmdPtr> main;
  std::optional<Span> main_span;
};

struct ParseAbort {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file,
         std::vector<Diagnostic>& diagnostics)
      : tokens_(std::move(tokens)), file_(std::move(file)),
        diagnostics_(diagnostics) {}

  SurfaceProgram parse_program() {
    SurfaceProgram program;
    while (!at(TokenKind::EndOfFile)) {
      if (at(TokenKind::KwCbv) || at(TokenKind::KwCbn)) {
        try {
          program.declarations.push_back(parse_declaration());
        } catch (const ParseAbort&) {
          synchronize();
        }
      } else if (at(TokenKind::KwMain)) {
        Span start = peek().span;
        try {
          advance();
          expect(TokenKind::Assign, "':=' after 'main'");
          program.main = parse_command();
          program.main_span = start;
          if (!at(TokenKind::EndOfFile)) {
            error_here("unexpected input after main command");
            synchronize();
          }
        } catch (const ParseAbort&) {
          synchronize();
        }
      } else {
        error_here("expected a type declaration or 'main'");
        synchronize();
      }
    }
    return program;
  }

  SCmdPtr parse_single_command() {
    SCmdPtr cmd = parse_command();
    if (!at(TokenKind::EndOfFile)) error_here("unexpected trailing input");
    return cmd;
  }

  SExprPtr parse_single_expression() {
    SExprPtr e = parse_expression();
    if (!at(TokenKind::EndOfFile)) error_here("unexpected trailing input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  const Token& advance() { return tokens_[pos_++]; }

  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (!at(kind)) {
      if (at(TokenKind::EndOfFile)) {
        error_here(std::string("unexpected end of input, expected ") + what);
      } else {
        error_here(std::string("expected ") + what + ", found '" +
                   peek().text + "'");
      }
      throw ParseAbort{};
    }
    return advance();
  }

  void error_here(const std::string& message) {
    diagnostics_.push_back(
        Diagnostic{Severity::Error, message, file_, peek().span});
  }

  // Skip to the next plausible top-level start.
  void synchronize() {
    while (!at(TokenKind::EndOfFile) && !at(TokenKind::KwCbv) &&
           !at(TokenKind::KwCbn) && !at(TokenKind::KwMain)) {
      advance();
    }
  }

  SurfaceDecl parse_declaration() {
    SurfaceDecl decl;
    decl.span = peek().span;
    decl.strategy = advance().kind == TokenKind::KwCbv ? Strategy::Cbv
                                                       : Strategy::Cbn;
    if (at(TokenKind::KwData) || at(TokenKind::KwCodata)) {
      decl.polarity = advance().kind == TokenKind::KwData ? Polarity::Data
                                                          : Polarity::Codata;
    } else {
      error_here("expected 'data' or 'codata'");
      throw ParseAbort{};
    }
    expect(TokenKind::KwType, "'type'");
    decl.name = expect(TokenKind::Ident, "type name").text;
    expect(TokenKind::LBrace, "'{'");
    if (!at(TokenKind::RBrace)) {
      decl.xtors.push_back(parse_xtor_signature());
      while (accept(TokenKind::Semicolon)) {
        decl.xtors.push_back(parse_xtor_signature());
      }
    }
    expect(TokenKind::RBrace, "'}'");
    if (accept(TokenKind::KwWith)) {
      while (at(TokenKind::Ident)) {
        decl.functions.push_back(parse_function());
      }
    }
    return decl;
  }

  SurfaceXtor parse_xtor_signature() {
    SurfaceXtor xtor;
    const Token& name = expect(TokenKind::Ident, "xtor name");
    xtor.name = name.text;
    xtor.span = name.span;
    if (accept(TokenKind::LParen)) {
      if (!at(TokenKind::RParen)) {
        xtor.params.push_back(parse_param());
        while (accept(TokenKind::Comma)) xtor.params.push_back(parse_param());
      }
      expect(TokenKind::RParen, "')'");
    }
    return xtor;
  }

  SurfaceParam parse_param() {
    SurfaceParam param;
    const Token& name = expect(TokenKind::Ident, "parameter name");
    param.name = name.text;
    param.span = name.span;
    expect(TokenKind::Colon, "':'");
    param.orientation = parse_orientation();
    param.type_name = expect(TokenKind::Ident, "type name").text;
    return param;
  }

  Orientation parse_orientation() {
    if (accept(TokenKind::KwPrd)) return Orientation::Prd;
    if (accept(TokenKind::KwCon)) return Orientation::Con;
    error_here("expected 'prd' or 'con'");
    throw ParseAbort{};
  }

  SurfaceFun parse_function() {
    SurfaceFun fun;
    const Token& name = expect(TokenKind::Ident, "function name");
    fun.name = name.text;
    fun.span = name.span;
    if (accept(TokenKind::LParen)) {
      if (!at(TokenKind::RParen)) {
        fun.params.push_back(parse_param());
        while (accept(TokenKind::Comma)) fun.params.push_back(parse_param());
      }
      expect(TokenKind::RParen, "')'");
    }
    expect(TokenKind::Assign, "':='");
    fun.body_span = peek().span;
    fun.body = parse_match();
    return fun;
  }

  SurfaceMatch parse_match() {
    SurfaceMatch match;
    expect(TokenKind::KwMatch, "'match'");
    if (accept(TokenKind::KwData)) {
      match.tag = Polarity::Data;
    } else if (accept(TokenKind::KwCodata)) {
      match.tag = Polarity::Codata;
    }
    match.type_name = expect(TokenKind::Ident, "type name").text;
    expect(TokenKind::LBrace, "'{'");
    if (!at(TokenKind::RBrace)) {
      match.cases.push_back(parse_case());
      while (accept(TokenKind::Semicolon)) match.cases.push_back(parse_case());
    }
    expect(TokenKind::RBrace, "'}'");
    return match;
  }

  SurfaceCase parse_case() {
    SurfaceCase item;
    const Token& name = expect(TokenKind::Ident, "xtor name");
    item.xtor = name.text;
    item.span = name.span;
    if (accept(TokenKind::LParen)) {
      if (!at(TokenKind::RParen)) {
        item.binders.push_back(expect(TokenKind::Ident, "binder name").text);
        while (accept(TokenKind::Comma)) {
          item.binders.push_back(expect(TokenKind::Ident, "binder name").text);
        }
      }
      expect(TokenKind::RParen, "')'");
    }
    expect(TokenKind::FatArrow, "'=>'");
    item.body = parse_command();
    return item;
  }

  SCmdPtr parse_command() {
    Span span = peek().span;
    if (accept(TokenKind::KwDone)) {
      return std::make_shared<SurfaceCmd>(SurfaceCmd{std::nullopt, span});
    }
    SExprPtr producer = parse_expression();
    expect(TokenKind::CutOp, "'>>'");
    SExprPtr consumer = parse_expression();
    return std::make_shared<SurfaceCmd>(
        SurfaceCmd{std::make_pair(producer, consumer), span});
  }

  SExprPtr parse_expression() {
    Span span = peek().span;
    if (at(TokenKind::KwMu)) {
      advance();
      expect(TokenKind::LParen, "'('");
      SurfaceMu mu;
      mu.binder = expect(TokenKind::Ident, "binder name").text;
      expect(TokenKind::Colon, "':'");
      mu.binder_orientation = parse_orientation();
      mu.type_name = expect(TokenKind::Ident, "type name").text;
      expect(TokenKind::RParen, "')'");
      expect(TokenKind::FatArrow, "'=>'");
      mu.body = parse_command();
      return std::make_shared<SurfaceExpr>(SurfaceExpr{std::move(mu), span});
    }
    if (at(TokenKind::KwMatch)) {
      SurfaceMatch match = parse_match();
      return std::make_shared<SurfaceExpr>(SurfaceExpr{std::move(match), span});
    }
    SurfaceCallLike call;
    call.name = expect(TokenKind::Ident, "expression").text;
    if (accept(TokenKind::LParen)) {
      call.has_parens = true;
      if (!at(TokenKind::RParen)) {
        call.args.push_back(parse_expression());
        while (accept(TokenKind::Comma)) call.args.push_back(parse_expression());
      }
      expect(TokenKind::RParen, "')'");
    }
    return std::make_shared<SurfaceExpr>(SurfaceExpr{std::move(call), span});
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::string file_;
  std::vector<Diagnostic>& diagnostics_;
};

// ---------------------------------------------------------------------------
// Resolution: builds the core AST. Case binder contexts are recovered from
// xtor signatures; match polarity defaults to the matched type's declared
// polarity; bare identifiers become Var when lexically bound, otherwise a
// nullary Call.

class Resolver {
 public:
  Resolver(const SurfaceProgram& surface, std::string file,
           std::vector<Diagnostic>& diagnostics)
      : surface_(surface), file_(std::move(file)), diagnostics_(diagnostics) {}

  Program resolve() {
    index_declarations();
    Program program;
    program.source_name = file_;
    for (const auto& decl : surface_.declarations) {
      program.declarations.push_back(resolve_declaration(decl));
    }
    if (surface_.main.has_value()) {
      program.main = resolve_command(*surface_.main);
    }
    return program;
  }

 private:
  void report(const std::string& message, Span span) {
    diagnostics_.push_back(Diagnostic{Severity::Error, message, file_, span});
  }

  void index_declarations() {
    std::set<Name> xtor_fun_names;
    for (const auto& decl : surface_.declarations) {
      if (!types_.emplace(decl.name, &decl).second) {
        report("duplicate type name '" + decl.name + "'", decl.span);
      }
      for (const auto& xtor : decl.xtors) {
        if (!xtor_fun_names.insert(xtor.name).second) {
          report("duplicate xtor/function name '" + xtor.name + "'", xtor.span);
        }
      }
      for (const auto& fun : decl.functions) {
        if (!xtor_fun_names.insert(fun.name).second) {
          report("duplicate xtor/function name '" + fun.name + "'", fun.span);
        }
      }
    }
  }

  static Context to_context(const std::vector<SurfaceParam>& params) {
    Context ctx;
    for (const auto& p : params) {
      ctx.bindings.push_back(
          Binding{p.name, p.orientation, p.type_name, p.span});
    }
    return ctx;
  }

  TypeDeclaration resolve_declaration(const SurfaceDecl& decl) {
    TypeDeclaration result;
    result.strategy = decl.strategy;
    result.polarity = decl.polarity;
    result.name = decl.name;
    result.span = decl.span;
    for (const auto& xtor : decl.xtors) {
      result.xtors.push_back(
          XtorSignature{xtor.name, to_context(xtor.params), xtor.span});
    }
    for (const auto& fun : decl.functions) {
      FunctionDeclaration f;
      f.name = fun.name;
      f.params = to_context(fun.params);
      f.matched_type = fun.body.type_name;
      f.span = fun.span;
      const SurfaceDecl* matched = find_type(fun.body.type_name, fun.body_span);
      f.match_polarity = resolve_tag(fun.body, matched);
      scope_.clear();
      for (const auto& b : f.params.bindings) scope_.push_back(b.name);
      f.cases = resolve_cases(fun.body, matched);
      scope_.clear();
      result.functions.push_back(std::move(f));
    }
    return result;
  }

  const SurfaceDecl* find_type(const Name& name, Span span) {
    auto it = types_.find(name);
    if (it == types_.end()) {
      report("unknown type '" + name + "' in match", span);
      return nullptr;
    }
    return it->second;
  }

  Polarity resolve_tag(const SurfaceMatch& match, const SurfaceDecl* decl) {
    if (match.tag.has_value()) return *match.tag;
    // No explicit tag: derive from the declaration so the term survives
    // polarity transforms unchanged.
    return decl != nullptr ? decl->polarity : Polarity::Data;
  }

  std::vector<MatchCase> resolve_cases(const SurfaceMatch& match,
                                       const SurfaceDecl* decl) {
    std::vector<MatchCase> cases;
    for (const auto& item : match.cases) {
      const SurfaceXtor* signature = nullptr;
      if (decl != nullptr) {
        for (const auto& x : decl->xtors) {
          if (x.name == item.xtor) {
            signature = &x;
            break;
          }
        }
      }
      if (signature == nullptr) {
        if (decl != nullptr) {
          report("'" + item.xtor + "' is not an xtor of type '" + decl->name +
                     "'",
                 item.span);
        }
        continue;
      }
      if (signature->params.size() != item.binders.size()) {
        report("case '" + item.xtor + "' binds " +
                   std::to_string(item.binders.size()) + " names, signature has " +
                   std::to_string(signature->params.size()),
               item.span);
        continue;
      }
      Context binders;
      for (size_t i = 0; i < item.binders.size(); ++i) {
        binders.bindings.push_back(Binding{item.binders[i],
                                           signature->params[i].orientation,
                                           signature->params[i].type_name,
                                           item.span});
      }
      size_t scope_mark = scope_.size();
      for (const auto& b : binders.bindings) scope_.push_back(b.name);
      CmdPtr body = resolve_command(item.body);
      scope_.resize(scope_mark);
      cases.push_back(
          MatchCase{item.xtor, std::move(binders), std::move(body), item.span});
    }
    return cases;
  }

  CmdPtr resolve_command(const SCmdPtr& cmd) {
    if (!cmd->cut.has_value()) return make_done(cmd->span);
    ExprPtr producer = resolve_expression(cmd->cut->first);
    ExprPtr consumer = resolve_expression(cmd->cut->second);
    return make_cut(std::move(producer), std::move(consumer), cmd->span);
  }

  bool bound(const Name& name) const {
    for (const auto& n : scope_) {
      if (n == name) return true;
    }
    return false;
  }

  ExprPtr resolve_expression(const SExprPtr& expr) {
    if (const auto* call = std::get_if<SurfaceCallLike>(&expr->node)) {
      if (!call->has_parens && bound(call->name)) {
        return make_var(call->name, expr->span);
      }
      if (call->has_parens && bound(call->name)) {
        report("variable '" + call->name + "' cannot take arguments",
               expr->span);
      }
      Substitution args;
      for (const auto& a : call->args) args.push_back(resolve_expression(a));
      return make_call(call->name, std::move(args), expr->span);
    }
    if (const auto* match = std::get_if<SurfaceMatch>(&expr->node)) {
      const SurfaceDecl* decl = find_type(match->type_name, expr->span);
      Polarity tag = resolve_tag(*match, decl);
      return make_match(tag, match->type_name, resolve_cases(*match, decl),
                        expr->span);
    }
    const auto& mu = std::get<SurfaceMu>(expr->node);
    scope_.push_back(mu.binder);
    CmdPtr body = resolve_command(mu.body);
    scope_.pop_back();
    return make_mu(mu.binder, mu.binder_orientation, mu.type_name,
                   std::move(body), expr->span);
  }

  const SurfaceProgram& surface_;
  std::string file_;
  std::vector<Diagnostic>& diagnostics_;
  std::map<Name, const SurfaceDecl*> types_;
  std::vector<Name> scope_;
};

SurfaceProgram surface_of(const Program& program) {
  // A lightweight projection used when parsing snippets against an already
  // resolved program: only declaration headers and signatures are needed.
  SurfaceProgram surface;
  for (const auto& decl : program.declarations) {
    SurfaceDecl d;
    d.strategy = decl.strategy;
    d.polarity = decl.polarity;
    d.name = decl.name;
    d.span = decl.span;
    for (const auto& xtor : decl.xtors) {
      SurfaceXtor x;
      x.name = xtor.name;
      x.span = xtor.span;
      for (const auto& b : xtor.params.bindings) {
        x.params.push_back(
            SurfaceParam{b.name, b.orientation, b.type_name, b.span});
      }
      d.xtors.push_back(std::move(x));
    }
    surface.declarations.push_back(std::move(d));
  }
  return surface;
}

}  // namespace

ParseResult parse_program(const std::string& source, const std::string& file) {
  ParseResult result;
  std::vector<Token> tokens = lex(source, file, result.diagnostics);
  Parser parser(std::move(tokens), file, result.diagnostics);
  SurfaceProgram surface = parser.parse_program();
  if (has_errors(result.diagnostics)) return result;
  Resolver resolver(surface, file, result.diagnostics);
  Program program = resolver.resolve();
  if (has_errors(result.diagnostics)) return result;
  result.program = std::move(program);
  return result;
}

CmdPtr parse_command(const Program& program, const std::string& source) {
  std::vector<Diagnostic> diagnostics;
  std::vector<Token> tokens = lex(source, "<command>", diagnostics);
  Parser parser(std::move(tokens), "<command>", diagnostics);
  SCmdPtr surface_cmd = parser.parse_single_command();
  if (has_errors(diagnostics)) throw Error(render(diagnostics));
  SurfaceProgram surface = surface_of(program);
  surface.main = surface_cmd;
  Resolver resolver(surface, "<command>", diagnostics);
  Program resolved = resolver.resolve();
  if (has_errors(diagnostics)) throw Error(render(diagnostics));
  return resolved.main;
}

ExprPtr parse_expression(const Program& program, const std::string& source,
                         const std::vector<Name>& scope) {
  // Wrap the expression in a cut against a dummy and pull it back out; the
  // scope is provided by wrapping in mu binders instead, to keep one path.
  std::string wrapped = source;
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    wrapped = "mu(" + *it + ": prd Unused__) => " + wrapped + " >> " + *it;
  }
  CmdPtr cmd;
  if (scope.empty()) {
    cmd = parse_command(program, source + " >> " + source);
    // Both sides resolved identically; take the producer side.
    return cmd->cut->producer;
  }
  cmd = parse_command(program, wrapped + " >> " + wrapped);
  ExprPtr expr = cmd->cut->producer;
  for (size_t i = 0; i < scope.size(); ++i) {
    const auto& mu = std::get<Mu>(expr->node);
    expr = mu.body->cut->producer;
  }
  return expr;
}

}  // namespace symm
