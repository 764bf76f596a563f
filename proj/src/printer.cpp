#include "printer.hpp"

#include <sstream>
#include <variant>

namespace symm {

namespace {

constexpr int kIndentWidth = 2;

void indent(std::ostream& out, int level) {
  for (int i = 0; i < level * kIndentWidth; ++i) out << ' ';
}

// `level < 0` selects the single-line form.
void print_expr(std::ostream& out, const ExprPtr& expr, int level);
void print_command(std::ostream& out, const CmdPtr& cmd, int level);

void print_binder_list(std::ostream& out, const Context& binders) {
  if (binders.empty()) return;
  out << '(';
  for (size_t i = 0; i < binders.size(); ++i) {
    if (i > 0) out << ", ";
    out << binders.bindings[i].name;
  }
  out << ')';
}

void print_case(std::ostream& out, const MatchCase& c, int level) {
  out << c.xtor;
  print_binder_list(out, c.binders);
  out << " => ";
  print_command(out, c.body, level);
}

void print_match(std::ostream& out, const Match& match, int level) {
  out << "match " << to_string(match.polarity) << ' ' << match.type_name
      << ' ';
  if (match.cases.empty()) {
    out << "{}";
    return;
  }
  if (level < 0) {
    out << "{ ";
    for (size_t i = 0; i < match.cases.size(); ++i) {
      if (i > 0) out << "; ";
      print_case(out, match.cases[i], -1);
    }
    out << " }";
    return;
  }
  out << "{\n";
  for (size_t i = 0; i < match.cases.size(); ++i) {
    indent(out, level + 1);
    print_case(out, match.cases[i], level + 1);
    if (i + 1 < match.cases.size()) out << ';';
    out << '\n';
  }
  indent(out, level);
  out << '}';
}

void print_expr(std::ostream& out, const ExprPtr& expr, int level) {
  if (const auto* v = std::get_if<Var>(&expr->node)) {
    out << v->name;
    return;
  }
  if (const auto* c = std::get_if<Call>(&expr->node)) {
    out << c->name;
    if (!c->args.empty()) {
      out << '(';
      for (size_t i = 0; i < c->args.size(); ++i) {
        if (i > 0) out << ", ";
        // Arguments are rendered inline regardless of the enclosing mode.
        print_expr(out, c->args[i], -1);
      }
      out << ')';
    }
    return;
  }
  if (const auto* m = std::get_if<Match>(&expr->node)) {
    print_match(out, *m, level);
    return;
  }
  const auto& mu = std::get<Mu>(expr->node);
  out << "mu(" << mu.binder << ": " << to_string(mu.binder_orientation) << ' '
      << mu.type_name << ") => ";
  print_command(out, mu.body, level);
}

void print_command(std::ostream& out, const CmdPtr& cmd, int level) {
  if (cmd->is_done()) {
    out << "Done";
    return;
  }
  print_expr(out, cmd->cut->producer, level);
  out << " >> ";
  print_expr(out, cmd->cut->consumer, level);
}

void print_params(std::ostream& out, const Context& params) {
  if (params.empty()) return;
  out << '(';
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out << ", ";
    const Binding& b = params.bindings[i];
    out << b.name << ": " << to_string(b.orientation) << ' ' << b.type_name;
  }
  out << ')';
}

void print_function(std::ostream& out, const FunctionDeclaration& fun) {
  indent(out, 1);
  out << fun.name;
  print_params(out, fun.params);
  out << " := match " << to_string(fun.match_polarity) << ' '
      << fun.matched_type << ' ';
  if (fun.cases.empty()) {
    out << "{}\n";
    return;
  }
  out << "{\n";
  for (size_t i = 0; i < fun.cases.size(); ++i) {
    indent(out, 2);
    print_case(out, fun.cases[i], 2);
    if (i + 1 < fun.cases.size()) out << ';';
    out << '\n';
  }
  indent(out, 1);
  out << "}\n";
}

void print_declaration(std::ostream& out, const TypeDeclaration& decl) {
  out << to_string(decl.strategy) << ' ' << to_string(decl.polarity)
      << " type " << decl.name << ' ';
  if (decl.xtors.empty()) {
    out << "{}";
  } else {
    out << "{\n";
    for (size_t i = 0; i < decl.xtors.size(); ++i) {
      indent(out, 1);
      out << decl.xtors[i].name;
      print_params(out, decl.xtors[i].params);
      if (i + 1 < decl.xtors.size()) out << ';';
      out << '\n';
    }
    out << '}';
  }
  if (!decl.functions.empty()) {
    out << " with\n";
    for (const auto& fun : decl.functions) print_function(out, fun);
  } else {
    out << '\n';
  }
}

}  // namespace

std::string pretty_print(const Program& program) {
  std::ostringstream out;
  for (const auto& decl : program.declarations) {
    print_declaration(out, decl);
    out << '\n';
  }
  out << "main := ";
  print_command(out, program.main, 0);
  out << '\n';
  return out.str();
}

std::string pretty_print(const CmdPtr& command) {
  std::ostringstream out;
  print_command(out, command, -1);
  return out.str();
}

std::string pretty_print(const ExprPtr& expression) {
  std::ostringstream out;
  print_expr(out, expression, -1);
  return out.str();
}

}  // namespace symm
