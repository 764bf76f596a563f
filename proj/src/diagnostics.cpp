#include "diagnostics.hpp"

#include <sstream>

namespace symm {

std::string render(const Diagnostic& diagnostic) {
  std::ostringstream out;
  out << (diagnostic.file.empty() ? "<unknown>" : diagnostic.file);
  if (diagnostic.span.known()) {
    out << ':' << diagnostic.span.start_line << ':' << diagnostic.span.start_col;
  }
  out << ": "
      << (diagnostic.severity == Severity::Error ? "error" : "warning") << ": "
      << diagnostic.message;
  return out.str();
}

std::string render(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (size_t i = 0; i < diagnostics.size(); ++i) {
    if (i > 0) out << '\n';
    out << render(diagnostics[i]);
  }
  return out.str();
}

}  // namespace symm
