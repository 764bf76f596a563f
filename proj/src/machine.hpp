#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ast.hpp"
#include "typing.hpp"

namespace symm {

struct StepResult {
  enum class Kind { Stepped, Finished, Stuck };
  Kind kind;
  std::string rule;    // set when Stepped
  CmdPtr next;         // set when Stepped
  std::string reason;  // set when Stuck
};

struct Outcome {
  enum class Kind { Completed, FuelExhausted, StuckState };
  Kind kind;
  uint64_t steps = 0;
  CmdPtr last;
  std::string reason;

  bool completed() const { return kind == Kind::Completed; }
};

struct TraceEntry {
  std::string rule;
  CmdPtr command;
};

struct Trace {
  CmdPtr initial;
  std::vector<TraceEntry> entries;
  Outcome outcome;
};

/// Applies the unique applicable rule to a closed command. Open commands are
/// rejected as Stuck rather than evaluated.
StepResult step(const Program& program, StrategyMode mode, const CmdPtr& cmd);

Outcome run(const Program& program, StrategyMode mode, const CmdPtr& cmd,
            uint64_t fuel);

Trace trace(const Program& program, StrategyMode mode, const CmdPtr& cmd,
            uint64_t fuel);

/// Names of all rules whose pattern (including side conditions) matches the
/// cut, without applying any. Used to check machine determinism.
std::vector<std::string> applicable_rules(const Program& program,
                                          StrategyMode mode, const CmdPtr& cmd);

/// Trace rendering: one line per step, `<rule> ⊢ <command>`.
std::string render_trace(const Trace& trace);
/// Machine-readable variant: one JSON object per line.
std::string render_trace_records(const Trace& trace);

std::string render_outcome(const Outcome& outcome);

}  // namespace symm
