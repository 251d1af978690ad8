#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shadowse/core/sym_expr.hpp"
#include "shadowse/frontend/ir.hpp"

namespace shadowse::differ {

using core::Assignment;
using frontend::IrProgram;
using frontend::Version;

struct ConcreteOutcome {
  enum class Kind { Returned, AssertionFailure, DivByZero, LoopBoundHit };

  Kind kind = Kind::Returned;
  std::int32_t value = 0;  // Returned only
  std::size_t site = 0;    // instruction index for errors and loop-bound hits
  /// (branch instruction index, direction taken) for every IF_CMP / IF_TRUE.
  std::vector<std::pair<std::size_t, bool>> trace;

  bool is_error() const { return kind == Kind::AssertionFailure || kind == Kind::DivByZero; }
  /// e.g. "returned(1)", "assertion-failure@14:11".
  std::string describe(const IrProgram& ir) const;
  friend bool operator==(const ConcreteOutcome&, const ConcreteOutcome&) = default;
};

const char* to_string(ConcreteOutcome::Kind k);

enum class Verdict { Identical, ExpectedFix, RegressionCandidate, BehavioralDiff };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Classification {
  Verdict verdict = Verdict::Identical;
  ConcreteOutcome old_outcome;
  ConcreteOutcome new_outcome;
};

/// Runs one version of `ir` concretely. Missing inputs throw
/// std::invalid_argument.
ConcreteOutcome exec_concrete_version(const IrProgram& ir, Version version, const Assignment& input,
                                      std::uint32_t loop_bound = 32);

/// The verdict table: identical outcomes (kind, value, site, trace), old error
/// and new return, old return and new error, anything else.
Verdict verdict_of(const ConcreteOutcome& old_outcome, const ConcreteOutcome& new_outcome);

Classification classify_input(const IrProgram& ir, const Assignment& input, std::uint32_t loop_bound = 32);

}  // namespace shadowse::differ
