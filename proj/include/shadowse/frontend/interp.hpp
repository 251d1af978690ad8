#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadowse/frontend/ast.hpp"

namespace shadowse::frontend {

/// Result of running one version of a program directly on its AST.
struct AstOutcome {
  enum class Kind { Returned, AssertionFailure, DivByZero, LoopBoundHit };
  Kind kind = Kind::Returned;
  std::int32_t value = 0;  // Returned only

  std::string to_string() const;
  friend bool operator==(const AstOutcome&, const AstOutcome&) = default;
};

/// Tree-walking reference interpreter. `change(a, b)` evaluates `a` in the
/// old version and `b` in the new one. Each loop may run its body at most
/// `loop_bound` + 1 times per execution.
AstOutcome interpret(const SourceProgram& program, const std::vector<std::int32_t>& args,
                     Version version = Version::New, std::uint32_t loop_bound = 32);

}  // namespace shadowse::frontend
