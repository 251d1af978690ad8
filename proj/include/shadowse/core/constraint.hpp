#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shadowse/core/sym_expr.hpp"

namespace shadowse::core {

/// Atomic constraint `lhs rel rhs`. Negation flips the relation, so the
/// negation of any constraint is again a Constraint.
struct Constraint {
  Rel rel = Rel::Eq;
  Expr lhs = Expr::constant(0);
  Expr rhs = Expr::constant(0);

  Constraint() = default;
  Constraint(Rel r, Expr l, Expr rr) : rel(r), lhs(std::move(l)), rhs(std::move(rr)) {}

  /// `v != 0` for a 0/1-valued expression; a relational expression is
  /// unwrapped into the relation itself.
  static Constraint truthy(const Expr& v);
  static Constraint always(bool value);

  Constraint negated() const { return {negate(rel), lhs, rhs}; }

  /// Decided without inputs (both sides constant).
  std::optional<bool> trivial_value() const;

  /// Wrapping evaluation under `binding`; a division by zero makes the
  /// constraint false.
  bool holds(const Assignment& binding) const;

  std::string to_string() const;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.rel == b.rel && a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend bool operator!=(const Constraint& a, const Constraint& b) { return !(a == b); }
};

std::string to_string(const std::vector<Constraint>& cs);

}  // namespace shadowse::core
