#include "shadowse/core/constraint.hpp"

namespace shadowse::core {

Constraint Constraint::truthy(const Expr& v) {
  if (v.kind() == Expr::Kind::Binary && is_relational(v.op())) return {to_rel(v.op()), v.lhs(), v.rhs()};
  return {Rel::Ne, v, Expr::constant(0)};
}

Constraint Constraint::always(bool value) {
  return {value ? Rel::Eq : Rel::Ne, Expr::constant(0), Expr::constant(0)};
}

std::optional<bool> Constraint::trivial_value() const {
  if (lhs.is_const() && rhs.is_const()) return eval_rel(rel, lhs.value(), rhs.value());
  return std::nullopt;
}

bool Constraint::holds(const Assignment& binding) const {
  try {
    return eval_rel(rel, eval_concrete(lhs, binding), eval_concrete(rhs, binding));
  } catch (const EvalError&) {
    return false;
  }
}

std::string Constraint::to_string() const {
  return "(" + lhs.to_string() + " " + core::to_string(rel) + " " + rhs.to_string() + ")";
}

std::string to_string(const std::vector<Constraint>& cs) {
  if (cs.empty()) return "true";
  std::string out;
  for (const auto& c : cs) {
    if (!out.empty()) out += " && ";
    out += c.to_string();
  }
  return out;
}

}  // namespace shadowse::core
