#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "shadowse/core/sym_expr.hpp"

namespace shadowse::core {

/// Old-version (shadow) and new-version (symbolic) expressions of a value
/// whose symbolic content differs between the versions. Never built with
/// structurally equal components; use make_attr() to get the collapse.
struct DiffExpr {
  Expr shadow;
  Expr symbolic;

  friend bool operator==(const DiffExpr& a, const DiffExpr& b) {
    return a.shadow == b.shadow && a.symbolic == b.symbolic;
  }
};

/// Symbolic content of a slot: one shared expression, or a DiffExpr.
using SymAttr = std::variant<Expr, DiffExpr>;

/// Plain(e) when the components are structurally equal, Diff otherwise.
SymAttr make_attr(const Expr& shadow, const Expr& symbolic);
const Expr& shadow_of(const SymAttr& a);
const Expr& symbolic_of(const SymAttr& a);
bool is_diff(const SymAttr& a);

/// Combines the attributes of the two arguments of `change(old, new)`:
/// the old side of `old_attr` and the new side of `new_attr`.
SymAttr make_diff(const SymAttr& old_attr, const SymAttr& new_attr);

/// A runtime slot: concrete values for both versions plus symbolic content.
class ShadowValue {
 public:
  struct ConcreteOnly {
    friend bool operator==(ConcreteOnly, ConcreteOnly) { return true; }
  };
  using Sym = std::variant<ConcreteOnly, Expr, DiffExpr>;

  static ShadowValue concrete(std::int32_t value);
  /// Collapses to ConcreteOnly when `attr` is a plain constant.
  static ShadowValue symbolic(SymAttr attr, std::int32_t conc_old, std::int32_t conc_new);

  std::int32_t conc_old() const { return conc_old_; }
  std::int32_t conc_new() const { return conc_new_; }
  std::int32_t conc(bool new_version) const { return new_version ? conc_new_ : conc_old_; }
  const Sym& sym() const { return sym_; }

  bool is_concrete_only() const { return std::holds_alternative<ConcreteOnly>(sym_); }
  bool is_diff() const { return std::holds_alternative<DiffExpr>(sym_); }

  /// Symbolic content with ConcreteOnly lifted to Const.
  SymAttr attr() const;
  Expr old_expr() const;
  Expr new_expr() const;
  Expr expr(bool new_version) const { return new_version ? new_expr() : old_expr(); }

  /// The same value restricted to one version (no Diff left).
  ShadowValue project(bool new_version) const;

  std::string to_string() const;

  friend bool operator==(const ShadowValue& a, const ShadowValue& b) {
    return a.conc_old_ == b.conc_old_ && a.conc_new_ == b.conc_new_ && a.sym_ == b.sym_;
  }

 private:
  ShadowValue(std::int32_t o, std::int32_t n, Sym s) : conc_old_(o), conc_new_(n), sym_(std::move(s)) {}
  std::int32_t conc_old_;
  std::int32_t conc_new_;
  Sym sym_;
};

/// The slot produced by executing CHANGE on the two operand slots.
ShadowValue make_diff(const ShadowValue& old_operand, const ShadowValue& new_operand);

/// Result of a shadow arithmetic operation. A concrete division by zero in a
/// version is flagged (the concrete value for that version is then 0).
struct ShadowResult {
  ShadowValue value;
  bool div_zero_old = false;
  bool div_zero_new = false;
};

/// `v1 op v2` over both versions; op may also be relational (0/1 result).
ShadowResult shadow_binop(BinOp op, const ShadowValue& v1, const ShadowValue& v2);
ShadowValue shadow_neg(const ShadowValue& v);

}  // namespace shadowse::core
