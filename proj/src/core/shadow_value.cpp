#include "shadowse/core/shadow_value.hpp"

#include "shadowse/core/int32.hpp"

namespace shadowse::core {

SymAttr make_attr(const Expr& shadow, const Expr& symbolic) {
  if (shadow == symbolic) return symbolic;
  return DiffExpr{shadow, symbolic};
}

const Expr& shadow_of(const SymAttr& a) {
  if (const auto* d = std::get_if<DiffExpr>(&a)) return d->shadow;
  return std::get<Expr>(a);
}

const Expr& symbolic_of(const SymAttr& a) {
  if (const auto* d = std::get_if<DiffExpr>(&a)) return d->symbolic;
  return std::get<Expr>(a);
}

bool is_diff(const SymAttr& a) { return std::holds_alternative<DiffExpr>(a); }

SymAttr make_diff(const SymAttr& old_attr, const SymAttr& new_attr) {
  const Expr& result_shadow = shadow_of(old_attr);
  const Expr& result_symbc = symbolic_of(new_attr);
  return make_attr(result_shadow, result_symbc);
}

ShadowValue ShadowValue::concrete(std::int32_t value) { return {value, value, ConcreteOnly{}}; }

ShadowValue ShadowValue::symbolic(SymAttr attr, std::int32_t conc_old, std::int32_t conc_new) {
  if (const auto* e = std::get_if<Expr>(&attr)) {
    if (e->is_const()) return concrete(e->value());
    return {conc_old, conc_new, *e};
  }
  return {conc_old, conc_new, std::get<DiffExpr>(std::move(attr))};
}

SymAttr ShadowValue::attr() const {
  if (const auto* e = std::get_if<Expr>(&sym_)) return *e;
  if (const auto* d = std::get_if<DiffExpr>(&sym_)) return *d;
  return Expr::constant(conc_old_);
}

Expr ShadowValue::old_expr() const {
  if (const auto* e = std::get_if<Expr>(&sym_)) return *e;
  if (const auto* d = std::get_if<DiffExpr>(&sym_)) return d->shadow;
  return Expr::constant(conc_old_);
}

Expr ShadowValue::new_expr() const {
  if (const auto* e = std::get_if<Expr>(&sym_)) return *e;
  if (const auto* d = std::get_if<DiffExpr>(&sym_)) return d->symbolic;
  return Expr::constant(conc_new_);
}

ShadowValue ShadowValue::project(bool new_version) const {
  const auto c = conc(new_version);
  return symbolic(expr(new_version), c, c);
}

std::string ShadowValue::to_string() const {
  std::string conc = "(" + std::to_string(conc_old_) + "," + std::to_string(conc_new_) + ")";
  if (is_concrete_only()) return "concrete" + conc;
  if (const auto* d = std::get_if<DiffExpr>(&sym_))
    return "diff[" + d->shadow.to_string() + " | " + d->symbolic.to_string() + "]" + conc;
  return "plain[" + std::get<Expr>(sym_).to_string() + "]" + conc;
}

ShadowValue make_diff(const ShadowValue& old_operand, const ShadowValue& new_operand) {
  return ShadowValue::symbolic(make_diff(old_operand.attr(), new_operand.attr()), old_operand.conc_old(),
                               new_operand.conc_new());
}

namespace {

std::int32_t conc_apply(BinOp op, std::int32_t a, std::int32_t b, bool& div_zero) {
  switch (op) {
    case BinOp::Add: return wrap_add(a, b);
    case BinOp::Sub: return wrap_sub(a, b);
    case BinOp::Mul: return wrap_mul(a, b);
    case BinOp::Div:
    case BinOp::Rem:
      if (b == 0) {
        div_zero = true;
        return 0;
      }
      return op == BinOp::Div ? wrap_div(a, b) : wrap_rem(a, b);
    default: return eval_rel(to_rel(op), a, b) ? 1 : 0;
  }
}

}  // namespace

ShadowResult shadow_binop(BinOp op, const ShadowValue& v1, const ShadowValue& v2) {
  ShadowResult r{ShadowValue::concrete(0)};
  const auto conc_old = conc_apply(op, v1.conc_old(), v2.conc_old(), r.div_zero_old);
  const auto conc_new = conc_apply(op, v1.conc_new(), v2.conc_new(), r.div_zero_new);

  if (v1.is_concrete_only() && v2.is_concrete_only()) {
    r.value = ShadowValue::concrete(conc_new);
    return r;
  }

  const auto a1 = v1.attr();
  const auto a2 = v2.attr();
  const Expr sym_r = Expr::binary(op, symbolic_of(a1), symbolic_of(a2));
  if (!is_diff(a1) && !is_diff(a2)) {
    r.value = ShadowValue::symbolic(sym_r, conc_old, conc_new);
    return r;
  }
  const Expr shadow_r = Expr::binary(op, shadow_of(a1), shadow_of(a2));
  r.value = ShadowValue::symbolic(make_attr(shadow_r, sym_r), conc_old, conc_new);
  return r;
}

ShadowValue shadow_neg(const ShadowValue& v) {
  const auto conc_old = wrap_neg(v.conc_old());
  const auto conc_new = wrap_neg(v.conc_new());
  if (v.is_concrete_only()) return ShadowValue::concrete(conc_new);
  const auto a = v.attr();
  if (!is_diff(a)) return ShadowValue::symbolic(Expr::neg(std::get<Expr>(a)), conc_old, conc_new);
  return ShadowValue::symbolic(make_attr(Expr::neg(shadow_of(a)), Expr::neg(symbolic_of(a))), conc_old,
                               conc_new);
}

}  // namespace shadowse::core
