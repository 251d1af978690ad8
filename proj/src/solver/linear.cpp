#include "linear.hpp"

#include <algorithm>

namespace shadowse::solver::detail {

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    out.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

bool LinExpr::is_constant() const {
  return std::all_of(coef.begin(), coef.end(), [](i128 c) { return c == 0; });
}

namespace {

bool in_limit(const LinExpr& e) {
  if (abs128(e.constant) > kCoefLimit) return false;
  return std::all_of(e.coef.begin(), e.coef.end(), [](i128 c) { return abs128(c) <= kCoefLimit; });
}

std::optional<LinExpr> combine(const LinExpr& l, const LinExpr& r, i128 sign) {
  LinExpr out = l;
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] += sign * r.coef[i];
  out.constant += sign * r.constant;
  if (!in_limit(out)) return std::nullopt;
  return out;
}

std::optional<LinExpr> scale(const LinExpr& e, i128 k) {
  if (abs128(k) > kCoefLimit) return std::nullopt;
  LinExpr out = e;
  for (auto& c : out.coef) c *= k;
  out.constant *= k;
  if (!in_limit(out)) return std::nullopt;
  return out;
}

}  // namespace

std::optional<LinExpr> linearize(const core::Expr& e, const std::map<std::string, std::size_t>& index,
                                 std::size_t nvars) {
  using core::BinOp;
  using Kind = core::Expr::Kind;
  switch (e.kind()) {
    case Kind::Const: {
      LinExpr out{std::vector<i128>(nvars, 0), e.value()};
      return out;
    }
    case Kind::Input: {
      LinExpr out{std::vector<i128>(nvars, 0), 0};
      out.coef.at(index.at(e.name())) = 1;
      return out;
    }
    case Kind::Neg: {
      auto inner = linearize(e.lhs(), index, nvars);
      if (!inner) return std::nullopt;
      return scale(*inner, -1);
    }
    case Kind::Binary: {
      if (core::is_relational(e.op())) return std::nullopt;
      auto l = linearize(e.lhs(), index, nvars);
      if (!l) return std::nullopt;
      auto r = linearize(e.rhs(), index, nvars);
      if (!r) return std::nullopt;
      switch (e.op()) {
        case BinOp::Add: return combine(*l, *r, 1);
        case BinOp::Sub: return combine(*l, *r, -1);
        case BinOp::Mul:
          if (l->is_constant()) return scale(*r, l->constant);
          if (r->is_constant()) return scale(*l, r->constant);
          return std::nullopt;
        case BinOp::Div:
        case BinOp::Rem:
          // Only constant operands can be folded; the truncating semantics
          // are not linear otherwise.
          if (l->is_constant() && r->is_constant() && r->constant != 0) {
            LinExpr out{std::vector<i128>(nvars, 0), 0};
            out.constant = e.op() == BinOp::Div ? l->constant / r->constant : l->constant % r->constant;
            return out;
          }
          return std::nullopt;
        default: return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

std::optional<LinCon> to_lincon(const core::Constraint& c, const std::map<std::string, std::size_t>& index,
                                std::size_t nvars) {
  using core::Rel;
  auto l = linearize(c.lhs, index, nvars);
  if (!l) return std::nullopt;
  auto r = linearize(c.rhs, index, nvars);
  if (!r) return std::nullopt;
  auto d = combine(*l, *r, -1);
  if (!d) return std::nullopt;
  LinCon out;
  switch (c.rel) {
    case Rel::Le:
      out = {d->coef, d->constant, LinCon::Kind::Le};
      break;
    case Rel::Lt:
      out = {d->coef, d->constant + 1, LinCon::Kind::Le};
      break;
    case Rel::Ge: {
      auto n = *scale(*d, -1);
      out = {n.coef, n.constant, LinCon::Kind::Le};
      break;
    }
    case Rel::Gt: {
      auto n = *scale(*d, -1);
      out = {n.coef, n.constant + 1, LinCon::Kind::Le};
      break;
    }
    case Rel::Eq:
      out = {d->coef, d->constant, LinCon::Kind::Eq};
      break;
    case Rel::Ne:
      out = {d->coef, d->constant, LinCon::Kind::Ne};
      break;
  }
  return out;
}

std::optional<i128> eval_math(const core::Expr& e, const core::Assignment& model) {
  using core::BinOp;
  using Kind = core::Expr::Kind;
  switch (e.kind()) {
    case Kind::Const: return static_cast<i128>(e.value());
    case Kind::Input: return static_cast<i128>(model.at(e.name()));
    case Kind::Neg: {
      auto v = eval_math(e.lhs(), model);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Kind::Binary: {
      auto a = eval_math(e.lhs(), model);
      auto b = eval_math(e.rhs(), model);
      if (!a || !b) return std::nullopt;
      switch (e.op()) {
        case BinOp::Add: return *a + *b;
        case BinOp::Sub: return *a - *b;
        case BinOp::Mul: return *a * *b;
        case BinOp::Div:
          if (*b == 0) return std::nullopt;
          return *a / *b;
        case BinOp::Rem:
          if (*b == 0) return std::nullopt;
          return *a % *b;
        default: {
          const auto rel = core::to_rel(e.op());
          bool holds = false;
          switch (rel) {
            case core::Rel::Eq: holds = *a == *b; break;
            case core::Rel::Ne: holds = *a != *b; break;
            case core::Rel::Lt: holds = *a < *b; break;
            case core::Rel::Le: holds = *a <= *b; break;
            case core::Rel::Gt: holds = *a > *b; break;
            case core::Rel::Ge: holds = *a >= *b; break;
          }
          return static_cast<i128>(holds ? 1 : 0);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace shadowse::solver::detail
