#include "shadowse/core/sym_expr.hpp"

#include <algorithm>
#include <functional>

#include "shadowse/core/int32.hpp"

namespace shadowse::core {

Rel negate(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
  }
  return r;
}

Rel mirror(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
    default: return r;
  }
}

bool eval_rel(Rel r, std::int64_t a, std::int64_t b) {
  switch (r) {
    case Rel::Eq: return a == b;
    case Rel::Ne: return a != b;
    case Rel::Lt: return a < b;
    case Rel::Le: return a <= b;
    case Rel::Gt: return a > b;
    case Rel::Ge: return a >= b;
  }
  return false;
}

const char* to_string(Rel r) {
  switch (r) {
    case Rel::Eq: return "==";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Rem: return "%";
    default: return to_string(to_rel(op));
  }
}

bool is_relational(BinOp op) { return op >= BinOp::Eq; }

BinOp to_binop(Rel r) {
  return static_cast<BinOp>(static_cast<int>(BinOp::Eq) + static_cast<int>(r));
}

Rel to_rel(BinOp op) {
  return static_cast<Rel>(static_cast<int>(op) - static_cast<int>(BinOp::Eq));
}

struct Expr::Node {
  Kind kind;
  std::int32_t value = 0;
  std::string name;
  BinOp op = BinOp::Add;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::optional<std::int32_t> fold(BinOp op, std::int32_t a, std::int32_t b) {
  switch (op) {
    case BinOp::Add: return wrap_add(a, b);
    case BinOp::Sub: return wrap_sub(a, b);
    case BinOp::Mul: return wrap_mul(a, b);
    case BinOp::Div:
      if (b == 0) return std::nullopt;
      return wrap_div(a, b);
    case BinOp::Rem:
      if (b == 0) return std::nullopt;
      return wrap_rem(a, b);
    default: return eval_rel(to_rel(op), a, b) ? 1 : 0;
  }
}

}  // namespace

Expr Expr::constant(std::int32_t value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  n->hash = mix(1, std::hash<std::int32_t>{}(value));
  return Expr(std::move(n));
}

Expr Expr::input(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Input;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::neg(const Expr& operand) {
  if (operand.is_const()) return constant(wrap_neg(operand.value()));
  if (operand.kind() == Kind::Neg) return operand.lhs();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->hash = mix(3, operand.hash());
  n->size = operand.size() + 1;
  n->lhs = operand;
  return Expr(std::move(n));
}

Expr Expr::binary(BinOp op, const Expr& lhs, const Expr& rhs) {
  if (lhs.is_const() && rhs.is_const()) {
    if (auto folded = fold(op, lhs.value(), rhs.value())) return constant(*folded);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->hash = mix(mix(mix(4, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  n->size = lhs.size() + rhs.size() + 1;
  n->lhs = lhs;
  n->rhs = rhs;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
std::int32_t Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinOp Expr::op() const { return node_->op; }
const Expr& Expr::lhs() const { return *node_->lhs; }
const Expr& Expr::rhs() const { return *node_->rhs; }
std::size_t Expr::hash() const { return node_->hash; }
std::size_t Expr::size() const { return node_->size; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  switch (x.kind) {
    case Expr::Kind::Const: return x.value == y.value;
    case Expr::Kind::Input: return x.name == y.name;
    case Expr::Kind::Neg: return *x.lhs == *y.lhs;
    case Expr::Kind::Binary: return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
  }
  return false;
}

std::string Expr::to_string() const {
  switch (kind()) {
    case Kind::Const: return std::to_string(value());
    case Kind::Input: return name();
    case Kind::Neg: return "-" + lhs().to_string();
    case Kind::Binary:
      return "(" + lhs().to_string() + " " + core::to_string(op()) + " " + rhs().to_string() + ")";
  }
  return {};
}

void Expr::collect_inputs(std::vector<std::string>& out) const {
  switch (kind()) {
    case Kind::Const: return;
    case Kind::Input:
      if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
      return;
    case Kind::Neg: lhs().collect_inputs(out); return;
    case Kind::Binary:
      lhs().collect_inputs(out);
      rhs().collect_inputs(out);
      return;
  }
}

std::vector<std::string> Expr::inputs() const {
  std::vector<std::string> out;
  collect_inputs(out);
  return out;
}

std::int32_t eval_concrete(const Expr& e, const Assignment& binding) {
  switch (e.kind()) {
    case Expr::Kind::Const: return e.value();
    case Expr::Kind::Input: {
      auto it = binding.find(e.name());
      if (it == binding.end()) throw std::out_of_range("unbound input '" + e.name() + "'");
      return it->second;
    }
    case Expr::Kind::Neg: return wrap_neg(eval_concrete(e.lhs(), binding));
    case Expr::Kind::Binary: {
      const auto a = eval_concrete(e.lhs(), binding);
      const auto b = eval_concrete(e.rhs(), binding);
      if ((e.op() == BinOp::Div || e.op() == BinOp::Rem) && b == 0)
        throw EvalError("division by zero in " + e.to_string(), e);
      return *fold(e.op(), a, b);
    }
  }
  return 0;
}

}  // namespace shadowse::core
