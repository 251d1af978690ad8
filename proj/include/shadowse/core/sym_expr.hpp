#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowse::core {

/// Relational operators shared by constraints, the IR and expressions.
enum class Rel : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

/// Binary operators of symbolic expressions. Relational operators yield 0/1.
enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Rem, Eq, Ne, Lt, Le, Gt, Ge };

Rel negate(Rel r);
/// Relation obtained by swapping the operands (a < b  <=>  b > a).
Rel mirror(Rel r);
bool eval_rel(Rel r, std::int64_t a, std::int64_t b);
const char* to_string(Rel r);
const char* to_string(BinOp op);

bool is_relational(BinOp op);
BinOp to_binop(Rel r);
/// Only valid when is_relational(op).
Rel to_rel(BinOp op);

/// Values bound to the symbolic inputs, keyed by input name.
using Assignment = std::map<std::string, std::int32_t>;

/// Immutable symbolic expression over 32-bit integer inputs.
///
/// Nodes are shared; equality and hashing are structural. The factory
/// functions normalize as they build: constant folding (with wrapping) and
/// elimination of double negation. Nothing else is simplified, so `x + 0`
/// stays as written.
class Expr {
 public:
  enum class Kind : std::uint8_t { Const, Input, Neg, Binary };

  static Expr constant(std::int32_t value);
  static Expr input(std::string name);
  static Expr neg(const Expr& operand);
  static Expr binary(BinOp op, const Expr& lhs, const Expr& rhs);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  /// Requires kind() == Const.
  std::int32_t value() const;
  /// Requires kind() == Input.
  const std::string& name() const;
  /// Requires kind() == Binary.
  BinOp op() const;
  /// Operand of Neg, or left operand of Binary.
  const Expr& lhs() const;
  /// Requires kind() == Binary.
  const Expr& rhs() const;

  std::size_t hash() const;
  /// Number of nodes in the tree.
  std::size_t size() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  /// Canonical, fully parenthesized infix text, e.g. `(-x + 1)`.
  std::string to_string() const;

  /// Input names in first-occurrence (left-to-right) order.
  std::vector<std::string> inputs() const;
  void collect_inputs(std::vector<std::string>& out) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

/// Thrown by eval_concrete when a division or remainder by zero is reached.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, Expr offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}
  const Expr& offending() const { return offending_; }

 private:
  Expr offending_;
};

/// 32-bit wrapping evaluation. Throws EvalError on division by zero and
/// std::out_of_range if an input is unbound.
std::int32_t eval_concrete(const Expr& e, const Assignment& binding);

}  // namespace shadowse::core
