#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowse::frontend {

/// Source range. `begin`/`end` are byte offsets (end exclusive); line and
/// column are 1-based and refer to `begin`.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int col = 0;

  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(col); }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class Type { Int, Bool };

enum class Version { Old, New };

struct AstExpr {
  enum class Kind { IntLit, BoolLit, Var, Unary, Binary, Change };
  enum class Op { Neg, Not, Add, Sub, Mul, Div, Rem, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

  Kind kind = Kind::IntLit;
  Op op = Op::Add;
  std::int32_t int_value = 0;
  bool bool_value = false;
  std::string name;
  /// Unary: 1 child. Binary, Change: 2 children (Change: old, new).
  std::vector<AstExpr> kids;
  Span span;
  /// Operator token of Unary/Binary nodes.
  Span op_span;
  Type type = Type::Int;

  const AstExpr& lhs() const { return kids.at(0); }
  const AstExpr& rhs() const { return kids.at(1); }
  bool contains_change() const;
};

const char* to_string(AstExpr::Op op);
bool is_relational(AstExpr::Op op);
bool is_arithmetic(AstExpr::Op op);

struct Stmt {
  enum class Kind { Decl, Assign, If, While, Assert, Return, Block };

  Kind kind = Kind::Block;
  /// Decl / Assign target.
  std::string name;
  /// Decl initializer (optional), Assign value, If / While / Assert
  /// condition, Return value.
  std::optional<AstExpr> expr;
  /// Block statements, If then-branch (one element), While body (one element).
  std::vector<Stmt> body;
  /// If else-branch (zero or one element).
  std::vector<Stmt> else_body;
  Span span;
};

struct Param {
  std::string name;
  Span span;
};

struct FunctionDecl {
  std::string name;
  std::vector<Param> params;
  Stmt body;  // Kind::Block
  Span span;
};

/// A parsed and validated program. The single function is the entry point;
/// its parameters are the symbolic inputs.
struct SourceProgram {
  std::string file;
  std::string source;
  FunctionDecl function;

  std::vector<std::string> inputs() const;
  std::size_t change_count() const;
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;

  std::string format(const std::string& file) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  std::vector<Diagnostic> diagnostics_;
};

/// Parses and validates; throws ParseError with located diagnostics.
SourceProgram parse_program(const std::string& source, const std::string& file = "<input>");

/// Pre-order visit of every expression in the program, in source order.
template <typename F>
void for_each_expr(const AstExpr& e, F&& f) {
  f(e);
  for (const auto& k : e.kids) for_each_expr(k, f);
}

template <typename F>
void for_each_stmt(const Stmt& s, F&& f) {
  f(s);
  for (const auto& b : s.body) for_each_stmt(b, f);
  for (const auto& b : s.else_body) for_each_stmt(b, f);
}

}  // namespace shadowse::frontend
