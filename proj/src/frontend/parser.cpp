#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>

#include "shadowse/frontend/ast.hpp"

namespace shadowse::frontend {

// ---------------------------------------------------------------------------
// AST helpers

bool AstExpr::contains_change() const {
  if (kind == Kind::Change) return true;
  return std::any_of(kids.begin(), kids.end(), [](const AstExpr& k) { return k.contains_change(); });
}

const char* to_string(AstExpr::Op op) {
  using Op = AstExpr::Op;
  switch (op) {
    case Op::Neg: return "-";
    case Op::Not: return "!";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Rem: return "%";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::And: return "&&";
    case Op::Or: return "||";
  }
  return "?";
}

bool is_relational(AstExpr::Op op) {
  using Op = AstExpr::Op;
  return op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge || op == Op::Eq || op == Op::Ne;
}

bool is_arithmetic(AstExpr::Op op) {
  using Op = AstExpr::Op;
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Rem;
}

std::vector<std::string> SourceProgram::inputs() const {
  std::vector<std::string> out;
  for (const auto& p : function.params) out.push_back(p.name);
  return out;
}

std::size_t SourceProgram::change_count() const {
  std::size_t n = 0;
  for_each_stmt(function.body, [&](const Stmt& s) {
    if (s.expr) for_each_expr(*s.expr, [&](const AstExpr& e) { n += e.kind == AstExpr::Kind::Change; });
  });
  return n;
}

std::string Diagnostic::format(const std::string& file) const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message;
}

namespace {

std::string join_diagnostics(const std::string& file, const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.format(file);
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::string file, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(file, diagnostics)),
      file_(std::move(file)),
      diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End,
  Int,
  Ident,
  KwInt,
  KwIf,
  KwElse,
  KwWhile,
  KwAssert,
  KwReturn,
  KwTrue,
  KwFalse,
  KwChange,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  NotEq,
  AndAnd,
  OrOr,
  Bang,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

class SyntaxError {
 public:
  Diagnostic diag;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span = here();
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.span.end = pos_;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Int;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.kind = keyword(src_.substr(t.span.begin, pos_ - t.span.begin));
      } else {
        t.kind = punct(t.span);
      }
      t.span.end = pos_;
      t.text = src_.substr(t.span.begin, pos_ - t.span.begin);
      out.push_back(std::move(t));
    }
  }

 private:
  Span here() const { return {pos_, pos_, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool peek(const char* s) const { return src_.compare(pos_, std::char_traits<char>::length(s), s) == 0; }

  void skip_space() {
    for (;;) {
      if (pos_ >= src_.size()) return;
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (peek("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (peek("/*")) {
        const Span start = here();
        advance();
        advance();
        while (pos_ < src_.size() && !peek("*/")) advance();
        if (pos_ >= src_.size()) throw SyntaxError{{start.line, start.col, "unterminated comment"}};
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  static Tok keyword(const std::string& w) {
    if (w == "int") return Tok::KwInt;
    if (w == "if") return Tok::KwIf;
    if (w == "else") return Tok::KwElse;
    if (w == "while") return Tok::KwWhile;
    if (w == "assert") return Tok::KwAssert;
    if (w == "return") return Tok::KwReturn;
    if (w == "true") return Tok::KwTrue;
    if (w == "false") return Tok::KwFalse;
    if (w == "change") return Tok::KwChange;
    return Tok::Ident;
  }

  Tok punct(const Span& at) {
    struct Entry {
      const char* text;
      Tok kind;
    };
    static const Entry table[] = {
        {"<=", Tok::Le},     {">=", Tok::Ge},    {"==", Tok::EqEq},  {"!=", Tok::NotEq},  {"&&", Tok::AndAnd},
        {"||", Tok::OrOr},   {"(", Tok::LParen}, {")", Tok::RParen}, {"{", Tok::LBrace},  {"}", Tok::RBrace},
        {",", Tok::Comma},   {";", Tok::Semi},   {"=", Tok::Assign}, {"+", Tok::Plus},    {"-", Tok::Minus},
        {"*", Tok::Star},    {"/", Tok::Slash},  {"%", Tok::Percent}, {"<", Tok::Lt},     {">", Tok::Gt},
        {"!", Tok::Bang},
    };
    for (const auto& e : table) {
      if (peek(e.text)) {
        for (std::size_t i = 0; e.text[i] != '\0'; ++i) advance();
        return e.kind;
      }
    }
    std::string msg = "unexpected character '";
    msg += src_[pos_];
    msg += "'";
    throw SyntaxError{{at.line, at.col, msg}};
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser with scope and type checks

using Kind = AstExpr::Kind;
using Op = AstExpr::Op;

class Parser {
 public:
  Parser(const std::string& src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  FunctionDecl function() {
    FunctionDecl f;
    f.span = peek().span;
    expect(Tok::KwInt, "expected 'int' return type");
    f.name = expect(Tok::Ident, "expected function name").text;
    expect(Tok::LParen, "expected '('");
    scopes_.emplace_back();
    if (!at(Tok::RParen)) {
      do {
        expect(Tok::KwInt, "expected 'int' parameter type");
        const Token& id = expect(Tok::Ident, "expected parameter name");
        declare(id.text, id.span);
        f.params.push_back({id.text, id.span});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "expected ')'");
    f.body = block();
    scopes_.pop_back();
    if (!at(Tok::End)) {
      if (at(Tok::KwInt)) fail(peek().span, "only one function per program is supported");
      fail(peek().span, "expected end of input");
    }
    f.span.end = toks_[pos_ - 1].span.end;
    return f;
  }

  std::vector<Diagnostic> diagnostics;

 private:
  // --- token helpers
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) {
      const Token& t = peek();
      fail(t.span, std::string(what) + (t.kind == Tok::End ? ", found end of input" : ", found '" + t.text + "'"));
    }
    return next();
  }
  [[noreturn]] void fail(const Span& at, std::string msg) { throw SyntaxError{{at.line, at.col, std::move(msg)}}; }
  void error(const Span& at, std::string msg) { diagnostics.push_back({at.line, at.col, std::move(msg)}); }
  std::size_t prev_end() const { return toks_[pos_ - 1].span.end; }

  // --- scopes
  bool declared(const std::string& name) const {
    return std::any_of(scopes_.begin(), scopes_.end(), [&](const auto& s) { return s.count(name) > 0; });
  }
  void declare(const std::string& name, const Span& at) {
    if (declared(name)) {
      error(at, "redeclaration of '" + name + "'");
      return;
    }
    scopes_.back().insert(name);
  }

  // --- statements
  Stmt block() {
    Stmt b;
    b.kind = Stmt::Kind::Block;
    b.span = peek().span;
    expect(Tok::LBrace, "expected '{'");
    scopes_.emplace_back();
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail(peek().span, "expected '}', found end of input");
      b.body.push_back(statement());
    }
    next();
    scopes_.pop_back();
    b.span.end = prev_end();
    return b;
  }

  // Branch of if/while. A lone declaration would leak into nothing, so it is
  // rejected like Java does.
  Stmt sub_statement() {
    if (at(Tok::KwInt)) fail(peek().span, "declaration not allowed here; use a block");
    scopes_.emplace_back();
    Stmt s = statement();
    scopes_.pop_back();
    return s;
  }

  Stmt statement() {
    const Token& first = peek();
    Stmt s;
    s.span = first.span;
    switch (first.kind) {
      case Tok::LBrace: return block();
      case Tok::KwInt: {
        next();
        const Token& id = expect(Tok::Ident, "expected variable name");
        s.kind = Stmt::Kind::Decl;
        s.name = id.text;
        if (accept(Tok::Assign)) s.expr = int_expr(expression(), "initializer");
        expect(Tok::Semi, "expected ';'");
        declare(id.text, id.span);  // after the initializer: `int y = y;` is an error
        break;
      }
      case Tok::Ident: {
        const Token& id = next();
        if (!declared(id.text)) error(id.span, "undeclared variable '" + id.text + "'");
        expect(Tok::Assign, "expected '='");
        s.kind = Stmt::Kind::Assign;
        s.name = id.text;
        s.expr = int_expr(expression(), "assigned value");
        expect(Tok::Semi, "expected ';'");
        break;
      }
      case Tok::KwIf: {
        next();
        s.kind = Stmt::Kind::If;
        expect(Tok::LParen, "expected '('");
        s.expr = bool_expr(expression(), "if condition");
        expect(Tok::RParen, "expected ')'");
        s.body.push_back(sub_statement());
        if (accept(Tok::KwElse)) s.else_body.push_back(sub_statement());
        break;
      }
      case Tok::KwWhile: {
        next();
        s.kind = Stmt::Kind::While;
        expect(Tok::LParen, "expected '('");
        s.expr = bool_expr(expression(), "while condition");
        expect(Tok::RParen, "expected ')'");
        s.body.push_back(sub_statement());
        break;
      }
      case Tok::KwAssert: {
        next();
        s.kind = Stmt::Kind::Assert;
        expect(Tok::LParen, "expected '('");
        s.expr = bool_expr(expression(), "assert condition");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::Semi, "expected ';'");
        break;
      }
      case Tok::KwReturn: {
        next();
        s.kind = Stmt::Kind::Return;
        s.expr = int_expr(expression(), "return value");
        expect(Tok::Semi, "expected ';'");
        break;
      }
      default:
        fail(first.span, first.kind == Tok::End ? "expected statement, found end of input"
                                                 : "expected statement, found '" + first.text + "'");
    }
    s.span.end = prev_end();
    return s;
  }

  // --- type checks
  AstExpr int_expr(AstExpr e, const char* what) {
    if (e.type != Type::Int) error(e.span, std::string(what) + " must be an int expression");
    return e;
  }
  AstExpr bool_expr(AstExpr e, const char* what) {
    if (e.type != Type::Bool) error(e.span, std::string(what) + " must be a boolean expression");
    return e;
  }

  // --- expressions
  AstExpr make_binary(Op op, AstExpr l, AstExpr r, const Span& op_span) {
    AstExpr e;
    e.kind = Kind::Binary;
    e.op = op;
    e.op_span = op_span;
    e.span = l.span;
    e.span.end = r.span.end;
    if (op == Op::And || op == Op::Or) {
      e.type = Type::Bool;
      if (l.type != Type::Bool || r.type != Type::Bool)
        error(op_span, std::string("operands of '") + to_string(op) + "' must be boolean");
    } else {
      e.type = is_relational(op) ? Type::Bool : Type::Int;
      if (l.type != Type::Int || r.type != Type::Int)
        error(op_span, std::string("operands of '") + to_string(op) + "' must be int");
    }
    e.kids.push_back(std::move(l));
    e.kids.push_back(std::move(r));
    return e;
  }

  AstExpr expression() { return or_expr(); }

  AstExpr or_expr() {
    AstExpr l = and_expr();
    while (at(Tok::OrOr)) {
      const Span op = next().span;
      l = make_binary(Op::Or, std::move(l), and_expr(), op);
    }
    return l;
  }

  AstExpr and_expr() {
    AstExpr l = equality();
    while (at(Tok::AndAnd)) {
      const Span op = next().span;
      l = make_binary(Op::And, std::move(l), equality(), op);
    }
    return l;
  }

  AstExpr equality() {
    AstExpr l = relational();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      const Token& t = next();
      l = make_binary(t.kind == Tok::EqEq ? Op::Eq : Op::Ne, std::move(l), relational(), t.span);
    }
    return l;
  }

  AstExpr relational() {
    AstExpr l = additive();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      const Token& t = next();
      const Op op = t.kind == Tok::Lt ? Op::Lt : t.kind == Tok::Le ? Op::Le : t.kind == Tok::Gt ? Op::Gt : Op::Ge;
      l = make_binary(op, std::move(l), additive(), t.span);
    }
    return l;
  }

  AstExpr additive() {
    AstExpr l = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const Token& t = next();
      l = make_binary(t.kind == Tok::Plus ? Op::Add : Op::Sub, std::move(l), multiplicative(), t.span);
    }
    return l;
  }

  AstExpr multiplicative() {
    AstExpr l = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      const Token& t = next();
      const Op op = t.kind == Tok::Star ? Op::Mul : t.kind == Tok::Slash ? Op::Div : Op::Rem;
      l = make_binary(op, std::move(l), unary(), t.span);
    }
    return l;
  }

  AstExpr unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      const Token& t = next();
      // A negated literal is a literal; this is also the only way to write INT_MIN.
      if (t.kind == Tok::Minus && at(Tok::Int)) {
        const Token& lit = next();
        AstExpr e = int_literal(lit, true);
        e.span.begin = t.span.begin;
        e.span.line = t.span.line;
        e.span.col = t.span.col;
        return e;
      }
      AstExpr operand = unary();
      AstExpr e;
      e.kind = Kind::Unary;
      e.op = t.kind == Tok::Minus ? Op::Neg : Op::Not;
      e.op_span = t.span;
      e.span = t.span;
      e.span.end = operand.span.end;
      e.type = e.op == Op::Neg ? Type::Int : Type::Bool;
      const Type want = e.type;
      if (operand.type != want)
        error(operand.span, std::string("operand of '") + to_string(e.op) + "' must be " +
                                (want == Type::Int ? "int" : "boolean"));
      e.kids.push_back(std::move(operand));
      return e;
    }
    return primary();
  }

  AstExpr int_literal(const Token& t, bool negated) {
    AstExpr e;
    e.kind = Kind::IntLit;
    e.span = t.span;
    e.type = Type::Int;
    const std::string& digits = t.text;
    const std::uint64_t limit = negated ? 2147483648ULL : 2147483647ULL;
    std::uint64_t v = 0;
    bool overflow = digits.size() > 10;
    for (char ch : digits) {
      if (overflow) break;
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    if (overflow || v > limit) {
      error(t.span, "integer literal out of range: " + digits);
      v = 0;
    }
    const std::int64_t signed_v = negated ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
    e.int_value = static_cast<std::int32_t>(signed_v);
    return e;
  }

  AstExpr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: next(); return int_literal(t, false);
      case Tok::KwTrue:
      case Tok::KwFalse: {
        next();
        AstExpr e;
        e.kind = Kind::BoolLit;
        e.bool_value = t.kind == Tok::KwTrue;
        e.type = Type::Bool;
        e.span = t.span;
        return e;
      }
      case Tok::Ident: {
        next();
        if (!declared(t.text)) error(t.span, "undeclared variable '" + t.text + "'");
        AstExpr e;
        e.kind = Kind::Var;
        e.name = t.text;
        e.type = Type::Int;
        e.span = t.span;
        return e;
      }
      case Tok::LParen: {
        const Span open = next().span;
        AstExpr e = expression();
        expect(Tok::RParen, "expected ')'");
        // Spans cover the parentheses so that source slices stay well-formed.
        e.span.begin = open.begin;
        e.span.line = open.line;
        e.span.col = open.col;
        e.span.end = prev_end();
        return e;
      }
      case Tok::KwChange: return change();
      default:
        fail(t.span, t.kind == Tok::End ? "expected expression, found end of input"
                                         : "expected expression, found '" + t.text + "'");
    }
  }

  static bool simple_boolean(const AstExpr& e) {
    if (e.kind == Kind::BoolLit) return true;
    if (e.kind == Kind::Unary && e.op == Op::Not) return simple_boolean(e.lhs());
    if (e.kind == Kind::Binary && is_relational(e.op)) return true;
    return false;
  }

  AstExpr change() {
    const Token& kw = next();
    const bool nested = change_depth_ > 0;
    if (nested) error(kw.span, "nested change: change() may not appear inside another change()");
    ++change_depth_;
    expect(Tok::LParen, "expected '(' after change");
    std::vector<AstExpr> args;
    if (!at(Tok::RParen)) {
      do {
        args.push_back(expression());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "expected ')'");
    --change_depth_;

    AstExpr e;
    e.kind = Kind::Change;
    e.span = kw.span;
    e.span.end = prev_end();
    e.op_span = kw.span;
    e.type = args.empty() ? Type::Int : args[0].type;
    if (args.size() != 2) {
      error(kw.span, "change expects exactly 2 arguments, got " + std::to_string(args.size()));
      while (args.size() < 2) {
        AstExpr filler;
        filler.type = e.type;
        filler.span = e.span;
        if (filler.type == Type::Bool) filler.kind = Kind::BoolLit;
        args.push_back(filler);
      }
      args.resize(2);
    } else {
      if (args[0].type != args[1].type) error(kw.span, "change operands must have the same type");
      for (const auto& a : args) {
        if (a.type == Type::Bool && !simple_boolean(a))
          error(a.span, "boolean change operand must be a comparison or literal (no '&&' / '||')");
      }
    }
    e.kids = std::move(args);
    return e;
  }

  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::set<std::string>> scopes_;
  int change_depth_ = 0;
};

}  // namespace

SourceProgram parse_program(const std::string& source, const std::string& file) {
  SourceProgram prog;
  prog.file = file;
  prog.source = source;
  std::vector<Diagnostic> diags;
  try {
    Parser p(source, Lexer(source).run());
    try {
      prog.function = p.function();
    } catch (const SyntaxError& e) {
      diags = std::move(p.diagnostics);
      diags.push_back(e.diag);
      throw ParseError(file, std::move(diags));
    }
    diags = std::move(p.diagnostics);
  } catch (const SyntaxError& e) {
    diags.push_back(e.diag);
  }
  if (!diags.empty()) throw ParseError(file, std::move(diags));
  return prog;
}

}  // namespace shadowse::frontend
