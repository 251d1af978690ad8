#include "shadowse/mutator/mutator.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace shadowse::mutator {

using frontend::AstExpr;
using frontend::Stmt;
using Op = AstExpr::Op;

const char* to_string(Operator op) {
  switch (op) {
    case Operator::ROR: return "ROR";
    case Operator::AOR: return "AOR";
    case Operator::STD: return "STD";
  }
  return "?";
}

Operator operator_from_string(const std::string& s) {
  std::string up;
  for (char c : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto op : {Operator::ROR, Operator::AOR, Operator::STD}) {
    if (up == to_string(op)) return op;
  }
  throw std::invalid_argument("unknown mutation operator: " + s);
}

std::vector<Operator> parse_operators(const std::string& list) {
  std::vector<Operator> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    const auto op = operator_from_string(item);
    if (std::find(out.begin(), out.end(), op) == out.end()) out.push_back(op);
  }
  return out;
}

std::string MutationSpec::describe() const {
  if (op == Operator::STD) return std::string(to_string(op)) + " " + target.to_string();
  return std::string(to_string(op)) + " " + op_span.to_string() + " " + original + " -> " + replacement;
}

namespace {

const std::vector<Op> kRelational = {Op::Gt, Op::Ge, Op::Lt, Op::Le, Op::Eq, Op::Ne};
const std::vector<Op> kArithmetic = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Rem};

struct Candidates {
  std::vector<const AstExpr*> relational;
  std::vector<const AstExpr*> arithmetic;
  struct Deletable {
    const Stmt* stmt;
    bool needs_braces;  // unbraced then-branch of an if with an else
  };
  std::vector<Deletable> statements;
};

void collect_expr(const AstExpr& e, Candidates& out) {
  if (e.kind == AstExpr::Kind::Change) return;
  if (e.kind == AstExpr::Kind::Binary && !e.contains_change()) {
    if (frontend::is_relational(e.op)) out.relational.push_back(&e);
    else if (frontend::is_arithmetic(e.op)) out.arithmetic.push_back(&e);
  }
  for (const auto& k : e.kids) collect_expr(k, out);
}

void collect_stmt(const Stmt& s, bool needs_braces, Candidates& out) {
  if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::Assert) out.statements.push_back({&s, needs_braces});
  if (s.expr) collect_expr(*s.expr, out);
  const bool has_else = s.kind == Stmt::Kind::If && !s.else_body.empty();
  for (const auto& b : s.body) collect_stmt(b, has_else && b.kind != Stmt::Kind::Block, out);
  for (const auto& b : s.else_body) collect_stmt(b, false, out);
}

Candidates collect(const SourceProgram& p) {
  Candidates c;
  collect_stmt(p.function.body, false, c);
  auto by_op = [](const AstExpr* a, const AstExpr* b) { return a->op_span.begin < b->op_span.begin; };
  std::stable_sort(c.relational.begin(), c.relational.end(), by_op);
  std::stable_sort(c.arithmetic.begin(), c.arithmetic.end(), by_op);
  std::stable_sort(c.statements.begin(), c.statements.end(),
                   [](const auto& a, const auto& b) { return a.stmt->span.begin < b.stmt->span.begin; });
  return c;
}

std::string slice(const SourceProgram& p, const Span& s) { return p.source.substr(s.begin, s.end - s.begin); }

bool fully_parenthesized(const std::string& t) {
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') return false;
  int depth = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '(') ++depth;
    if (t[i] == ')' && --depth == 0 && i + 1 != t.size()) return false;
  }
  return true;
}

// Operand text that keeps its grouping under any arithmetic operator.
std::string operand_text(const SourceProgram& p, const AstExpr& kid) {
  std::string t = slice(p, kid.span);
  if (kid.kind == AstExpr::Kind::Binary && !fully_parenthesized(t)) t = "(" + t + ")";
  return t;
}

std::string mutated_expr(const SourceProgram& p, const AstExpr& e, const std::string& replacement) {
  const auto& l = e.lhs();
  const auto& r = e.rhs();
  return operand_text(p, l) + p.source.substr(l.span.end, e.op_span.begin - l.span.end) + replacement +
         p.source.substr(e.op_span.end, r.span.begin - e.op_span.end) + operand_text(p, r);
}

struct Edit {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

struct Located {
  const AstExpr* expr = nullptr;
  const Candidates::Deletable* stmt = nullptr;
};

Located locate(const Candidates& c, const MutationSpec& m) {
  Located out;
  auto find_expr = [&](const std::vector<const AstExpr*>& list, const std::vector<Op>& allowed) {
    for (const auto* e : list) {
      if (!(e->span == m.target && e->op_span == m.op_span)) continue;
      if (m.original != frontend::to_string(e->op)) break;
      for (auto op : allowed) {
        if (op != e->op && m.replacement == frontend::to_string(op)) return e;
      }
      break;
    }
    throw InapplicableSpec("spec does not apply: " + m.describe());
  };
  switch (m.op) {
    case Operator::ROR: out.expr = find_expr(c.relational, kRelational); break;
    case Operator::AOR: out.expr = find_expr(c.arithmetic, kArithmetic); break;
    case Operator::STD:
      for (const auto& d : c.statements) {
        if (d.stmt->span == m.target) out.stmt = &d;
      }
      if (!out.stmt) throw InapplicableSpec("spec does not apply: " + m.describe());
      break;
  }
  return out;
}

SourceProgram rebuild(const SourceProgram& p, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin > b.begin; });
  std::string src = p.source;
  for (const auto& e : edits) src.replace(e.begin, e.end - e.begin, e.text);
  try {
    return frontend::parse_program(src, p.file);
  } catch (const frontend::ParseError& err) {
    throw InapplicableSpec(std::string("mutated program does not validate: ") + err.what());
  }
}

}  // namespace

std::vector<MutationSpec> generate_mutants(const SourceProgram& program, const std::vector<Operator>& ops,
                                           std::size_t limit) {
  const Candidates c = collect(program);
  std::vector<MutationSpec> out;
  auto add = [&](MutationSpec m) {
    if (out.size() < limit) out.push_back(std::move(m));
  };
  auto expr_mutants = [&](Operator op, const std::vector<const AstExpr*>& list, const std::vector<Op>& table) {
    for (const auto* e : list) {
      for (auto r : table) {
        if (r == e->op) continue;
        add({op, e->span, e->op_span, frontend::to_string(e->op), frontend::to_string(r)});
      }
    }
  };
  for (auto op : {Operator::ROR, Operator::AOR, Operator::STD}) {
    if (std::find(ops.begin(), ops.end(), op) == ops.end()) continue;
    if (op == Operator::ROR) expr_mutants(op, c.relational, kRelational);
    if (op == Operator::AOR) expr_mutants(op, c.arithmetic, kArithmetic);
    if (op == Operator::STD) {
      for (const auto& d : c.statements) add({op, d.stmt->span, d.stmt->span, "", ""});
    }
  }
  return out;
}

SourceProgram unify_versions(const SourceProgram& program, const std::vector<MutationSpec>& specs) {
  const Candidates c = collect(program);
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto& a = specs[i].target;
      const auto& b = specs[j].target;
      if (a.begin < b.end && b.begin < a.end)
        throw InapplicableSpec("overlapping specs: " + specs[j].describe() + " and " + specs[i].describe());
    }
    const auto& m = specs[i];
    const Located at = locate(c, m);
    if (at.expr) {
      edits.push_back({m.target.begin, m.target.end,
                       "change(" + slice(program, m.target) + ", " + mutated_expr(program, *at.expr, m.replacement) +
                           ")"});
    } else {
      std::string text = "if (change(true, false)) { " + slice(program, m.target) + " }";
      if (at.stmt->needs_braces) text = "{ " + text + " }";
      edits.push_back({m.target.begin, m.target.end, std::move(text)});
    }
  }
  return rebuild(program, std::move(edits));
}

SourceProgram unify_versions(const SourceProgram& program, const MutationSpec& spec) {
  return unify_versions(program, std::vector<MutationSpec>{spec});
}

SourceProgram apply_mutation(const SourceProgram& program, const MutationSpec& spec) {
  const Candidates c = collect(program);
  const Located at = locate(c, spec);
  const std::string text = at.expr ? "(" + mutated_expr(program, *at.expr, spec.replacement) + ")" : "{ }";
  return rebuild(program, {{spec.target.begin, spec.target.end, text}});
}

}  // namespace shadowse::mutator
