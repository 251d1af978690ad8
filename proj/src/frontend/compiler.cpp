#include <cstdio>
#include <deque>
#include <optional>
#include <sstream>

#include "shadowse/frontend/ir.hpp"

namespace shadowse::frontend {

const char* to_string(OpCode op) {
  switch (op) {
    case OpCode::IPUSH: return "IPUSH";
    case OpCode::ILOAD: return "ILOAD";
    case OpCode::ISTORE: return "ISTORE";
    case OpCode::IADD: return "IADD";
    case OpCode::ISUB: return "ISUB";
    case OpCode::IMUL: return "IMUL";
    case OpCode::IDIV: return "IDIV";
    case OpCode::IREM: return "IREM";
    case OpCode::INEG: return "INEG";
    case OpCode::ICMP: return "ICMP";
    case OpCode::IF_CMP: return "IF_CMP";
    case OpCode::IF_TRUE: return "IF_TRUE";
    case OpCode::GOTO: return "GOTO";
    case OpCode::CHANGE: return "CHANGE";
    case OpCode::ASSERT: return "ASSERT";
    case OpCode::RETURN: return "RETURN";
    case OpCode::HALT: return "HALT";
  }
  return "?";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::Both: return "both";
    case Region::OldOnly: return "old";
    case Region::NewOnly: return "new";
  }
  return "?";
}

std::string IrProgram::site_label(std::size_t ip) const {
  auto it = sites.find(ip);
  if (it != sites.end()) return it->second.span.to_string();
  if (ip < code.size()) return code[ip].span.to_string();
  return "@" + std::to_string(ip);
}

std::string IrProgram::listing() const {
  std::ostringstream out;
  out << "function " << function << "(";
  for (std::size_t i = 0; i < params.size(); ++i) out << (i ? ", " : "") << params[i];
  out << ")\n";
  out << "slots:";
  for (std::size_t i = 0; i < slots.size(); ++i) out << " " << i << "=" << slots[i];
  out << "\n";
  for (std::size_t ip = 0; ip < code.size(); ++ip) {
    const Instr& in = code[ip];
    std::string operand;
    switch (in.op) {
      case OpCode::IPUSH: operand = std::to_string(in.arg); break;
      case OpCode::ILOAD:
      case OpCode::ISTORE:
        operand = std::to_string(in.arg) + " (" + slots.at(static_cast<std::size_t>(in.arg)) + ")";
        break;
      case OpCode::ICMP: operand = core::to_string(in.rel); break;
      case OpCode::IF_CMP: operand = std::string(core::to_string(in.rel)) + " -> " + std::to_string(in.arg); break;
      case OpCode::IF_TRUE:
      case OpCode::GOTO: operand = "-> " + std::to_string(in.arg); break;
      default: break;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4zu  %-8s %-14s", ip, to_string(in.op), operand.c_str());
    std::string line = buf;
    if (in.region != Region::Both) line += std::string(" [") + to_string(in.region) + "]";
    if (sites.count(ip)) line += " ; site " + site_label(ip);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  return out.str();
}

namespace {

using Kind = AstExpr::Kind;
using AOp = AstExpr::Op;

core::Rel to_rel(AOp op) {
  switch (op) {
    case AOp::Lt: return core::Rel::Lt;
    case AOp::Le: return core::Rel::Le;
    case AOp::Gt: return core::Rel::Gt;
    case AOp::Ge: return core::Rel::Ge;
    case AOp::Eq: return core::Rel::Eq;
    case AOp::Ne: return core::Rel::Ne;
    default: throw CompileError("not a relational operator");
  }
}

class Compiler {
 public:
  IrProgram run(const SourceProgram& prog) {
    ir_.function = prog.function.name;
    for (const auto& p : prog.function.params) {
      ir_.params.push_back(p.name);
      bind(p.name);
    }
    ir_.change_count = prog.change_count();
    stmt(prog.function.body);
    emit(OpCode::HALT, 0, prog.function.span);
    for (auto& in : ir_.code) {
      if (in.op == OpCode::IF_CMP || in.op == OpCode::IF_TRUE || in.op == OpCode::GOTO) {
        const auto target = labels_.at(static_cast<std::size_t>(in.arg));
        if (!target) throw CompileError("unbound label");
        in.arg = static_cast<std::int32_t>(*target);
      }
    }
    check_stack_depth(ir_);
    return std::move(ir_);
  }

 private:
  // --- emission helpers
  std::size_t emit(OpCode op, std::int32_t arg, const Span& span, core::Rel rel = core::Rel::Eq) {
    ir_.code.push_back({op, arg, rel, region_, span});
    return ir_.code.size() - 1;
  }
  std::int32_t new_label() {
    labels_.emplace_back();
    return static_cast<std::int32_t>(labels_.size() - 1);
  }
  void place(std::int32_t label) { labels_[static_cast<std::size_t>(label)] = ir_.code.size(); }
  void site(std::size_t ip, const Span& span, const char* kind) { ir_.sites[ip] = {span, kind}; }

  std::int32_t bind(const std::string& name) {
    ir_.slots.push_back(name);
    const auto slot = static_cast<std::int32_t>(ir_.slots.size() - 1);
    scope_[name] = slot;
    return slot;
  }
  std::int32_t slot_of(const std::string& name) const {
    auto it = scope_.find(name);
    if (it == scope_.end()) throw CompileError("unresolved variable " + name);
    return it->second;
  }

  // --- statements
  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block: {
        const auto saved = scope_;
        for (const auto& b : s.body) stmt(b);
        scope_ = saved;
        break;
      }
      case Stmt::Kind::Decl: {
        if (s.expr) int_expr(*s.expr);
        else emit(OpCode::IPUSH, 0, s.span);
        emit(OpCode::ISTORE, bind(s.name), s.span);
        break;
      }
      case Stmt::Kind::Assign:
        int_expr(*s.expr);
        emit(OpCode::ISTORE, slot_of(s.name), s.span);
        break;
      case Stmt::Kind::If: {
        const auto then_l = new_label(), end_l = new_label();
        branch(*s.expr, then_l, true);
        for (const auto& b : s.else_body) stmt(b);
        emit(OpCode::GOTO, end_l, s.span);
        place(then_l);
        for (const auto& b : s.body) stmt(b);
        place(end_l);
        break;
      }
      case Stmt::Kind::While: {
        const auto cond_l = new_label(), body_l = new_label(), end_l = new_label();
        place(cond_l);
        branch(*s.expr, body_l, true);
        emit(OpCode::GOTO, end_l, s.span);
        place(body_l);
        for (const auto& b : s.body) stmt(b);
        emit(OpCode::GOTO, cond_l, s.span);
        place(end_l);
        break;
      }
      case Stmt::Kind::Assert: {
        const auto ok_l = new_label();
        branch(*s.expr, ok_l, true);
        emit(OpCode::ASSERT, 0, s.span);
        place(ok_l);
        break;
      }
      case Stmt::Kind::Return:
        int_expr(*s.expr);
        emit(OpCode::RETURN, 0, s.span);
        break;
    }
  }

  // --- int expressions: leave one value on the stack
  void int_expr(const AstExpr& e) {
    switch (e.kind) {
      case Kind::IntLit: emit(OpCode::IPUSH, e.int_value, e.span); return;
      case Kind::Var: emit(OpCode::ILOAD, slot_of(e.name), e.span); return;
      case Kind::Unary:
        int_expr(e.lhs());
        emit(OpCode::INEG, 0, e.span);
        return;
      case Kind::Binary: {
        int_expr(e.lhs());
        int_expr(e.rhs());
        OpCode op = OpCode::IADD;
        switch (e.op) {
          case AOp::Add: op = OpCode::IADD; break;
          case AOp::Sub: op = OpCode::ISUB; break;
          case AOp::Mul: op = OpCode::IMUL; break;
          case AOp::Div: op = OpCode::IDIV; break;
          case AOp::Rem: op = OpCode::IREM; break;
          default: throw CompileError("boolean operator in int context");
        }
        const auto ip = emit(op, 0, e.span);
        if (op == OpCode::IDIV || op == OpCode::IREM) site(ip, e.span, "div");
        return;
      }
      case Kind::Change:
        change_operands(e, [this](const AstExpr& k) { int_expr(k); });
        return;
      case Kind::BoolLit: throw CompileError("boolean literal in int context");
    }
  }

  template <typename F>
  void change_operands(const AstExpr& e, F&& operand) {
    const Region saved = region_;
    region_ = Region::OldOnly;
    operand(e.lhs());
    region_ = Region::NewOnly;
    operand(e.rhs());
    region_ = saved;
    emit(OpCode::CHANGE, 0, e.span);
  }

  // --- boolean change operands as 0/1 values (literal, comparison, negation)
  void bool_value(const AstExpr& e, bool negate) {
    switch (e.kind) {
      case Kind::BoolLit: emit(OpCode::IPUSH, (e.bool_value != negate) ? 1 : 0, e.span); return;
      case Kind::Unary: bool_value(e.lhs(), !negate); return;
      case Kind::Binary: {
        int_expr(e.lhs());
        int_expr(e.rhs());
        const auto rel = to_rel(e.op);
        emit(OpCode::ICMP, 0, e.span, negate ? core::negate(rel) : rel);
        return;
      }
      default: throw CompileError("unsupported boolean change operand");
    }
  }

  // --- conditions: jump to `target` iff the condition equals `jump_if`
  void branch(const AstExpr& e, std::int32_t target, bool jump_if) {
    switch (e.kind) {
      case Kind::BoolLit:
        if (e.bool_value == jump_if) emit(OpCode::GOTO, target, e.span);
        return;
      case Kind::Unary: branch(e.lhs(), target, !jump_if); return;
      case Kind::Change: {
        change_operands(e, [&](const AstExpr& k) { bool_value(k, !jump_if); });
        site(emit(OpCode::IF_TRUE, target, e.span), e.span, "if");
        return;
      }
      case Kind::Binary:
        if (e.op == AOp::And || e.op == AOp::Or) {
          const bool is_and = e.op == AOp::And;
          if (is_and != jump_if) {
            // and/false, or/true: either operand decides on its own
            branch(e.lhs(), target, jump_if);
            branch(e.rhs(), target, jump_if);
          } else {
            const auto skip = new_label();
            branch(e.lhs(), skip, !jump_if);
            branch(e.rhs(), target, jump_if);
            place(skip);
          }
          return;
        } else {
          int_expr(e.lhs());
          int_expr(e.rhs());
          const auto rel = to_rel(e.op);
          site(emit(OpCode::IF_CMP, target, e.span, jump_if ? rel : core::negate(rel)), e.span, "if");
        }
        return;
      default: throw CompileError("int expression in boolean context");
    }
  }

  IrProgram ir_;
  std::vector<std::optional<std::size_t>> labels_;
  std::map<std::string, std::int32_t> scope_;
  Region region_ = Region::Both;
};

}  // namespace

IrProgram compile_to_ir(const SourceProgram& program) { return Compiler().run(program); }

void check_stack_depth(const IrProgram& ir) {
  const auto n = ir.code.size();
  if (n == 0 || ir.code.back().op != OpCode::HALT) throw CompileError("code must end with HALT");
  std::vector<int> depth(n, -1);
  std::deque<std::size_t> work;
  auto reach = [&](std::size_t ip, int d, std::size_t from) {
    if (ip >= n) throw CompileError("jump target out of range at " + std::to_string(from));
    if (depth[ip] == -1) {
      depth[ip] = d;
      work.push_back(ip);
    } else if (depth[ip] != d) {
      throw CompileError("stack depth mismatch at " + std::to_string(ip));
    }
  };
  reach(0, 0, 0);
  while (!work.empty()) {
    const auto ip = work.front();
    work.pop_front();
    const Instr& in = ir.code[ip];
    int d = depth[ip];
    auto pop = [&](int k) {
      if (d < k) throw CompileError("stack underflow at " + std::to_string(ip));
      d -= k;
    };
    bool falls = true;
    switch (in.op) {
      case OpCode::IPUSH:
      case OpCode::ILOAD: ++d; break;
      case OpCode::ISTORE: pop(1); break;
      case OpCode::IADD:
      case OpCode::ISUB:
      case OpCode::IMUL:
      case OpCode::IDIV:
      case OpCode::IREM:
      case OpCode::ICMP:
      case OpCode::CHANGE:
        pop(2);
        ++d;
        break;
      case OpCode::INEG:
        pop(1);
        ++d;
        break;
      case OpCode::IF_CMP:
        pop(2);
        reach(static_cast<std::size_t>(in.arg), d, ip);
        break;
      case OpCode::IF_TRUE:
        pop(1);
        reach(static_cast<std::size_t>(in.arg), d, ip);
        break;
      case OpCode::GOTO:
        reach(static_cast<std::size_t>(in.arg), d, ip);
        falls = false;
        break;
      case OpCode::ASSERT:
      case OpCode::HALT:
        if (d != 0) throw CompileError("non-empty stack at " + std::to_string(ip));
        falls = false;
        break;
      case OpCode::RETURN:
        pop(1);
        if (d != 0) throw CompileError("non-empty stack at " + std::to_string(ip));
        falls = false;
        break;
    }
    if (in.op == OpCode::IF_CMP || in.op == OpCode::IF_TRUE) {
      if (!ir.sites.count(ip)) throw CompileError("branch without site entry at " + std::to_string(ip));
    }
    if (falls) reach(ip + 1, d, ip);
  }
}

}  // namespace shadowse::frontend
