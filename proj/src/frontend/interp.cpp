#include "shadowse/frontend/interp.hpp"

#include <map>
#include <stdexcept>

#include "shadowse/core/int32.hpp"

namespace shadowse::frontend {

std::string AstOutcome::to_string() const {
  switch (kind) {
    case Kind::Returned: return "returned(" + std::to_string(value) + ")";
    case Kind::AssertionFailure: return "assertion-failure";
    case Kind::DivByZero: return "div-by-zero";
    case Kind::LoopBoundHit: return "loop-bound-hit";
  }
  return "?";
}

namespace {

using Kind = AstExpr::Kind;
using Op = AstExpr::Op;

// Unwinds the interpreter to the top with a final outcome.
struct Stop {
  AstOutcome outcome;
};

class Interp {
 public:
  Interp(Version v, std::uint32_t bound) : version_(v), bound_(bound) {}

  AstOutcome run(const SourceProgram& p, const std::vector<std::int32_t>& args) {
    if (args.size() != p.function.params.size()) throw std::invalid_argument("argument count mismatch");
    for (std::size_t i = 0; i < args.size(); ++i) env_[p.function.params[i].name] = args[i];
    try {
      exec(p.function.body);
    } catch (const Stop& s) {
      return s.outcome;
    }
    return {AstOutcome::Kind::Returned, 0};
  }

 private:
  void exec(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block: {
        std::vector<std::string> declared;
        for (const auto& b : s.body) {
          if (b.kind == Stmt::Kind::Decl) declared.push_back(b.name);
          exec(b);
        }
        for (const auto& n : declared) env_.erase(n);
        break;
      }
      case Stmt::Kind::Decl: env_[s.name] = s.expr ? int_eval(*s.expr) : 0; break;
      case Stmt::Kind::Assign: env_.at(s.name) = int_eval(*s.expr); break;
      case Stmt::Kind::If:
        if (bool_eval(*s.expr)) exec(s.body.front());
        else if (!s.else_body.empty()) exec(s.else_body.front());
        break;
      case Stmt::Kind::While: {
        auto& count = loops_[&s];
        while (bool_eval(*s.expr)) {
          exec(s.body.front());
          if (++count > bound_) throw Stop{{AstOutcome::Kind::LoopBoundHit, 0}};
        }
        break;
      }
      case Stmt::Kind::Assert:
        if (!bool_eval(*s.expr)) throw Stop{{AstOutcome::Kind::AssertionFailure, 0}};
        break;
      case Stmt::Kind::Return: throw Stop{{AstOutcome::Kind::Returned, int_eval(*s.expr)}};
    }
  }

  const AstExpr& pick(const AstExpr& change) const {
    return version_ == Version::Old ? change.lhs() : change.rhs();
  }

  std::int32_t int_eval(const AstExpr& e) {
    switch (e.kind) {
      case Kind::IntLit: return e.int_value;
      case Kind::Var: return env_.at(e.name);
      case Kind::Unary: return core::wrap_neg(int_eval(e.lhs()));
      case Kind::Change: return int_eval(pick(e));
      case Kind::Binary: {
        const auto a = int_eval(e.lhs());
        const auto b = int_eval(e.rhs());
        switch (e.op) {
          case Op::Add: return core::wrap_add(a, b);
          case Op::Sub: return core::wrap_sub(a, b);
          case Op::Mul: return core::wrap_mul(a, b);
          case Op::Div:
            if (b == 0) throw Stop{{AstOutcome::Kind::DivByZero, 0}};
            return core::wrap_div(a, b);
          case Op::Rem:
            if (b == 0) throw Stop{{AstOutcome::Kind::DivByZero, 0}};
            return core::wrap_rem(a, b);
          default: break;
        }
        break;
      }
      case Kind::BoolLit: break;
    }
    throw std::logic_error("not an int expression");
  }

  bool bool_eval(const AstExpr& e) {
    switch (e.kind) {
      case Kind::BoolLit: return e.bool_value;
      case Kind::Unary: return !bool_eval(e.lhs());
      case Kind::Change: return bool_eval(pick(e));
      case Kind::Binary: {
        if (e.op == Op::And) return bool_eval(e.lhs()) && bool_eval(e.rhs());
        if (e.op == Op::Or) return bool_eval(e.lhs()) || bool_eval(e.rhs());
        const auto a = int_eval(e.lhs());
        const auto b = int_eval(e.rhs());
        switch (e.op) {
          case Op::Lt: return a < b;
          case Op::Le: return a <= b;
          case Op::Gt: return a > b;
          case Op::Ge: return a >= b;
          case Op::Eq: return a == b;
          case Op::Ne: return a != b;
          default: break;
        }
        break;
      }
      default: break;
    }
    throw std::logic_error("not a boolean expression");
  }

  Version version_;
  std::uint32_t bound_;
  std::map<std::string, std::int32_t> env_;
  std::map<const Stmt*, std::uint32_t> loops_;
};

}  // namespace

AstOutcome interpret(const SourceProgram& program, const std::vector<std::int32_t>& args, Version version,
                     std::uint32_t loop_bound) {
  return Interp(version, loop_bound).run(program, args);
}

}  // namespace shadowse::frontend
