#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shadowse/core/constraint.hpp"
#include "shadowse/frontend/ast.hpp"
#include "shadowse/frontend/ir.hpp"

namespace shadowse::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string subject_path(const std::string& name) { return std::string(SHADOWSE_SUBJECTS_DIR) + "/" + name; }

inline frontend::SourceProgram load_subject(const std::string& name) {
  return frontend::parse_program(read_file(subject_path(name)), name);
}

inline frontend::IrProgram compile_subject(const std::string& name) {
  return frontend::compile_to_ir(load_subject(name));
}

inline frontend::IrProgram compile_source(const std::string& src) {
  return frontend::compile_to_ir(frontend::parse_program(src));
}

/// c0 + sum(ci * input_i) with small coefficients; some terms dropped.
inline core::Expr random_linear(std::mt19937& rng, const std::vector<std::string>& inputs, int coef = 5) {
  std::uniform_int_distribution<int> c(-coef, coef);
  core::Expr e = core::Expr::constant(c(rng) * 3);
  for (const auto& in : inputs) {
    const int k = c(rng);
    if (k == 0) continue;
    e = core::Expr::binary(core::BinOp::Add, e,
                           core::Expr::binary(core::BinOp::Mul, core::Expr::constant(k), core::Expr::input(in)));
  }
  return e;
}

inline core::Constraint random_constraint(std::mt19937& rng, const std::vector<std::string>& inputs) {
  const auto rel = static_cast<core::Rel>(std::uniform_int_distribution<int>(0, 5)(rng));
  return core::Constraint{rel, random_linear(rng, inputs), core::Expr::constant(0)};
}

/// Calls f on every assignment of `inputs` over [lo, hi].
template <typename F>
void for_each_assignment(const std::vector<std::string>& inputs, int lo, int hi, F&& f) {
  core::Assignment a;
  for (const auto& in : inputs) a[in] = lo;
  for (;;) {
    f(a);
    std::size_t i = 0;
    for (; i < inputs.size(); ++i) {
      if (a[inputs[i]] < hi) {
        ++a[inputs[i]];
        break;
      }
      a[inputs[i]] = lo;
    }
    if (i == inputs.size()) return;
  }
}

inline bool all_hold(const std::vector<core::Constraint>& cs, const core::Assignment& a) {
  for (const auto& c : cs) {
    if (!c.holds(a)) return false;
  }
  return true;
}

/// Random well-typed change-free programs. Loops are guarded by a private
/// counter, so every program terminates within a few iterations.
class ProgramGen {
 public:
  explicit ProgramGen(std::uint32_t seed) : rng_(seed) {}

  std::string program(int nparams) {
    vars_.clear();
    assignable_.clear();
    counter_ = 0;
    std::string src = "int f(";
    for (int i = 0; i < nparams; ++i) {
      const std::string p = std::string(1, static_cast<char>('a' + i));
      src += (i ? ", int " : "int ") + p;
      vars_.push_back(p);
      assignable_.push_back(p);
    }
    src += ") {\n";
    const int n = pick(2, 6);
    for (int i = 0; i < n; ++i) src += stmt(1, 2);
    src += "  return " + int_expr(2) + ";\n}\n";
    return src;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int percent) { return pick(1, 100) <= percent; }
  std::string var() { return vars_[static_cast<std::size_t>(pick(0, static_cast<int>(vars_.size()) - 1))]; }
  std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

  std::string int_expr(int depth) {
    if (depth <= 0 || chance(35)) return chance(60) ? var() : std::to_string(pick(-10, 10));
    switch (pick(0, 9)) {
      case 0: return "-" + int_expr(depth - 1);
      case 1: return "(" + int_expr(depth - 1) + " * " + std::to_string(pick(-3, 3)) + ")";
      case 2: return "(" + int_expr(depth - 1) + " / " + (chance(70) ? std::to_string(pick(1, 4)) : var()) + ")";
      case 3: return "(" + int_expr(depth - 1) + " % " + (chance(70) ? std::to_string(pick(2, 5)) : var()) + ")";
      case 4:
      case 5:
      case 6: return "(" + int_expr(depth - 1) + " - " + int_expr(depth - 1) + ")";
      default: return "(" + int_expr(depth - 1) + " + " + int_expr(depth - 1) + ")";
    }
  }

  std::string cond(int depth) {
    static const char* rels[] = {"<", "<=", ">", ">=", "==", "!="};
    if (depth <= 0 || chance(55))
      return int_expr(1) + " " + rels[pick(0, 5)] + " " + int_expr(1);
    switch (pick(0, 2)) {
      case 0: return "(" + cond(depth - 1) + " && " + cond(depth - 1) + ")";
      case 1: return "(" + cond(depth - 1) + " || " + cond(depth - 1) + ")";
      default: return "!(" + cond(depth - 1) + ")";
    }
  }

  std::string block(int level, int depth) {
    const auto saved_vars = vars_;
    const auto saved_assignable = assignable_;
    std::string out = "{\n";
    const int n = pick(1, 3);
    for (int i = 0; i < n; ++i) out += stmt(level + 1, depth);
    out += indent(level) + "}";
    vars_ = saved_vars;
    assignable_ = saved_assignable;
    return out;
  }

  std::string stmt(int level, int depth) {
    const std::string ind = indent(level);
    const int kind = depth <= 0 ? pick(0, 2) : pick(0, 7);
    switch (kind) {
      case 0: {
        const std::string name = "v" + std::to_string(counter_++);
        const std::string init = int_expr(2);
        vars_.push_back(name);
        assignable_.push_back(name);
        return ind + "int " + name + " = " + init + ";\n";
      }
      case 1:
      case 2: {
        const std::string target = assignable_[static_cast<std::size_t>(pick(0, static_cast<int>(assignable_.size()) - 1))];
        return ind + target + " = " + int_expr(2) + ";\n";
      }
      case 3:
      case 4: {
        std::string out = ind + "if (" + cond(2) + ") " + block(level, depth - 1);
        if (chance(50)) out += " else " + block(level, depth - 1);
        return out + "\n";
      }
      case 5: {
        const std::string c = "k" + std::to_string(counter_++);
        const std::string decl = ind + "int " + c + " = 0;\n";
        vars_.push_back(c);
        const std::string guard = c + " < " + std::to_string(pick(1, 3)) + (chance(50) ? " && " + cond(1) : "");
        std::string body = block(level, depth - 1);
        body.insert(body.size() - 1 - static_cast<std::size_t>(level) * 2,
                    indent(level + 1) + c + " = " + c + " + 1;\n");
        return decl + ind + "while (" + guard + ") " + body + "\n";
      }
      case 6: return ind + "assert(" + cond(1) + ");\n";
      default: return ind + "if (" + cond(1) + ") {\n" + indent(level + 1) + "return " + int_expr(1) + ";\n" + ind + "}\n";
    }
  }

  std::mt19937 rng_;
  std::vector<std::string> vars_;
  std::vector<std::string> assignable_;
  int counter_ = 0;
};

}  // namespace shadowse::testing
