#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "shadowse/core/sym_expr.hpp"
#include "shadowse/frontend/ast.hpp"

namespace shadowse::frontend {

enum class OpCode {
  IPUSH,    // push constant `arg`
  ILOAD,    // push slot `arg`
  ISTORE,   // pop into slot `arg`
  IADD,
  ISUB,
  IMUL,
  IDIV,
  IREM,
  INEG,
  ICMP,     // pop b, a; push (a rel b) as 0/1
  IF_CMP,   // pop b, a; jump to `arg` if (a rel b)
  IF_TRUE,  // pop v; jump to `arg` if v != 0
  GOTO,
  CHANGE,   // pop new, old; push change(old, new)
  ASSERT,   // unconditional assertion failure
  RETURN,   // pop return value
  HALT,     // end of function without return: returns 0
};

const char* to_string(OpCode op);

/// Which version executes an instruction. Code for the first operand of a
/// change() only runs in the old version, code for the second only in the
/// new version.
enum class Region { Both, OldOnly, NewOnly };

const char* to_string(Region r);

inline bool runs_in(Region r, Version v) {
  return r == Region::Both || (r == Region::OldOnly) == (v == Version::Old);
}

struct Instr {
  OpCode op = OpCode::HALT;
  std::int32_t arg = 0;
  core::Rel rel = core::Rel::Eq;
  Region region = Region::Both;
  Span span;

  friend bool operator==(const Instr&, const Instr&) = default;
};

struct BranchSite {
  Span span;
  /// "if" for IF_CMP / IF_TRUE, "div" for IDIV / IREM.
  std::string kind;
};

struct IrProgram {
  std::string function;
  std::vector<std::string> params;  // slots 0..params.size()-1
  std::vector<std::string> slots;   // name of each slot
  std::vector<Instr> code;
  /// Every conditional instruction (and every division) by index.
  std::map<std::size_t, BranchSite> sites;
  std::size_t change_count = 0;

  /// "line:col" of a branch site or instruction, e.g. "10:7".
  std::string site_label(std::size_t ip) const;
  /// Deterministic, human-readable listing.
  std::string listing() const;
};

class CompileError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Compiles a validated program. Throws CompileError if the abstract
/// stack-depth check fails (an internal error).
IrProgram compile_to_ir(const SourceProgram& program);

/// Abstract interpretation of stack depth over all control-flow paths;
/// throws CompileError on underflow, mismatch at a join, a bad jump target,
/// or a non-empty stack at a statement boundary (RETURN / HALT).
void check_stack_depth(const IrProgram& ir);

}  // namespace shadowse::frontend
