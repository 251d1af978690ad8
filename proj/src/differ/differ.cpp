#include "shadowse/differ/differ.hpp"

#include <map>
#include <stdexcept>

#include "shadowse/core/int32.hpp"

namespace shadowse::differ {

using frontend::OpCode;

const char* to_string(ConcreteOutcome::Kind k) {
  switch (k) {
    case ConcreteOutcome::Kind::Returned: return "returned";
    case ConcreteOutcome::Kind::AssertionFailure: return "assertion-failure";
    case ConcreteOutcome::Kind::DivByZero: return "div-by-zero";
    case ConcreteOutcome::Kind::LoopBoundHit: return "loop-bound-hit";
  }
  return "?";
}

std::string ConcreteOutcome::describe(const IrProgram& ir) const {
  if (kind == Kind::Returned) return "returned(" + std::to_string(value) + ")";
  return std::string(to_string(kind)) + "@" + ir.site_label(site);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Identical: return "identical";
    case Verdict::ExpectedFix: return "expected-fix";
    case Verdict::RegressionCandidate: return "regression-candidate";
    case Verdict::BehavioralDiff: return "behavioral-diff";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  for (auto v : {Verdict::Identical, Verdict::ExpectedFix, Verdict::RegressionCandidate, Verdict::BehavioralDiff}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown verdict: " + s);
}

ConcreteOutcome exec_concrete_version(const IrProgram& ir, Version version, const Assignment& input,
                                      std::uint32_t loop_bound) {
  std::vector<std::int32_t> slots(ir.slots.size(), 0);
  for (std::size_t i = 0; i < ir.params.size(); ++i) {
    auto it = input.find(ir.params[i]);
    if (it == input.end()) throw std::invalid_argument("missing input " + ir.params[i]);
    slots[i] = it->second;
  }
  std::vector<std::int32_t> stack;
  std::map<std::size_t, std::uint32_t> back_edges;
  ConcreteOutcome out;
  auto pop = [&]() {
    const auto v = stack.back();
    stack.pop_back();
    return v;
  };
  auto stop = [&](ConcreteOutcome::Kind k, std::size_t ip) {
    out.kind = k;
    out.site = ip;
    return out;
  };

  std::size_t ip = 0;
  for (;;) {
    const auto& in = ir.code.at(ip);
    if (!frontend::runs_in(in.region, version)) {
      ++ip;
      continue;
    }
    std::size_t next = ip + 1;
    switch (in.op) {
      case OpCode::IPUSH: stack.push_back(in.arg); break;
      case OpCode::ILOAD: stack.push_back(slots.at(static_cast<std::size_t>(in.arg))); break;
      case OpCode::ISTORE: slots.at(static_cast<std::size_t>(in.arg)) = pop(); break;
      case OpCode::INEG: stack.back() = core::wrap_neg(stack.back()); break;
      case OpCode::IADD:
      case OpCode::ISUB:
      case OpCode::IMUL:
      case OpCode::IDIV:
      case OpCode::IREM: {
        const auto b = pop();
        const auto a = pop();
        if ((in.op == OpCode::IDIV || in.op == OpCode::IREM) && b == 0)
          return stop(ConcreteOutcome::Kind::DivByZero, ip);
        switch (in.op) {
          case OpCode::IADD: stack.push_back(core::wrap_add(a, b)); break;
          case OpCode::ISUB: stack.push_back(core::wrap_sub(a, b)); break;
          case OpCode::IMUL: stack.push_back(core::wrap_mul(a, b)); break;
          case OpCode::IDIV: stack.push_back(core::wrap_div(a, b)); break;
          default: stack.push_back(core::wrap_rem(a, b)); break;
        }
        break;
      }
      case OpCode::ICMP: {
        const auto b = pop();
        const auto a = pop();
        stack.push_back(core::eval_rel(in.rel, a, b) ? 1 : 0);
        break;
      }
      case OpCode::IF_CMP: {
        const auto b = pop();
        const auto a = pop();
        const bool taken = core::eval_rel(in.rel, a, b);
        out.trace.emplace_back(ip, taken);
        if (taken) next = static_cast<std::size_t>(in.arg);
        break;
      }
      case OpCode::IF_TRUE: {
        const bool taken = pop() != 0;
        out.trace.emplace_back(ip, taken);
        if (taken) next = static_cast<std::size_t>(in.arg);
        break;
      }
      case OpCode::GOTO:
        next = static_cast<std::size_t>(in.arg);
        if (next <= ip && ++back_edges[ip] > loop_bound) return stop(ConcreteOutcome::Kind::LoopBoundHit, ip);
        break;
      case OpCode::CHANGE: break;  // the other version's operand was skipped
      case OpCode::ASSERT: return stop(ConcreteOutcome::Kind::AssertionFailure, ip);
      case OpCode::RETURN:
        out.value = pop();
        return stop(ConcreteOutcome::Kind::Returned, ip);
      case OpCode::HALT: return stop(ConcreteOutcome::Kind::Returned, ip);
    }
    ip = next;
  }
}

Verdict verdict_of(const ConcreteOutcome& o, const ConcreteOutcome& n) {
  if (o == n) return Verdict::Identical;
  if (o.is_error() && n.kind == ConcreteOutcome::Kind::Returned) return Verdict::ExpectedFix;
  if (o.kind == ConcreteOutcome::Kind::Returned && n.is_error()) return Verdict::RegressionCandidate;
  return Verdict::BehavioralDiff;
}

Classification classify_input(const IrProgram& ir, const Assignment& input, std::uint32_t loop_bound) {
  Classification c;
  c.old_outcome = exec_concrete_version(ir, Version::Old, input, loop_bound);
  c.new_outcome = exec_concrete_version(ir, Version::New, input, loop_bound);
  c.verdict = verdict_of(c.old_outcome, c.new_outcome);
  return c;
}

}  // namespace shadowse::differ
