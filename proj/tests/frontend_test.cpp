#include <gtest/gtest.h>

#include <random>

#include "shadowse/differ/differ.hpp"
#include "shadowse/frontend/ast.hpp"
#include "shadowse/frontend/interp.hpp"
#include "shadowse/frontend/ir.hpp"
#include "support/support.hpp"

using namespace shadowse;
using namespace shadowse::frontend;
using shadowse::testing::compile_source;
using shadowse::testing::load_subject;

namespace {

std::string parse_error_text(const std::string& src) {
  try {
    parse_program(src, "t.sl");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

std::vector<OpCode> ops(const IrProgram& ir, std::size_t from, std::size_t count) {
  std::vector<OpCode> out;
  for (std::size_t i = from; i < from + count && i < ir.code.size(); ++i) out.push_back(ir.code[i].op);
  return out;
}

AstOutcome::Kind to_ast_kind(differ::ConcreteOutcome::Kind k) {
  switch (k) {
    case differ::ConcreteOutcome::Kind::Returned: return AstOutcome::Kind::Returned;
    case differ::ConcreteOutcome::Kind::AssertionFailure: return AstOutcome::Kind::AssertionFailure;
    case differ::ConcreteOutcome::Kind::DivByZero: return AstOutcome::Kind::DivByZero;
    case differ::ConcreteOutcome::Kind::LoopBoundHit: return AstOutcome::Kind::LoopBoundHit;
  }
  return AstOutcome::Kind::Returned;
}

// IR execution and the AST interpreter must agree for both versions.
void expect_agreement(const SourceProgram& prog, const IrProgram& ir, const std::vector<std::int32_t>& args,
                      std::uint32_t loop_bound = 32) {
  core::Assignment a;
  for (std::size_t i = 0; i < args.size(); ++i) a[ir.params[i]] = args[i];
  for (Version v : {Version::Old, Version::New}) {
    const auto ast = interpret(prog, args, v, loop_bound);
    const auto conc = differ::exec_concrete_version(ir, v, a, loop_bound);
    ASSERT_EQ(to_ast_kind(conc.kind), ast.kind) << prog.source;
    if (ast.kind == AstOutcome::Kind::Returned) ASSERT_EQ(conc.value, ast.value) << prog.source;
  }
}

}  // namespace

TEST(Parse, FooStructure) {
  const auto prog = load_subject("foo.sl");
  EXPECT_EQ(prog.function.name, "foo");
  EXPECT_EQ(prog.inputs(), std::vector<std::string>{"x"});
  EXPECT_EQ(prog.change_count(), 1u);
  int ifs = 0;
  for_each_stmt(prog.function.body, [&](const Stmt& s) { ifs += s.kind == Stmt::Kind::If; });
  EXPECT_EQ(ifs, 3);
}

TEST(Parse, ChangeArityError) {
  const auto msg = parse_error_text("int f(int y) { y = change(y); return y; }");
  EXPECT_NE(msg.find("t.sl:1:20: change expects exactly 2 arguments, got 1"), std::string::npos) << msg;
}

TEST(Parse, NestedChangeRejected) {
  EXPECT_NE(parse_error_text("int f(int y) { y = change(y, change(y, 1)); return y; }").find("nested change"),
            std::string::npos);
}

TEST(Parse, TypeErrors) {
  EXPECT_NE(parse_error_text("int f(int x) { if (x) { return 1; } return 0; }"), "");
  EXPECT_NE(parse_error_text("int f(int x) { x = x < 1; return x; }"), "");
  EXPECT_NE(parse_error_text("int f(int x) { if (change(x, x < 1)) { return 1; } return 0; }")
                .find("change operands must have the same type"),
            std::string::npos);
  EXPECT_NE(parse_error_text("int f(int x) { if (change(x < 1 && x > -3, true)) { return 1; } return 0; }"), "");
}

TEST(Parse, ScopeErrors) {
  EXPECT_NE(parse_error_text("int f(int x) { y = 1; return x; }").find("undeclared variable"), std::string::npos);
  EXPECT_NE(parse_error_text("int f(int x) { int y = 1; int y = 2; return x; }").find("redeclaration of 'y'"),
            std::string::npos);
  EXPECT_NE(parse_error_text("int f(int x) { if (x < 1) int y = 2; return x; }"), "");
  EXPECT_NE(parse_error_text("int f(int x) { return x; } int g(int x) { return x; }")
                .find("only one function per program is supported"),
            std::string::npos);
}

TEST(Parse, SyntaxErrorPosition) {
  const auto msg = parse_error_text("int f(int x) {\n  return x +;\n}\n");
  EXPECT_EQ(msg.rfind("t.sl:2:", 0), 0u) << msg;
}

TEST(Parse, IntegerLiterals) {
  EXPECT_NO_THROW(parse_program("int f(int x) { return -2147483648; }"));
  EXPECT_NE(parse_error_text("int f(int x) { return 2147483648; }"), "");
  const auto ir = compile_source("int f(int x) { return -2147483648; }");
  EXPECT_EQ(ir.code[0].op, OpCode::IPUSH);
  EXPECT_EQ(ir.code[0].arg, INT32_MIN);
}

TEST(Compile, ChangeAssignment) {
  const auto ir = compile_source("int f(int y) { y = change(y, -y); return y; }");
  ASSERT_GE(ir.code.size(), 5u);
  EXPECT_EQ(ops(ir, 0, 5), (std::vector<OpCode>{OpCode::ILOAD, OpCode::ILOAD, OpCode::INEG, OpCode::CHANGE,
                                                OpCode::ISTORE}));
  EXPECT_EQ(ir.code[0].region, Region::OldOnly);
  EXPECT_EQ(ir.code[1].region, Region::NewOnly);
  EXPECT_EQ(ir.code[2].region, Region::NewOnly);
  EXPECT_EQ(ir.code[3].region, Region::Both);
  EXPECT_EQ(ir.change_count, 1u);
}

TEST(Compile, IfLayout) {
  const auto ir = compile_source("int f(int x) { if (x < 0) { return 1; } return 2; }");
  EXPECT_EQ(ops(ir, 0, 3), (std::vector<OpCode>{OpCode::ILOAD, OpCode::IPUSH, OpCode::IF_CMP}));
  EXPECT_EQ(ir.code[2].rel, core::Rel::Lt);
  const auto target = static_cast<std::size_t>(ir.code[2].arg);
  ASSERT_LT(target, ir.code.size());
  // then-code: IPUSH 1; RETURN
  EXPECT_EQ(ir.code[target].op, OpCode::IPUSH);
  EXPECT_EQ(ir.code[target].arg, 1);
  EXPECT_EQ(ir.code[target + 1].op, OpCode::RETURN);
  EXPECT_EQ(ir.sites.count(2), 1u);
  EXPECT_EQ(ir.sites.at(2).kind, "if");
}

TEST(Compile, EmptyBodyIsHalt) {
  const auto ir = compile_source("int f(int x) { }");
  ASSERT_EQ(ir.code.size(), 1u);
  EXPECT_EQ(ir.code[0].op, OpCode::HALT);
}

TEST(Compile, DivisionsAreSites) {
  const auto ir = compile_source("int f(int x, int y) { return x / y + x % 3; }");
  std::size_t divs = 0;
  for (const auto& [ip, site] : ir.sites) {
    if (site.kind == "div") {
      ++divs;
      EXPECT_TRUE(ir.code[ip].op == OpCode::IDIV || ir.code[ip].op == OpCode::IREM);
    }
  }
  EXPECT_EQ(divs, 2u);
}

TEST(Compile, FooSiteLabels) {
  const auto ir = shadowse::testing::compile_subject("foo.sl");
  std::vector<std::string> labels;
  for (const auto& [ip, site] : ir.sites) labels.push_back(ir.site_label(ip));
  ASSERT_EQ(labels.size(), 4u);  // line 3, line 10, and both halves of line 13's ||
  EXPECT_EQ(labels[0].substr(0, 2), "3:");
  EXPECT_EQ(labels[1].substr(0, 3), "10:");
  EXPECT_EQ(labels[2].substr(0, 3), "13:");
  EXPECT_EQ(labels[3].substr(0, 3), "13:");
}

TEST(Compile, ListingDeterministic) {
  const auto prog = load_subject("foo.sl");
  EXPECT_EQ(compile_to_ir(prog).listing(), compile_to_ir(prog).listing());
  EXPECT_NO_THROW(check_stack_depth(compile_to_ir(prog)));
}

TEST(Compile, StackCheckRejectsUnderflow) {
  IrProgram ir;
  ir.code = {{OpCode::IADD}, {OpCode::HALT}};
  EXPECT_THROW(check_stack_depth(ir), CompileError);
}

TEST(RoundTrip, FooAgainstAstInterpreter) {
  const auto prog = load_subject("foo.sl");
  const auto ir = compile_to_ir(prog);
  for (int x = -64; x <= 64; ++x) expect_agreement(prog, ir, {x});
}

TEST(RoundTrip, ChangeAssignmentRandomInputs) {
  const auto prog = parse_program("int f(int y) { y = change(y, -y); if (y > 3) { assert(false); } return y; }");
  const auto ir = compile_to_ir(prog);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int32_t> d(INT32_MIN, INT32_MAX);
  for (int i = 0; i < 100; ++i) expect_agreement(prog, ir, {d(rng)});
}

TEST(RoundTrip, BooleanChangeAndShortCircuit) {
  const auto prog = parse_program(
      "int f(int a, int b) {\n"
      "  if (change(a < b, a <= b) && (b != 0 || a / b > 1)) { return 1; }\n"
      "  if (!(a == 3) || change(true, false)) { return 2; }\n"
      "  return 3;\n"
      "}\n");
  const auto ir = compile_to_ir(prog);
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) expect_agreement(prog, ir, {a, b});
}

TEST(RoundTrip, LoopBoundAgreement) {
  const auto prog = parse_program("int f(int n) { int i = 0; while (i < n) { i = i + 1; } return i; }");
  const auto ir = compile_to_ir(prog);
  for (int n : {0, 1, 3, 4, 5, 100}) expect_agreement(prog, ir, {n}, 4);
  EXPECT_EQ(interpret(prog, {4}, Version::New, 4).kind, AstOutcome::Kind::Returned);
  EXPECT_EQ(interpret(prog, {5}, Version::New, 4).kind, AstOutcome::Kind::LoopBoundHit);
}

TEST(RoundTrip, RandomChangeFreePrograms) {
  shadowse::testing::ProgramGen gen(1234);
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::int32_t> d(-20, 20);
  for (int p = 0; p < 60; ++p) {
    const int nparams = 1 + p % 3;
    const auto src = gen.program(nparams);
    SourceProgram prog;
    ASSERT_NO_THROW(prog = parse_program(src)) << src;
    IrProgram ir;
    ASSERT_NO_THROW(ir = compile_to_ir(prog)) << src;
    for (int i = 0; i < 20; ++i) {
      std::vector<std::int32_t> args;
      for (int k = 0; k < nparams; ++k) args.push_back(d(rng));
      expect_agreement(prog, ir, args);
    }
  }
}
