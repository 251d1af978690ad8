#include <gtest/gtest.h>

#include <random>

#include "shadowse/frontend/interp.hpp"
#include "shadowse/mutator/mutator.hpp"
#include "support/support.hpp"

using namespace shadowse;
using namespace shadowse::mutator;
using frontend::interpret;
using frontend::parse_program;
using frontend::Version;
using shadowse::testing::load_subject;

namespace {

std::vector<std::string> replacements(const std::vector<MutationSpec>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) out.push_back(s.replacement);
  return out;
}

// Both projections of the unified program against the base and the plain
// mutant, on random inputs.
void check_projections(const SourceProgram& base, const MutationSpec& spec, std::mt19937& rng) {
  const auto unified = unify_versions(base, spec);
  const auto mutant = apply_mutation(base, spec);
  EXPECT_EQ(unified.change_count(), base.change_count() + 1) << unified.source;
  std::uniform_int_distribution<std::int32_t> d(-300, 3000);
  for (int i = 0; i < 40; ++i) {
    std::vector<std::int32_t> args;
    for (std::size_t k = 0; k < base.function.params.size(); ++k) args.push_back(d(rng));
    ASSERT_EQ(interpret(unified, args, Version::Old), interpret(base, args, Version::Old))
        << spec.describe() << "\n" << unified.source;
    ASSERT_EQ(interpret(unified, args, Version::New), interpret(mutant, args, Version::New))
        << spec.describe() << "\n" << unified.source << "\n" << mutant.source;
  }
}

}  // namespace

TEST(Generate, RorFiveReplacements) {
  const auto p = parse_program("int f(int x) { if (x > 5) { return 1; } return 0; }");
  const auto specs = generate_mutants(p, {Operator::ROR});
  EXPECT_EQ(replacements(specs), (std::vector<std::string>{">=", "<", "<=", "==", "!="}));
  for (const auto& s : specs) EXPECT_EQ(s.original, ">");
}

TEST(Generate, AorFourReplacements) {
  const auto p = parse_program("int f(int a, int b) { return a + b; }");
  EXPECT_EQ(replacements(generate_mutants(p, {Operator::AOR})), (std::vector<std::string>{"-", "*", "/", "%"}));
}

TEST(Generate, StdAssignmentsAndAsserts) {
  const auto p = parse_program("int f(int a) { int b = 1; a = a + 1; b = a; a = b * 2; return a; }");
  const auto specs = generate_mutants(p, {Operator::STD});
  ASSERT_EQ(specs.size(), 3u);  // the declaration is not a target
  EXPECT_LT(specs[0].target.begin, specs[1].target.begin);
  const auto q = parse_program("int f(int a) { assert(a > 0); return a; }");
  EXPECT_EQ(generate_mutants(q, {Operator::STD}).size(), 1u);
}

TEST(Generate, OrderAndLimit) {
  const auto p = load_subject("foo_base.sl");
  const auto all = generate_mutants(p, {Operator::STD, Operator::AOR, Operator::ROR});
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front().op, Operator::ROR);
  EXPECT_EQ(all.back().op, Operator::STD);
  const auto few = generate_mutants(p, {Operator::ROR, Operator::AOR, Operator::STD}, 3);
  ASSERT_EQ(few.size(), 3u);
  EXPECT_TRUE(std::equal(few.begin(), few.end(), all.begin()));
  EXPECT_TRUE(generate_mutants(p, {}).empty());
}

TEST(Generate, SkipsInsideChange) {
  const auto p = parse_program("int f(int x) { x = change(x + 1, x - 1); if (change(x > 1, x < 1)) { return 1; } return 0; }");
  EXPECT_TRUE(generate_mutants(p, {Operator::ROR, Operator::AOR}).empty());
}

TEST(Unify, RorExample) {
  const auto p = parse_program("int f(int x) { if (x > 5) { return 1; } return 0; }");
  const auto u = unify_versions(p, generate_mutants(p, {Operator::ROR})[0]);
  EXPECT_EQ(u.source, "int f(int x) { if (change(x > 5, x >= 5)) { return 1; } return 0; }");
}

TEST(Unify, StdExample) {
  const auto p = parse_program("int f(int y) { y = y + 1; return y; }");
  const auto u = unify_versions(p, generate_mutants(p, {Operator::STD})[0]);
  EXPECT_EQ(u.source, "int f(int y) { if (change(true, false)) { y = y + 1; } return y; }");
}

TEST(Unify, StdUnbracedThenWithElse) {
  const auto p = parse_program("int f(int y) { if (y > 0) y = 1; else y = 2; return y; }");
  const auto specs = generate_mutants(p, {Operator::STD});
  ASSERT_EQ(specs.size(), 2u);
  const auto u = unify_versions(p, specs[0]);
  EXPECT_EQ(u.source, "int f(int y) { if (y > 0) { if (change(true, false)) { y = 1; } } else y = 2; return y; }");
  std::mt19937 rng(3);
  check_projections(p, specs[0], rng);
}

TEST(Unify, AorKeepsGrouping) {
  const auto p = parse_program("int f(int a, int b, int c) { return a - b * c + (c - a); }");
  std::mt19937 rng(5);
  for (const auto& s : generate_mutants(p, {Operator::AOR})) check_projections(p, s, rng);
}

TEST(Unify, CombinedDisjoint) {
  const auto p = load_subject("foo_base.sl");
  const auto ror = generate_mutants(p, {Operator::ROR});
  const auto stds = generate_mutants(p, {Operator::STD});
  const auto u = unify_versions(p, std::vector<MutationSpec>{ror.front(), stds.back()});
  EXPECT_EQ(u.change_count(), 2u);
}

TEST(Unify, OverlapRejected) {
  const auto p = parse_program("int f(int a, int b) { a = a + b * 2; return a; }");
  const auto aor = generate_mutants(p, {Operator::AOR});
  const auto stds = generate_mutants(p, {Operator::STD});
  EXPECT_THROW(unify_versions(p, std::vector<MutationSpec>{aor[0], aor[4]}), InapplicableSpec);
  EXPECT_THROW(unify_versions(p, std::vector<MutationSpec>{stds[0], aor[0]}), InapplicableSpec);
}

TEST(Unify, InapplicableSpec) {
  const auto p = parse_program("int f(int x) { return x + 1; }");
  MutationSpec bogus{Operator::ROR, {0, 3, 1, 1}, {0, 3, 1, 1}, ">", "<"};
  EXPECT_THROW(unify_versions(p, bogus), InapplicableSpec);
  auto spec = generate_mutants(p, {Operator::AOR})[0];
  spec.replacement = "+";
  EXPECT_THROW(unify_versions(p, spec), InapplicableSpec);
}

TEST(Projection, AllSubjectMutants) {
  std::mt19937 rng(11);
  for (const char* name : {"foo_base.sl", "bank_deposit.sl", "bank_withdraw.sl", "bank_main.sl", "triangle.sl"}) {
    const auto base = load_subject(name);
    const auto specs = generate_mutants(base, {Operator::ROR, Operator::AOR, Operator::STD});
    EXPECT_FALSE(specs.empty()) << name;
    for (const auto& s : specs) check_projections(base, s, rng);
  }
}

TEST(Projection, RandomPrograms) {
  shadowse::testing::ProgramGen gen(5150);
  std::mt19937 rng(8);
  for (int i = 0; i < 15; ++i) {
    const auto base = parse_program(gen.program(2));
    auto specs = generate_mutants(base, {Operator::ROR, Operator::AOR, Operator::STD});
    std::shuffle(specs.begin(), specs.end(), rng);
    if (specs.size() > 8) specs.resize(8);
    for (const auto& s : specs) check_projections(base, s, rng);
  }
}

TEST(Operators, Parse) {
  EXPECT_EQ(parse_operators("ror, STD"), (std::vector<Operator>{Operator::ROR, Operator::STD}));
  EXPECT_TRUE(parse_operators("").empty());
  EXPECT_THROW(parse_operators("XYZ"), std::invalid_argument);
}
