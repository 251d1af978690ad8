#include <gtest/gtest.h>

#include "shadowse/differ/differ.hpp"
#include "support/support.hpp"

using namespace shadowse;
using namespace shadowse::differ;
using shadowse::testing::compile_subject;

namespace {

ConcreteOutcome outcome(ConcreteOutcome::Kind k, std::int32_t value = 0, std::size_t site = 0) {
  ConcreteOutcome o;
  o.kind = k;
  o.value = value;
  o.site = site;
  return o;
}

}  // namespace

TEST(ExecConcrete, FooExamples) {
  const auto ir = compile_subject("foo.sl");
  EXPECT_EQ(exec_concrete_version(ir, Version::Old, {{"x", -1}}).kind, ConcreteOutcome::Kind::AssertionFailure);
  const auto n = exec_concrete_version(ir, Version::New, {{"x", -1}});
  EXPECT_EQ(n.kind, ConcreteOutcome::Kind::Returned);
  EXPECT_EQ(n.value, 1);
  const auto n2 = exec_concrete_version(ir, Version::New, {{"x", -2}});
  EXPECT_EQ(n2.kind, ConcreteOutcome::Kind::AssertionFailure);
  EXPECT_EQ(ir.site_label(n2.site).substr(0, 3), "14:");
}

TEST(ExecConcrete, MissingInputThrows) {
  const auto ir = compile_subject("foo.sl");
  EXPECT_THROW(exec_concrete_version(ir, Version::New, {}), std::invalid_argument);
}

TEST(ExecConcrete, DivByZeroSite) {
  const auto ir = shadowse::testing::compile_source("int f(int a, int b) { return a / b; }");
  const auto o = exec_concrete_version(ir, Version::New, {{"a", 1}, {"b", 0}});
  EXPECT_EQ(o.kind, ConcreteOutcome::Kind::DivByZero);
  EXPECT_EQ(ir.code[o.site].op, frontend::OpCode::IDIV);
}

TEST(Classify, FooExamples) {
  const auto ir = compile_subject("foo.sl");
  EXPECT_EQ(classify_input(ir, {{"x", -1}}).verdict, Verdict::ExpectedFix);
  EXPECT_EQ(classify_input(ir, {{"x", -2}}).verdict, Verdict::RegressionCandidate);
  const auto c = classify_input(ir, {{"x", 0}});
  EXPECT_EQ(c.verdict, Verdict::Identical);
  EXPECT_EQ(c.old_outcome.kind, ConcreteOutcome::Kind::Returned);
  EXPECT_EQ(c.old_outcome.value, 1);
}

// Hand trace of foo: old y = |x| scaled, new y = -that. The versions agree
// only where both take the same route, which a direct evaluation of the two
// source versions decides.
TEST(Classify, FooBruteForceRegions) {
  const auto ir = compile_subject("foo.sl");
  auto route = [](int x, bool is_new) {
    long y = x < 0 ? -static_cast<long>(x) : 2L * x;
    if (is_new) y = -y;
    if (y > 1) return 0;
    if (y == 1 || y <= -2) return -1;
    return 1;
  };
  for (int x = -64; x <= 64; ++x) {
    const auto v = classify_input(ir, {{"x", x}}).verdict;
    const int o = route(x, false), n = route(x, true);
    if (x == 0) {
      EXPECT_EQ(v, Verdict::Identical);
    } else if (o == -1 && n != -1) {
      EXPECT_EQ(v, Verdict::ExpectedFix) << x;
    } else if (o != -1 && n == -1) {
      EXPECT_EQ(v, Verdict::RegressionCandidate) << x;
    } else {
      EXPECT_EQ(v, Verdict::BehavioralDiff) << x;
    }
  }
}

TEST(Verdict, TableIsTotalAndExclusive) {
  using K = ConcreteOutcome::Kind;
  const std::vector<ConcreteOutcome> samples = {outcome(K::Returned, 0), outcome(K::Returned, 1),
                                                outcome(K::AssertionFailure, 0, 4), outcome(K::DivByZero, 0, 4),
                                                outcome(K::LoopBoundHit, 0, 9)};
  for (const auto& o : samples) {
    for (const auto& n : samples) {
      const auto v = verdict_of(o, n);
      const bool same = o == n;
      const bool fix = o.is_error() && n.kind == K::Returned;
      const bool reg = o.kind == K::Returned && n.is_error();
      EXPECT_EQ(same + fix + reg + (!same && !fix && !reg), 1);
      if (same) EXPECT_EQ(v, Verdict::Identical);
      else if (fix) EXPECT_EQ(v, Verdict::ExpectedFix);
      else if (reg) EXPECT_EQ(v, Verdict::RegressionCandidate);
      else EXPECT_EQ(v, Verdict::BehavioralDiff);
    }
  }
}

TEST(Verdict, TraceDifferenceIsNotIdentical) {
  auto a = outcome(ConcreteOutcome::Kind::Returned, 1);
  auto b = a;
  a.trace = {{2, true}};
  b.trace = {{2, false}};
  EXPECT_EQ(verdict_of(a, b), Verdict::BehavioralDiff);
}

TEST(Verdict, BothErrorsDiffering) {
  EXPECT_EQ(verdict_of(outcome(ConcreteOutcome::Kind::AssertionFailure, 0, 3),
                       outcome(ConcreteOutcome::Kind::DivByZero, 0, 5)),
            Verdict::BehavioralDiff);
}

TEST(Verdict, StringRoundTrip) {
  for (auto v : {Verdict::Identical, Verdict::ExpectedFix, Verdict::RegressionCandidate, Verdict::BehavioralDiff})
    EXPECT_EQ(verdict_from_string(to_string(v)), v);
  EXPECT_THROW(verdict_from_string("nope"), std::invalid_argument);
}
