#include <gtest/gtest.h>

#include <random>

#include "shadowse/core/constraint.hpp"
#include "shadowse/core/shadow_value.hpp"
#include "shadowse/core/sym_expr.hpp"

namespace shadowse::core {
namespace {

const Expr X = Expr::input("X");

Expr plus(const Expr& a, const Expr& b) { return Expr::binary(BinOp::Add, a, b); }
Expr c(std::int32_t v) { return Expr::constant(v); }

TEST(SymExpr, FoldsConstantsAndDoubleNegation) {
  EXPECT_EQ(plus(c(2), c(3)), c(5));
  EXPECT_EQ(Expr::neg(Expr::neg(X)), X);
  EXPECT_EQ(Expr::binary(BinOp::Mul, c(INT32_MAX), c(2)), c(-2));
  EXPECT_EQ(Expr::binary(BinOp::Lt, c(1), c(2)), c(1));
  // x + 0 is not simplified
  EXPECT_NE(plus(X, c(0)), X);
  // division by a constant zero is left for the engine to report
  EXPECT_EQ(Expr::binary(BinOp::Div, c(1), c(0)).kind(), Expr::Kind::Binary);
}

TEST(SymExpr, StructuralEqualityAndRendering) {
  EXPECT_EQ(plus(X, c(1)), plus(Expr::input("X"), c(1)));
  EXPECT_NE(plus(X, c(1)), plus(c(1), X));
  EXPECT_EQ(plus(Expr::neg(X), c(1)).to_string(), "(-X + 1)");
  EXPECT_EQ(Expr::neg(plus(X, c(1))).to_string(), "-(X + 1)");
  EXPECT_EQ(c(-5).to_string(), "-5");
}

TEST(EvalConcrete, Examples) {
  EXPECT_EQ(eval_concrete(Expr::neg(X), {{"X", -1}}), 1);
  EXPECT_EQ(eval_concrete(c(7), {}), 7);
  EXPECT_EQ(eval_concrete(c(7), {{"X", 99}}), 7);
  EXPECT_EQ(eval_concrete(Expr::binary(BinOp::Mul, c(2), X), {{"X", 3}}), 6);
}

TEST(EvalConcrete, DivisionByZeroNamesTheSubexpression) {
  const auto div = Expr::binary(BinOp::Div, c(10), X);
  const auto e = plus(div, c(1));
  try {
    eval_concrete(e, {{"X", 0}});
    FAIL() << "expected EvalError";
  } catch (const EvalError& err) {
    EXPECT_EQ(err.offending(), div);
  }
  EXPECT_THROW(eval_concrete(X, {}), std::out_of_range);
}

TEST(EvalConcrete, WrapsLikeTheJvm) {
  EXPECT_EQ(eval_concrete(plus(X, c(1)), {{"X", INT32_MAX}}), INT32_MIN);
  EXPECT_EQ(eval_concrete(Expr::binary(BinOp::Div, X, c(-1)), {{"X", INT32_MIN}}), INT32_MIN);
  EXPECT_EQ(eval_concrete(Expr::binary(BinOp::Rem, X, c(-1)), {{"X", INT32_MIN}}), 0);
  EXPECT_EQ(eval_concrete(Expr::binary(BinOp::Rem, c(-7), c(2)), {}), -1);
}

TEST(Constraint, NegationAndTruthiness) {
  const Constraint lt{Rel::Lt, X, c(0)};
  EXPECT_EQ(lt.negated().rel, Rel::Ge);
  EXPECT_EQ(lt.negated().negated(), lt);
  EXPECT_EQ(lt.to_string(), "(X < 0)");
  EXPECT_EQ(Constraint::truthy(Expr::binary(BinOp::Gt, X, c(5))), (Constraint{Rel::Gt, X, c(5)}));
  EXPECT_EQ(Constraint::truthy(c(1)).trivial_value(), true);
  EXPECT_EQ(Constraint::truthy(c(0)).trivial_value(), false);
  EXPECT_FALSE(lt.trivial_value().has_value());
}

TEST(MakeDiff, Examples) {
  const auto A = Expr::input("A"), B = Expr::input("B"), C = Expr::input("C");
  EXPECT_EQ(make_diff(SymAttr{Expr::neg(X)}, SymAttr{X}), SymAttr(DiffExpr{Expr::neg(X), X}));
  EXPECT_EQ(make_diff(SymAttr{DiffExpr{A, B}}, SymAttr{C}), SymAttr(DiffExpr{A, C}));
  EXPECT_EQ(make_diff(SymAttr{X}, SymAttr{X}), SymAttr(X));
  // the new side of the old operand and the old side of the new operand are dropped
  EXPECT_EQ(make_diff(SymAttr{DiffExpr{A, B}}, SymAttr{DiffExpr{C, A}}), SymAttr(A));
}

TEST(MakeDiff, ChangeOfTwoConstantsKeepsBothConcreteValues) {
  const auto v = make_diff(ShadowValue::concrete(1), ShadowValue::concrete(0));
  EXPECT_TRUE(v.is_diff());
  EXPECT_EQ(v.conc_old(), 1);
  EXPECT_EQ(v.conc_new(), 0);
  EXPECT_TRUE(make_diff(ShadowValue::concrete(4), ShadowValue::concrete(4)).is_concrete_only());
}

TEST(ShadowBinop, Examples) {
  auto r = shadow_binop(BinOp::Add, ShadowValue::symbolic(X, 3, 3), ShadowValue::concrete(1));
  EXPECT_EQ(r.value, ShadowValue::symbolic(plus(X, c(1)), 4, 4));
  EXPECT_FALSE(r.value.is_diff());

  const auto y = ShadowValue::symbolic(DiffExpr{Expr::neg(X), X}, 1, -1);
  r = shadow_binop(BinOp::Add, y, ShadowValue::concrete(1));
  EXPECT_EQ(r.value, ShadowValue::symbolic(DiffExpr{plus(Expr::neg(X), c(1)), plus(X, c(1))}, 2, 0));
  // cross-check against the dual concrete evaluation at x = -1
  EXPECT_EQ(eval_concrete(r.value.old_expr(), {{"X", -1}}), r.value.conc_old());
  EXPECT_EQ(eval_concrete(r.value.new_expr(), {{"X", -1}}), r.value.conc_new());

  r = shadow_binop(BinOp::Add, ShadowValue::concrete(5), ShadowValue::concrete(7));
  EXPECT_TRUE(r.value.is_concrete_only());
  EXPECT_EQ(r.value.conc_new(), 12);
}

TEST(ShadowBinop, ConcreteDivisionByZeroIsVersionTagged) {
  const auto divisor = ShadowValue::symbolic(DiffExpr{X, Expr::input("Y")}, 0, 3);
  auto r = shadow_binop(BinOp::Div, ShadowValue::concrete(9), divisor);
  EXPECT_TRUE(r.div_zero_old);
  EXPECT_FALSE(r.div_zero_new);
  EXPECT_EQ(r.value.conc_new(), 3);
}

TEST(ShadowNeg, Examples) {
  auto v = shadow_neg(ShadowValue::symbolic(Expr::neg(X), 1, 1));
  EXPECT_EQ(v, ShadowValue::symbolic(X, -1, -1));
  // normalization oracle: both forms agree on every x in [-100, 100]
  for (int x = -100; x <= 100; ++x)
    EXPECT_EQ(eval_concrete(Expr::neg(Expr::neg(X)), {{"X", x}}), eval_concrete(v.new_expr(), {{"X", x}}));

  v = shadow_neg(ShadowValue::symbolic(DiffExpr{Expr::neg(X), X}, 1, -1));
  EXPECT_EQ(v, ShadowValue::symbolic(DiffExpr{X, Expr::neg(X)}, -1, 1));
  EXPECT_EQ(eval_concrete(v.old_expr(), {{"X", -1}}), v.conc_old());
  EXPECT_EQ(eval_concrete(v.new_expr(), {{"X", -1}}), v.conc_new());

  v = shadow_neg(ShadowValue::concrete(0));
  EXPECT_TRUE(v.is_concrete_only());
  EXPECT_EQ(v.conc_new(), 0);
}

// Random shadow values built from the inputs X and Y, always carrying
// concrete values consistent with `env`.
class Gen {
 public:
  Gen(std::uint32_t seed, Assignment env) : rng_(seed), env_(std::move(env)) {}

  ShadowValue value(int depth, bool allow_diff) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
    switch (pick(rng_)) {
      case 0: return ShadowValue::concrete(small());
      case 1: return leaf(allow_diff);
      case 2: return leaf(false);
      case 3: return shadow_neg(value(depth - 1, allow_diff));
      default: {
        static constexpr BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Lt, BinOp::Eq};
        std::uniform_int_distribution<int> op(0, 4);
        return shadow_binop(ops[op(rng_)], value(depth - 1, allow_diff), value(depth - 1, allow_diff)).value;
      }
    }
  }

  ShadowValue leaf(bool allow_diff) {
    std::uniform_int_distribution<int> which(0, 1);
    auto in = [&]() { return which(rng_) ? Expr::input("X") : Expr::input("Y"); };
    const Expr a = in();
    const auto ca = eval_concrete(a, env_);
    if (!allow_diff || which(rng_) == 0) return ShadowValue::symbolic(a, ca, ca);
    const Expr b = Expr::binary(BinOp::Add, in(), Expr::constant(small()));
    return make_diff(ShadowValue::symbolic(a, ca, ca), ShadowValue::symbolic(b, eval_concrete(b, env_),
                                                                              eval_concrete(b, env_)));
  }

  std::int32_t small() { return std::uniform_int_distribution<std::int32_t>(-9, 9)(rng_); }

 private:
  std::mt19937 rng_;
  Assignment env_;
};

TEST(CoreProperties, ConcolicConsistencyAndSharing) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    const Assignment env{{"X", static_cast<std::int32_t>(seed % 17) - 8}, {"Y", static_cast<std::int32_t>(seed % 5) - 2}};
    Gen g(seed, env);
    const auto v = g.value(4, true);
    EXPECT_EQ(eval_concrete(v.old_expr(), env), v.conc_old()) << v.to_string();
    EXPECT_EQ(eval_concrete(v.new_expr(), env), v.conc_new()) << v.to_string();
    // a slot holds a Diff iff its two expressions differ structurally
    EXPECT_EQ(v.is_diff(), v.old_expr() != v.new_expr()) << v.to_string();
  }
}

TEST(CoreProperties, DiffPropagation) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    const Assignment env{{"X", 3}, {"Y", -4}};
    Gen g(seed, env);
    // leaves are symbolic, so no folding can make the two sides coincide
    const auto a = g.leaf(seed % 2 == 0);
    const auto b = g.leaf(seed % 3 == 0);
    for (BinOp op : {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem, BinOp::Le}) {
      const auto r = shadow_binop(op, a, b).value;
      EXPECT_EQ(r.is_diff(), a.is_diff() || b.is_diff());
    }
    EXPECT_EQ(shadow_neg(a).is_diff(), a.is_diff());
  }
}

TEST(CoreProperties, PlainOnlyClosure) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    Gen g(seed, {{"X", 1}, {"Y", 2}});
    EXPECT_FALSE(g.value(5, false).is_diff());
  }
}

}  // namespace
}  // namespace shadowse::core
