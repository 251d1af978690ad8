#pragma once

// Linear normal form used by the built-in solver. Internal header.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowse/core/constraint.hpp"

namespace shadowse::solver::detail {

using i128 = __int128;

/// Magnitude above which coefficients are treated as overflow.
inline constexpr i128 kCoefLimit = static_cast<i128>(1) << 62;

i128 floor_div(i128 a, i128 b);
i128 ceil_div(i128 a, i128 b);
i128 abs128(i128 v);
i128 gcd128(i128 a, i128 b);
std::string to_string(i128 v);

struct LinExpr {
  std::vector<i128> coef;
  i128 constant = 0;

  bool is_constant() const;
};

/// `sum(a[i] * x[i]) + b  kind  0`.
struct LinCon {
  enum class Kind { Le, Eq, Ne };
  std::vector<i128> a;
  i128 b = 0;
  Kind kind = Kind::Le;
};

/// nullopt when `e` is not linear in the inputs (or coefficients overflow).
std::optional<LinExpr> linearize(const core::Expr& e, const std::map<std::string, std::size_t>& index,
                                 std::size_t nvars);

/// nullopt when not linear.
std::optional<LinCon> to_lincon(const core::Constraint& c, const std::map<std::string, std::size_t>& index,
                                std::size_t nvars);

/// Exact evaluation over mathematical integers; nullopt on division by zero.
std::optional<i128> eval_math(const core::Expr& e, const core::Assignment& model);

}  // namespace shadowse::solver::detail
