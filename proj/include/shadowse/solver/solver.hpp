#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "shadowse/core/constraint.hpp"

namespace shadowse::solver {

using core::Assignment;
using core::Constraint;

/// Inclusive range of an input.
struct Bounds {
  std::int64_t lo = INT32_MIN;
  std::int64_t hi = INT32_MAX;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Conjunction of constraints over named integer inputs.
///
/// `inputs` is ordered; the order is the priority of the model policy.
/// Inputs without an entry in `bounds` range over the full 32-bit interval.
struct Conjunction {
  std::vector<Constraint> constraints;
  std::vector<std::string> inputs;
  std::map<std::string, Bounds> bounds;

  /// Inputs in order of first occurrence in `constraints`.
  static Conjunction of(std::vector<Constraint> constraints);

  Bounds bounds_of(const std::string& input) const;
  /// Throws std::invalid_argument if a constraint mentions an undeclared input.
  void validate() const;
};

struct Sat {
  Assignment model;
  friend bool operator==(const Sat&, const Sat&) = default;
};
struct Unsat {
  friend bool operator==(const Unsat&, const Unsat&) = default;
};
struct Unknown {
  std::string reason;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using SolverResult = std::variant<Sat, Unsat, Unknown>;

inline bool is_sat(const SolverResult& r) { return std::holds_alternative<Sat>(r); }
inline bool is_unsat(const SolverResult& r) { return std::holds_alternative<Unsat>(r); }
std::string to_string(const SolverResult& r);

struct SolverOptions {
  /// Search nodes per satisfiability check before giving up with UNKNOWN.
  std::uint64_t node_cap = 200'000;
  /// When false, a SAT result carries the first solution the search finds
  /// instead of the get_model() policy model (cheaper; still deterministic).
  bool policy_model = true;
};

/// Decides a conjunction of linear constraints by interval propagation and
/// branch-and-bound. A SAT result carries the get_model() model. Nonlinear
/// terms (input * input, division or remainder by a non-constant, ...)
/// give UNKNOWN.
SolverResult check_sat(const Conjunction& c, const SolverOptions& opts = {});

class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic model: inputs are fixed in order, each to the value of
/// smallest magnitude that keeps the rest satisfiable, preferring the
/// positive value on ties. Verified by substitution. Throws ModelError if
/// the conjunction is not SAT.
Assignment get_model(const Conjunction& c, const SolverOptions& opts = {});

/// True iff every constraint holds under `model` read as mathematical
/// integers within the bounds.
bool satisfies(const Conjunction& c, const Assignment& model);

struct Window {
  std::int32_t lo = -64;
  std::int32_t hi = 64;
};

/// Largest number of assignments brute_force_check will enumerate.
inline constexpr std::uint64_t kBruteForceCap = 5'000'000;

class WindowTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration over `window` (intersected with the bounds),
/// visiting values in model-policy order, so a SAT result carries the
/// same model get_model() would pick inside the window.
SolverResult brute_force_check(const Conjunction& c, Window window);

/// SMT-LIB 2 text over Int: declarations, one assert per constraint in
/// order, then (check-sat) and (get-model). Non-default bounds are asserted
/// after the constraints.
std::string to_smtlib(const Conjunction& c);

}  // namespace shadowse::solver
