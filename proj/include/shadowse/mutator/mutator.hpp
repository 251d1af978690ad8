#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "shadowse/frontend/ast.hpp"

namespace shadowse::mutator {

using frontend::SourceProgram;
using frontend::Span;

enum class Operator { ROR, AOR, STD };

const char* to_string(Operator op);
/// Accepts "ROR", "AOR", "STD" (case-insensitive).
Operator operator_from_string(const std::string& s);
/// Comma-separated list, e.g. "ROR,STD". The empty string gives no operators.
std::vector<Operator> parse_operators(const std::string& list);

struct MutationSpec {
  Operator op = Operator::ROR;
  /// The whole mutated expression (ROR/AOR) or statement (STD).
  Span target;
  /// The operator token (ROR/AOR); equal to `target` for STD.
  Span op_span;
  /// Operator token before and after the mutation; both empty for STD.
  std::string original;
  std::string replacement;

  /// e.g. "ROR 10:9 > -> >=" (operator position), "STD 7:7".
  std::string describe() const;
  friend bool operator==(const MutationSpec&, const MutationSpec&) = default;
};

class InapplicableSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All single mutations, ROR first, then AOR, then STD (each in source
/// order), truncated at `limit`. Expressions inside an existing change()
/// are never targets.
std::vector<MutationSpec> generate_mutants(const SourceProgram& program, const std::vector<Operator>& ops,
                                           std::size_t limit = SIZE_MAX);

/// The change-annotated program holding the base as old version and the
/// mutant as new version. Throws InapplicableSpec if the spec does not
/// address a mutable node of `program`.
SourceProgram unify_versions(const SourceProgram& program, const MutationSpec& spec);

/// Several mutations in one program. Spans must be pairwise disjoint.
SourceProgram unify_versions(const SourceProgram& program, const std::vector<MutationSpec>& specs);

/// The mutant on its own, without change annotations (a deleted statement
/// becomes an empty block).
SourceProgram apply_mutation(const SourceProgram& program, const MutationSpec& spec);

}  // namespace shadowse::mutator
