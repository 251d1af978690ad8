#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadowse/driver/report.hpp"
#include "shadowse/mutator/mutator.hpp"

namespace shadowse::driver {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiffs = 10;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"tests":[{"args":[int,...],"name":"optional"}]}. Arities are checked
/// against `params`; unnamed tests are called test0, test1, ...
std::vector<engine::TestCase> parse_tests(const std::string& json_text, const std::vector<std::string>& params);

struct ComparisonRow {
  std::string subject;
  /// Mutation description, "-" for a program that is already annotated.
  std::string mutant;
  /// ROR / AOR / STD, or "-".
  std::string type;
  std::uint64_t plain_paths = 0;
  std::uint64_t plain_diff = 0;
  std::uint64_t shadow_diff = 0;
  /// Non-empty when the mutant could not be analysed; counts are then 0.
  std::string error;
  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

/// One row per generated mutant of `base` (or a single "-" row when `base`
/// already contains change annotations): plain-new paths, how many of their
/// inputs the differ finds non-identical, and shadow diff paths.
std::vector<ComparisonRow> compare(const frontend::SourceProgram& base, const std::vector<mutator::Operator>& ops,
                                   const std::vector<engine::TestCase>& tests, const engine::EngineConfig& cfg,
                                   std::size_t limit = SIZE_MAX);

std::string format_table(const std::vector<ComparisonRow>& rows);
nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows);

/// The command line tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shadowse::driver
