#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowse/core/constraint.hpp"
#include "shadowse/core/shadow_value.hpp"
#include "shadowse/differ/differ.hpp"
#include "shadowse/frontend/ir.hpp"
#include "shadowse/solver/solver.hpp"

namespace shadowse::engine {

using core::Assignment;
using core::Constraint;
using core::ShadowValue;
using frontend::IrProgram;
using frontend::Version;

struct EngineConfig {
  /// Branch decisions allowed after a divergence point (and from the start
  /// in plain mode). nullopt: unbounded.
  std::optional<std::uint32_t> bse_depth = 20;
  /// Traversals allowed per backward edge on one path.
  std::uint32_t loop_bound = 32;
  /// Instructions per path.
  std::uint64_t step_budget = 1'000'000;
  /// When non-empty, every solver query is written there as query_NNNNNN.smt2.
  std::string emit_smt_dir;
  /// Only "builtin" exists.
  std::string solver = "builtin";
  std::uint64_t solver_node_cap = 200'000;
};

struct PathConditionPair {
  std::vector<Constraint> pc_old;
  std::vector<Constraint> pc_new;

  std::string old_text() const { return core::to_string(pc_old); }
  std::string new_text() const { return core::to_string(pc_new); }
  /// Order-independent text, used as a deduplication key.
  std::string canonical() const;
  friend bool operator==(const PathConditionPair&, const PathConditionPair&) = default;
};

enum class ChoiceKind { SameTrue, SameFalse, DiffTrue, DiffFalse, Concrete };

const char* to_string(ChoiceKind k);

/// A branch condition seen by both versions. The directions are the
/// concrete outcomes (meaningful in the concolic phase only).
struct BranchCond {
  Constraint c_old;
  Constraint c_new;
  bool conc_old = false;
  bool conc_new = false;
};

struct Choice {
  ChoiceKind kind = ChoiceKind::SameTrue;
  bool dir_old = false;
  bool dir_new = false;
  Constraint add_old;
  Constraint add_new;
};

/// The four symbolic choices plus the concrete one (last). Diff choices are
/// omitted when the two conditions are structurally equal (both then
/// contradict themselves).
std::vector<Choice> branch_choices(const BranchCond& cond);

/// Appends a constraint unless it is trivially true.
void append_constraint(std::vector<Constraint>& pc, const Constraint& c);

enum class Mode { Concolic, Bse, PlainOld, PlainNew };

struct ExecState {
  std::vector<ShadowValue> slots;
  std::vector<ShadowValue> stack;
  std::size_t ip = 0;
  PathConditionPair pc;
  /// Branch decisions since the start of the current phase.
  std::uint32_t depth = 0;
  std::map<std::size_t, std::uint32_t> loop_counts;
  Mode mode = Mode::Concolic;
  std::uint64_t steps = 0;
  bool touched_change = false;
  /// A division at this index already passed its divisor check.
  std::optional<std::size_t> div_checked;
  /// The new version divides by zero here (set when resuming a divergence).
  std::optional<std::size_t> div_zero_pending;
  /// Tree node of the last decision.
  int node = -1;
};

enum class TerminalKind { Return, AssertionFailure, DivByZero, LoopBoundHit, DepthBoundHit, StepBudgetHit };

const char* to_string(TerminalKind k);
TerminalKind terminal_kind_from_string(const std::string& s);

struct Terminal {
  TerminalKind kind = TerminalKind::Return;
  std::size_t site = 0;
  /// Returned expression (new version) for Return.
  std::string value;
};

enum class Provenance { Concolic, ConcolicDiff, Bse, Plain };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct PathRecord {
  Terminal terminal;
  PathConditionPair pc;
  std::optional<Assignment> input;
  Provenance provenance = Provenance::Plain;
};

struct DivergencePoint {
  ExecState snapshot;
  ChoiceKind kind = ChoiceKind::DiffTrue;
  std::size_t site = 0;
  Assignment witness;
  std::string test;
};

/// A node of the explored tree. Roots have parent -1.
struct TreeNode {
  int id = 0;
  int parent = -1;
  std::string edge;
  std::string site;
  PathConditionPair pc;
  std::string status;  // SAT / UNSAT / UNKNOWN
  std::string note;
};

struct Counters {
  std::uint64_t nodes = 0;
  std::uint64_t solver_queries = 0;
  std::uint64_t paths = 0;
  std::uint64_t diff_paths = 0;
  friend bool operator==(const Counters&, const Counters&) = default;
};

/// One probed branch of a concolic run.
struct BranchEvent {
  std::size_t site = 0;
  PathConditionPair pc;
  BranchCond cond;
  /// Status per offered choice kind (concrete choice: always SAT).
  std::vector<std::pair<ChoiceKind, std::string>> choices;
};

struct ConcolicResult {
  /// The single path of the run (terminal or concolic-diff stop).
  std::vector<PathRecord> trace;
  std::vector<DivergencePoint> divergences;
  std::vector<BranchEvent> events;
  bool touched_change = false;
};

struct TestCase {
  std::string name;
  Assignment input;
};

struct TestSummary {
  std::string name;
  Assignment input;
  bool touched_change = false;
  std::size_t divergences = 0;
  PathRecord path;
};

struct DiffPath {
  PathRecord record;
  differ::Classification classification;
};

struct ShadowReport {
  std::vector<TestSummary> tests;
  std::vector<DivergencePoint> divergences;
  std::vector<DiffPath> diff_paths;
  Counters counters;
  std::vector<TreeNode> tree;
  std::vector<std::string> warnings;
};

struct PlainReport {
  Version version = Version::New;
  std::vector<PathRecord> paths;
  Counters counters;
  std::vector<TreeNode> tree;
  std::vector<std::string> warnings;
};

/// Stateful exploration session: owns the tree, counters and warnings that
/// the free functions below report.
class Engine {
 public:
  Engine(const IrProgram& ir, EngineConfig cfg);

  ExecState initial_state(Mode mode, const Assignment& input) const;
  ConcolicResult concolic_run(const Assignment& input, const std::string& test_name = "");
  std::vector<PathRecord> bse_explore(const DivergencePoint& dp);
  std::vector<PathRecord> explore_plain(Version version);

  const std::vector<TreeNode>& tree() const { return tree_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::uint64_t solver_queries() const { return queries_; }

 private:
  struct Event;
  Event run_until_event(ExecState& s) const;
  std::vector<PathRecord> explore(ExecState start);
  solver::SolverResult query(const std::vector<Constraint>& constraints, bool want_model);
  std::vector<Constraint> conjunction(const PathConditionPair& pc, const std::vector<Constraint>& extra = {}) const;
  std::optional<Assignment> witness(const PathConditionPair& pc);
  int add_node(int parent, std::string edge, std::size_t site, const PathConditionPair& pc, std::string status,
               std::string note = "");

  const IrProgram& ir_;
  EngineConfig cfg_;
  std::vector<TreeNode> tree_;
  std::vector<std::string> warnings_;
  std::uint64_t queries_ = 0;
};

ConcolicResult concolic_run(const IrProgram& ir, const Assignment& input, const EngineConfig& cfg = {});
std::vector<PathRecord> bse_explore(const IrProgram& ir, const DivergencePoint& dp, const EngineConfig& cfg = {});
ShadowReport run_shadow(const IrProgram& ir, const std::vector<TestCase>& tests, const EngineConfig& cfg = {});
PlainReport run_plain(const IrProgram& ir, Version version, const EngineConfig& cfg = {});

}  // namespace shadowse::engine
