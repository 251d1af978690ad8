#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadowse/engine/engine.hpp"

namespace shadowse::driver {

inline constexpr const char* kToolName = "shadowse";
inline constexpr const char* kToolVersion = "0.1.0";

using core::Assignment;

struct ConfigEcho {
  std::string mode;
  std::optional<std::uint32_t> bse_depth;
  std::uint32_t loop_bound = 32;
  std::uint64_t step_budget = 1'000'000;
  std::string solver = "builtin";
  std::string emit_smt;
  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct OutcomeEntry {
  std::string kind;
  std::int32_t value = 0;
  std::string site;  // empty for returns
  friend bool operator==(const OutcomeEntry&, const OutcomeEntry&) = default;
};

struct ClassificationEntry {
  std::string verdict;
  OutcomeEntry old_outcome;
  OutcomeEntry new_outcome;
  friend bool operator==(const ClassificationEntry&, const ClassificationEntry&) = default;
};

struct PathEntry {
  std::string terminal;
  std::string site;
  std::string value;
  std::vector<std::string> pc_old;
  std::vector<std::string> pc_new;
  std::string canonical;
  std::optional<Assignment> input;
  std::string provenance;
  std::optional<ClassificationEntry> classification;
  friend bool operator==(const PathEntry&, const PathEntry&) = default;
};

struct TestEntry {
  std::string name;
  Assignment input;
  bool touched_change = false;
  std::uint64_t divergences = 0;
  PathEntry path;
  friend bool operator==(const TestEntry&, const TestEntry&) = default;
};

struct DivergenceEntry {
  std::string site;
  std::string kind;
  Assignment witness;
  std::string test;
  std::vector<std::string> pc_old;
  std::vector<std::string> pc_new;
  friend bool operator==(const DivergenceEntry&, const DivergenceEntry&) = default;
};

struct NodeEntry {
  int id = 0;
  int parent = -1;
  std::string edge;
  std::string site;
  std::vector<std::string> pc_old;
  std::vector<std::string> pc_new;
  std::string status;
  std::string note;
  friend bool operator==(const NodeEntry&, const NodeEntry&) = default;
};

/// Everything a run writes. Shadow mode fills `tests`, `divergences` and
/// `diff_paths`; plain mode fills `paths` (all of them, classified) and
/// `diff_paths` (the ones whose input is not classified identical).
struct Report {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string subject;
  std::string mode;
  ConfigEcho config;
  std::vector<TestEntry> tests;
  std::vector<DivergenceEntry> divergences;
  std::vector<PathEntry> diff_paths;
  std::vector<PathEntry> paths;
  engine::Counters counters;
  std::vector<std::string> warnings;
  std::vector<NodeEntry> tree;
  friend bool operator==(const Report&, const Report&) = default;
};

ConfigEcho echo_config(const std::string& mode, const engine::EngineConfig& cfg);

Report make_shadow_report(const std::string& subject, const frontend::IrProgram& ir,
                          const engine::ShadowReport& r, const engine::EngineConfig& cfg);
Report make_plain_report(const std::string& subject, const frontend::IrProgram& ir, const engine::PlainReport& r,
                         const engine::EngineConfig& cfg);

nlohmann::json to_json(const Report& r);
/// Throws nlohmann::json::exception on schema mismatch.
Report report_from_json(const nlohmann::json& j);
/// Two-space indented JSON with a trailing newline.
std::string dump_report(const Report& r);

/// Graphviz digraph of the explored tree.
std::string emit_dot(const Report& r);

/// 10 when the report holds diff paths, else 0.
int exit_code(const Report& r);

}  // namespace shadowse::driver
