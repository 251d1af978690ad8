#include <algorithm>
#include <cstdio>

#include "shadowse/driver/driver.hpp"

namespace shadowse::driver {

using nlohmann::json;

std::vector<engine::TestCase> parse_tests(const std::string& json_text, const std::vector<std::string>& params) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed tests JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tests") || !j["tests"].is_array())
    throw InputError("tests JSON must be an object with a \"tests\" array");
  std::vector<engine::TestCase> out;
  for (std::size_t i = 0; i < j["tests"].size(); ++i) {
    const auto& t = j["tests"][i];
    const std::string where = "test #" + std::to_string(i);
    if (!t.is_object() || !t.contains("args") || !t["args"].is_array())
      throw InputError(where + ": expected an object with an \"args\" array");
    const auto& args = t["args"];
    if (args.size() != params.size())
      throw InputError(where + ": expected " + std::to_string(params.size()) + " args, got " +
                       std::to_string(args.size()));
    engine::TestCase tc;
    tc.name = "test" + std::to_string(i);
    if (t.contains("name")) {
      if (!t["name"].is_string()) throw InputError(where + ": \"name\" must be a string");
      tc.name = t["name"].get<std::string>();
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      const auto& a = args[k];
      if (!a.is_number_integer() || a.get<std::int64_t>() < INT32_MIN || a.get<std::int64_t>() > INT32_MAX)
        throw InputError(where + ": argument " + std::to_string(k) + " is not a 32-bit integer");
      tc.input[params[k]] = static_cast<std::int32_t>(a.get<std::int64_t>());
    }
    out.push_back(std::move(tc));
  }
  return out;
}

namespace {

ComparisonRow analyse(const frontend::SourceProgram& program, const std::vector<engine::TestCase>& tests,
                      const engine::EngineConfig& cfg, ComparisonRow row) {
  try {
    const auto ir = frontend::compile_to_ir(program);
    const auto plain = make_plain_report(program.file, ir, engine::run_plain(ir, frontend::Version::New, cfg), cfg);
    row.plain_paths = plain.paths.size();
    row.plain_diff = plain.diff_paths.size();
    row.shadow_diff = engine::run_shadow(ir, tests, cfg).diff_paths.size();
  } catch (const std::exception& e) {
    row.plain_paths = row.plain_diff = row.shadow_diff = 0;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<ComparisonRow> compare(const frontend::SourceProgram& base, const std::vector<mutator::Operator>& ops,
                                   const std::vector<engine::TestCase>& tests, const engine::EngineConfig& cfg,
                                   std::size_t limit) {
  std::vector<ComparisonRow> rows;
  if (base.change_count() > 0) {
    rows.push_back(analyse(base, tests, cfg, {base.file, "-", "-", 0, 0, 0, ""}));
    return rows;
  }
  for (const auto& spec : mutator::generate_mutants(base, ops, limit)) {
    ComparisonRow row{base.file, spec.describe(), mutator::to_string(spec.op), 0, 0, 0, ""};
    try {
      row = analyse(mutator::unify_versions(base, spec), tests, cfg, row);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_table(const std::vector<ComparisonRow>& rows) {
  std::size_t w_subject = 7, w_mutant = 6;
  for (const auto& r : rows) {
    w_subject = std::max(w_subject, r.subject.size());
    w_mutant = std::max(w_mutant, r.mutant.size());
  }
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-4s  %11s  %10s  %11s\n", static_cast<int>(w_subject), "subject",
                static_cast<int>(w_mutant), "mutant", "type", "plain_paths", "plain_diff", "shadow_diff");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-4s  %11llu  %10llu  %11llu", static_cast<int>(w_subject),
                  r.subject.c_str(), static_cast<int>(w_mutant), r.mutant.c_str(), r.type.c_str(),
                  static_cast<unsigned long long>(r.plain_paths), static_cast<unsigned long long>(r.plain_diff),
                  static_cast<unsigned long long>(r.shadow_diff));
    out += buf;
    if (!r.error.empty()) out += "  error: " + r.error;
    out += "\n";
  }
  return out;
}

json comparison_json(const std::vector<ComparisonRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"subject", r.subject},
                 {"mutant", r.mutant},
                 {"type", r.type},
                 {"plain_paths", r.plain_paths},
                 {"plain_diff", r.plain_diff},
                 {"shadow_diff", r.shadow_diff},
                 {"error", r.error}});
  }
  return {{"tool", kToolName}, {"version", kToolVersion}, {"rows", a}};
}

}  // namespace shadowse::driver
