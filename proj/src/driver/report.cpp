#include "shadowse/driver/report.hpp"

#include <sstream>

namespace shadowse::driver {

using nlohmann::json;

namespace {

std::vector<std::string> texts(const std::vector<core::Constraint>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.to_string());
  return out;
}

OutcomeEntry outcome_entry(const frontend::IrProgram& ir, const differ::ConcreteOutcome& o) {
  OutcomeEntry e;
  e.kind = differ::to_string(o.kind);
  e.value = o.value;
  if (o.kind != differ::ConcreteOutcome::Kind::Returned) e.site = ir.site_label(o.site);
  return e;
}

ClassificationEntry classification_entry(const frontend::IrProgram& ir, const differ::Classification& c) {
  return {differ::to_string(c.verdict), outcome_entry(ir, c.old_outcome), outcome_entry(ir, c.new_outcome)};
}

PathEntry path_entry(const frontend::IrProgram& ir, const engine::PathRecord& p) {
  PathEntry e;
  e.terminal = engine::to_string(p.terminal.kind);
  e.site = ir.site_label(p.terminal.site);
  e.value = p.terminal.value;
  e.pc_old = texts(p.pc.pc_old);
  e.pc_new = texts(p.pc.pc_new);
  e.canonical = p.pc.canonical();
  e.input = p.input;
  e.provenance = engine::to_string(p.provenance);
  return e;
}

std::vector<NodeEntry> tree_entries(const std::vector<engine::TreeNode>& tree) {
  std::vector<NodeEntry> out;
  for (const auto& n : tree)
    out.push_back({n.id, n.parent, n.edge, n.site, texts(n.pc.pc_old), texts(n.pc.pc_new), n.status, n.note});
  return out;
}

// JSON helpers -------------------------------------------------------------

json opt_assignment(const std::optional<Assignment>& a) { return a ? json(*a) : json(nullptr); }

std::optional<Assignment> opt_assignment(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<Assignment>();
}

json outcome_json(const OutcomeEntry& o) { return {{"kind", o.kind}, {"value", o.value}, {"site", o.site}}; }
OutcomeEntry outcome_from(const json& j) {
  return {j.at("kind").get<std::string>(), j.at("value").get<std::int32_t>(), j.at("site").get<std::string>()};
}

json path_json(const PathEntry& p) {
  json j = {{"terminal", p.terminal},   {"site", p.site},       {"value", p.value},
            {"pc_old", p.pc_old},       {"pc_new", p.pc_new},   {"canonical", p.canonical},
            {"input", opt_assignment(p.input)}, {"provenance", p.provenance}};
  if (p.classification) {
    j["classification"] = {{"verdict", p.classification->verdict},
                           {"old", outcome_json(p.classification->old_outcome)},
                           {"new", outcome_json(p.classification->new_outcome)}};
  } else {
    j["classification"] = nullptr;
  }
  return j;
}

PathEntry path_from(const json& j) {
  PathEntry p;
  p.terminal = j.at("terminal").get<std::string>();
  p.site = j.at("site").get<std::string>();
  p.value = j.at("value").get<std::string>();
  p.pc_old = j.at("pc_old").get<std::vector<std::string>>();
  p.pc_new = j.at("pc_new").get<std::vector<std::string>>();
  p.canonical = j.at("canonical").get<std::string>();
  p.input = opt_assignment(j.at("input"));
  p.provenance = j.at("provenance").get<std::string>();
  const auto& c = j.at("classification");
  if (!c.is_null())
    p.classification = ClassificationEntry{c.at("verdict").get<std::string>(), outcome_from(c.at("old")),
                                           outcome_from(c.at("new"))};
  return p;
}

template <typename T, typename F>
json array_of(const std::vector<T>& items, F&& f) {
  json a = json::array();
  for (const auto& i : items) a.push_back(f(i));
  return a;
}

template <typename T, typename F>
std::vector<T> vector_of(const json& a, F&& f) {
  std::vector<T> out;
  for (const auto& i : a) out.push_back(f(i));
  return out;
}

}  // namespace

ConfigEcho echo_config(const std::string& mode, const engine::EngineConfig& cfg) {
  return {mode, cfg.bse_depth, cfg.loop_bound, cfg.step_budget, cfg.solver, cfg.emit_smt_dir};
}

Report make_shadow_report(const std::string& subject, const frontend::IrProgram& ir, const engine::ShadowReport& r,
                          const engine::EngineConfig& cfg) {
  Report out;
  out.subject = subject;
  out.mode = "shadow";
  out.config = echo_config("shadow", cfg);
  for (const auto& t : r.tests)
    out.tests.push_back({t.name, t.input, t.touched_change, t.divergences, path_entry(ir, t.path)});
  for (const auto& d : r.divergences)
    out.divergences.push_back({ir.site_label(d.site), engine::to_string(d.kind), d.witness, d.test,
                               texts(d.snapshot.pc.pc_old), texts(d.snapshot.pc.pc_new)});
  for (const auto& d : r.diff_paths) {
    PathEntry e = path_entry(ir, d.record);
    e.classification = classification_entry(ir, d.classification);
    out.diff_paths.push_back(std::move(e));
  }
  out.counters = r.counters;
  out.warnings = r.warnings;
  out.tree = tree_entries(r.tree);
  return out;
}

Report make_plain_report(const std::string& subject, const frontend::IrProgram& ir, const engine::PlainReport& r,
                         const engine::EngineConfig& cfg) {
  Report out;
  out.subject = subject;
  out.mode = r.version == frontend::Version::Old ? "plain-old" : "plain-new";
  out.config = echo_config(out.mode, cfg);
  for (const auto& p : r.paths) {
    PathEntry e = path_entry(ir, p);
    if (p.input) {
      const auto c = differ::classify_input(ir, *p.input, cfg.loop_bound);
      e.classification = classification_entry(ir, c);
      if (c.verdict != differ::Verdict::Identical) out.diff_paths.push_back(e);
    }
    out.paths.push_back(std::move(e));
  }
  out.counters = r.counters;
  out.counters.diff_paths = out.diff_paths.size();
  out.warnings = r.warnings;
  out.tree = tree_entries(r.tree);
  return out;
}

json to_json(const Report& r) {
  json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["subject"] = r.subject;
  j["mode"] = r.mode;
  j["config"] = {{"mode", r.config.mode},
                 {"bse_depth", r.config.bse_depth ? json(*r.config.bse_depth) : json(nullptr)},
                 {"loop_bound", r.config.loop_bound},
                 {"step_budget", r.config.step_budget},
                 {"solver", r.config.solver},
                 {"emit_smt", r.config.emit_smt}};
  j["tests"] = array_of(r.tests, [](const TestEntry& t) {
    return json{{"name", t.name},
                {"input", t.input},
                {"touched_change", t.touched_change},
                {"divergences", t.divergences},
                {"path", path_json(t.path)}};
  });
  j["divergences"] = array_of(r.divergences, [](const DivergenceEntry& d) {
    return json{{"site", d.site},     {"kind", d.kind},     {"witness", d.witness},
                {"test", d.test},     {"pc_old", d.pc_old}, {"pc_new", d.pc_new}};
  });
  j["diff_paths"] = array_of(r.diff_paths, path_json);
  j["paths"] = array_of(r.paths, path_json);
  j["counters"] = {{"nodes", r.counters.nodes},
                   {"solver_queries", r.counters.solver_queries},
                   {"paths", r.counters.paths},
                   {"diff_paths", r.counters.diff_paths}};
  j["warnings"] = r.warnings;
  j["tree"] = array_of(r.tree, [](const NodeEntry& n) {
    return json{{"id", n.id},         {"parent", n.parent}, {"edge", n.edge},   {"site", n.site},
                {"pc_old", n.pc_old}, {"pc_new", n.pc_new}, {"status", n.status}, {"note", n.note}};
  });
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.tool = j.at("tool").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.subject = j.at("subject").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  const auto& c = j.at("config");
  r.config.mode = c.at("mode").get<std::string>();
  if (!c.at("bse_depth").is_null()) r.config.bse_depth = c.at("bse_depth").get<std::uint32_t>();
  r.config.loop_bound = c.at("loop_bound").get<std::uint32_t>();
  r.config.step_budget = c.at("step_budget").get<std::uint64_t>();
  r.config.solver = c.at("solver").get<std::string>();
  r.config.emit_smt = c.at("emit_smt").get<std::string>();
  r.tests = vector_of<TestEntry>(j.at("tests"), [](const json& t) {
    return TestEntry{t.at("name").get<std::string>(), t.at("input").get<Assignment>(),
                     t.at("touched_change").get<bool>(), t.at("divergences").get<std::uint64_t>(),
                     path_from(t.at("path"))};
  });
  r.divergences = vector_of<DivergenceEntry>(j.at("divergences"), [](const json& d) {
    return DivergenceEntry{d.at("site").get<std::string>(), d.at("kind").get<std::string>(),
                           d.at("witness").get<Assignment>(), d.at("test").get<std::string>(),
                           d.at("pc_old").get<std::vector<std::string>>(),
                           d.at("pc_new").get<std::vector<std::string>>()};
  });
  r.diff_paths = vector_of<PathEntry>(j.at("diff_paths"), path_from);
  r.paths = vector_of<PathEntry>(j.at("paths"), path_from);
  const auto& k = j.at("counters");
  r.counters.nodes = k.at("nodes").get<std::uint64_t>();
  r.counters.solver_queries = k.at("solver_queries").get<std::uint64_t>();
  r.counters.paths = k.at("paths").get<std::uint64_t>();
  r.counters.diff_paths = k.at("diff_paths").get<std::uint64_t>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.tree = vector_of<NodeEntry>(j.at("tree"), [](const json& n) {
    return NodeEntry{n.at("id").get<int>(),
                     n.at("parent").get<int>(),
                     n.at("edge").get<std::string>(),
                     n.at("site").get<std::string>(),
                     n.at("pc_old").get<std::vector<std::string>>(),
                     n.at("pc_new").get<std::vector<std::string>>(),
                     n.at("status").get<std::string>(),
                     n.at("note").get<std::string>()};
  });
  return r;
}

std::string dump_report(const Report& r) { return to_json(r).dump(2) + "\n"; }

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string joined(const std::vector<std::string>& cs) {
  if (cs.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) out += (i ? " && " : "") + cs[i];
  return out;
}

}  // namespace

std::string emit_dot(const Report& r) {
  std::ostringstream out;
  out << "digraph shadow {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& n : r.tree) {
    std::string label;
    if (n.parent < 0) label += escape(n.edge) + "\\n";
    if (!n.site.empty()) label += "@" + n.site + "\\n";
    label += "PC_old: " + escape(joined(n.pc_old)) + "\\nPC_new: " + escape(joined(n.pc_new)) + "\\n" + n.status;
    if (!n.note.empty()) label += "\\n" + escape(n.note);
    out << "  n" << n.id << " [label=\"" << label << "\"];\n";
  }
  for (const auto& n : r.tree) {
    if (n.parent >= 0) out << "  n" << n.parent << " -> n" << n.id << " [label=\"" << escape(n.edge) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

int exit_code(const Report& r) { return r.diff_paths.empty() ? 0 : 10; }

}  // namespace shadowse::driver
