#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "shadowse/driver/driver.hpp"

namespace shadowse::driver {

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

frontend::SourceProgram load_program(const std::string& path) {
  return frontend::parse_program(slurp(path), fs::path(path).filename().string());
}

// "unbounded", "-1" and "0" all lift the bound.
std::optional<std::uint32_t> parse_depth(const std::string& s) {
  if (s == "unbounded" || s == "-1" || s == "0") return std::nullopt;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0 || v > UINT32_MAX) throw InputError("--bse-depth: expected a count or 'unbounded'");
  return static_cast<std::uint32_t>(v);
}

struct EngineFlags {
  std::string bse_depth = "20";
  std::uint32_t loop_bound = 32;
  std::uint64_t step_budget = 1'000'000;
  std::string emit_smt;
  std::string solver = "builtin";

  void attach(CLI::App* app) {
    app->add_option("--bse-depth", bse_depth, "branch decisions after a divergence point (0/-1/unbounded: no limit)")
        ->capture_default_str();
    app->add_option("--loop-bound", loop_bound, "traversals per backward edge on one path")->capture_default_str();
    app->add_option("--step-budget", step_budget, "instructions per path")->capture_default_str();
    app->add_option("--emit-smt", emit_smt, "directory receiving every solver query as SMT-LIB");
    app->add_option("--solver", solver, "solver backend")->check(CLI::IsMember({"builtin"}))->capture_default_str();
  }

  engine::EngineConfig config() const {
    engine::EngineConfig cfg;
    cfg.bse_depth = parse_depth(bse_depth);
    cfg.loop_bound = loop_bound;
    cfg.step_budget = step_budget;
    cfg.emit_smt_dir = emit_smt;
    cfg.solver = solver;
    return cfg;
  }
};

int cmd_run(const std::string& program_path, const std::string& tests_path, const std::string& mode,
            const std::string& out_path, const std::string& dot_path, const EngineFlags& flags, std::ostream& out,
            std::ostream& err) {
  const auto cfg = flags.config();
  const auto program = load_program(program_path);
  const auto ir = frontend::compile_to_ir(program);
  Report report;
  if (mode == "shadow") {
    if (tests_path.empty()) {
      err << "error: --tests is required in shadow mode\n";
      return kExitUsage;
    }
    const auto tests = parse_tests(slurp(tests_path), ir.params);
    if (tests.empty()) {
      err << "error: " << tests_path << ": at least one test is required\n";
      return kExitUsage;
    }
    report = make_shadow_report(program.file, ir, engine::run_shadow(ir, tests, cfg), cfg);
  } else {
    const auto version = mode == "plain-old" ? frontend::Version::Old : frontend::Version::New;
    report = make_plain_report(program.file, ir, engine::run_plain(ir, version, cfg), cfg);
  }
  const std::string text = dump_report(report);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << report.mode << " " << report.subject << ": " << report.counters.paths << " paths, "
        << report.counters.diff_paths << " diff paths\n";
  }
  if (!dot_path.empty()) write_file(dot_path, emit_dot(report));
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  return exit_code(report);
}

int cmd_compare(const std::string& program_path, const std::string& tests_path, const std::string& operators,
                std::size_t limit, const std::string& out_path, const EngineFlags& flags, std::ostream& out) {
  const auto cfg = flags.config();
  const auto program = load_program(program_path);
  const auto tests = parse_tests(slurp(tests_path), program.inputs());
  if (tests.empty()) throw InputError(tests_path + ": at least one test is required");
  const auto rows = compare(program, mutator::parse_operators(operators), tests, cfg, limit);
  out << format_table(rows);
  if (!out_path.empty()) write_file(out_path, comparison_json(rows).dump(2) + "\n");
  return kExitOk;
}

int cmd_mutate(const std::string& program_path, const std::string& operators, std::size_t limit,
               const std::string& out_dir, bool plain, std::ostream& out) {
  const auto program = load_program(program_path);
  const auto specs = mutator::generate_mutants(program, mutator::parse_operators(operators), limit);
  const std::string stem = fs::path(program_path).stem().string();
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& m = specs[i];
    char name[64];
    std::snprintf(name, sizeof name, "_%03zu_%s.sl", i, mutator::to_string(m.op));
    const std::string file = stem + name;
    const auto mutant = plain ? mutator::apply_mutation(program, m) : mutator::unify_versions(program, m);
    write_file((fs::path(out_dir) / file).string(), mutant.source);
    entries.push_back({{"index", i},
                       {"operator", mutator::to_string(m.op)},
                       {"span", {{"line", m.target.line}, {"col", m.target.col}, {"begin", m.target.begin},
                                 {"end", m.target.end}}},
                       {"original", m.original},
                       {"replacement", m.replacement},
                       {"description", m.describe()},
                       {"file", file}});
  }
  const nlohmann::json manifest = {{"tool", kToolName},
                                   {"version", kToolVersion},
                                   {"base", program.file},
                                   {"unified", !plain},
                                   {"mutants", entries}};
  write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  out << specs.size() << " mutants written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shadow symbolic execution for change-annotated programs"};
  app.name("shadowse");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string program, tests, mode = "shadow", out_path, dot_path, operators = "ROR,AOR,STD", out_dir;
  std::size_t limit = SIZE_MAX;
  bool plain = false;
  EngineFlags flags;

  auto* run = app.add_subcommand("run", "explore a program in shadow or plain mode and write a report");
  run->add_option("--program", program, "program file (.sl)")->required();
  run->add_option("--tests", tests, "seed tests JSON (shadow mode)");
  run->add_option("--mode", mode, "shadow | plain-old | plain-new")
      ->check(CLI::IsMember({"shadow", "plain-old", "plain-new"}))
      ->capture_default_str();
  run->add_option("--out", out_path, "report JSON file (default: stdout)");
  run->add_option("--dot", dot_path, "execution tree as Graphviz DOT");
  flags.attach(run);

  auto* cmp = app.add_subcommand("compare", "plain vs shadow diff counts for every mutant of a base program");
  cmp->add_option("--program", program, "base program file (.sl)")->required();
  cmp->add_option("--tests", tests, "seed tests JSON")->required();
  cmp->add_option("--operators", operators, "comma-separated subset of ROR,AOR,STD")->capture_default_str();
  cmp->add_option("--limit", limit, "maximum number of mutants");
  cmp->add_option("--out", out_path, "comparison JSON file");
  flags.attach(cmp);

  auto* mut = app.add_subcommand("mutate", "write unified mutants of a base program and a manifest");
  mut->add_option("--program", program, "base program file (.sl)")->required();
  mut->add_option("--operators", operators, "comma-separated subset of ROR,AOR,STD")->capture_default_str();
  mut->add_option("--limit", limit, "maximum number of mutants");
  mut->add_option("--out-dir", out_dir, "output directory")->required();
  mut->add_flag("--plain", plain, "write plain mutants instead of change-annotated programs");

  auto* ir = app.add_subcommand("ir", "print the compiled instruction listing");
  ir->add_option("--program", program, "program file (.sl)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(program, tests, mode, out_path, dot_path, flags, out, err);
    if (*cmp) return cmd_compare(program, tests, operators, limit, out_path, flags, out);
    if (*mut) return cmd_mutate(program, operators, limit, out_dir, plain, out);
    if (*ir) {
      out << frontend::compile_to_ir(load_program(program)).listing();
      return kExitOk;
    }
  } catch (const frontend::ParseError& e) {
    err << e.what() << (std::string(e.what()).ends_with("\n") ? "" : "\n");
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace shadowse::driver
