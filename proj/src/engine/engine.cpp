#include "shadowse/engine/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace shadowse::engine {

using core::Expr;
using core::Rel;
using frontend::Instr;
using frontend::OpCode;

const char* to_string(ChoiceKind k) {
  switch (k) {
    case ChoiceKind::SameTrue: return "same_true";
    case ChoiceKind::SameFalse: return "same_false";
    case ChoiceKind::DiffTrue: return "diff_true";
    case ChoiceKind::DiffFalse: return "diff_false";
    case ChoiceKind::Concrete: return "concrete";
  }
  return "?";
}

const char* to_string(TerminalKind k) {
  switch (k) {
    case TerminalKind::Return: return "return";
    case TerminalKind::AssertionFailure: return "assertion-failure";
    case TerminalKind::DivByZero: return "div-by-zero";
    case TerminalKind::LoopBoundHit: return "loop-bound-hit";
    case TerminalKind::DepthBoundHit: return "depth-bound-hit";
    case TerminalKind::StepBudgetHit: return "step-budget-hit";
  }
  return "?";
}

TerminalKind terminal_kind_from_string(const std::string& s) {
  for (auto k : {TerminalKind::Return, TerminalKind::AssertionFailure, TerminalKind::DivByZero,
                 TerminalKind::LoopBoundHit, TerminalKind::DepthBoundHit, TerminalKind::StepBudgetHit}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown terminal kind: " + s);
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Concolic: return "concolic";
    case Provenance::ConcolicDiff: return "concolic-diff";
    case Provenance::Bse: return "bse";
    case Provenance::Plain: return "plain";
  }
  return "?";
}

Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::Concolic, Provenance::ConcolicDiff, Provenance::Bse, Provenance::Plain}) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown provenance: " + s);
}

std::string PathConditionPair::canonical() const {
  std::set<std::string> parts;
  for (const auto& c : pc_old) parts.insert("old:" + c.to_string());
  for (const auto& c : pc_new) parts.insert("new:" + c.to_string());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

void append_constraint(std::vector<Constraint>& pc, const Constraint& c) {
  if (c.trivial_value() == true) return;
  pc.push_back(c);
}

std::vector<Choice> branch_choices(const BranchCond& cond) {
  const Constraint t_old = cond.c_old, f_old = cond.c_old.negated();
  const Constraint t_new = cond.c_new, f_new = cond.c_new.negated();
  std::vector<Choice> out;
  out.push_back({ChoiceKind::SameTrue, true, true, t_old, t_new});
  out.push_back({ChoiceKind::SameFalse, false, false, f_old, f_new});
  if (!(cond.c_old == cond.c_new)) {
    out.push_back({ChoiceKind::DiffTrue, false, true, f_old, t_new});
    out.push_back({ChoiceKind::DiffFalse, true, false, t_old, f_new});
  }
  out.push_back({ChoiceKind::Concrete, cond.conc_old, cond.conc_new, cond.conc_old ? t_old : f_old,
                 cond.conc_new ? t_new : f_new});
  return out;
}

// ---------------------------------------------------------------------------

struct Engine::Event {
  bool terminal = false;
  Terminal term;
  std::size_t site = 0;
  bool is_div = false;
  BranchCond cond;
  std::size_t target_true = 0;
  std::size_t target_false = 0;
};

namespace {

bool is_single(Mode m) { return m != Mode::Concolic; }
Version single_version(Mode m) { return m == Mode::PlainOld ? Version::Old : Version::New; }
bool is_new(Version v) { return v == Version::New; }

bool trivial(const BranchCond& c) { return c.c_old.trivial_value() && c.c_new.trivial_value(); }

// Sends the state down one direction of a decided branch.
void apply(ExecState& s, const BranchCond&, std::size_t site, bool is_div, std::size_t t_true, std::size_t t_false,
           bool dir) {
  if (!is_div) {
    s.ip = dir ? t_true : t_false;
  } else if (dir) {
    s.div_zero_pending = site;
  } else {
    s.div_checked = site;
  }
}

std::string assignment_text(const Assignment& a, const std::vector<std::string>& order) {
  std::string out;
  for (const auto& name : order) {
    auto it = a.find(name);
    if (it == a.end()) continue;
    if (!out.empty()) out += ", ";
    out += name + "=" + std::to_string(it->second);
  }
  return out;
}

}  // namespace

Engine::Engine(const IrProgram& ir, EngineConfig cfg) : ir_(ir), cfg_(std::move(cfg)) {
  if (cfg_.solver != "builtin") throw std::invalid_argument("unknown solver backend: " + cfg_.solver);
}

ExecState Engine::initial_state(Mode mode, const Assignment& input) const {
  ExecState s;
  s.mode = mode;
  s.slots.assign(ir_.slots.size(), ShadowValue::concrete(0));
  for (std::size_t i = 0; i < ir_.params.size(); ++i) {
    const auto& name = ir_.params[i];
    std::int32_t v = 0;
    auto it = input.find(name);
    if (it != input.end()) v = it->second;
    else if (mode == Mode::Concolic) throw std::invalid_argument("missing input " + name);
    s.slots[i] = ShadowValue::symbolic(Expr::input(name), v, v);
  }
  return s;
}

Engine::Event Engine::run_until_event(ExecState& s) const {
  Event ev;
  auto finish = [&](TerminalKind k, std::size_t site, std::string value = "") {
    ev.terminal = true;
    ev.term = {k, site, std::move(value)};
    return ev;
  };
  auto pop = [&]() {
    ShadowValue v = s.stack.back();
    s.stack.pop_back();
    return v;
  };
  const bool single = is_single(s.mode);
  const Version sv = single_version(s.mode);

  for (;;) {
    if (s.div_zero_pending) return finish(TerminalKind::DivByZero, *s.div_zero_pending);
    if (++s.steps > cfg_.step_budget) return finish(TerminalKind::StepBudgetHit, s.ip);
    const std::size_t ip = s.ip;
    const Instr& in = ir_.code.at(ip);
    std::size_t next = ip + 1;

    // Fills ev.cond for a condition given per version; returns true if the
    // branch must be decided by the caller.
    auto decide = [&](const Constraint& c_old, const Constraint& c_new, bool conc_old, bool conc_new) {
      if (single) {
        const Constraint& c = is_new(sv) ? c_new : c_old;
        ev.cond = {c, c, false, false};
        if (auto t = c.trivial_value()) {
          ev.cond.conc_old = ev.cond.conc_new = *t;
          return false;
        }
        return true;
      }
      ev.cond = {c_old, c_new, conc_old, conc_new};
      if (trivial(ev.cond)) {
        ev.cond.conc_old = *c_old.trivial_value();
        ev.cond.conc_new = *c_new.trivial_value();
        return ev.cond.conc_old != ev.cond.conc_new;
      }
      return true;
    };

    switch (in.op) {
      case OpCode::IPUSH: s.stack.push_back(ShadowValue::concrete(in.arg)); break;
      case OpCode::ILOAD: s.stack.push_back(s.slots.at(static_cast<std::size_t>(in.arg))); break;
      case OpCode::ISTORE: s.slots.at(static_cast<std::size_t>(in.arg)) = pop(); break;
      case OpCode::INEG: s.stack.back() = core::shadow_neg(s.stack.back()); break;
      case OpCode::IADD:
      case OpCode::ISUB:
      case OpCode::IMUL: {
        const auto b = pop();
        const auto a = pop();
        const auto op = in.op == OpCode::IADD ? core::BinOp::Add
                        : in.op == OpCode::ISUB ? core::BinOp::Sub
                                                : core::BinOp::Mul;
        s.stack.push_back(core::shadow_binop(op, a, b).value);
        break;
      }
      case OpCode::IDIV:
      case OpCode::IREM: {
        if (s.div_checked != ip) {
          const ShadowValue& b = s.stack.back();
          auto zero_test = [&](Version v) {
            if (!frontend::runs_in(in.region, v)) return Constraint::always(false);
            return Constraint{Rel::Eq, b.expr(is_new(v)), Expr::constant(0)};
          };
          const bool old_runs = frontend::runs_in(in.region, Version::Old);
          const bool new_runs = frontend::runs_in(in.region, Version::New);
          if (decide(zero_test(Version::Old), zero_test(Version::New), old_runs && b.conc_old() == 0,
                     new_runs && b.conc_new() == 0)) {
            ev.site = ip;
            ev.is_div = true;
            return ev;
          }
          if (ev.cond.conc_new || (!single && ev.cond.conc_old)) return finish(TerminalKind::DivByZero, ip);
        }
        s.div_checked.reset();
        const auto b = pop();
        const auto a = pop();
        s.stack.push_back(
            core::shadow_binop(in.op == OpCode::IDIV ? core::BinOp::Div : core::BinOp::Rem, a, b).value);
        break;
      }
      case OpCode::ICMP: {
        const auto b = pop();
        const auto a = pop();
        s.stack.push_back(core::shadow_binop(core::to_binop(in.rel), a, b).value);
        break;
      }
      case OpCode::IF_CMP:
      case OpCode::IF_TRUE: {
        Constraint c_old, c_new;
        bool conc_old = false, conc_new = false;
        if (in.op == OpCode::IF_CMP) {
          const auto b = pop();
          const auto a = pop();
          c_old = {in.rel, a.old_expr(), b.old_expr()};
          c_new = {in.rel, a.new_expr(), b.new_expr()};
          conc_old = core::eval_rel(in.rel, a.conc_old(), b.conc_old());
          conc_new = core::eval_rel(in.rel, a.conc_new(), b.conc_new());
        } else {
          const auto v = pop();
          c_old = Constraint::truthy(v.old_expr());
          c_new = Constraint::truthy(v.new_expr());
          conc_old = v.conc_old() != 0;
          conc_new = v.conc_new() != 0;
        }
        const auto target = static_cast<std::size_t>(in.arg);
        if (decide(c_old, c_new, conc_old, conc_new)) {
          ev.site = ip;
          ev.target_true = target;
          ev.target_false = ip + 1;
          return ev;
        }
        if (ev.cond.conc_new) next = target;
        break;
      }
      case OpCode::GOTO:
        next = static_cast<std::size_t>(in.arg);
        if (next <= ip && ++s.loop_counts[ip] > cfg_.loop_bound) return finish(TerminalKind::LoopBoundHit, ip);
        break;
      case OpCode::CHANGE: {
        const auto b = pop();
        const auto a = pop();
        s.touched_change = true;
        if (s.mode == Mode::Concolic) s.stack.push_back(core::make_diff(a, b));
        else s.stack.push_back(s.mode == Mode::PlainOld ? a : b);
        break;
      }
      case OpCode::ASSERT: return finish(TerminalKind::AssertionFailure, ip);
      case OpCode::RETURN: {
        const auto v = pop();
        return finish(TerminalKind::Return, ip, v.expr(!(s.mode == Mode::PlainOld)).to_string());
      }
      case OpCode::HALT: return finish(TerminalKind::Return, ip, "0");
    }
    s.ip = next;
  }
}

std::vector<Constraint> Engine::conjunction(const PathConditionPair& pc, const std::vector<Constraint>& extra) const {
  std::vector<Constraint> out;
  auto add = [&](const Constraint& c) {
    if (c.trivial_value() == true) return;
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const auto& c : pc.pc_old) add(c);
  for (const auto& c : pc.pc_new) add(c);
  for (const auto& c : extra) add(c);
  return out;
}

solver::SolverResult Engine::query(const std::vector<Constraint>& constraints, bool want_model) {
  solver::Conjunction conj;
  conj.constraints = constraints;
  conj.inputs = ir_.params;
  ++queries_;
  if (!cfg_.emit_smt_dir.empty()) {
    std::filesystem::create_directories(cfg_.emit_smt_dir);
    char name[32];
    std::snprintf(name, sizeof name, "query_%06llu.smt2", static_cast<unsigned long long>(queries_));
    std::ofstream(std::filesystem::path(cfg_.emit_smt_dir) / name) << solver::to_smtlib(conj);
  }
  for (const auto& c : constraints) {
    if (c.trivial_value() == false) return solver::Unsat{};
  }
  solver::SolverOptions opts;
  opts.node_cap = cfg_.solver_node_cap;
  opts.policy_model = want_model;
  return solver::check_sat(conj, opts);
}

std::optional<Assignment> Engine::witness(const PathConditionPair& pc) {
  auto r = query(conjunction(pc), true);
  if (auto* sat = std::get_if<solver::Sat>(&r)) return sat->model;
  warnings_.push_back("no model for " + pc.new_text() + ": " + solver::to_string(r));
  return std::nullopt;
}

int Engine::add_node(int parent, std::string edge, std::size_t site, const PathConditionPair& pc,
                     std::string status, std::string note) {
  TreeNode n;
  n.id = static_cast<int>(tree_.size());
  n.parent = parent;
  n.edge = std::move(edge);
  n.site = site == SIZE_MAX ? "" : ir_.site_label(site);
  n.pc = pc;
  n.status = std::move(status);
  n.note = std::move(note);
  tree_.push_back(std::move(n));
  return tree_.back().id;
}

namespace {

std::string status_of(const solver::SolverResult& r) {
  if (solver::is_sat(r)) return "SAT";
  if (solver::is_unsat(r)) return "UNSAT";
  return "UNKNOWN";
}

std::string terminal_note(const Terminal& t, const IrProgram& ir) {
  std::string out = to_string(t.kind);
  if (t.kind == TerminalKind::Return) out += " " + t.value;
  else out += " @" + ir.site_label(t.site);
  return out;
}

}  // namespace

ConcolicResult Engine::concolic_run(const Assignment& input, const std::string& test_name) {
  ConcolicResult result;
  ExecState s = initial_state(Mode::Concolic, input);
  s.node = add_node(-1, "test " + test_name, SIZE_MAX, {}, "SAT", assignment_text(input, ir_.params));

  for (;;) {
    Event ev = run_until_event(s);
    if (ev.terminal) {
      result.trace.push_back({ev.term, s.pc, input, Provenance::Concolic});
      tree_[static_cast<std::size_t>(s.node)].note += " | " + terminal_note(ev.term, ir_);
      break;
    }
    BranchEvent be{ev.site, s.pc, ev.cond, {}};
    const bool d_old = ev.cond.conc_old, d_new = ev.cond.conc_new;
    const bool input_independent = trivial(ev.cond);

    auto extended = [&](const Choice& ch) {
      PathConditionPair pc = s.pc;
      append_constraint(pc.pc_old, ch.add_old);
      append_constraint(pc.pc_new, ch.add_new);
      return pc;
    };
    auto save_divergence = [&](const Choice& ch, const PathConditionPair& pc, int node) {
      auto w = witness(pc);
      if (!w) return;
      DivergencePoint dp;
      dp.snapshot = s;
      dp.snapshot.pc = pc;
      dp.snapshot.node = node;
      apply(dp.snapshot, ev.cond, ev.site, ev.is_div, ev.target_true, ev.target_false, ch.dir_new);
      dp.kind = ch.kind;
      dp.site = ev.site;
      dp.witness = *w;
      dp.test = test_name;
      result.divergences.push_back(std::move(dp));
    };

    const auto choices = branch_choices(ev.cond);
    for (const auto& ch : choices) {
      if (ch.kind != ChoiceKind::DiffTrue && ch.kind != ChoiceKind::DiffFalse) continue;
      const auto pc = extended(ch);
      const bool realized = ch.dir_old == d_old && ch.dir_new == d_new;
      if (realized) {
        // The seed itself diverges here. Only a divergence that does not
        // depend on the input at all is worth a BSE restart.
        be.choices.emplace_back(ch.kind, "SAT");
        if (input_independent) {
          const int node = add_node(s.node, to_string(ch.kind), ev.site, pc, "SAT", "realized");
          save_divergence(ch, pc, node);
        }
        continue;
      }
      const auto r = query(conjunction(pc), false);
      const auto status = status_of(r);
      be.choices.emplace_back(ch.kind, status);
      const int node = add_node(s.node, to_string(ch.kind), ev.site, pc, status);
      if (status == "SAT") save_divergence(ch, pc, node);
      if (status == "UNKNOWN")
        warnings_.push_back(std::string("skipped ") + to_string(ch.kind) + " at " + ir_.site_label(ev.site) + ": " +
                            solver::to_string(r));
    }

    const Choice& conc = choices.back();
    const auto pc = extended(conc);
    be.choices.emplace_back(ChoiceKind::Concrete, "SAT");
    result.events.push_back(be);
    const int node = add_node(s.node, "concrete", ev.site, pc, "SAT");

    if (d_old != d_new) {
      const auto out = differ::exec_concrete_version(ir_, Version::New, input, cfg_.loop_bound);
      Terminal t;
      switch (out.kind) {
        case differ::ConcreteOutcome::Kind::Returned:
          t = {TerminalKind::Return, out.site, std::to_string(out.value)};
          break;
        case differ::ConcreteOutcome::Kind::AssertionFailure:
          t = {TerminalKind::AssertionFailure, out.site, ""};
          break;
        case differ::ConcreteOutcome::Kind::DivByZero: t = {TerminalKind::DivByZero, out.site, ""}; break;
        case differ::ConcreteOutcome::Kind::LoopBoundHit: t = {TerminalKind::LoopBoundHit, out.site, ""}; break;
      }
      result.trace.push_back({t, pc, input, Provenance::ConcolicDiff});
      tree_[static_cast<std::size_t>(node)].note = "diverged; new: " + terminal_note(t, ir_);
      break;
    }
    s.pc = pc;
    s.node = node;
    ++s.depth;
    apply(s, ev.cond, ev.site, ev.is_div, ev.target_true, ev.target_false, d_new);
  }
  result.touched_change = s.touched_change;
  return result;
}

std::vector<PathRecord> Engine::explore(ExecState start) {
  using Key = std::tuple<std::uint32_t, std::size_t, int, std::uint64_t>;
  struct Item {
    Key key;
    ExecState state;
  };
  auto later = [](const Item& a, const Item& b) { return a.key > b.key; };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> frontier(later);
  std::uint64_t seq = 0;
  frontier.push({Key{start.depth, 0, 0, seq++}, std::move(start)});

  const Provenance prov = frontier.top().state.mode == Mode::Bse ? Provenance::Bse : Provenance::Plain;
  std::vector<PathRecord> records;
  while (!frontier.empty()) {
    ExecState s = frontier.top().state;
    frontier.pop();
    Event ev = run_until_event(s);
    auto& node = tree_[static_cast<std::size_t>(s.node)];
    if (ev.terminal) {
      node.note = terminal_note(ev.term, ir_);
      records.push_back({ev.term, s.pc, witness(s.pc), prov});
      continue;
    }
    if (cfg_.bse_depth && s.depth >= *cfg_.bse_depth) {
      Terminal t{TerminalKind::DepthBoundHit, ev.site, ""};
      node.note = terminal_note(t, ir_);
      records.push_back({t, s.pc, witness(s.pc), prov});
      continue;
    }
    const bool on_new = s.mode != Mode::PlainOld;
    for (bool dir : {true, false}) {
      const Constraint c = dir ? ev.cond.c_new : ev.cond.c_new.negated();
      PathConditionPair pc = s.pc;
      append_constraint(on_new ? pc.pc_new : pc.pc_old, c);
      const auto r = query(conjunction(pc), false);
      const auto status = status_of(r);
      const int child = add_node(s.node, dir ? "same_true" : "same_false", ev.site, pc, status);
      if (status == "UNKNOWN") {
        warnings_.push_back("skipped branch at " + ir_.site_label(ev.site) + ": " + solver::to_string(r));
        continue;
      }
      if (status != "SAT") continue;
      ExecState next = s;
      next.pc = std::move(pc);
      next.node = child;
      ++next.depth;
      apply(next, ev.cond, ev.site, ev.is_div, ev.target_true, ev.target_false, dir);
      frontier.push({Key{next.depth, ev.site, dir ? 0 : 1, seq++}, std::move(next)});
    }
  }
  return records;
}

std::vector<PathRecord> Engine::bse_explore(const DivergencePoint& dp) {
  ExecState s = dp.snapshot;
  s.mode = Mode::Bse;
  s.depth = 0;
  for (auto& v : s.slots) v = v.project(true);
  for (auto& v : s.stack) v = v.project(true);
  if (s.node < 0) s.node = add_node(-1, to_string(dp.kind), dp.site, s.pc, "SAT");
  return explore(std::move(s));
}

std::vector<PathRecord> Engine::explore_plain(Version version) {
  ExecState s = initial_state(version == Version::Old ? Mode::PlainOld : Mode::PlainNew, {});
  s.node = add_node(-1, version == Version::Old ? "plain old" : "plain new", SIZE_MAX, {}, "SAT");
  return explore(std::move(s));
}

// ---------------------------------------------------------------------------

ConcolicResult concolic_run(const IrProgram& ir, const Assignment& input, const EngineConfig& cfg) {
  return Engine(ir, cfg).concolic_run(input);
}

std::vector<PathRecord> bse_explore(const IrProgram& ir, const DivergencePoint& dp, const EngineConfig& cfg) {
  DivergencePoint copy = dp;
  copy.snapshot.node = -1;
  return Engine(ir, cfg).bse_explore(copy);
}

ShadowReport run_shadow(const IrProgram& ir, const std::vector<TestCase>& tests, const EngineConfig& cfg) {
  Engine engine(ir, cfg);
  ShadowReport report;
  std::set<std::string> dp_keys;
  std::vector<PathRecord> diff_records;
  std::uint64_t paths = 0;

  for (const auto& t : tests) {
    auto r = engine.concolic_run(t.input, t.name);
    TestSummary sum;
    sum.name = t.name;
    sum.input = t.input;
    sum.touched_change = r.touched_change;
    sum.divergences = r.divergences.size();
    sum.path = r.trace.front();
    report.tests.push_back(sum);
    ++paths;
    if (!r.touched_change) report.warnings.push_back("test " + t.name + " did not touch patch");
    if (sum.path.provenance == Provenance::ConcolicDiff) diff_records.push_back(sum.path);
    for (auto& dp : r.divergences) {
      const std::string key = std::to_string(dp.site) + "|" + to_string(dp.kind) + "|" + dp.snapshot.pc.canonical();
      if (dp_keys.insert(key).second) report.divergences.push_back(std::move(dp));
    }
  }
  for (const auto& dp : report.divergences) {
    auto recs = engine.bse_explore(dp);
    paths += recs.size();
    diff_records.insert(diff_records.end(), recs.begin(), recs.end());
  }

  // One diff path per generated input; the first record (concolic before
  // BSE, BSE in exploration order) wins.
  std::set<Assignment> seen;
  for (auto& rec : diff_records) {
    if (!rec.input) continue;
    if (!seen.insert(*rec.input).second) continue;
    DiffPath d;
    d.classification = differ::classify_input(ir, *rec.input, cfg.loop_bound);
    d.record = std::move(rec);
    report.diff_paths.push_back(std::move(d));
  }

  report.tree = engine.tree();
  report.warnings.insert(report.warnings.end(), engine.warnings().begin(), engine.warnings().end());
  report.counters.nodes = report.tree.size();
  report.counters.solver_queries = engine.solver_queries();
  report.counters.paths = paths;
  report.counters.diff_paths = report.diff_paths.size();
  return report;
}

PlainReport run_plain(const IrProgram& ir, Version version, const EngineConfig& cfg) {
  Engine engine(ir, cfg);
  PlainReport report;
  report.version = version;
  report.paths = engine.explore_plain(version);
  report.tree = engine.tree();
  report.warnings = engine.warnings();
  report.counters.nodes = report.tree.size();
  report.counters.solver_queries = engine.solver_queries();
  report.counters.paths = report.paths.size();
  return report;
}

}  // namespace shadowse::engine
