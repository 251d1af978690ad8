#include "shadowse/solver/solver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "linear.hpp"

namespace shadowse::solver {

using detail::i128;
using detail::LinCon;

Conjunction Conjunction::of(std::vector<Constraint> constraints) {
  Conjunction c;
  for (const auto& k : constraints) {
    k.lhs.collect_inputs(c.inputs);
    k.rhs.collect_inputs(c.inputs);
  }
  c.constraints = std::move(constraints);
  return c;
}

Bounds Conjunction::bounds_of(const std::string& input) const {
  auto it = bounds.find(input);
  return it == bounds.end() ? Bounds{} : it->second;
}

void Conjunction::validate() const {
  std::vector<std::string> used;
  for (const auto& k : constraints) {
    k.lhs.collect_inputs(used);
    k.rhs.collect_inputs(used);
  }
  for (const auto& name : used) {
    if (std::find(inputs.begin(), inputs.end(), name) == inputs.end())
      throw std::invalid_argument("constraint mentions undeclared input '" + name + "'");
  }
}

std::string to_string(const SolverResult& r) {
  if (const auto* s = std::get_if<Sat>(&r)) {
    std::string out = "SAT [";
    bool first = true;
    for (const auto& [k, v] : s->model) {
      if (!first) out += ", ";
      first = false;
      out += k + "=" + std::to_string(v);
    }
    return out + "]";
  }
  if (is_unsat(r)) return "UNSAT";
  return "UNKNOWN (" + std::get<Unknown>(r).reason + ")";
}

namespace {

// Interval propagation rounds per search node before the node is treated as
// slowly converging (and the rational relaxation is consulted).
constexpr int kPropagationRounds = 64;
constexpr std::size_t kRelaxationRowCap = 2000;
constexpr i128 kRelaxationCoefCap = static_cast<i128>(1) << 100;

enum class Status { Sat, Unsat, Unknown };

struct Prepared {
  std::size_t n = 0;
  std::vector<LinCon> cons;
  std::vector<i128> lo, hi;
  std::optional<std::string> unknown_reason;
  bool trivially_unsat = false;
};

struct SearchResult {
  Status status = Status::Unknown;
  std::vector<i128> point;
  std::string reason;
};

// Divides by the coefficient gcd, tightening inequalities. Returns the
// constant truth value when no variable is left.
std::optional<bool> normalize(LinCon& c) {
  i128 g = 0;
  for (auto v : c.a) g = detail::gcd128(g, v);
  if (g == 0) {
    switch (c.kind) {
      case LinCon::Kind::Le: return c.b <= 0;
      case LinCon::Kind::Eq: return c.b == 0;
      case LinCon::Kind::Ne: return c.b != 0;
    }
  }
  switch (c.kind) {
    case LinCon::Kind::Le:
      for (auto& v : c.a) v /= g;
      c.b = detail::ceil_div(c.b, g);
      break;
    case LinCon::Kind::Eq:
      if (c.b % g != 0) return false;
      for (auto& v : c.a) v /= g;
      c.b /= g;
      break;
    case LinCon::Kind::Ne:
      if (c.b % g != 0) return true;
      for (auto& v : c.a) v /= g;
      c.b /= g;
      break;
  }
  return std::nullopt;
}

Prepared prepare(const Conjunction& c) {
  c.validate();
  Prepared p;
  p.n = c.inputs.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < p.n; ++i) {
    index[c.inputs[i]] = i;
    const auto b = c.bounds_of(c.inputs[i]);
    p.lo.push_back(b.lo);
    p.hi.push_back(b.hi);
    if (b.lo > b.hi) p.trivially_unsat = true;
  }
  for (const auto& k : c.constraints) {
    auto lc = detail::to_lincon(k, index, p.n);
    if (!lc) {
      p.unknown_reason = "nonlinear: " + k.to_string();
      continue;
    }
    p.cons.push_back(std::move(*lc));
  }
  return p;
}

LinCon bound_row(std::size_t n, std::size_t var, i128 coef, i128 b) {
  LinCon c;
  c.a.assign(n, 0);
  c.a[var] = coef;
  c.b = b;
  c.kind = LinCon::Kind::Le;
  return c;
}

struct Substitution {
  std::size_t var;
  LinCon eq;  // sum(a x) + b = 0 with a[var] = +-1
};

bool within_limit(const LinCon& c) {
  if (detail::abs128(c.b) > detail::kCoefLimit) return false;
  return std::all_of(c.a.begin(), c.a.end(), [](i128 v) { return detail::abs128(v) <= detail::kCoefLimit; });
}

class Search {
 public:
  Search(const Prepared& base, const std::vector<LinCon>& extra, const SolverOptions& opts)
      : n_(base.n), lo0_(base.lo), hi0_(base.hi), opts_(opts) {
    cons_ = base.cons;
    cons_.insert(cons_.end(), extra.begin(), extra.end());
    eliminated_.assign(n_, false);
    if (base.trivially_unsat) unsat_ = true;
  }

  SearchResult run() {
    if (unsat_ || !simplify()) return {Status::Unsat, {}, {}};
    if (overflow_) return {Status::Unknown, {}, "coefficient overflow"};
    std::vector<i128> lo = lo0_, hi = hi0_;
    return dfs(std::move(lo), std::move(hi));
  }

 private:
  // Normalizes and removes unit-coefficient equalities by substitution.
  bool simplify() {
    std::vector<LinCon> kept;
    for (auto& c : cons_) {
      auto t = normalize(c);
      if (t.has_value()) {
        if (!*t) return false;
        continue;
      }
      kept.push_back(std::move(c));
    }
    cons_ = std::move(kept);

    for (;;) {
      std::optional<std::size_t> eq_idx;
      std::size_t var = 0;
      for (std::size_t i = 0; i < cons_.size() && !eq_idx; ++i) {
        if (cons_[i].kind != LinCon::Kind::Eq) continue;
        for (std::size_t k = 0; k < n_; ++k) {
          if (detail::abs128(cons_[i].a[k]) == 1) {
            eq_idx = i;
            var = k;
            break;
          }
        }
      }
      if (!eq_idx) {
        if (!split_equality()) break;
        continue;
      }
      LinCon eq = cons_[*eq_idx];
      cons_.erase(cons_.begin() + static_cast<std::ptrdiff_t>(*eq_idx));
      cons_.push_back(bound_row(n_, var, 1, -hi0_[var]));
      cons_.push_back(bound_row(n_, var, -1, lo0_[var]));
      const i128 ck = eq.a[var];
      std::vector<LinCon> next;
      for (auto c : cons_) {
        const i128 dk = c.a[var];
        if (dk != 0) {
          const i128 m = dk * ck;
          for (std::size_t j = 0; j < n_; ++j) c.a[j] -= m * eq.a[j];
          c.b -= m * eq.b;
          if (!within_limit(c)) {
            overflow_ = true;
            return true;
          }
        }
        auto t = normalize(c);
        if (t.has_value()) {
          if (!*t) return false;
          continue;
        }
        next.push_back(std::move(c));
      }
      cons_ = std::move(next);
      eliminated_[var] = true;
      subs_.push_back({var, std::move(eq)});
    }
    return true;
  }

  // Equality without a unit coefficient: with m = min|a_k| + 1, introduces
  // sigma with  m*sigma = sum(mod_hat(a_i) x_i) + mod_hat(b),  which is implied
  // and has a unit coefficient on x_k. Returns false if there is no equality.
  bool split_equality() {
    std::optional<std::size_t> eq_idx;
    for (std::size_t i = 0; i < cons_.size(); ++i) {
      if (cons_[i].kind == LinCon::Kind::Eq) {
        eq_idx = i;
        break;
      }
    }
    if (!eq_idx) return false;
    const LinCon& eq = cons_[*eq_idx];
    std::optional<std::size_t> k;
    for (std::size_t j = 0; j < n_; ++j) {
      if (eq.a[j] != 0 && (!k || detail::abs128(eq.a[j]) < detail::abs128(eq.a[*k]))) k = j;
    }
    const i128 m = detail::abs128(eq.a[*k]) + 1;
    auto mod_hat = [m](i128 v) { return v - m * detail::floor_div(2 * v + m, 2 * m); };
    LinCon row;
    row.kind = LinCon::Kind::Eq;
    row.a.assign(n_ + 1, 0);
    i128 lo = 0, hi = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      row.a[j] = mod_hat(eq.a[j]);
      if (row.a[j] > 0) {
        lo += row.a[j] * lo0_[j];
        hi += row.a[j] * hi0_[j];
      } else {
        lo += row.a[j] * hi0_[j];
        hi += row.a[j] * lo0_[j];
      }
    }
    row.b = mod_hat(eq.b);
    row.a[n_] = -m;
    lo += row.b;
    hi += row.b;
    for (auto& c : cons_) c.a.push_back(0);
    for (auto& s : subs_) s.eq.a.push_back(0);
    lo0_.push_back(detail::ceil_div(lo, m));
    hi0_.push_back(detail::floor_div(hi, m));
    eliminated_.push_back(false);
    ++n_;
    cons_.push_back(std::move(row));
    return true;
  }

  // Tightens a[i] * x[i] + rest <= 0 over every i. Returns false on conflict.
  bool propagate_le(const std::vector<i128>& a, i128 b, std::vector<i128>& lo, std::vector<i128>& hi,
                    bool& changed) {
    i128 min_sum = b;
    for (std::size_t j = 0; j < n_; ++j) {
      if (a[j] > 0) min_sum += a[j] * lo[j];
      else if (a[j] < 0) min_sum += a[j] * hi[j];
    }
    if (min_sum > 0) return false;
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      const i128 contrib = a[i] > 0 ? a[i] * lo[i] : a[i] * hi[i];
      const i128 rest = min_sum - contrib;
      if (a[i] > 0) {
        const i128 nh = detail::floor_div(-rest, a[i]);
        if (nh < hi[i]) {
          hi[i] = nh;
          changed = true;
        }
      } else {
        const i128 nl = detail::ceil_div(-rest, a[i]);
        if (nl > lo[i]) {
          lo[i] = nl;
          changed = true;
        }
      }
      if (lo[i] > hi[i]) return false;
    }
    return true;
  }

  bool propagate_ne(const LinCon& c, std::vector<i128>& lo, std::vector<i128>& hi, bool& changed) {
    std::optional<std::size_t> free_var;
    i128 fixed_sum = c.b;
    for (std::size_t j = 0; j < n_; ++j) {
      if (c.a[j] == 0) continue;
      if (lo[j] == hi[j]) {
        fixed_sum += c.a[j] * lo[j];
      } else if (free_var) {
        return true;  // two or more free variables: nothing to prune
      } else {
        free_var = j;
      }
    }
    if (!free_var) return fixed_sum != 0;
    const std::size_t k = *free_var;
    if ((-fixed_sum) % c.a[k] != 0) return true;
    const i128 forbidden = (-fixed_sum) / c.a[k];
    if (forbidden == lo[k]) {
      ++lo[k];
      changed = true;
    } else if (forbidden == hi[k]) {
      --hi[k];
      changed = true;
    }
    return lo[k] <= hi[k];
  }

  // Returns {consistent, converged}.
  std::pair<bool, bool> propagate(std::vector<i128>& lo, std::vector<i128>& hi) {
    for (int round = 0; round < kPropagationRounds; ++round) {
      bool changed = false;
      for (const auto& c : cons_) {
        switch (c.kind) {
          case LinCon::Kind::Le:
            if (!propagate_le(c.a, c.b, lo, hi, changed)) return {false, true};
            break;
          case LinCon::Kind::Eq: {
            if (!propagate_le(c.a, c.b, lo, hi, changed)) return {false, true};
            std::vector<i128> neg(c.a);
            for (auto& v : neg) v = -v;
            if (!propagate_le(neg, -c.b, lo, hi, changed)) return {false, true};
            break;
          }
          case LinCon::Kind::Ne:
            if (!propagate_ne(c, lo, hi, changed)) return {false, true};
            break;
        }
      }
      if (!changed) return {true, true};
    }
    return {true, false};
  }

  // Fourier-Motzkin over the inequalities and current box, with integer
  // tightening of each derived row. True only if infeasibility is proven.
  bool relaxation_infeasible(const std::vector<i128>& lo, const std::vector<i128>& hi) {
    using Row = std::vector<i128>;
    std::map<Row, i128> rows;  // coefficients -> tightest constant
    auto add = [&](Row a, i128 b) -> bool {
      i128 g = 0;
      for (auto v : a) g = detail::gcd128(g, v);
      if (g == 0) return b <= 0;
      for (auto& v : a) v /= g;
      b = detail::ceil_div(b, g);
      auto [it, inserted] = rows.emplace(std::move(a), b);
      if (!inserted) it->second = std::max(it->second, b);
      return true;
    };
    for (const auto& c : cons_) {
      if (c.kind == LinCon::Kind::Ne) continue;
      if (!add(c.a, c.b)) return true;
      if (c.kind == LinCon::Kind::Eq) {
        Row neg(c.a);
        for (auto& v : neg) v = -v;
        if (!add(neg, -c.b)) return true;
      }
    }
    for (std::size_t k = 0; k < n_; ++k) {
      if (eliminated_[k]) continue;
      Row up(n_, 0), down(n_, 0);
      up[k] = 1;
      down[k] = -1;
      add(up, -hi[k]);
      add(down, lo[k]);
    }

    std::vector<bool> done(n_, false);
    for (std::size_t step = 0; step < n_; ++step) {
      std::optional<std::size_t> best;
      std::size_t best_cost = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        if (done[k]) continue;
        std::size_t pos = 0, neg = 0;
        for (const auto& [a, b] : rows) {
          if (a[k] > 0) ++pos;
          else if (a[k] < 0) ++neg;
        }
        if (pos + neg == 0) {
          done[k] = true;
          continue;
        }
        const std::size_t cost = pos * neg;
        if (!best || cost < best_cost) {
          best = k;
          best_cost = cost;
        }
      }
      if (!best) break;
      const std::size_t k = *best;
      done[k] = true;
      std::vector<std::pair<Row, i128>> pos, neg;
      std::map<Row, i128> next;
      for (auto& [a, b] : rows) {
        if (a[k] > 0) pos.emplace_back(a, b);
        else if (a[k] < 0) neg.emplace_back(a, b);
        else next.emplace(a, b);
      }
      rows = std::move(next);
      for (const auto& [pa, pb] : pos) {
        for (const auto& [na, nb] : neg) {
          const i128 mp = -na[k];
          const i128 mn = pa[k];
          Row a(n_, 0);
          for (std::size_t j = 0; j < n_; ++j) {
            a[j] = mp * pa[j] + mn * na[j];
            if (detail::abs128(a[j]) > kRelaxationCoefCap) return false;
          }
          const i128 b = mp * pb + mn * nb;
          if (detail::abs128(b) > kRelaxationCoefCap) return false;
          if (!add(std::move(a), b)) return true;
        }
      }
      if (rows.size() > kRelaxationRowCap) return false;
    }
    return false;
  }

  bool all_hold(const std::vector<i128>& x) const {
    for (const auto& c : cons_) {
      i128 s = c.b;
      for (std::size_t j = 0; j < n_; ++j) s += c.a[j] * x[j];
      switch (c.kind) {
        case LinCon::Kind::Le:
          if (s > 0) return false;
          break;
        case LinCon::Kind::Eq:
          if (s != 0) return false;
          break;
        case LinCon::Kind::Ne:
          if (s == 0) return false;
          break;
      }
    }
    return true;
  }

  std::vector<i128> reconstruct(std::vector<i128> x) const {
    for (auto it = subs_.rbegin(); it != subs_.rend(); ++it) {
      const auto& eq = it->eq;
      i128 s = eq.b;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != it->var) s += eq.a[j] * x[j];
      }
      x[it->var] = -eq.a[it->var] * s;
    }
    return x;
  }

  SearchResult dfs(std::vector<i128> lo, std::vector<i128> hi) {
    struct Node {
      std::vector<i128> lo, hi;
    };
    std::vector<Node> stack;
    for (std::size_t k = 0; k < n_; ++k) {
      if (eliminated_[k]) lo[k] = hi[k] = 0;
    }
    stack.push_back({std::move(lo), std::move(hi)});
    std::uint64_t nodes = 0;
    bool root = true;
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (++nodes > opts_.node_cap) return {Status::Unknown, {}, "node cap reached"};
      auto [ok, converged] = propagate(node.lo, node.hi);
      if (!ok) continue;
      if ((root || !converged) && relaxation_infeasible(node.lo, node.hi)) {
        root = false;
        continue;
      }
      root = false;

      std::optional<std::size_t> pick;
      for (std::size_t k = 0; k < n_; ++k) {
        if (eliminated_[k] || node.lo[k] == node.hi[k]) continue;
        if (!pick || node.hi[k] - node.lo[k] < node.hi[*pick] - node.lo[*pick]) pick = k;
      }
      if (!pick) {
        if (all_hold(node.lo)) return {Status::Sat, reconstruct(node.lo), {}};
        continue;
      }
      const std::size_t k = *pick;
      const i128 mid = detail::floor_div(node.lo[k] + node.hi[k], 2);
      Node low = node, high = std::move(node);
      low.hi[k] = mid;
      high.lo[k] = mid + 1;
      // The half holding values of smaller magnitude is explored first.
      const bool high_first = high.lo[k] > 0 ? false : (low.hi[k] < 0 ? true : false);
      if (high_first) {
        stack.push_back(std::move(low));
        stack.push_back(std::move(high));
      } else {
        stack.push_back(std::move(high));
        stack.push_back(std::move(low));
      }
    }
    return {Status::Unsat, {}, {}};
  }

  std::size_t n_;
  std::vector<i128> lo0_, hi0_;
  SolverOptions opts_;
  std::vector<LinCon> cons_;
  std::vector<bool> eliminated_;
  std::vector<Substitution> subs_;
  bool unsat_ = false;
  bool overflow_ = false;
};

SearchResult solve(const Prepared& p, const std::vector<LinCon>& extra, const SolverOptions& opts) {
  if (p.trivially_unsat) return {Status::Unsat, {}, {}};
  Search s(p, extra, opts);
  auto r = s.run();
  // An UNSAT core among the linear constraints stays UNSAT even if other
  // constraints were not linear; anything else is undecided.
  if (p.unknown_reason && r.status != Status::Unsat) return {Status::Unknown, {}, *p.unknown_reason};
  return r;
}

LinCon eq_row(std::size_t n, std::size_t var, i128 value) {
  LinCon c = bound_row(n, var, 1, -value);
  c.kind = LinCon::Kind::Eq;
  return c;
}

Assignment to_assignment(const Conjunction& c, const std::vector<i128>& point) {
  Assignment m;
  for (std::size_t i = 0; i < c.inputs.size(); ++i) m[c.inputs[i]] = static_cast<std::int32_t>(point[i]);
  return m;
}

// Lexicographic minimal-magnitude model; nullopt if a sub-check was undecided.
std::optional<std::vector<i128>> policy_model(const Prepared& p, const SolverOptions& opts) {
  std::vector<LinCon> extra;
  std::vector<i128> last;
  auto feasible = [&](const std::vector<LinCon>& more) -> std::optional<bool> {
    auto all = extra;
    all.insert(all.end(), more.begin(), more.end());
    auto r = solve(p, all, opts);
    if (r.status == Status::Unknown) return std::nullopt;
    if (r.status == Status::Sat) last = r.point;
    return r.status == Status::Sat;
  };
  for (std::size_t k = 0; k < p.n; ++k) {
    auto ball = [&](i128 d) {
      return std::vector<LinCon>{bound_row(p.n, k, 1, -d), bound_row(p.n, k, -1, -d)};
    };
    auto zero = feasible({eq_row(p.n, k, 0)});
    if (!zero) return std::nullopt;
    i128 value = 0;
    if (!*zero) {
      const i128 limit = std::max(detail::abs128(p.lo[k]), detail::abs128(p.hi[k]));
      i128 bad = 0, good = 1;
      for (;;) {
        auto r = feasible(ball(good));
        if (!r) return std::nullopt;
        if (*r) break;
        if (good >= limit) return std::nullopt;  // inconsistent with an earlier SAT answer
        bad = good;
        good = std::min(good * 2, limit);
      }
      while (good - bad > 1) {
        const i128 mid = bad + (good - bad) / 2;
        auto r = feasible(ball(mid));
        if (!r) return std::nullopt;
        if (*r) good = mid;
        else bad = mid;
      }
      auto pos = feasible({eq_row(p.n, k, good)});
      if (!pos) return std::nullopt;
      value = *pos ? good : -good;
    }
    extra.push_back(eq_row(p.n, k, value));
  }
  auto r = solve(p, extra, opts);
  if (r.status != Status::Sat) return std::nullopt;
  return r.point;
}

}  // namespace

bool satisfies(const Conjunction& c, const Assignment& model) {
  for (const auto& name : c.inputs) {
    auto it = model.find(name);
    if (it == model.end()) return false;
    const auto b = c.bounds_of(name);
    if (it->second < b.lo || it->second > b.hi) return false;
  }
  for (const auto& k : c.constraints) {
    auto l = detail::eval_math(k.lhs, model);
    auto r = detail::eval_math(k.rhs, model);
    if (!l || !r) return false;
    bool holds = false;
    switch (k.rel) {
      case core::Rel::Eq: holds = *l == *r; break;
      case core::Rel::Ne: holds = *l != *r; break;
      case core::Rel::Lt: holds = *l < *r; break;
      case core::Rel::Le: holds = *l <= *r; break;
      case core::Rel::Gt: holds = *l > *r; break;
      case core::Rel::Ge: holds = *l >= *r; break;
    }
    if (!holds) return false;
  }
  return true;
}

namespace {

SolverResult check_impl(const Conjunction& c, const SolverOptions& opts, bool want_policy_model) {
  const auto p = prepare(c);
  auto first = solve(p, {}, opts);
  if (first.status == Status::Unsat) return Unsat{};
  if (first.status == Status::Unknown) return Unknown{first.reason};
  std::vector<i128> point = first.point;
  if (want_policy_model) {
    if (auto m = policy_model(p, opts)) point = *m;
  }
  auto model = to_assignment(c, point);
  if (!satisfies(c, model))
    throw std::logic_error("solver produced a model that violates " + core::to_string(c.constraints));
  return Sat{std::move(model)};
}

}  // namespace

SolverResult check_sat(const Conjunction& c, const SolverOptions& opts) {
  return check_impl(c, opts, opts.policy_model);
}

Assignment get_model(const Conjunction& c, const SolverOptions& opts) {
  auto r = check_impl(c, opts, true);
  if (auto* s = std::get_if<Sat>(&r)) return std::move(s->model);
  throw ModelError("get_model on a conjunction that is " + to_string(r));
}

SolverResult brute_force_check(const Conjunction& c, Window window) {
  c.validate();
  const std::size_t n = c.inputs.size();
  // Candidate values per input in model-policy order: 0, 1, -1, 2, -2, ...
  std::vector<std::vector<std::int32_t>> values(n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = c.bounds_of(c.inputs[i]);
    const std::int64_t lo = std::max<std::int64_t>(window.lo, b.lo);
    const std::int64_t hi = std::min<std::int64_t>(window.hi, b.hi);
    if (lo > hi) return Unsat{};
    const std::uint64_t count = static_cast<std::uint64_t>(hi - lo + 1);
    if (count > kBruteForceCap || total * count > kBruteForceCap)
      throw WindowTooLarge("brute force window exceeds " + std::to_string(kBruteForceCap) + " assignments");
    total *= count;
    std::vector<std::int32_t>& vs = values[i];
    for (std::int64_t d = 0; static_cast<std::uint64_t>(vs.size()) < count; ++d) {
      if (d >= lo && d <= hi) vs.push_back(static_cast<std::int32_t>(d));
      if (d != 0 && -d >= lo && -d <= hi) vs.push_back(static_cast<std::int32_t>(-d));
    }
  }
  std::vector<std::size_t> idx(n, 0);
  Assignment a;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) a[c.inputs[i]] = values[i][idx[i]];
    const bool ok = std::all_of(c.constraints.begin(), c.constraints.end(),
                                [&](const Constraint& k) { return k.holds(a); });
    if (ok) return Sat{a};
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < values[i].size()) break;
      idx[i] = 0;
      if (i == 0) return Unsat{};
    }
    if (n == 0) return Unsat{};
  }
}

namespace {

std::string smt_expr(const core::Expr& e) {
  using Kind = core::Expr::Kind;
  using core::BinOp;
  switch (e.kind()) {
    case Kind::Const:
      return e.value() < 0 ? "(- " + std::to_string(-static_cast<std::int64_t>(e.value())) + ")"
                           : std::to_string(e.value());
    case Kind::Input: return e.name();
    case Kind::Neg: return "(- " + smt_expr(e.lhs()) + ")";
    case Kind::Binary: {
      const auto l = smt_expr(e.lhs());
      const auto r = smt_expr(e.rhs());
      switch (e.op()) {
        case BinOp::Add: return "(+ " + l + " " + r + ")";
        case BinOp::Sub: return "(- " + l + " " + r + ")";
        case BinOp::Mul: return "(* " + l + " " + r + ")";
        case BinOp::Div: return "(div " + l + " " + r + ")";
        case BinOp::Rem: return "(mod " + l + " " + r + ")";
        default: {
          const auto rel = core::to_rel(e.op());
          std::string atom;
          switch (rel) {
            case core::Rel::Eq: atom = "(= " + l + " " + r + ")"; break;
            case core::Rel::Ne: atom = "(not (= " + l + " " + r + "))"; break;
            default: atom = "(" + std::string(core::to_string(rel)) + " " + l + " " + r + ")"; break;
          }
          return "(ite " + atom + " 1 0)";
        }
      }
    }
  }
  return {};
}

std::string smt_constraint(const Constraint& k) {
  const auto l = smt_expr(k.lhs);
  const auto r = smt_expr(k.rhs);
  switch (k.rel) {
    case core::Rel::Eq: return "(= " + l + " " + r + ")";
    case core::Rel::Ne: return "(not (= " + l + " " + r + "))";
    default: return "(" + std::string(core::to_string(k.rel)) + " " + l + " " + r + ")";
  }
}

}  // namespace

std::string to_smtlib(const Conjunction& c) {
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  for (const auto& name : c.inputs) out << "(declare-const " << name << " Int)\n";
  for (const auto& k : c.constraints) out << "(assert " << smt_constraint(k) << ")\n";
  for (const auto& name : c.inputs) {
    const auto b = c.bounds_of(name);
    if (b == Bounds{}) continue;
    auto num = [](std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); };
    out << "(assert (and (<= " << num(b.lo) << " " << name << ") (<= " << name << " " << num(b.hi) << ")))\n";
  }
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

}  // namespace shadowse::solver
