// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/solver.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace enumcnf {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Luby restart sequence.
uint64_t luby(uint64_t i) {
  uint64_t k = 1;
  while ((1ull << k) - 1 < i + 1) ++k;
  while ((1ull << (k - 1)) - 1 != i) {
    i -= (1ull << (k - 1)) - 1;
    k = 1;
    while ((1ull << k) - 1 < i + 1) ++k;
  }
  return 1ull << (k - 1);
}

}  // namespace

Solver::Solver(int num_vars, SolverConfig config) : config_(config) {
  ensure_var(num_vars);
  rebuild_order_ = true;
}

Solver::Solver(const CnfEncoding& cnf, SolverConfig config) : config_(config) {
  ensure_var(cnf.num_vars);
  for (int v = 1; v <= cnf.num_vars; ++v) is_important_[static_cast<size_t>(v)] = 0;
  for (int v : cnf.important_vars) is_important_[static_cast<size_t>(v)] = 1;
  rebuild_order_ = true;
  for (const Clause& c : cnf.clauses)
    if (!add_clause(c)) break;
}

void Solver::ensure_var(int var) {
  if (var <= num_vars_) return;
  num_vars_ = var;
  size_t n = static_cast<size_t>(num_vars_) + 1;
  watches_.resize(2 * n);
  neg_occurrences_.resize(n);
  assign_.resize(n, 0);
  level_.resize(n, 0);
  reason_.resize(n, -1);
  is_important_.resize(n, 1);
  saved_phase_.resize(n, 0);
  has_saved_phase_.resize(n, 0);
  activity_.resize(n, 0.0);
  seen_.resize(n, 0);
  if (config_.var_order == VarOrder::ActivityBased && config_.seed != 0)
    for (size_t v = 1; v < n; ++v)
      if (activity_[v] == 0.0)
        activity_[v] = static_cast<double>(splitmix64(config_.seed ^ v) % 1024) * 1e-9;
  rebuild_order_ = true;
}

int Solver::value(Lit l) const {
  int8_t a = assign_[static_cast<size_t>(l.var())];
  if (a == 0) return 0;
  return (a > 0) == l.positive() ? 1 : -1;
}

bool Solver::clause_satisfied(const InternalClause& c) const {
  for (Lit l : c.lits)
    if (value(l) > 0) return true;
  return false;
}

bool Solver::add_clause(std::span<const Lit> lits) {
  if (unsat_) return false;
  cancel_until(0);
  Clause c(lits.begin(), lits.end());
  for (Lit l : c) ensure_var(l.var());
  if (!normalize_clause(c)) return true;  // tautology, nothing to add
  if (c.empty()) {
    unsat_ = true;
    return false;
  }
  // Spread the watched positions across the clause; clauses come in sorted
  // by var, and watching the first two literals of every blocking clause
  // would pile the watch lists onto the lowest vars.
  if (c.size() > 2) {
    size_t shift = clauses_.size() % c.size();
    std::rotate(c.begin(), c.begin() + static_cast<Clause::difference_type>(shift), c.end());
  }
  // Track negative occurrences of problem clauses for the label phase hint.
  int index = static_cast<int>(clauses_.size());
  clauses_.push_back({c, false, false, 0.0});
  ++num_problem_clauses_;
  for (Lit l : c)
    if (!l.positive()) neg_occurrences_[static_cast<size_t>(l.var())].push_back(index);
  if (c.size() == 1) {
    if (value(c[0]) < 0 || !enqueue(c[0], -1) || propagate() != -1) unsat_ = true;
    return !unsat_;
  }
  attach(index);
  // Clauses added between solve calls may already be falsified at level 0.
  bool all_false = true;
  for (Lit l : c)
    if (value(l) >= 0) {
      all_false = false;
      break;
    }
  if (all_false) {
    unsat_ = true;
    return false;
  }
  return true;
}

bool Solver::add_clause(std::initializer_list<Lit> lits) {
  return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
}

void Solver::attach(int clause_index) {
  const InternalClause& c = clauses_[static_cast<size_t>(clause_index)];
  assert(c.lits.size() >= 2);
  watches_[watch_index(-c.lits[0])].push_back({clause_index, c.lits[1]});
  watches_[watch_index(-c.lits[1])].push_back({clause_index, c.lits[0]});
}

bool Solver::enqueue(Lit l, int reason) {
  int v = value(l);
  if (v > 0) return true;
  if (v < 0) return false;
  size_t var = static_cast<size_t>(l.var());
  assign_[var] = l.positive() ? 1 : -1;
  level_[var] = decision_level();
  reason_[var] = reason;
  saved_phase_[var] = l.positive() ? 1 : 0;
  has_saved_phase_[var] = 1;
  trail_.push_back(l);
  return true;
}

int Solver::propagate() {
  while (propagate_head_ < trail_.size()) {
    Lit p = trail_[propagate_head_++];
    ++stats_.propagations;
    std::vector<Watch>& ws = watches_[watch_index(p)];
    size_t keep = 0;
    for (size_t i = 0; i < ws.size(); ++i) {
      Watch w = ws[i];
      if (clauses_[static_cast<size_t>(w.clause)].dead) continue;  // dropped lazily
      if (value(w.blocker) > 0) {
        ws[keep++] = w;
        continue;
      }
      InternalClause& c = clauses_[static_cast<size_t>(w.clause)];
      Lit false_lit = -p;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      assert(c.lits[1] == false_lit);
      if (value(c.lits[0]) > 0) {
        ws[keep++] = {w.clause, c.lits[0]};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) >= 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[watch_index(-c.lits[1])].push_back({w.clause, c.lits[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Unit or conflicting.
      ws[keep++] = {w.clause, c.lits[0]};
      if (!enqueue(c.lits[0], w.clause)) {
        for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        return w.clause;
      }
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::analyze(int confl, Clause& learnt, int& backjump_level) {
  learnt.clear();
  learnt.push_back(Lit(0, true));  // placeholder for the asserting literal
  int counter = 0;
  Lit p(0, true);
  size_t index = trail_.size();
  int current = decision_level();
  int confl_index = confl;
  bool first = true;

  for (;;) {
    bump_clause(confl_index);
    const InternalClause& c = clauses_[static_cast<size_t>(confl_index)];
    for (Lit q : c.lits) {
      if (!first && q == p) continue;
      size_t var = static_cast<size_t>(q.var());
      if (seen_[var] || level_[var] == 0) continue;
      seen_[var] = 1;
      bump_activity(q.var());
      if (level_[var] >= current)
        ++counter;
      else
        learnt.push_back(q);
    }
    first = false;
    while (!seen_[static_cast<size_t>(trail_[index - 1].var())]) --index;
    p = trail_[--index];
    seen_[static_cast<size_t>(p.var())] = 0;
    --counter;
    if (counter == 0) break;
    confl_index = reason_[static_cast<size_t>(p.var())];
    assert(confl_index != -1);
  }
  learnt[0] = -p;

  backjump_level = 0;
  if (learnt.size() > 1) {
    size_t max_at = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[static_cast<size_t>(learnt[i].var())] >
          level_[static_cast<size_t>(learnt[max_at].var())])
        max_at = i;
    std::swap(learnt[1], learnt[max_at]);
    backjump_level = level_[static_cast<size_t>(learnt[1].var())];
  }
  for (Lit q : learnt) seen_[static_cast<size_t>(q.var())] = 0;
}

void Solver::cancel_until(int target) {
  if (decision_level() <= target) return;
  size_t bound = static_cast<size_t>(trail_lim_[static_cast<size_t>(target)]);
  for (size_t i = trail_.size(); i > bound; --i) {
    size_t var = static_cast<size_t>(trail_[i - 1].var());
    assign_[var] = 0;
    reason_[var] = -1;
  }
  trail_.resize(bound);
  trail_lim_.resize(static_cast<size_t>(target));
  propagate_head_ = trail_.size();
}

void Solver::bump_activity(int var) {
  activity_[static_cast<size_t>(var)] += activity_inc_;
  if (activity_[static_cast<size_t>(var)] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    activity_inc_ *= 1e-100;
  }
}

void Solver::decay_activities() {
  activity_inc_ /= 0.95;
  clause_inc_ /= 0.999;
}

void Solver::bump_clause(int clause_index) {
  InternalClause& c = clauses_[static_cast<size_t>(clause_index)];
  if (!c.learnt) return;
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (InternalClause& other : clauses_)
      if (other.learnt) other.activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

// Drops the less active half of the learned clauses. Called at decision
// level 0; clauses acting as a reason for a level-0 literal stay.
void Solver::reduce_learned() {
  std::vector<uint8_t> locked(clauses_.size(), 0);
  for (Lit l : trail_) {
    int r = reason_[static_cast<size_t>(l.var())];
    if (r >= 0) locked[static_cast<size_t>(r)] = 1;
  }
  std::vector<int> candidates;
  for (size_t i = 0; i < clauses_.size(); ++i)
    if (clauses_[i].learnt && !clauses_[i].dead && !locked[i] && clauses_[i].lits.size() > 2)
      candidates.push_back(static_cast<int>(i));
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return clauses_[static_cast<size_t>(a)].activity < clauses_[static_cast<size_t>(b)].activity;
  });
  size_t to_remove = candidates.size() / 2;
  for (size_t k = 0; k < to_remove; ++k) {
    InternalClause& c = clauses_[static_cast<size_t>(candidates[k])];
    c.dead = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    --num_learned_live_;
  }
}

std::optional<Lit> Solver::pick_assumption(std::span<const Lit> assumptions, bool& conflicting) {
  conflicting = false;
  for (Lit a : assumptions) {
    int v = value(a);
    if (v > 0) continue;
    if (v < 0) {
      conflicting = true;
      return std::nullopt;
    }
    return a;
  }
  return std::nullopt;
}

bool Solver::preferred_phase(int var) const {
  size_t v = static_cast<size_t>(var);
  if (config_.label_phase_hint && !is_important_[v]) {
    bool all_satisfied = true;
    for (int ci : neg_occurrences_[v])
      if (!clause_satisfied(clauses_[static_cast<size_t>(ci)])) {
        all_satisfied = false;
        break;
      }
    if (all_satisfied) return true;
  }
  if (config_.phase_caching && has_saved_phase_[v]) return saved_phase_[v] != 0;
  return config_.phase_policy == PhasePolicy::TrueFirst;
}

std::optional<Lit> Solver::pick_branch() {
  for (Lit l : prefix_)
    if (value(l) == 0) return l;
  if (config_.var_order == VarOrder::InputOrder) {
    if (rebuild_order_) {
      decision_order_.clear();
      for (int v = 1; v <= num_vars_; ++v)
        if (!is_important_[static_cast<size_t>(v)]) decision_order_.push_back(v);
      for (int v = 1; v <= num_vars_; ++v)
        if (is_important_[static_cast<size_t>(v)]) decision_order_.push_back(v);
      rebuild_order_ = false;
    }
    for (int v : decision_order_)
      if (assign_[static_cast<size_t>(v)] == 0) return Lit(v, preferred_phase(v));
    return std::nullopt;
  }
  int best = 0;
  for (int v = 1; v <= num_vars_; ++v)
    if (assign_[static_cast<size_t>(v)] == 0 &&
        (best == 0 || activity_[static_cast<size_t>(v)] > activity_[static_cast<size_t>(best)]))
      best = v;
  if (best == 0) return std::nullopt;
  return Lit(best, preferred_phase(best));
}

bool Solver::deadline_hit() {
  if (!deadline_) return false;
  if ((++deadline_check_counter_ & 0x3ff) != 0) return false;
  return std::chrono::steady_clock::now() >= *deadline_;
}

void Solver::set_decision_prefix(std::vector<Lit> lits) { prefix_ = std::move(lits); }

std::vector<Clause> Solver::learned_clauses() const {
  std::vector<Clause> out;
  for (const InternalClause& c : clauses_)
    if (c.learnt && !c.dead) out.push_back(c.lits);
  return out;
}

void Solver::set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
  deadline_ = deadline;
}

SolveResult Solver::make_sat_result() {
  SolveResult result;
  result.kind = SolveResult::Kind::Sat;
  result.model.assign(static_cast<size_t>(num_vars_) + 1, 0);
  for (int v = 1; v <= num_vars_; ++v) result.model[static_cast<size_t>(v)] = assign_[v] > 0;
  result.trail = trail_;
  check_model_soundness(result);
  return result;
}

void Solver::check_model_soundness(const SolveResult& result) const {
  for (const InternalClause& c : clauses_) {
    if (c.learnt) continue;
    bool satisfied = false;
    for (Lit l : c.lits)
      if (result.model[static_cast<size_t>(l.var())] == (l.positive() ? 1 : 0)) {
        satisfied = true;
        break;
      }
    if (!satisfied) throw std::logic_error("solver returned a model violating a clause");
  }
}

SolveResult Solver::solve(std::initializer_list<Lit> assumptions) {
  return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
}

SolveResult Solver::solve(std::span<const Lit> assumptions) {
  SolveResult unsat_result;  // defaults to Unsat
  if (unsat_) return unsat_result;
  cancel_until(0);
  propagate_head_ = 0;  // replay from scratch; clauses may have been added
  if (propagate() != -1) {
    unsat_ = true;
    return unsat_result;
  }
  if (num_learned_live_ > 4000 + num_problem_clauses_ / 2) reduce_learned();

  uint64_t conflicts_this_restart = 0;
  uint64_t restart_budget = config_.restarts ? luby(stats_.restarts) * 100 : 0;

  for (;;) {
    int confl = propagate();
    if (confl != -1) {
      ++stats_.conflicts;
      ++conflicts_this_restart;
      if (decision_level() == 0) {
        unsat_ = true;
        return unsat_result;
      }
      Clause learnt;
      int backjump = 0;
      analyze(confl, learnt, backjump);
      cancel_until(backjump);
      if (learnt.size() == 1) {
        if (!enqueue(learnt[0], -1)) {
          unsat_ = true;
          return unsat_result;
        }
      } else {
        int index = static_cast<int>(clauses_.size());
        clauses_.push_back({learnt, true, false, clause_inc_});
        ++num_learned_live_;
        attach(index);
        enqueue(learnt[0], index);
      }
      decay_activities();
      if (deadline_hit()) {
        cancel_until(0);
        return SolveResult{SolveResult::Kind::Interrupted, {}, {}};
      }
      continue;
    }

    if (config_.restarts && conflicts_this_restart >= restart_budget) {
      ++stats_.restarts;
      conflicts_this_restart = 0;
      restart_budget = luby(stats_.restarts) * 100;
      cancel_until(0);
      if (num_learned_live_ > 4000 + num_problem_clauses_ / 2) reduce_learned();
      continue;
    }
    if (deadline_hit()) {
      cancel_until(0);
      return SolveResult{SolveResult::Kind::Interrupted, {}, {}};
    }

    bool assumption_conflict = false;
    std::optional<Lit> next = pick_assumption(assumptions, assumption_conflict);
    if (assumption_conflict) {
      cancel_until(0);
      return unsat_result;  // unsat under these assumptions
    }
    if (!next) next = pick_branch();
    if (!next) {
      SolveResult result = make_sat_result();
      cancel_until(0);
      return result;
    }
    ++stats_.decisions;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(*next, -1);
  }
}

}  // namespace enumcnf
