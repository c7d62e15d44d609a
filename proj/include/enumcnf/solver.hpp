// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "enumcnf/transform.hpp"

namespace enumcnf {

enum class PhasePolicy : uint8_t { FalseFirst, TrueFirst };
enum class VarOrder : uint8_t { InputOrder, ActivityBased };

struct SolverConfig {
  PhasePolicy phase_policy = PhasePolicy::FalseFirst;
  bool phase_caching = false;
  VarOrder var_order = VarOrder::InputOrder;
  uint64_t seed = 0;
  bool restarts = false;
  /// Decide a label variable true when its negative literal occurs in
  /// satisfied clauses only; labels are decided before the input variables.
  /// Has no effect when every variable is important.
  bool label_phase_hint = true;
};

struct SolveResult {
  enum class Kind : uint8_t { Sat, Unsat, Interrupted };
  Kind kind = Kind::Unsat;
  std::vector<uint8_t> model;  // 1-based truth values, total over all vars
  std::vector<Lit> trail;      // assignment order of the model

  bool is_sat() const { return kind == Kind::Sat; }
  bool value(int var) const { return model[static_cast<size_t>(var)] != 0; }
};

struct SolverStats {
  uint64_t decisions = 0;
  uint64_t conflicts = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
};

/// CDCL with two-watched literals, 1-UIP learning, and non-chronological
/// backjumping. Single-threaded; deterministic for a fixed configuration and
/// clause insertion order.
class Solver {
 public:
  explicit Solver(int num_vars, SolverConfig config = {});
  Solver(const CnfEncoding& cnf, SolverConfig config = {});

  /// Extends the variable range on demand. Returns false once the solver is
  /// known unsatisfiable (e.g. after an empty clause was added).
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits);

  /// Soft preferences decided, in order, before the regular heuristic kicks
  /// in. Unlike assumptions these are retractable by conflict analysis.
  void set_decision_prefix(std::vector<Lit> lits);

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline);

  SolveResult solve(std::span<const Lit> assumptions = {});
  SolveResult solve(std::initializer_list<Lit> assumptions);

  int num_vars() const { return num_vars_; }
  bool known_unsat() const { return unsat_; }
  const SolverStats& stats() const { return stats_; }
  std::vector<Clause> learned_clauses() const;

 private:
  struct InternalClause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool dead = false;
    double activity = 0.0;
  };
  struct Watch {
    int clause = -1;
    Lit blocker{};
  };

  static size_t watch_index(Lit l) {
    return 2 * static_cast<size_t>(l.var()) + (l.positive() ? 0 : 1);
  }

  void ensure_var(int var);
  int value(Lit l) const;  // +1 true, -1 false, 0 unassigned
  bool clause_satisfied(const InternalClause& c) const;

  void attach(int clause_index);
  bool enqueue(Lit l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int confl, Clause& learnt, int& backjump_level);
  void cancel_until(int level);
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void bump_activity(int var);
  void decay_activities();
  void bump_clause(int clause_index);
  void reduce_learned();

  std::optional<Lit> pick_assumption(std::span<const Lit> assumptions, bool& conflicting);
  std::optional<Lit> pick_branch();
  bool preferred_phase(int var) const;
  bool deadline_hit();

  SolveResult make_sat_result();
  void check_model_soundness(const SolveResult& result) const;

  SolverConfig config_;
  int num_vars_ = 0;
  bool unsat_ = false;

  std::vector<InternalClause> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::vector<int>> neg_occurrences_;  // problem clauses with !v

  std::vector<int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t propagate_head_ = 0;

  std::vector<uint8_t> is_important_;
  std::vector<int> decision_order_;  // label vars first, then input vars
  bool rebuild_order_ = true;
  std::vector<uint8_t> saved_phase_;
  std::vector<uint8_t> has_saved_phase_;
  std::vector<double> activity_;
  double activity_inc_ = 1.0;
  double clause_inc_ = 1.0;
  size_t num_problem_clauses_ = 0;
  size_t num_learned_live_ = 0;
  size_t reduce_floor_ = 4000;

  std::vector<uint8_t> seen_;  // analyze() scratch
  std::vector<Lit> prefix_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  uint64_t deadline_check_counter_ = 0;

  SolverStats stats_;
};

}  // namespace enumcnf
