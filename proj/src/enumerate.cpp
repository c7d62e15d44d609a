// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/enumerate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace enumcnf {

namespace {

// Flat per-literal bucket index: 2v for +v, 2v+1 for -v.
size_t lit_slot(Lit l) { return 2 * static_cast<size_t>(l.var()) + (l.positive() ? 0 : 1); }

}  // namespace

std::vector<Lit> minimize_assignment(std::span<const Clause> view, std::span<const uint8_t> eta,
                                     std::span<const Lit> drop_order, size_t* drops) {
  auto lit_true = [&](Lit l) {
    return eta[static_cast<size_t>(l.var())] == (l.positive() ? 1 : 0);
  };

  // Per-clause count of satisfied literals, plus flat occurrence lists of the
  // eta-true literals, so a drop touches only the clauses it supports.
  std::vector<uint32_t> support(view.size(), 0);
  std::vector<uint32_t> occ_count(2 * eta.size() + 2, 0);
  size_t total_true = 0;
  for (size_t ci = 0; ci < view.size(); ++ci) {
    for (Lit l : view[ci]) {
      if (l.var() >= static_cast<int>(eta.size()))
        throw std::invalid_argument("minimize_assignment: clause var outside eta");
      if (lit_true(l)) {
        ++support[ci];
        ++occ_count[lit_slot(l)];
        ++total_true;
      }
    }
    if (support[ci] == 0)
      throw std::invalid_argument("minimize_assignment: eta does not satisfy the clause view");
  }
  std::vector<uint32_t> occ_start(occ_count.size() + 1, 0);
  for (size_t s = 0; s < occ_count.size(); ++s) occ_start[s + 1] = occ_start[s] + occ_count[s];
  std::vector<uint32_t> occ(total_true);
  std::vector<uint32_t> cursor(occ_start.begin(), occ_start.end() - 1);
  for (size_t ci = 0; ci < view.size(); ++ci)
    for (Lit l : view[ci])
      if (lit_true(l)) occ[cursor[lit_slot(l)]++] = static_cast<uint32_t>(ci);

  std::vector<uint8_t> kept(eta.size(), 1);
  for (Lit l : drop_order) {
    if (!lit_true(l))
      throw std::invalid_argument("minimize_assignment: drop candidate disagrees with eta");
    size_t slot = lit_slot(l);
    bool droppable = true;
    for (uint32_t k = occ_start[slot]; k < occ_start[slot + 1]; ++k)
      if (support[occ[k]] <= 1) {
        droppable = false;
        break;
      }
    if (!droppable) continue;
    kept[static_cast<size_t>(l.var())] = 0;
    if (drops) ++*drops;
    for (uint32_t k = occ_start[slot]; k < occ_start[slot + 1]; ++k) --support[occ[k]];
  }

  std::vector<Lit> result;
  for (Lit l : drop_order)
    if (kept[static_cast<size_t>(l.var())]) result.push_back(l);
  std::sort(result.begin(), result.end(), [](Lit a, Lit b) { return a.var() < b.var(); });
  return result;
}

namespace {

// Blocking clauses seen by disjoint-mode minimization, packed as cube
// bitmasks over the important vars so that per-model support recounting is a
// popcount pass instead of a literal scan. Requires at most 64 important
// vars (bit = var - 1; atoms occupy a contiguous prefix of the var range).
class BlockingIndex {
 public:
  explicit BlockingIndex(size_t num_important)
      : occ_(2 * num_important + 2) {}

  void add(std::span<const Lit> clause) {
    uint64_t care = 0, value = 0;
    for (Lit l : clause) {
      care |= uint64_t(1) << (l.var() - 1);
      if (l.positive()) value |= uint64_t(1) << (l.var() - 1);
      occ_[lit_slot(l)].push_back(static_cast<uint32_t>(cubes_.size()));
    }
    cubes_.emplace_back(care, value);
  }

  void recount(uint64_t eta_bits) {
    support_.resize(cubes_.size());
    for (size_t j = 0; j < cubes_.size(); ++j)
      support_[j] = static_cast<uint32_t>(
          __builtin_popcountll((eta_bits ^ ~cubes_[j].second) & cubes_[j].first));
  }

  bool pins(Lit l) const {
    for (uint32_t j : occ_[lit_slot(l)])
      if (support_[j] <= 1) return true;
    return false;
  }

  void on_drop(Lit l) {
    for (uint32_t j : occ_[lit_slot(l)]) --support_[j];
  }

 private:
  std::vector<std::pair<uint64_t, uint64_t>> cubes_;  // (care, value)
  std::vector<std::vector<uint32_t>> occ_;            // literal slot -> cube ids
  std::vector<uint32_t> support_;
};

// Problem-clause side of the minimization: static occurrence lists, supports
// recounted per model.
class ProblemIndex {
 public:
  ProblemIndex(const CnfEncoding& cnf, size_t num_slots) : clauses_(&cnf.clauses), occ_(num_slots) {
    for (size_t ci = 0; ci < clauses_->size(); ++ci)
      for (Lit l : (*clauses_)[ci]) occ_[lit_slot(l)].push_back(static_cast<uint32_t>(ci));
  }

  void recount(const std::vector<uint8_t>& model) {
    support_.assign(clauses_->size(), 0);
    for (size_t ci = 0; ci < clauses_->size(); ++ci)
      for (Lit l : (*clauses_)[ci])
        if (model[static_cast<size_t>(l.var())] == (l.positive() ? 1 : 0)) ++support_[ci];
  }

  bool pins(Lit l) const {
    for (uint32_t ci : occ_[lit_slot(l)])
      if (support_[ci] <= 1) return true;
    return false;
  }

  void on_drop(Lit l) {
    for (uint32_t ci : occ_[lit_slot(l)]) --support_[ci];
  }

 private:
  const std::vector<Clause>* clauses_;
  std::vector<std::vector<uint32_t>> occ_;
  std::vector<uint32_t> support_;
};

}  // namespace

EnumerationResult enumerate_projected(const CnfEncoding& cnf, EnumMode mode, SolverConfig config,
                                      EnumLimits limits, std::vector<Lit> decision_prefix) {
  auto start = std::chrono::steady_clock::now();
  EnumerationResult result;

  Solver solver(cnf, config);
  solver.set_decision_prefix(std::move(decision_prefix));
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (limits.timeout) {
    deadline = start + *limits.timeout;
    solver.set_deadline(deadline);
  }

  std::vector<uint8_t> important(static_cast<size_t>(cnf.num_vars) + 1, 0);
  for (int v : cnf.important_vars) important[static_cast<size_t>(v)] = 1;
  size_t num_important = cnf.important_vars.size();
  bool fast_path = num_important <= 64;

  size_t slots = 2 * static_cast<size_t>(cnf.num_vars) + 2;
  ProblemIndex problem(cnf, slots);
  BlockingIndex blocking_index(num_important);

  // Fallback view for encodings with more than 64 important vars; grows by
  // the blocking clauses in disjoint mode.
  std::vector<Clause> view;
  if (!fast_path) {
    view = cnf.clauses;
    view.erase(std::remove_if(view.begin(), view.end(),
                              [](const Clause& c) { return c.empty(); }),
               view.end());
  }

  std::map<int, NodeId> var_to_atom;
  for (const auto& [atom, var] : cnf.atom_var) var_to_atom.emplace(var, atom);

  for (;;) {
    if (deadline && std::chrono::steady_clock::now() >= *deadline) {
      result.stats.status = EnumStatus::Timeout;
      break;
    }
    ++result.stats.n_sat_calls;
    SolveResult model = solver.solve();
    if (model.kind == SolveResult::Kind::Interrupted) {
      result.stats.status = EnumStatus::Timeout;
      break;
    }
    if (model.kind == SolveResult::Kind::Unsat) {
      result.stats.status = EnumStatus::Complete;
      break;
    }

    // Drop candidates: important literals in reverse chronological order.
    std::vector<Lit> drop_order;
    for (auto it = model.trail.rbegin(); it != model.trail.rend(); ++it)
      if (important[static_cast<size_t>(it->var())]) drop_order.push_back(*it);

    std::vector<Lit> mu;
    if (fast_path) {
      problem.recount(model.model);
      if (mode == EnumMode::Disjoint) {
        uint64_t eta_bits = 0;
        for (int v : cnf.important_vars)
          if (model.value(v)) eta_bits |= uint64_t(1) << (v - 1);
        blocking_index.recount(eta_bits);
      }
      for (Lit l : drop_order) {
        if (problem.pins(l) || (mode == EnumMode::Disjoint && blocking_index.pins(l))) {
          mu.push_back(l);
          continue;
        }
        problem.on_drop(l);
        if (mode == EnumMode::Disjoint) blocking_index.on_drop(l);
        ++result.stats.n_minimization_drops;
      }
      std::sort(mu.begin(), mu.end(), [](Lit a, Lit b) { return a.var() < b.var(); });
    } else {
      mu = minimize_assignment(view, model.model, drop_order,
                               &result.stats.n_minimization_drops);
    }

    PartialAssignment atoms;
    for (Lit l : mu) atoms.set(var_to_atom.at(l.var()), l.positive());
    result.cubes.push_back(mu);
    result.assignments.push_back(std::move(atoms));
    ++result.stats.n_assignments;

    Clause blocking;
    blocking.reserve(mu.size());
    for (Lit l : mu) blocking.push_back(-l);
    if (mode == EnumMode::Disjoint) {
      if (fast_path)
        blocking_index.add(blocking);
      else
        view.push_back(blocking);
    }
    if (!solver.add_clause(blocking)) {
      result.stats.status = EnumStatus::Complete;
      break;
    }

    if (limits.max_models && result.stats.n_assignments >= *limits.max_models) {
      result.stats.status = EnumStatus::LimitHit;
      break;
    }
  }

  result.stats.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace enumcnf
