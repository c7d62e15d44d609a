// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "enumcnf/formula.hpp"
#include "enumcnf/oracle.hpp"
#include "enumcnf/rng.hpp"
#include "enumcnf/solver.hpp"
#include "enumcnf/transform.hpp"

using namespace enumcnf;

namespace {

const char* kRunningExample = "(A1 & A2) | (((A3|A4)&(A5|A6)) <-> A7)";

bool model_satisfies(const std::vector<Clause>& clauses, const SolveResult& result) {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (Lit l : c)
      if (result.value(l.var()) == l.positive()) sat = true;
    if (!sat) return false;
  }
  return true;
}

// Brute-force SAT check, independent of the solver.
bool brute_force_sat(int num_vars, const std::vector<Clause>& clauses) {
  for (uint64_t mask = 0; mask < (uint64_t(1) << num_vars); ++mask) {
    bool all = true;
    for (const Clause& c : clauses) {
      bool sat = false;
      for (Lit l : c) {
        bool v = (mask >> (l.var() - 1)) & 1u;
        if (v == l.positive()) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<Clause> random_cnf(Rng& rng, int num_vars, int num_clauses, int width) {
  std::vector<Clause> clauses;
  for (int i = 0; i < num_clauses; ++i) {
    Clause c;
    for (int k = 0; k < width; ++k)
      c.emplace_back(1 + static_cast<int>(rng.below(static_cast<uint64_t>(num_vars))),
                     rng.coin(0.5));
    if (normalize_clause(c)) clauses.push_back(std::move(c));
  }
  return clauses;
}

}  // namespace

TEST_CASE("basic solving") {
  SUBCASE("single unit clause") {
    Solver solver(1);
    solver.add_clause({Lit(1)});
    SolveResult r = solver.solve();
    REQUIRE(r.is_sat());
    CHECK(r.value(1));
  }

  SUBCASE("contradicting units") {
    Solver solver(1);
    solver.add_clause({Lit(1)});
    solver.add_clause({Lit(-1)});
    CHECK_FALSE(solver.solve().is_sat());
    CHECK(solver.known_unsat());
  }

  SUBCASE("tseitin encoding of the running example is satisfiable") {
    FormulaStore store;
    CnfEncoding cnf = encode_tseitin(store, parse(store, kRunningExample));
    Solver solver(cnf);
    SolveResult r = solver.solve();
    REQUIRE(r.is_sat());
    CHECK(model_satisfies(cnf.clauses, r));
  }

  SUBCASE("false-first input order picks the lowest model") {
    Solver solver(2, {.phase_policy = PhasePolicy::FalseFirst});
    solver.add_clause({Lit(1), Lit(2)});
    SolveResult r = solver.solve();
    REQUIRE(r.is_sat());
    CHECK_FALSE(r.value(1));
    CHECK(r.value(2));
  }
}

TEST_CASE("incremental clause addition") {
  SUBCASE("blocking a model flips it") {
    Solver solver(2, {.phase_policy = PhasePolicy::TrueFirst});
    solver.add_clause({Lit(1), Lit(2)});
    SolveResult first = solver.solve();
    REQUIRE(first.is_sat());
    CHECK(first.value(1));
    solver.add_clause({Lit(-1)});
    SolveResult second = solver.solve();
    REQUIRE(second.is_sat());
    CHECK_FALSE(second.value(1));
    CHECK(second.value(2));
  }

  SUBCASE("empty clause makes the solver permanently unsat") {
    Solver solver(2);
    solver.add_clause({Lit(1), Lit(2)});
    CHECK_FALSE(solver.add_clause(std::span<const Lit>{}));
    CHECK(solver.known_unsat());
    CHECK_FALSE(solver.solve().is_sat());
  }

  SUBCASE("iterated blocking enumerates the three total models of a | b") {
    Solver solver(2);
    solver.add_clause({Lit(1), Lit(2)});
    int models = 0;
    for (;;) {
      SolveResult r = solver.solve();
      if (!r.is_sat()) break;
      ++models;
      REQUIRE(models <= 4);
      Clause blocking;
      for (int v = 1; v <= 2; ++v) blocking.emplace_back(v, !r.value(v));
      solver.add_clause(blocking);
    }
    CHECK(models == 3);
  }
}

TEST_CASE("assumptions") {
  SUBCASE("handled before the heuristic, conflicts yield unsat") {
    Solver solver(3);
    solver.add_clause({Lit(1), Lit(2), Lit(3)});
    SolveResult r = solver.solve({Lit(2)});
    REQUIRE(r.is_sat());
    CHECK(r.value(2));
    CHECK_FALSE(solver.solve({Lit(1), Lit(-1)}).is_sat());
    // The solver itself is not permanently unsat.
    CHECK(solver.solve().is_sat());
  }

  SUBCASE("running example under the short partial assignment") {
    FormulaStore store;
    NodeId f = parse(store, kRunningExample);
    CnfEncoding cnf = encode_tseitin(store, f);
    Solver solver(cnf);
    // A3, A4, A7 are vars 3, 4, 7.
    SolveResult r = solver.solve({Lit(-3), Lit(-4), Lit(-7)});
    REQUIRE(r.is_sat());
    CHECK(model_satisfies(cnf.clauses, r));
    CHECK_FALSE(r.value(3));
    CHECK_FALSE(r.value(4));
    CHECK_FALSE(r.value(7));
  }

  SUBCASE("unsat under an assumption forcing a dead region") {
    Solver solver(2);
    solver.add_clause({Lit(-1), Lit(2)});
    solver.add_clause({Lit(-1), Lit(-2)});
    CHECK_FALSE(solver.solve({Lit(1)}).is_sat());
    CHECK(solver.solve({Lit(-1)}).is_sat());
  }
}

TEST_CASE("determinism") {
  FormulaStore store;
  CnfEncoding cnf = encode_pg(store, parse(store, kRunningExample));
  SolverConfig config;
  Solver a(cnf, config), b(cnf, config);
  SolveResult ra = a.solve(), rb = b.solve();
  REQUIRE(ra.is_sat());
  CHECK(ra.model == rb.model);
  CHECK(ra.trail == rb.trail);
}

TEST_CASE("phase caching overrides the policy once a value was assigned") {
  SolverConfig cached{.phase_policy = PhasePolicy::FalseFirst, .phase_caching = true};
  Solver solver(2, cached);
  solver.add_clause({Lit(1), Lit(2)});
  SolveResult first = solver.solve();
  REQUIRE(first.is_sat());
  CHECK_FALSE(first.value(1));
  CHECK(first.value(2));
  // Force var 1 true; var 2 is now unconstrained and keeps its cached phase.
  solver.add_clause({Lit(1)});
  SolveResult second = solver.solve();
  REQUIRE(second.is_sat());
  CHECK(second.value(2));

  // Without caching the policy decides var 2 false.
  Solver plain(2, {.phase_policy = PhasePolicy::FalseFirst});
  plain.add_clause({Lit(1), Lit(2)});
  plain.add_clause({Lit(1)});
  SolveResult r = plain.solve();
  REQUIRE(r.is_sat());
  CHECK_FALSE(r.value(2));
}

TEST_CASE("decision prefix steers the first decisions but stays retractable") {
  Solver solver(3);
  solver.add_clause({Lit(1), Lit(2), Lit(3)});
  solver.set_decision_prefix({Lit(2), Lit(-1)});
  SolveResult r = solver.solve();
  REQUIRE(r.is_sat());
  CHECK(r.value(2));
  CHECK_FALSE(r.value(1));

  // A prefix contradicting the clauses is overridden, not fatal.
  Solver second(1);
  second.add_clause({Lit(1)});
  second.set_decision_prefix({Lit(-1)});
  SolveResult rs = second.solve();
  REQUIRE(rs.is_sat());
  CHECK(rs.value(1));
}

TEST_CASE("agreement with brute force on random cnfs") {
  Rng rng(2024);
  int sat_count = 0, unsat_count = 0;
  for (int round = 0; round < 200; ++round) {
    int num_vars = 3 + static_cast<int>(rng.below(12));  // up to 14
    int num_clauses = 2 + static_cast<int>(rng.below(50));
    std::vector<Clause> clauses = random_cnf(rng, num_vars, num_clauses, 3);
    bool expected = brute_force_sat(num_vars, clauses);

    for (VarOrder order : {VarOrder::InputOrder, VarOrder::ActivityBased}) {
      SolverConfig config;
      config.var_order = order;
      config.seed = static_cast<uint64_t>(round);
      config.restarts = (round % 3 == 0);
      Solver solver(num_vars, config);
      for (const Clause& c : clauses)
        if (!solver.add_clause(c)) break;
      SolveResult r = solver.solve();
      CHECK(r.is_sat() == expected);
      if (r.is_sat()) CHECK(model_satisfies(clauses, r));
    }
    if (expected)
      ++sat_count;
    else
      ++unsat_count;
  }
  // The suite should exercise both outcomes.
  CHECK(sat_count > 20);
  CHECK(unsat_count > 20);
}

TEST_CASE("learned clauses are implied by the original set") {
  Rng rng(77);
  for (int round = 0; round < 25; ++round) {
    int num_vars = 5 + static_cast<int>(rng.below(6));
    std::vector<Clause> clauses = random_cnf(rng, num_vars, 4 * num_vars, 3);
    Solver solver(num_vars);
    bool ok = true;
    for (const Clause& c : clauses)
      if (!solver.add_clause(c)) ok = false;
    if (!ok) continue;
    solver.solve();
    for (const Clause& learned : solver.learned_clauses()) {
      for (uint64_t mask = 0; mask < (uint64_t(1) << num_vars); ++mask) {
        bool originals = true;
        for (const Clause& c : clauses) {
          bool sat = false;
          for (Lit l : c)
            if ((((mask >> (l.var() - 1)) & 1u) != 0) == l.positive()) sat = true;
          if (!sat) {
            originals = false;
            break;
          }
        }
        if (!originals) continue;
        bool learned_sat = false;
        for (Lit l : learned)
          if ((((mask >> (l.var() - 1)) & 1u) != 0) == l.positive()) learned_sat = true;
        CHECK(learned_sat);
      }
    }
  }
}
