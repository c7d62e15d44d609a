// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "enumcnf/bench.hpp"
#include "enumcnf/enumerate.hpp"
#include "enumcnf/formula.hpp"
#include "enumcnf/oracle.hpp"
#include "enumcnf/rng.hpp"

using namespace enumcnf;

namespace {

const char* kRunningExample = "(A1 & A2) | (((A3|A4)&(A5|A6)) <-> A7)";

bool cube_extends(const std::vector<Lit>& cube, const std::vector<Lit>& prefix) {
  for (Lit p : prefix)
    if (std::find(cube.begin(), cube.end(), p) == cube.end()) return false;
  return true;
}

size_t count_extending(const EnumerationResult& result, const std::vector<Lit>& prefix) {
  size_t n = 0;
  for (const auto& cube : result.cubes)
    if (cube_extends(cube, prefix)) ++n;
  return n;
}

}  // namespace

TEST_CASE("minimize_assignment") {
  SUBCASE("unconstrained atoms are dropped") {
    std::vector<Clause> view{{Lit(1)}};
    std::vector<uint8_t> eta{0, 1, 1};  // A1 = A2 = true
    std::vector<Lit> order{Lit(2), Lit(1)};
    CHECK(minimize_assignment(view, eta, order) == std::vector<Lit>{Lit(1)});
  }

  SUBCASE("reverse trail order keeps the earlier literal") {
    std::vector<Clause> view{{Lit(1), Lit(2)}};
    std::vector<uint8_t> eta{0, 1, 1};
    std::vector<Lit> order{Lit(2), Lit(1)};  // drop A2 first
    CHECK(minimize_assignment(view, eta, order) == std::vector<Lit>{Lit(1)});
  }

  SUBCASE("tseitin definitions force atoms beyond the satisfying core") {
    FormulaStore store;
    CnfEncoding cnf = encode_tseitin(store, parse(store, kRunningExample));
    Solver solver(cnf);
    SolveResult model = solver.solve({Lit(-3), Lit(-4), Lit(-7)});
    REQUIRE(model.is_sat());
    std::vector<Lit> order;
    for (auto it = model.trail.rbegin(); it != model.trail.rend(); ++it)
      if (cnf.is_important(it->var())) order.push_back(*it);
    std::vector<Lit> mu = minimize_assignment(cnf.clauses, model.model, order);
    CHECK(cube_extends(mu, {Lit(-3), Lit(-4), Lit(-7)}));
    bool has_a12 = false, has_a56 = false;
    for (Lit l : mu) {
      if (l.var() == 1 || l.var() == 2) has_a12 = true;
      if (l.var() == 5 || l.var() == 6) has_a56 = true;
    }
    CHECK(has_a12);
    CHECK(has_a56);
    CHECK(mu.size() > 3);
  }

  SUBCASE("kept literals are each needed (minimality)") {
    for (int round = 0; round < 40; ++round) {
      FormulaStore store;
      RandomSpec spec;
      spec.seed = static_cast<uint64_t>(round + 1);
      spec.n_atoms = 6;
      spec.depth = 4;
      NodeId f = gen_random(store, spec);
      CnfEncoding cnf = encode_nnf_pg(store, f);
      Solver solver(cnf);
      SolveResult model = solver.solve();
      if (!model.is_sat()) continue;
      std::vector<Lit> order;
      for (auto it = model.trail.rbegin(); it != model.trail.rend(); ++it)
        if (cnf.is_important(it->var())) order.push_back(*it);
      std::vector<Lit> mu = minimize_assignment(cnf.clauses, model.model, order);

      // Dropping any single kept literal must break some clause, given the
      // same label-variable part of the model.
      auto satisfied_without = [&](std::optional<Lit> dropped) {
        std::vector<int8_t> values(static_cast<size_t>(cnf.num_vars) + 1, 0);
        for (Lit l : mu)
          if (!dropped || !(l == *dropped))
            values[static_cast<size_t>(l.var())] = l.positive() ? 1 : -1;
        for (int v = 1; v <= cnf.num_vars; ++v)
          if (!cnf.is_important(v)) values[static_cast<size_t>(v)] = model.value(v) ? 1 : -1;
        return clauses_satisfied(cnf.clauses, values);
      };
      CHECK(satisfied_without(std::nullopt));
      for (Lit l : mu) CHECK_FALSE(satisfied_without(l));
    }
  }

  SUBCASE("precondition violations are contract errors") {
    std::vector<Clause> view{{Lit(1)}};
    std::vector<uint8_t> eta{0, 0};  // A1 = false does not satisfy (A1)
    CHECK_THROWS_AS(minimize_assignment(view, eta, std::vector<Lit>{Lit(-1)}),
                    std::invalid_argument);
  }
}

TEST_CASE("enumeration of tiny formulas") {
  SUBCASE("single atom") {
    FormulaStore store;
    CnfEncoding cnf = encode_tseitin(store, parse(store, "A"));
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint);
    CHECK(result.stats.status == EnumStatus::Complete);
    REQUIRE(result.cubes.size() == 1);
    CHECK(result.cubes[0] == std::vector<Lit>{Lit(1)});
  }

  SUBCASE("valid formula yields the empty assignment") {
    FormulaStore store;
    CnfEncoding cnf = encode_pg(store, parse(store, "A | !A"));
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint);
    REQUIRE(result.cubes.size() == 1);
    CHECK(result.cubes[0].empty());
    CHECK(result.stats.status == EnumStatus::Complete);
  }

  SUBCASE("unsatisfiable formula yields nothing") {
    FormulaStore store;
    CnfEncoding cnf = encode_tseitin(store, parse(store, "A & !A"));
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint);
    CHECK(result.cubes.empty());
    CHECK(result.stats.status == EnumStatus::Complete);
  }
}

TEST_CASE("scenario: forced prefix on the running example") {
  FormulaStore store;
  NodeId f = parse(store, kRunningExample);
  std::vector<Lit> prefix{Lit(-3), Lit(-4), Lit(-7)};
  SolverConfig config;  // false-first, input order

  SUBCASE("nnf+pg enumerates exactly the short assignment") {
    CnfEncoding cnf = encode_nnf_pg(store, f);
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint, config, {}, prefix);
    CHECK(result.stats.status == EnumStatus::Complete);
    CHECK(count_extending(result, prefix) == 1);
    REQUIRE(!result.cubes.empty());
    CHECK(result.cubes[0] == prefix);
    VerifyReport report = verify_ta(store, f, result.assignments, EnumMode::Disjoint);
    CHECK(report.ok(EnumMode::Disjoint));
    CHECK(report.model_count == 80);
  }

  SUBCASE("pg needs at least three assignments under the prefix") {
    CnfEncoding cnf = encode_pg(store, f);
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint, config, {}, prefix);
    CHECK(result.stats.status == EnumStatus::Complete);
    CHECK(count_extending(result, prefix) >= 3);
    CHECK(verify_ta(store, f, result.assignments, EnumMode::Disjoint).ok(EnumMode::Disjoint));
  }

  SUBCASE("tseitin needs at least nine") {
    CnfEncoding cnf = encode_tseitin(store, f);
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint, config, {}, prefix);
    CHECK(result.stats.status == EnumStatus::Complete);
    CHECK(count_extending(result, prefix) >= 9);
    CHECK(verify_ta(store, f, result.assignments, EnumMode::Disjoint).ok(EnumMode::Disjoint));
  }
}

TEST_CASE("coverage of the running example in every encoding and mode") {
  FormulaStore store;
  NodeId f = parse(store, kRunningExample);
  for (EncodingTag tag : {EncodingTag::DeMorgan, EncodingTag::Tseitin,
                          EncodingTag::PlaistedGreenbaum, EncodingTag::NnfPlaistedGreenbaum}) {
    CnfEncoding cnf = encode(store, f, tag);
    for (EnumMode mode : {EnumMode::Disjoint, EnumMode::NonDisjoint}) {
      EnumerationResult result = enumerate_projected(cnf, mode);
      REQUIRE(result.stats.status == EnumStatus::Complete);
      VerifyReport report = verify_ta(store, f, result.assignments, mode);
      CHECK(report.sound);
      CHECK(report.complete);
      if (mode == EnumMode::Disjoint) CHECK(report.disjoint);
      CHECK(report.model_count == 80);
      // Termination bound: one blocking clause per assignment, each covering
      // at least one previously uncovered total model.
      CHECK(result.stats.n_assignments <= report.model_count);
    }
  }
}

TEST_CASE("random sweep: soundness, coverage, disjointness") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    FormulaStore store;
    RandomSpec spec;
    spec.seed = seed;
    spec.n_atoms = 6;
    spec.depth = 4;
    NodeId f = gen_random(store, spec);
    for (EncodingTag tag : {EncodingTag::Tseitin, EncodingTag::PlaistedGreenbaum,
                            EncodingTag::NnfPlaistedGreenbaum}) {
      CnfEncoding cnf = encode(store, f, tag);
      for (EnumMode mode : {EnumMode::Disjoint, EnumMode::NonDisjoint}) {
        EnumerationResult result = enumerate_projected(cnf, mode);
        REQUIRE(result.stats.status == EnumStatus::Complete);
        CHECK(verify_ta(store, f, result.assignments, mode).ok(mode));
      }
    }
  }
}

TEST_CASE("non-disjoint runs never need more or longer assignments here") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    FormulaStore store;
    RandomSpec spec;
    spec.seed = seed;
    spec.n_atoms = 6;
    spec.depth = 4;
    NodeId f = gen_random(store, spec);
    CnfEncoding cnf = encode_nnf_pg(store, f);
    EnumerationResult disjoint = enumerate_projected(cnf, EnumMode::Disjoint);
    EnumerationResult loose = enumerate_projected(cnf, EnumMode::NonDisjoint);
    CHECK(loose.cubes.size() <= disjoint.cubes.size());
  }
}

TEST_CASE("projection collapses to plain allsat when there are no labels") {
  FormulaStore store;
  NodeId f = parse(store, "(a | b) & (b | c)");
  CnfEncoding cnf = encode_demorgan(store, f);
  CHECK(cnf.num_labels() == 0);
  EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint);
  CHECK(verify_ta(store, f, result.assignments, EnumMode::Disjoint).ok(EnumMode::Disjoint));
}

TEST_CASE("median benefit of nnf+pg at desk scale") {
  std::vector<size_t> ts_counts, pg_counts, nnfpg_counts;
  for (uint64_t seed = 1; seed <= 21; ++seed) {
    FormulaStore store;
    RandomSpec spec;
    spec.seed = seed * 31;
    spec.n_atoms = 10;
    spec.depth = 4;
    NodeId f = gen_random(store, spec);
    auto run = [&](EncodingTag tag) {
      CnfEncoding cnf = encode(store, f, tag);
      return enumerate_projected(cnf, EnumMode::NonDisjoint).stats.n_assignments;
    };
    ts_counts.push_back(run(EncodingTag::Tseitin));
    pg_counts.push_back(run(EncodingTag::PlaistedGreenbaum));
    nnfpg_counts.push_back(run(EncodingTag::NnfPlaistedGreenbaum));
  }
  auto median = [](std::vector<size_t> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(nnfpg_counts) <= median(pg_counts));
  CHECK(median(pg_counts) <= median(ts_counts));
}

TEST_CASE("limits") {
  FormulaStore store;
  NodeId f = parse(store, kRunningExample);
  CnfEncoding cnf = encode_tseitin(store, f);

  SUBCASE("model cap") {
    EnumLimits limits;
    limits.max_models = 2;
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint, {}, limits);
    CHECK(result.stats.status == EnumStatus::LimitHit);
    CHECK(result.cubes.size() == 2);
  }

  SUBCASE("expired deadline yields a timeout tag") {
    EnumLimits limits;
    limits.timeout = std::chrono::milliseconds(0);
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint, {}, limits);
    CHECK(result.stats.status == EnumStatus::Timeout);
  }
}
