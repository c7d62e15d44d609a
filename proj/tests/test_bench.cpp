// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>

#include "enumcnf/bench.hpp"
#include "enumcnf/enumerate.hpp"
#include "enumcnf/formula.hpp"
#include "enumcnf/oracle.hpp"

using namespace enumcnf;

namespace {

// Operator-nesting depth; negations are free, as in the generator contract.
int nesting_depth(const FormulaStore& store, NodeId id) {
  const FormulaNode& n = store.node(id);
  switch (n.kind) {
    case Kind::Not:
      return nesting_depth(store, n.lhs);
    case Kind::And:
    case Kind::Or:
    case Kind::Iff:
      return 1 + std::max(nesting_depth(store, n.lhs), nesting_depth(store, n.rhs));
    default:
      return 0;
  }
}

// Tree-expanded per-kind counts (shared nodes counted once per occurrence).
void tree_counts(const FormulaStore& store, NodeId id, std::map<Kind, uint64_t>& counts) {
  const FormulaNode& n = store.node(id);
  counts[n.kind] += 1;
  if (n.kind == Kind::Not) {
    tree_counts(store, n.lhs, counts);
  } else if (is_binary(n.kind)) {
    tree_counts(store, n.lhs, counts);
    tree_counts(store, n.rhs, counts);
  }
}

}  // namespace

TEST_CASE("random generation is deterministic and in-contract") {
  FormulaStore store;
  RandomSpec spec;
  spec.seed = 42;
  spec.n_atoms = 20;
  spec.depth = 8;
  NodeId first = gen_random(store, spec);
  NodeId second = gen_random(store, spec);
  CHECK(first == second);
  CHECK(nesting_depth(store, first) <= 8);
  for (NodeId atom : store.atoms_of(first)) {
    const std::string& name = store.atom_name(atom);
    CHECK(name.size() >= 2);
    CHECK(name[0] == 'A');
    int index = std::stoi(name.substr(1));
    CHECK(index >= 1);
    CHECK(index <= 20);
  }

  SUBCASE("round-trips through the grammar") {
    CHECK(parse(store, to_string(store, first)) == first);
  }

  SUBCASE("invalid specs are rejected") {
    RandomSpec bad = spec;
    bad.p_iff = 0.5;  // probabilities no longer sum to 1
    CHECK_THROWS_AS(gen_random(store, bad), std::invalid_argument);
    bad = spec;
    bad.n_atoms = 0;
    CHECK_THROWS_AS(gen_random(store, bad), std::invalid_argument);
  }
}

TEST_CASE("iff frequency tracks its probability") {
  std::map<Kind, uint64_t> counts;
  for (uint64_t seed = 1; seed <= 24; ++seed) {
    FormulaStore store;
    RandomSpec spec;
    spec.seed = seed;
    spec.n_atoms = 10;
    spec.depth = 9;  // 511 internal nodes per formula
    tree_counts(store, gen_random(store, spec), counts);
  }
  uint64_t internal = counts[Kind::And] + counts[Kind::Or] + counts[Kind::Iff];
  REQUIRE(internal >= 10000);
  double freq = static_cast<double>(counts[Kind::Iff]) / static_cast<double>(internal);
  CHECK(freq > 0.08);
  CHECK(freq < 0.12);
}

TEST_CASE("aiger loading") {
  SUBCASE("two-input and gate") {
    FormulaStore store;
    Circuit c = load_aiger(store, "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");
    REQUIRE(c.inputs.size() == 2);
    REQUIRE(c.outputs.size() == 1);
    CHECK(c.outputs[0] == store.mk_and(c.inputs[0], c.inputs[1]));
  }

  SUBCASE("inverter") {
    FormulaStore store;
    Circuit c = load_aiger(store, "aag 1 1 0 1 0\n2\n3\n");
    REQUIRE(c.outputs.size() == 1);
    CHECK(c.outputs[0] == store.mk_not(c.inputs[0]));
  }

  SUBCASE("constant output") {
    FormulaStore store;
    Circuit c = load_aiger(store, "aag 0 0 0 1 0\n1\n");
    REQUIRE(c.outputs.size() == 1);
    CHECK(c.outputs[0] == store.true_node());
  }

  SUBCASE("symbol table names inputs") {
    FormulaStore store;
    Circuit c = load_aiger(store, "aag 2 2 0 1 0\n2\n4\n2\ni0 sel\ni1 data\n");
    CHECK(store.atom_name(c.inputs[0]) == "sel");
    CHECK(store.atom_name(c.inputs[1]) == "data");
  }

  SUBCASE("errors") {
    FormulaStore store;
    CHECK_THROWS_AS(load_aiger(store, "aig 3 2 0 1 1\n"), AigerError);       // binary format
    CHECK_THROWS_AS(load_aiger(store, "aag 3 2 1 1 1\n"), AigerError);       // latch
    CHECK_THROWS_AS(load_aiger(store, "aag 1 1 0 1 0\n2\n9\n"), AigerError); // out of range
    CHECK_THROWS_AS(load_aiger(store, "aag 1 1 0 1 0\n3\n2\n"), AigerError); // odd input
  }
}

TEST_CASE("output constraining") {
  FormulaStore store;
  Circuit c = load_aiger(store, "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");

  SUBCASE("single output asserted high") {
    NodeId f = constrain_outputs(store, c, 1.0, 0, ConstrainPolicy::AllOne);
    CHECK(f == c.outputs[0]);
    CHECK(all_models(store, f).masks.size() == 1);
  }

  SUBCASE("single output asserted low") {
    NodeId f = constrain_outputs(store, c, 1.0, 0, ConstrainPolicy::AllZero);
    CHECK(all_models(store, f).masks.size() == 3);
  }

  SUBCASE("fraction selects a seeded subset") {
    Circuit multi;
    multi.inputs = c.inputs;
    multi.outputs = {c.outputs[0], store.mk_not(c.outputs[0]), c.inputs[0]};
    NodeId f = constrain_outputs(store, multi, 0.4, 7, ConstrainPolicy::AllOne);
    // ceil(0.4 * 3) = 2 conjuncts.
    CHECK(store.kind(f) == Kind::And);
    CHECK(constrain_outputs(store, multi, 0.4, 7, ConstrainPolicy::AllOne) == f);
  }

  SUBCASE("bad arguments") {
    Circuit empty;
    CHECK_THROWS_AS(constrain_outputs(store, empty, 1.0, 0, ConstrainPolicy::AllOne),
                    std::invalid_argument);
    CHECK_THROWS_AS(constrain_outputs(store, c, 0.0, 0, ConstrainPolicy::AllOne),
                    std::invalid_argument);
  }
}

TEST_CASE("circuit encodings match brute-force circuit evaluation") {
  // A 3-input majority-ish circuit: out = (i1 & i2) | (i1 & i3).
  const char* text =
      "aag 5 3 0 1 2\n"
      "2\n4\n6\n"
      "11\n"
      "8 2 4\n"
      "10 9 7\n";  // g8 = i1&i2 ; g10 = !g8 & !i3 ; out = !g10 = g8 | i3
  FormulaStore store;
  Circuit c = load_aiger(store, text);
  NodeId f = constrain_outputs(store, c, 1.0, 0, ConstrainPolicy::AllOne);
  ModelSet models = all_models(store, f);

  for (EncodingTag tag : {EncodingTag::Tseitin, EncodingTag::PlaistedGreenbaum,
                          EncodingTag::NnfPlaistedGreenbaum}) {
    CnfEncoding cnf = encode(store, f, tag);
    EnumerationResult result = enumerate_projected(cnf, EnumMode::Disjoint);
    VerifyReport report = verify_ta(store, f, result.assignments, EnumMode::Disjoint);
    CHECK(report.ok(EnumMode::Disjoint));
    CHECK(report.model_count == models.masks.size());
  }
}
