// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "enumcnf/formula.hpp"

namespace enumcnf {

/// Parameters of the random Boolean benchmark family: operators nested to a
/// fixed depth, leaves drawn uniformly from A1..An, Iff rarer than And/Or,
/// and every node negated with probability one half.
struct RandomSpec {
  uint64_t seed = 1;
  int n_atoms = 20;
  int depth = 8;
  double p_iff = 0.1;
  double p_and = 0.45;
  double p_or = 0.45;
  double p_neg = 0.5;
};

/// Deterministic per spec; two calls with equal specs intern the same root.
NodeId gen_random(FormulaStore& store, const RandomSpec& spec);

/// Combinational circuit read from ASCII AIGER: ordered inputs and output
/// literals over an And/Not DAG in the store.
struct Circuit {
  std::vector<NodeId> inputs;
  std::vector<NodeId> outputs;
};

struct AigerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ASCII AIGER (`aag`), combinational subset: header `aag M I L O A` with
/// L = 0, literal 2k is variable k, odd literals negate, 0/1 are the
/// constants. The optional symbol table names the inputs.
Circuit load_aiger(FormulaStore& store, std::string_view text);

enum class ConstrainPolicy : uint8_t { Random01, AllZero, AllOne };

/// Asserts ceil(fraction * |outputs|) outputs, chosen by seeded shuffle, each
/// to a constant per the policy; the result is their conjunction. Throws
/// std::invalid_argument on an empty output list or fraction outside (0, 1].
NodeId constrain_outputs(FormulaStore& store, const Circuit& circuit, double fraction,
                         uint64_t seed, ConstrainPolicy policy);

}  // namespace enumcnf
