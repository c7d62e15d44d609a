// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "enumcnf/enumerate.hpp"
#include "enumcnf/formula.hpp"
#include "enumcnf/transform.hpp"

namespace enumcnf {

/// Raised when a brute-force guard (22 atoms / 22 label vars) is exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleAtomBudget = 22;

/// All total models of phi as bitmasks over `atoms` (bit i = atoms[i] true).
struct ModelSet {
  std::vector<NodeId> atoms;  // intern order
  std::vector<uint32_t> masks;
};

ModelSet all_models(const FormulaStore& store, NodeId phi);

struct VerifyReport {
  bool sound = true;
  bool complete = true;
  bool disjoint = true;
  uint64_t model_count = 0;
  /// First offending witness, when a flag is false.
  std::optional<PartialAssignment> unsound_assignment;
  std::optional<PartialAssignment> uncovered_model;
  std::optional<std::pair<size_t, size_t>> overlapping_pair;

  bool ok(EnumMode mode) const {
    return sound && complete && (mode == EnumMode::NonDisjoint || disjoint);
  }
};

/// Checks an enumerated assignment set against exhaustive evaluation of phi:
/// soundness (every total extension of every mu satisfies phi), coverage
/// (every total model extends some mu), and pairwise disjointness when the
/// mode requires it.
VerifyReport verify_ta(const FormulaStore& store, NodeId phi,
                       std::span<const PartialAssignment> ta, EnumMode mode);

/// Searches all assignments of the non-important vars for one that, together
/// with muA, satisfies every clause of cnf at the clause level. muA binds
/// atoms of the encoded formula.
std::optional<std::vector<Lit>> exists_etaB(const CnfEncoding& cnf, const PartialAssignment& muA);

/// The constructive label assignment: each label var is set to true exactly
/// when the sub-formula it defines has residual True under muA. Requires
/// residual(phi, muA) = True and an NNF+PG encoding of phi; the returned
/// assignment is checked to satisfy the encoding together with muA.
std::vector<Lit> construct_etaB(const FormulaStore& store, NodeId phi, const CnfEncoding& cnf,
                                const PartialAssignment& muA);

/// True iff residual(phi, mu) and residual(NNF(phi), mu) agree as elements
/// of {True, False, Unknown}.
bool check_nnf_residual_equiv(FormulaStore& store, NodeId phi, const PartialAssignment& mu);

/// Clause-level satisfaction by a partial assignment over vars: every clause
/// has a literal made true.
bool clauses_satisfied(std::span<const Clause> clauses, std::span<const int8_t> values);

}  // namespace enumcnf
