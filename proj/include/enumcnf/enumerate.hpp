// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "enumcnf/solver.hpp"
#include "enumcnf/transform.hpp"

namespace enumcnf {

enum class EnumMode : uint8_t { Disjoint, NonDisjoint };

enum class EnumStatus : uint8_t { Complete, Timeout, LimitHit };

struct EnumLimits {
  std::optional<std::chrono::milliseconds> timeout;
  std::optional<size_t> max_models;
};

struct EnumStats {
  size_t n_assignments = 0;
  size_t n_sat_calls = 0;
  size_t n_minimization_drops = 0;
  std::chrono::milliseconds elapsed{0};
  EnumStatus status = EnumStatus::Complete;
};

struct EnumerationResult {
  /// Projected partial assignments over the important vars, each a cube of
  /// literals in ascending var order.
  std::vector<std::vector<Lit>> cubes;
  /// The same assignments at the atom level.
  std::vector<PartialAssignment> assignments;
  EnumStats stats;
};

/// One pass of the minimization loop: starting from a total assignment that
/// satisfies every clause in view, drops important literals one by one (in
/// the given order) as long as each clause keeps a satisfied literal.
/// Literals of non-important vars are never dropped. Throws
/// std::invalid_argument if eta does not satisfy the view.
///
/// `eta` holds 1-based truth values; `drop_order` lists the important
/// literals of eta in the order drops are attempted. Returns the kept
/// literals in ascending var order, and adds the number of dropped literals
/// to *drops if given.
std::vector<Lit> minimize_assignment(std::span<const Clause> view,
                                     std::span<const uint8_t> eta,
                                     std::span<const Lit> drop_order,
                                     size_t* drops = nullptr);

/// Projected AllSAT by iterated solving and blocking. Blocking clauses over
/// the important literals of each emitted assignment are added in both
/// modes; the mode only decides whether minimization sees them.
EnumerationResult enumerate_projected(const CnfEncoding& cnf, EnumMode mode,
                                      SolverConfig config = {}, EnumLimits limits = {},
                                      std::vector<Lit> decision_prefix = {});

}  // namespace enumcnf
