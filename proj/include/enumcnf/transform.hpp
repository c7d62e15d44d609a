// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "enumcnf/formula.hpp"

namespace enumcnf {

/// DIMACS-style literal: positive var index with a sign.
struct Lit {
  int code = 0;  // +v or -v, never 0

  Lit() = default;
  explicit constexpr Lit(int dimacs) : code(dimacs) {}
  constexpr Lit(int var, bool positive) : code(positive ? var : -var) {}

  constexpr int var() const { return code < 0 ? -code : code; }
  constexpr bool positive() const { return code > 0; }
  constexpr Lit operator-() const { return Lit(-code); }

  friend constexpr bool operator==(Lit a, Lit b) { return a.code == b.code; }
  friend constexpr auto operator<=>(Lit a, Lit b) { return a.code <=> b.code; }
};

using Clause = std::vector<Lit>;

/// Normalizes a clause in place: sorts by var, drops duplicate literals, and
/// returns false for tautologies (which the caller must discard).
bool normalize_clause(Clause& clause);

enum class EncodingTag { DeMorgan, Tseitin, PlaistedGreenbaum, NnfPlaistedGreenbaum };

std::string tag_name(EncodingTag tag);

/// NNF(phi) and NNF(!phi) as a shared 2-root DAG, with per-node images of
/// every original sub-formula.
struct NnfResult {
  NodeId pos_root{};
  NodeId neg_root{};
  std::map<NodeId, std::pair<NodeId, NodeId>> node_map;  // original -> (pos, neg)
};

NnfResult to_nnf(FormulaStore& store, NodeId root);

/// Constant propagation: And(true,x) -> x and friends. Never touches
/// double negation or non-constant structure.
NodeId fold_constants(FormulaStore& store, NodeId root);

struct LabelRef {
  int pos_var = 0;  // 0 = absent
  int neg_var = 0;
};

struct VarInfo {
  enum class Role : uint8_t { Atom, LabelPos, LabelNeg };
  Role role = Role::Atom;
  NodeId node{};  // labeled sub-formula, or the atom node
};

struct CnfEncoding {
  EncodingTag tag = EncodingTag::Tseitin;
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<int> important_vars;      // ascending; the input atoms
  std::map<NodeId, int> atom_var;       // atom node -> var, injective
  std::map<NodeId, LabelRef> label_of;  // original sub-formula -> its label var(s)
  std::vector<VarInfo> var_info;        // 1-based, var_info[0] unused

  int num_labels() const { return num_vars - static_cast<int>(important_vars.size()); }
  bool is_important(int var) const;
  /// Vars introduced by the transformation, ascending.
  std::vector<int> label_vars() const;
};

/// Classic CNF via NNF plus distribution of | over &. Exponential in the
/// worst case; meant for label definitions and small inputs.
/// Clause literals refer to atoms_of(root) numbered 1.. in intern order.
std::vector<Clause> demorgan_cnf(FormulaStore& store, NodeId root);

struct EncodingBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// DeMorgan CNF packaged as an encoding with no label vars.
CnfEncoding encode_demorgan(FormulaStore& store, NodeId root, size_t max_clauses = size_t(1) << 24);

/// Tseitin: every non-literal proper sub-formula below the clausified
/// top level gets a label with a bi-implication definition.
CnfEncoding encode_tseitin(FormulaStore& store, NodeId root);

/// Plaisted-Greenbaum: label definitions become one-way implications for
/// sub-formulas of single polarity.
CnfEncoding encode_pg(FormulaStore& store, NodeId root);

/// PG applied to NNF(root); every definition is a one-way implication.
/// With add_mutex, one clause (!Bpos | !Bneg) per dual-labeled sub-formula.
CnfEncoding encode_nnf_pg(FormulaStore& store, NodeId root, bool add_mutex = true);

CnfEncoding encode(FormulaStore& store, NodeId root, EncodingTag tag, bool add_mutex = true);

}  // namespace enumcnf
