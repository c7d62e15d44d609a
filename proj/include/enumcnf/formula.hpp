// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace enumcnf {

/// Handle into a FormulaStore. Structurally equal sub-formulas intern to the
/// same id, so ids double as structural identity.
struct NodeId {
  static constexpr uint32_t kInvalid = 0xffffffffu;
  uint32_t index = kInvalid;

  constexpr bool valid() const { return index != kInvalid; }
  friend constexpr bool operator==(NodeId a, NodeId b) { return a.index == b.index; }
  friend constexpr auto operator<=>(NodeId a, NodeId b) { return a.index <=> b.index; }
};

struct NodeIdHash {
  size_t operator()(NodeId id) const { return std::hash<uint32_t>{}(id.index); }
};

enum class Kind : uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

bool is_binary(Kind k);

struct FormulaNode {
  Kind kind = Kind::True;
  NodeId lhs{};
  NodeId rhs{};
  uint32_t atom = 0;  // index into the store's atom-name table, Kind::Atom only
};

/// Three-valued verdict of a formula under a partial assignment.
enum class Truth3 : uint8_t { False = 0, True = 1, Unknown = 2 };

enum class Polarity : uint8_t { Pos = 1, Neg = 2, Both = 3 };

Polarity flip(Polarity p);

/// Partial map from atom nodes to truth values. An atom may not be rebound to
/// a different value; rebinding with the same value is a no-op.
class PartialAssignment {
 public:
  void set(NodeId atom, bool value);
  void unset(NodeId atom);
  std::optional<bool> get(NodeId atom) const;
  bool contains(NodeId atom) const { return bindings_.count(atom) != 0; }
  size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  bool extends(const PartialAssignment& other) const;
  /// True iff some atom is bound to opposite values in the two assignments.
  bool conflicts_with(const PartialAssignment& other) const;

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  std::map<NodeId, bool> bindings_;
};

/// Hash-consed single-rooted formula DAGs. Construction is single-writer;
/// once built, all queries are const and safe to share across threads.
class FormulaStore {
 public:
  FormulaStore();

  NodeId true_node() const { return true_; }
  NodeId false_node() const { return false_; }

  NodeId atom(std::string_view name);
  NodeId mk_not(NodeId x);
  NodeId mk_and(NodeId l, NodeId r);
  NodeId mk_or(NodeId l, NodeId r);
  NodeId mk_implies(NodeId l, NodeId r);
  NodeId mk_iff(NodeId l, NodeId r);
  NodeId intern(const FormulaNode& node);

  const FormulaNode& node(NodeId id) const { return nodes_[id.index]; }
  Kind kind(NodeId id) const { return nodes_[id.index].kind; }
  const std::string& atom_name(NodeId id) const;
  std::optional<NodeId> find_atom(std::string_view name) const;

  size_t num_nodes() const { return nodes_.size(); }

  /// True for atoms, constants, and negated atoms.
  bool is_literal(NodeId id) const;

  /// Atoms reachable from root, in first-interned order (ids ascending).
  std::vector<NodeId> atoms_of(NodeId root) const;
  std::vector<NodeId> atoms_of(std::span<const NodeId> roots) const;

 private:
  std::vector<FormulaNode> nodes_;
  std::vector<std::string> atom_names_;
  std::unordered_map<uint64_t, std::vector<NodeId>> intern_table_;
  std::unordered_map<std::string, NodeId> atom_table_;
  NodeId true_{};
  NodeId false_{};
};

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int column);
  int line;
  int column;
};

/// Recursive-descent parser for the formula grammar:
///   formula := iff
///   iff     := imp ('<->' imp)*        (left-assoc)
///   imp     := or ('->' or)*           (right-assoc)
///   or      := and ('|' and)*
///   and     := unary ('&' unary)*
///   unary   := '!' unary | '(' formula ')' | 'true' | 'false' | IDENT
/// '#' starts a comment that runs to end of line.
NodeId parse(FormulaStore& store, std::string_view text);

/// Inverse of parse up to whitespace: parse(to_string(f)) interns back to f.
std::string to_string(const FormulaStore& store, NodeId root);

/// Nodes plus arcs of the sub-DAG reachable from the roots, shared nodes
/// counted once. A negation applied directly to an atom counts as a single
/// literal leaf, matching the convention that leaves are literals.
uint64_t dag_size(const FormulaStore& store, NodeId root);
uint64_t dag_size(const FormulaStore& store, std::span<const NodeId> roots);

using PolarityMap = std::unordered_map<NodeId, Polarity, NodeIdHash>;

/// Polarity of every node reachable from root, root being positive. Children
/// of an Iff occur with both polarities, as does any node reachable through
/// an even and an odd number of negations.
PolarityMap polarities(const FormulaStore& store, NodeId root);

/// Three-valued residual verdict of root under mu. Unbound atoms evaluate to
/// Unknown; no logical simplification beyond constant propagation happens,
/// e.g. B | !B under {} is Unknown.
Truth3 residual(const FormulaStore& store, NodeId root, const PartialAssignment& mu);

}  // namespace enumcnf
