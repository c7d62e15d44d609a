// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/oracle.hpp"

#include <algorithm>
#include <string>

namespace enumcnf {

namespace {

PartialAssignment assignment_from_mask(std::span<const NodeId> atoms, uint32_t mask) {
  PartialAssignment eta;
  for (size_t i = 0; i < atoms.size(); ++i) eta.set(atoms[i], (mask >> i) & 1u);
  return eta;
}

}  // namespace

ModelSet all_models(const FormulaStore& store, NodeId phi) {
  ModelSet out;
  out.atoms = store.atoms_of(phi);
  if (out.atoms.size() > kOracleAtomBudget)
    throw BudgetError("all_models: formula has " + std::to_string(out.atoms.size()) +
                      " atoms, budget is " + std::to_string(kOracleAtomBudget));
  uint64_t total = uint64_t(1) << out.atoms.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    PartialAssignment eta = assignment_from_mask(out.atoms, static_cast<uint32_t>(mask));
    if (residual(store, phi, eta) == Truth3::True) out.masks.push_back(static_cast<uint32_t>(mask));
  }
  return out;
}

VerifyReport verify_ta(const FormulaStore& store, NodeId phi,
                       std::span<const PartialAssignment> ta, EnumMode mode) {
  std::vector<NodeId> atoms = store.atoms_of(phi);
  if (atoms.size() > kOracleAtomBudget)
    throw BudgetError("verify_ta: formula exceeds the atom budget");

  VerifyReport report;

  // Bound/value masks per enumerated assignment, over the formula atoms.
  std::vector<std::pair<uint32_t, uint32_t>> cubes;  // (care mask, value mask)
  for (const PartialAssignment& mu : ta) {
    uint32_t care = 0, val = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
      auto b = mu.get(atoms[i]);
      if (b) {
        care |= uint32_t(1) << i;
        if (*b) val |= uint32_t(1) << i;
      }
    }
    cubes.emplace_back(care, val);
  }

  uint64_t total = uint64_t(1) << atoms.size();
  for (uint64_t m = 0; m < total; ++m) {
    uint32_t mask = static_cast<uint32_t>(m);
    PartialAssignment eta = assignment_from_mask(atoms, mask);
    bool sat = residual(store, phi, eta) == Truth3::True;
    if (sat) ++report.model_count;
    bool covered = false;
    size_t covering = 0;
    for (size_t i = 0; i < cubes.size(); ++i)
      if ((mask & cubes[i].first) == cubes[i].second) {
        covered = true;
        covering = i;
        break;
      }
    if (covered && !sat && report.sound) {
      report.sound = false;
      report.unsound_assignment = ta[covering];
    }
    if (!covered && sat && report.complete) {
      report.complete = false;
      report.uncovered_model = eta;
    }
  }

  if (mode == EnumMode::Disjoint) {
    for (size_t i = 0; i < cubes.size() && report.disjoint; ++i)
      for (size_t j = i + 1; j < cubes.size(); ++j) {
        uint32_t shared = cubes[i].first & cubes[j].first;
        if (((cubes[i].second ^ cubes[j].second) & shared) == 0) {
          report.disjoint = false;
          report.overlapping_pair = {i, j};
          break;
        }
      }
  }
  return report;
}

bool clauses_satisfied(std::span<const Clause> clauses, std::span<const int8_t> values) {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (Lit l : c) {
      int8_t v = values[static_cast<size_t>(l.var())];
      if (v != 0 && (v > 0) == l.positive()) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::optional<std::vector<Lit>> exists_etaB(const CnfEncoding& cnf, const PartialAssignment& muA) {
  std::vector<int> labels = cnf.label_vars();
  if (labels.size() > kOracleAtomBudget)
    throw BudgetError("exists_etaB: encoding exceeds the label budget");

  std::vector<int8_t> values(static_cast<size_t>(cnf.num_vars) + 1, 0);
  for (const auto& [atom, value] : muA) {
    auto it = cnf.atom_var.find(atom);
    if (it != cnf.atom_var.end()) values[static_cast<size_t>(it->second)] = value ? 1 : -1;
  }

  uint64_t total = uint64_t(1) << labels.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    for (size_t i = 0; i < labels.size(); ++i)
      values[static_cast<size_t>(labels[i])] = ((mask >> i) & 1u) ? 1 : -1;
    if (clauses_satisfied(cnf.clauses, values)) {
      std::vector<Lit> etaB;
      for (size_t i = 0; i < labels.size(); ++i)
        etaB.emplace_back(labels[i], ((mask >> i) & 1u) != 0);
      return etaB;
    }
  }
  return std::nullopt;
}

std::vector<Lit> construct_etaB(const FormulaStore& store, NodeId phi, const CnfEncoding& cnf,
                                const PartialAssignment& muA) {
  if (cnf.tag != EncodingTag::NnfPlaistedGreenbaum)
    throw std::invalid_argument("construct_etaB: encoding is not NNF+PG");
  if (residual(store, phi, muA) != Truth3::True)
    throw std::invalid_argument("construct_etaB: muA does not satisfy phi");

  std::vector<Lit> etaB;
  for (int v : cnf.label_vars()) {
    NodeId defined = cnf.var_info[static_cast<size_t>(v)].node;
    VarInfo::Role role = cnf.var_info[static_cast<size_t>(v)].role;
    // var_info points at the original sub-formula for dual labels and at the
    // NNF node itself for labels introduced by the Iff expansion. A positive
    // label is true exactly when the labeled node's residual is True; a
    // negative label stands for NNF(!node), whose residual is True exactly
    // when the node's residual is False.
    Truth3 r = residual(store, defined, muA);
    etaB.emplace_back(v, role == VarInfo::Role::LabelNeg ? r == Truth3::False : r == Truth3::True);
  }

  // Theorem check: muA together with the construction satisfies the encoding.
  std::vector<int8_t> values(static_cast<size_t>(cnf.num_vars) + 1, 0);
  for (const auto& [atom, value] : muA) {
    auto it = cnf.atom_var.find(atom);
    if (it != cnf.atom_var.end()) values[static_cast<size_t>(it->second)] = value ? 1 : -1;
  }
  for (Lit l : etaB) values[static_cast<size_t>(l.var())] = l.positive() ? 1 : -1;
  if (!clauses_satisfied(cnf.clauses, values))
    throw std::logic_error("construct_etaB: constructed assignment violates the encoding");
  return etaB;
}

bool check_nnf_residual_equiv(FormulaStore& store, NodeId phi, const PartialAssignment& mu) {
  Truth3 direct = residual(store, phi, mu);
  Truth3 via_nnf = residual(store, to_nnf(store, phi).pos_root, mu);
  return direct == via_nnf;
}

}  // namespace enumcnf
