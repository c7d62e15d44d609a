// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/transform.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace enumcnf {

bool normalize_clause(Clause& clause) {
  std::sort(clause.begin(), clause.end(),
            [](Lit a, Lit b) { return a.var() != b.var() ? a.var() < b.var() : a.code < b.code; });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (size_t i = 1; i < clause.size(); ++i)
    if (clause[i].var() == clause[i - 1].var()) return false;  // l and !l
  return true;
}

std::string tag_name(EncodingTag tag) {
  switch (tag) {
    case EncodingTag::DeMorgan:
      return "demorgan";
    case EncodingTag::Tseitin:
      return "ts";
    case EncodingTag::PlaistedGreenbaum:
      return "pg";
    case EncodingTag::NnfPlaistedGreenbaum:
      return "nnf-pg";
  }
  return "?";
}

bool CnfEncoding::is_important(int var) const {
  return var >= 1 && var <= static_cast<int>(important_vars.size());
}

std::vector<int> CnfEncoding::label_vars() const {
  std::vector<int> out;
  for (int v = static_cast<int>(important_vars.size()) + 1; v <= num_vars; ++v) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// NNF
// ---------------------------------------------------------------------------

NnfResult to_nnf(FormulaStore& store, NodeId root) {
  NnfResult result;
  auto& memo = result.node_map;
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto& [id, expanded] = stack.back();
    if (memo.count(id)) {
      stack.pop_back();
      continue;
    }
    const FormulaNode& n = store.node(id);
    switch (n.kind) {
      case Kind::True:
        memo.emplace(id, std::pair{store.true_node(), store.false_node()});
        break;
      case Kind::False:
        memo.emplace(id, std::pair{store.false_node(), store.true_node()});
        break;
      case Kind::Atom:
        memo.emplace(id, std::pair{id, store.mk_not(id)});
        break;
      case Kind::Not: {
        if (!expanded) {
          expanded = true;
          stack.emplace_back(n.lhs, false);
          continue;
        }
        auto [p, q] = memo.at(n.lhs);
        memo.emplace(id, std::pair{q, p});
        break;
      }
      default: {
        if (!expanded) {
          expanded = true;
          stack.emplace_back(n.lhs, false);
          stack.emplace_back(n.rhs, false);
          continue;
        }
        auto [lp, ln] = memo.at(n.lhs);
        auto [rp, rn] = memo.at(n.rhs);
        NodeId pos, neg;
        switch (n.kind) {
          case Kind::And:
            pos = store.mk_and(lp, rp);
            neg = store.mk_or(ln, rn);
            break;
          case Kind::Or:
            pos = store.mk_or(lp, rp);
            neg = store.mk_and(ln, rn);
            break;
          case Kind::Implies:
            pos = store.mk_or(ln, rp);
            neg = store.mk_and(lp, rn);
            break;
          default:  // Iff
            pos = store.mk_and(store.mk_or(ln, rp), store.mk_or(lp, rn));
            neg = store.mk_and(store.mk_or(lp, rp), store.mk_or(ln, rn));
            break;
        }
        memo.emplace(id, std::pair{pos, neg});
        break;
      }
    }
    stack.pop_back();
  }
  auto [pos, neg] = memo.at(root);
  result.pos_root = pos;
  result.neg_root = neg;
  return result;
}

NodeId fold_constants(FormulaStore& store, NodeId root) {
  std::map<NodeId, NodeId> memo;
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  NodeId t = store.true_node(), f = store.false_node();
  while (!stack.empty()) {
    auto& [id, expanded] = stack.back();
    if (memo.count(id)) {
      stack.pop_back();
      continue;
    }
    const FormulaNode& n = store.node(id);
    if (n.kind == Kind::True || n.kind == Kind::False || n.kind == Kind::Atom) {
      memo.emplace(id, id);
      stack.pop_back();
      continue;
    }
    if (!expanded) {
      expanded = true;
      stack.emplace_back(n.lhs, false);
      if (is_binary(n.kind)) stack.emplace_back(n.rhs, false);
      continue;
    }
    NodeId l = memo.at(n.lhs);
    NodeId folded;
    if (n.kind == Kind::Not) {
      folded = l == t ? f : l == f ? t : store.mk_not(l);
    } else {
      NodeId r = memo.at(n.rhs);
      switch (n.kind) {
        case Kind::And:
          folded = (l == f || r == f) ? f : l == t ? r : r == t ? l : store.mk_and(l, r);
          break;
        case Kind::Or:
          folded = (l == t || r == t) ? t : l == f ? r : r == f ? l : store.mk_or(l, r);
          break;
        case Kind::Implies:
          folded = (l == f || r == t)   ? t
                   : l == t             ? r
                   : r == f             ? (store.kind(l) == Kind::Not ? store.node(l).lhs
                                                                      : store.mk_not(l))
                                        : store.mk_implies(l, r);
          break;
        default:  // Iff
          folded = l == t   ? r
                   : r == t ? l
                   : l == f ? (store.kind(r) == Kind::Not ? store.node(r).lhs : store.mk_not(r))
                   : r == f ? (store.kind(l) == Kind::Not ? store.node(l).lhs : store.mk_not(l))
                            : store.mk_iff(l, r);
          break;
      }
    }
    memo.emplace(id, folded);
    stack.pop_back();
  }
  return memo.at(root);
}

// ---------------------------------------------------------------------------
// DeMorgan distribution
// ---------------------------------------------------------------------------

namespace {

struct DmContext {
  FormulaStore& store;
  std::map<NodeId, int> var_of_atom;
  std::map<NodeId, std::vector<Clause>> memo;
  size_t budget;

  Lit literal(NodeId id) const {
    const FormulaNode& n = store.node(id);
    if (n.kind == Kind::Atom) return Lit(var_of_atom.at(id), true);
    assert(n.kind == Kind::Not);
    return Lit(var_of_atom.at(n.lhs), false);
  }

  const std::vector<Clause>& clauses_of(NodeId id) {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const FormulaNode& n = store.node(id);
    std::vector<Clause> out;
    if (store.is_literal(id)) {
      out.push_back({literal(id)});
    } else if (n.kind == Kind::And) {
      const auto& a = clauses_of(n.lhs);
      const auto& b = clauses_of(n.rhs);
      out = a;
      out.insert(out.end(), b.begin(), b.end());
    } else {
      assert(n.kind == Kind::Or);
      const auto& a = clauses_of(n.lhs);
      const auto& b = clauses_of(n.rhs);
      if (a.size() * b.size() > budget)
        throw EncodingBudgetExceeded("DeMorgan CNF exceeds the clause budget");
      for (const Clause& ca : a)
        for (const Clause& cb : b) {
          Clause merged = ca;
          merged.insert(merged.end(), cb.begin(), cb.end());
          if (normalize_clause(merged)) out.push_back(std::move(merged));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > budget) throw EncodingBudgetExceeded("DeMorgan CNF exceeds the clause budget");
    return memo.emplace(id, std::move(out)).first->second;
  }
};

std::vector<Clause> demorgan_clauses(FormulaStore& store, NodeId root, size_t budget) {
  NodeId folded = fold_constants(store, root);
  std::vector<NodeId> atoms = store.atoms_of(root);
  DmContext ctx{store, {}, {}, budget};
  int next = 1;
  for (NodeId a : atoms) ctx.var_of_atom.emplace(a, next++);
  if (folded == store.true_node()) return {};
  if (folded == store.false_node()) return {Clause{}};
  NodeId nnf = to_nnf(store, folded).pos_root;
  return ctx.clauses_of(nnf);
}

}  // namespace

std::vector<Clause> demorgan_cnf(FormulaStore& store, NodeId root) {
  return demorgan_clauses(store, root, size_t(1) << 32);
}

// ---------------------------------------------------------------------------
// Label-based encoders
// ---------------------------------------------------------------------------

namespace {

// Strips negation chains: returns the first non-Not descendant and whether an
// even number of negations was crossed.
std::pair<NodeId, bool> strip_not(const FormulaStore& store, NodeId id) {
  bool positive = true;
  while (store.kind(id) == Kind::Not) {
    positive = !positive;
    id = store.node(id).lhs;
  }
  return {id, positive};
}

class EncodeBuilder {
 public:
  EncodeBuilder(FormulaStore& store, EncodingTag tag) : store_(store) { enc_.tag = tag; }

  CnfEncoding run(NodeId original_root, bool add_mutex) {
    for (NodeId a : store_.atoms_of(original_root)) {
      int v = ++enc_.num_vars;
      enc_.atom_var.emplace(a, v);
      enc_.important_vars.push_back(v);
      var_info_.push_back({VarInfo::Role::Atom, a});
    }

    NodeId folded = fold_constants(store_, original_root);
    NodeId encode_root = folded;
    NnfResult nnf;
    if (enc_.tag == EncodingTag::NnfPlaistedGreenbaum) {
      nnf = to_nnf(store_, folded);
      encode_root = nnf.pos_root;
    }

    if (encode_root == store_.true_node()) {
      return finish();
    }
    if (encode_root == store_.false_node()) {
      enc_.clauses.push_back({});
      return finish();
    }

    if (enc_.tag != EncodingTag::Tseitin) pol_ = polarities(store_, encode_root);

    std::vector<NodeId> conjuncts;
    flatten_conjunction(encode_root, conjuncts);

    // Label every non-literal operand, children before parents so that label
    // indices follow the structure bottom-up.
    for (NodeId c : conjuncts)
      for (NodeId base : operand_bases(c)) label_dfs(base);
    for (NodeId base : label_order_) emit_definition(base);
    for (NodeId c : conjuncts) emit_top_clause(c);

    if (enc_.tag == EncodingTag::NnfPlaistedGreenbaum) {
      map_labels_to_original(nnf);
      if (add_mutex) emit_mutex_clauses();
    } else {
      for (NodeId base : label_order_)
        enc_.label_of.emplace(base, LabelRef{label_.at(base), 0});
    }
    return finish();
  }

 private:
  CnfEncoding finish() {
    enc_.var_info.assign(1, VarInfo{});  // 1-based
    enc_.var_info.insert(enc_.var_info.end(), var_info_.begin(), var_info_.end());
    return std::move(enc_);
  }

  void flatten_conjunction(NodeId root, std::vector<NodeId>& out) {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      // Double negations cancel at the top level; bare conjunctions split.
      while (store_.kind(n) == Kind::Not && store_.kind(store_.node(n).lhs) == Kind::Not)
        n = store_.node(store_.node(n).lhs).lhs;
      if (store_.kind(n) == Kind::And) {
        stack.push_back(store_.node(n).rhs);
        stack.push_back(store_.node(n).lhs);
      } else {
        out.push_back(n);
      }
    }
  }

  // Non-literal strip-bases that a node is clausified over.
  std::vector<NodeId> operand_bases(NodeId n) const {
    std::vector<NodeId> out;
    auto add = [&](NodeId child) {
      auto [base, positive] = strip_not(store_, child);
      (void)positive;
      if (!store_.is_literal(child) && store_.kind(base) != Kind::Atom) out.push_back(base);
    };
    const FormulaNode& node = store_.node(n);
    if (node.kind == Kind::Not) {
      add(node.lhs);
    } else if (is_binary(node.kind)) {
      add(node.lhs);
      add(node.rhs);
    }
    return out;
  }

  void label_dfs(NodeId base) {
    if (label_.count(base)) return;
    // Explicit stack; circuits can nest deeply.
    std::vector<std::pair<NodeId, bool>> stack{{base, false}};
    while (!stack.empty()) {
      auto& [id, expanded] = stack.back();
      if (label_.count(id)) {
        stack.pop_back();
        continue;
      }
      if (!expanded) {
        expanded = true;
        auto children = operand_bases(id);
        for (auto it = children.rbegin(); it != children.rend(); ++it)
          stack.emplace_back(*it, false);
        continue;
      }
      int v = ++enc_.num_vars;
      label_.emplace(id, v);
      label_order_.push_back(id);
      var_info_.push_back({VarInfo::Role::LabelPos, id});
      stack.pop_back();
    }
  }

  Lit lit_of(NodeId n) const {
    auto [base, positive] = strip_not(store_, n);
    int v = store_.kind(base) == Kind::Atom ? enc_.atom_var.at(base) : label_.at(base);
    return Lit(v, positive);
  }

  void emit(Clause c) {
    if (normalize_clause(c)) enc_.clauses.push_back(std::move(c));
  }

  Polarity polarity_of(NodeId base) const {
    if (enc_.tag == EncodingTag::Tseitin) return Polarity::Both;
    return pol_.at(base);
  }

  void emit_definition(NodeId base) {
    Lit b(label_.at(base), true);
    const FormulaNode& n = store_.node(base);
    Lit l = lit_of(n.lhs);
    Lit r = lit_of(n.rhs);
    Polarity p = polarity_of(base);
    bool fwd = p == Polarity::Pos || p == Polarity::Both;   // B -> def
    bool bwd = p == Polarity::Neg || p == Polarity::Both;   // B <- def
    switch (n.kind) {
      case Kind::And:
        if (fwd) {
          emit({-b, l});
          emit({-b, r});
        }
        if (bwd) emit({b, -l, -r});
        break;
      case Kind::Or:
        if (fwd) emit({-b, l, r});
        if (bwd) {
          emit({b, -l});
          emit({b, -r});
        }
        break;
      case Kind::Implies:
        if (fwd) emit({-b, -l, r});
        if (bwd) {
          emit({b, l});
          emit({b, -r});
        }
        break;
      case Kind::Iff:
        if (fwd) {
          emit({-b, -l, r});
          emit({-b, l, -r});
        }
        if (bwd) {
          emit({b, l, r});
          emit({b, -l, -r});
        }
        break;
      default:
        assert(false && "labels are only attached to binary connectives");
    }
  }

  // The top-level node (and each conjunct of a top-level conjunction) is
  // clausified directly over its children's labels and literals.
  void emit_top_clause(NodeId c) {
    if (store_.is_literal(c)) {
      emit({lit_of(c)});
      return;
    }
    const FormulaNode& n = store_.node(c);
    switch (n.kind) {
      case Kind::Not:
        emit({-lit_of(n.lhs)});
        break;
      case Kind::Or:
        emit({lit_of(n.lhs), lit_of(n.rhs)});
        break;
      case Kind::Implies:
        emit({-lit_of(n.lhs), lit_of(n.rhs)});
        break;
      case Kind::Iff:
        emit({-lit_of(n.lhs), lit_of(n.rhs)});
        emit({lit_of(n.lhs), -lit_of(n.rhs)});
        break;
      default:
        assert(false && "conjunctions are flattened before clausification");
    }
  }

  void map_labels_to_original(const NnfResult& nnf) {
    for (const auto& [orig, images] : nnf.node_map) {
      if (store_.is_literal(orig)) continue;
      LabelRef ref;
      if (auto it = label_.find(images.first); it != label_.end()) ref.pos_var = it->second;
      if (auto it = label_.find(images.second); it != label_.end()) ref.neg_var = it->second;
      if (ref.pos_var == 0 && ref.neg_var == 0) continue;
      enc_.label_of.emplace(orig, ref);
      if (ref.pos_var != 0) var_info_[ref.pos_var - 1] = {VarInfo::Role::LabelPos, orig};
      if (ref.neg_var != 0) var_info_[ref.neg_var - 1] = {VarInfo::Role::LabelNeg, orig};
    }
  }

  void emit_mutex_clauses() {
    std::set<std::pair<int, int>> pairs;
    for (const auto& [orig, ref] : enc_.label_of)
      if (ref.pos_var != 0 && ref.neg_var != 0)
        pairs.emplace(std::min(ref.pos_var, ref.neg_var), std::max(ref.pos_var, ref.neg_var));
    for (auto [a, b] : pairs) emit({Lit(a, false), Lit(b, false)});
  }

  FormulaStore& store_;
  CnfEncoding enc_;
  PolarityMap pol_;
  std::map<NodeId, int> label_;
  std::vector<NodeId> label_order_;
  std::vector<VarInfo> var_info_;
};

}  // namespace

CnfEncoding encode_demorgan(FormulaStore& store, NodeId root, size_t max_clauses) {
  CnfEncoding enc;
  enc.tag = EncodingTag::DeMorgan;
  for (NodeId a : store.atoms_of(root)) {
    int v = ++enc.num_vars;
    enc.atom_var.emplace(a, v);
    enc.important_vars.push_back(v);
    enc.var_info.push_back({VarInfo::Role::Atom, a});
  }
  enc.var_info.insert(enc.var_info.begin(), VarInfo{});
  enc.clauses = demorgan_clauses(store, root, max_clauses);
  return enc;
}

CnfEncoding encode_tseitin(FormulaStore& store, NodeId root) {
  return EncodeBuilder(store, EncodingTag::Tseitin).run(root, false);
}

CnfEncoding encode_pg(FormulaStore& store, NodeId root) {
  return EncodeBuilder(store, EncodingTag::PlaistedGreenbaum).run(root, false);
}

CnfEncoding encode_nnf_pg(FormulaStore& store, NodeId root, bool add_mutex) {
  return EncodeBuilder(store, EncodingTag::NnfPlaistedGreenbaum).run(root, add_mutex);
}

CnfEncoding encode(FormulaStore& store, NodeId root, EncodingTag tag, bool add_mutex) {
  switch (tag) {
    case EncodingTag::DeMorgan:
      return encode_demorgan(store, root);
    case EncodingTag::Tseitin:
      return encode_tseitin(store, root);
    case EncodingTag::PlaistedGreenbaum:
      return encode_pg(store, root);
    default:
      return encode_nnf_pg(store, root, add_mutex);
  }
}

}  // namespace enumcnf
