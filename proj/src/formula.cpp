// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace enumcnf {

bool is_binary(Kind k) {
  switch (k) {
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return true;
    default:
      return false;
  }
}

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Pos:
      return Polarity::Neg;
    case Polarity::Neg:
      return Polarity::Pos;
    default:
      return Polarity::Both;
  }
}

void PartialAssignment::set(NodeId atom, bool value) {
  auto [it, inserted] = bindings_.emplace(atom, value);
  if (!inserted && it->second != value)
    throw std::logic_error("PartialAssignment: atom already bound to the opposite value");
}

void PartialAssignment::unset(NodeId atom) { bindings_.erase(atom); }

std::optional<bool> PartialAssignment::get(NodeId atom) const {
  auto it = bindings_.find(atom);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

bool PartialAssignment::extends(const PartialAssignment& other) const {
  for (const auto& [atom, value] : other.bindings_) {
    auto mine = get(atom);
    if (!mine || *mine != value) return false;
  }
  return true;
}

bool PartialAssignment::conflicts_with(const PartialAssignment& other) const {
  for (const auto& [atom, value] : other.bindings_) {
    auto mine = get(atom);
    if (mine && *mine != value) return true;
  }
  return false;
}

namespace {

uint64_t node_key(const FormulaNode& n) {
  // (kind, lhs, rhs, atom) packed for the intern table; collisions are
  // resolved by the bucket scan in intern().
  uint64_t h = static_cast<uint64_t>(n.kind);
  h = h * 0x9e3779b97f4a7c15ull + n.lhs.index;
  h = h * 0x9e3779b97f4a7c15ull + n.rhs.index;
  h = h * 0x9e3779b97f4a7c15ull + n.atom;
  return h;
}

bool node_equal(const FormulaNode& a, const FormulaNode& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs && a.atom == b.atom;
}

}  // namespace

FormulaStore::FormulaStore() {
  true_ = intern({Kind::True, {}, {}, 0});
  false_ = intern({Kind::False, {}, {}, 0});
}

NodeId FormulaStore::intern(const FormulaNode& node) {
  auto& bucket = intern_table_[node_key(node)];
  for (NodeId id : bucket)
    if (node_equal(nodes_[id.index], node)) return id;
  NodeId id{static_cast<uint32_t>(nodes_.size())};
  nodes_.push_back(node);
  bucket.push_back(id);
  return id;
}

NodeId FormulaStore::atom(std::string_view name) {
  auto it = atom_table_.find(std::string(name));
  if (it != atom_table_.end()) return it->second;
  uint32_t atom_index = static_cast<uint32_t>(atom_names_.size());
  atom_names_.emplace_back(name);
  NodeId id = intern({Kind::Atom, {}, {}, atom_index});
  atom_table_.emplace(std::string(name), id);
  return id;
}

NodeId FormulaStore::mk_not(NodeId x) { return intern({Kind::Not, x, {}, 0}); }
NodeId FormulaStore::mk_and(NodeId l, NodeId r) { return intern({Kind::And, l, r, 0}); }
NodeId FormulaStore::mk_or(NodeId l, NodeId r) { return intern({Kind::Or, l, r, 0}); }
NodeId FormulaStore::mk_implies(NodeId l, NodeId r) { return intern({Kind::Implies, l, r, 0}); }
NodeId FormulaStore::mk_iff(NodeId l, NodeId r) { return intern({Kind::Iff, l, r, 0}); }

const std::string& FormulaStore::atom_name(NodeId id) const {
  assert(kind(id) == Kind::Atom);
  return atom_names_[nodes_[id.index].atom];
}

std::optional<NodeId> FormulaStore::find_atom(std::string_view name) const {
  auto it = atom_table_.find(std::string(name));
  if (it == atom_table_.end()) return std::nullopt;
  return it->second;
}

bool FormulaStore::is_literal(NodeId id) const {
  const FormulaNode& n = nodes_[id.index];
  if (n.kind == Kind::Atom || n.kind == Kind::True || n.kind == Kind::False) return true;
  return n.kind == Kind::Not && kind(n.lhs) == Kind::Atom;
}

std::vector<NodeId> FormulaStore::atoms_of(NodeId root) const {
  return atoms_of(std::span<const NodeId>(&root, 1));
}

std::vector<NodeId> FormulaStore::atoms_of(std::span<const NodeId> roots) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeId> stack(roots.begin(), roots.end());
  std::vector<NodeId> atoms;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[id.index]) continue;
    seen[id.index] = true;
    const FormulaNode& n = nodes_[id.index];
    switch (n.kind) {
      case Kind::Atom:
        atoms.push_back(id);
        break;
      case Kind::Not:
        stack.push_back(n.lhs);
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff:
        stack.push_back(n.rhs);
        stack.push_back(n.lhs);
        break;
      default:
        break;
    }
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

ParseError::ParseError(std::string msg, int line_, int column_)
    : std::runtime_error(std::move(msg)), line(line_), column(column_) {}

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string_view text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at line " + std::to_string(current_.line) + ", column " +
                         std::to_string(current_.col),
                     current_.line, current_.col);
  }

 private:
  void advance() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, {}, line, col};
      return;
    }
    char c = text_[pos_];
    auto two = text_.substr(pos_, 2);
    auto three = text_.substr(pos_, 3);
    if (three == "<->") {
      current_ = {Tok::Iff, three, line, col};
      consume(3);
    } else if (two == "->") {
      current_ = {Tok::Implies, two, line, col};
      consume(2);
    } else if (c == '!') {
      current_ = {Tok::Not, text_.substr(pos_, 1), line, col};
      consume(1);
    } else if (c == '&') {
      current_ = {Tok::And, text_.substr(pos_, 1), line, col};
      consume(1);
    } else if (c == '|') {
      current_ = {Tok::Or, text_.substr(pos_, 1), line, col};
      consume(1);
    } else if (c == '(') {
      current_ = {Tok::LParen, text_.substr(pos_, 1), line, col};
      consume(1);
    } else if (c == ')') {
      current_ = {Tok::RParen, text_.substr(pos_, 1), line, col};
      consume(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        consume(1);
      std::string_view word = text_.substr(start, pos_ - start);
      Tok kind = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident;
      current_ = {kind, word, line, col};
    } else {
      throw ParseError("unknown token '" + std::string(1, c) + "' at line " +
                           std::to_string(line) + ", column " + std::to_string(col),
                       line, col);
    }
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') consume(1);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        consume(1);
      } else {
        break;
      }
    }
  }

  void consume(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_{Tok::End, {}, 1, 1};
};

class Parser {
 public:
  Parser(FormulaStore& store, std::string_view text) : store_(store), lex_(text) {}

  NodeId run() {
    NodeId f = parse_iff();
    if (lex_.peek().kind != Tok::End)
      lex_.fail("unexpected token '" + std::string(lex_.peek().text) + "'");
    return f;
  }

 private:
  NodeId parse_iff() {
    NodeId lhs = parse_implies();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      lhs = store_.mk_iff(lhs, parse_implies());
    }
    return lhs;
  }

  NodeId parse_implies() {
    NodeId lhs = parse_or();
    if (lex_.peek().kind != Tok::Implies) return lhs;
    lex_.take();
    return store_.mk_implies(lhs, parse_implies());  // right-assoc
  }

  NodeId parse_or() {
    NodeId lhs = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      lhs = store_.mk_or(lhs, parse_and());
    }
    return lhs;
  }

  NodeId parse_and() {
    NodeId lhs = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      lhs = store_.mk_and(lhs, parse_unary());
    }
    return lhs;
  }

  NodeId parse_unary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Not:
        lex_.take();
        return store_.mk_not(parse_unary());
      case Tok::LParen: {
        lex_.take();
        NodeId f = parse_iff();
        if (lex_.peek().kind != Tok::RParen) lex_.fail("expected ')'");
        lex_.take();
        return f;
      }
      case Tok::True:
        lex_.take();
        return store_.true_node();
      case Tok::False:
        lex_.take();
        return store_.false_node();
      case Tok::Ident:
        lex_.take();
        return store_.atom(t.text);
      default:
        lex_.fail("expected a formula");
    }
  }

  FormulaStore& store_;
  Lexer lex_;
};

}  // namespace

NodeId parse(FormulaStore& store, std::string_view text) { return Parser(store, text).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Binding strength, loosest first: <-> , -> , | , & , unary.
int precedence(Kind k) {
  switch (k) {
    case Kind::Iff:
      return 1;
    case Kind::Implies:
      return 2;
    case Kind::Or:
      return 3;
    case Kind::And:
      return 4;
    default:
      return 5;
  }
}

void print_node(const FormulaStore& store, NodeId id, int parent_prec, bool allow_equal,
                std::string& out) {
  const FormulaNode& n = store.node(id);
  switch (n.kind) {
    case Kind::True:
      out += "true";
      return;
    case Kind::False:
      out += "false";
      return;
    case Kind::Atom:
      out += store.atom_name(id);
      return;
    case Kind::Not:
      out += '!';
      print_node(store, n.lhs, precedence(Kind::Not), true, out);
      return;
    default:
      break;
  }
  int prec = precedence(n.kind);
  bool parens = prec < parent_prec || (prec == parent_prec && !allow_equal);
  const char* op = n.kind == Kind::And       ? " & "
                   : n.kind == Kind::Or      ? " | "
                   : n.kind == Kind::Implies ? " -> "
                                             : " <-> ";
  if (parens) out += '(';
  // Chains re-parse without parens on their associative side only.
  bool right_assoc = n.kind == Kind::Implies;
  print_node(store, n.lhs, prec, !right_assoc, out);
  out += op;
  print_node(store, n.rhs, prec, right_assoc, out);
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const FormulaStore& store, NodeId root) {
  std::string out;
  print_node(store, root, 0, true, out);
  return out;
}

// ---------------------------------------------------------------------------
// Size, polarity, residual
// ---------------------------------------------------------------------------

uint64_t dag_size(const FormulaStore& store, NodeId root) {
  return dag_size(store, std::span<const NodeId>(&root, 1));
}

uint64_t dag_size(const FormulaStore& store, std::span<const NodeId> roots) {
  std::vector<bool> seen(store.num_nodes(), false);
  std::vector<NodeId> stack(roots.begin(), roots.end());
  uint64_t nodes = 0, arcs = 0;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[id.index]) continue;
    seen[id.index] = true;
    const FormulaNode& n = store.node(id);
    ++nodes;
    switch (n.kind) {
      case Kind::Not:
        if (store.kind(n.lhs) == Kind::Atom) break;  // negated atom is one leaf
        ++arcs;
        stack.push_back(n.lhs);
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff:
        arcs += 2;
        stack.push_back(n.rhs);
        stack.push_back(n.lhs);
        break;
      default:
        break;
    }
  }
  return nodes + arcs;
}

PolarityMap polarities(const FormulaStore& store, NodeId root) {
  // Bitmask lattice: 1 = seen positively, 2 = seen negatively.
  std::vector<uint8_t> mask(store.num_nodes(), 0);
  std::vector<std::pair<NodeId, uint8_t>> work{{root, 1}};
  auto mask_of = [](Polarity p) { return static_cast<uint8_t>(p); };
  while (!work.empty()) {
    auto [id, m] = work.back();
    work.pop_back();
    uint8_t before = mask[id.index];
    uint8_t after = before | m;
    if (after == before) continue;
    mask[id.index] = after;
    uint8_t added = after & ~before;
    Polarity p = static_cast<Polarity>(added);
    const FormulaNode& n = store.node(id);
    switch (n.kind) {
      case Kind::Not:
        work.emplace_back(n.lhs, mask_of(flip(p)));
        break;
      case Kind::And:
      case Kind::Or:
        work.emplace_back(n.lhs, mask_of(p));
        work.emplace_back(n.rhs, mask_of(p));
        break;
      case Kind::Implies:
        work.emplace_back(n.lhs, mask_of(flip(p)));
        work.emplace_back(n.rhs, mask_of(p));
        break;
      case Kind::Iff:
        work.emplace_back(n.lhs, mask_of(Polarity::Both));
        work.emplace_back(n.rhs, mask_of(Polarity::Both));
        break;
      default:
        break;
    }
  }
  PolarityMap result;
  for (uint32_t i = 0; i < mask.size(); ++i)
    if (mask[i] != 0) result.emplace(NodeId{i}, static_cast<Polarity>(mask[i]));
  return result;
}

namespace {

Truth3 not3(Truth3 a) {
  if (a == Truth3::Unknown) return Truth3::Unknown;
  return a == Truth3::True ? Truth3::False : Truth3::True;
}

Truth3 and3(Truth3 a, Truth3 b) {
  if (a == Truth3::False || b == Truth3::False) return Truth3::False;
  if (a == Truth3::True && b == Truth3::True) return Truth3::True;
  return Truth3::Unknown;
}

Truth3 or3(Truth3 a, Truth3 b) {
  if (a == Truth3::True || b == Truth3::True) return Truth3::True;
  if (a == Truth3::False && b == Truth3::False) return Truth3::False;
  return Truth3::Unknown;
}

Truth3 implies3(Truth3 a, Truth3 b) { return or3(not3(a), b); }

Truth3 iff3(Truth3 a, Truth3 b) {
  if (a == Truth3::Unknown || b == Truth3::Unknown) return Truth3::Unknown;
  return a == b ? Truth3::True : Truth3::False;
}

}  // namespace

Truth3 residual(const FormulaStore& store, NodeId root, const PartialAssignment& mu) {
  constexpr uint8_t kUnset = 0xff;
  std::vector<uint8_t> value(store.num_nodes(), kUnset);
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto& [id, expanded] = stack.back();
    if (value[id.index] != kUnset) {
      stack.pop_back();
      continue;
    }
    const FormulaNode& n = store.node(id);
    Truth3 v;
    switch (n.kind) {
      case Kind::True:
        v = Truth3::True;
        break;
      case Kind::False:
        v = Truth3::False;
        break;
      case Kind::Atom: {
        auto b = mu.get(id);
        v = !b ? Truth3::Unknown : (*b ? Truth3::True : Truth3::False);
        break;
      }
      case Kind::Not: {
        if (!expanded) {
          expanded = true;
          stack.emplace_back(n.lhs, false);
          continue;
        }
        v = not3(static_cast<Truth3>(value[n.lhs.index]));
        break;
      }
      default: {
        if (!expanded) {
          expanded = true;
          stack.emplace_back(n.lhs, false);
          stack.emplace_back(n.rhs, false);
          continue;
        }
        Truth3 a = static_cast<Truth3>(value[n.lhs.index]);
        Truth3 b = static_cast<Truth3>(value[n.rhs.index]);
        v = n.kind == Kind::And       ? and3(a, b)
            : n.kind == Kind::Or      ? or3(a, b)
            : n.kind == Kind::Implies ? implies3(a, b)
                                      : iff3(a, b);
        break;
      }
    }
    value[id.index] = static_cast<uint8_t>(v);
    stack.pop_back();
  }
  return static_cast<Truth3>(value[root.index]);
}

}  // namespace enumcnf
