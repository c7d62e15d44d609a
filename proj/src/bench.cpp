// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "enumcnf/rng.hpp"

namespace enumcnf {

namespace {

NodeId gen_node(FormulaStore& store, const RandomSpec& spec, Rng& rng, int depth) {
  NodeId node;
  if (depth == 0) {
    uint64_t k = rng.below(static_cast<uint64_t>(spec.n_atoms));
    node = store.atom("A" + std::to_string(k + 1));
  } else {
    NodeId l = gen_node(store, spec, rng, depth - 1);
    NodeId r = gen_node(store, spec, rng, depth - 1);
    double roll = rng.unit();
    if (roll < spec.p_iff)
      node = store.mk_iff(l, r);
    else if (roll < spec.p_iff + spec.p_and)
      node = store.mk_and(l, r);
    else
      node = store.mk_or(l, r);
  }
  if (rng.coin(spec.p_neg)) node = store.mk_not(node);
  return node;
}

}  // namespace

NodeId gen_random(FormulaStore& store, const RandomSpec& spec) {
  if (spec.n_atoms < 1) throw std::invalid_argument("gen_random: need at least one atom");
  if (spec.depth < 0) throw std::invalid_argument("gen_random: negative depth");
  double sum = spec.p_iff + spec.p_and + spec.p_or;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("gen_random: operator probabilities must sum to 1");
  Rng rng(spec.seed);
  return gen_node(store, spec, rng, spec.depth);
}

// ---------------------------------------------------------------------------
// AIGER
// ---------------------------------------------------------------------------

namespace {

struct AigerReader {
  std::istringstream in;
  explicit AigerReader(std::string_view text) : in(std::string(text)) {}

  std::string line() {
    std::string s;
    if (!std::getline(in, s)) throw AigerError("aiger: unexpected end of input");
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  bool peek_line(std::string& s) {
    if (!std::getline(in, s)) return false;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return true;
  }
};

uint64_t parse_number(const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw AigerError("aiger: expected a number, got '" + tok + "'");
  return std::stoull(tok);
}

std::vector<uint64_t> split_numbers(const std::string& s, size_t expected) {
  std::istringstream iss(s);
  std::vector<uint64_t> out;
  std::string tok;
  while (iss >> tok) out.push_back(parse_number(tok));
  if (out.size() != expected)
    throw AigerError("aiger: expected " + std::to_string(expected) + " fields in '" + s + "'");
  return out;
}

}  // namespace

Circuit load_aiger(FormulaStore& store, std::string_view text) {
  AigerReader reader(text);
  std::istringstream header_line(reader.line());
  std::string magic;
  header_line >> magic;
  if (magic != "aag")
    throw AigerError("aiger: only the ASCII format ('aag') is supported");
  uint64_t m, i, l, o, a;
  if (!(header_line >> m >> i >> l >> o >> a))
    throw AigerError("aiger: malformed header");
  if (l != 0) throw AigerError("aiger: latches are not supported (combinational only)");

  uint64_t max_lit = 2 * m + 1;
  auto check_lit = [&](uint64_t lit) {
    if (lit > max_lit) throw AigerError("aiger: literal " + std::to_string(lit) + " out of range");
  };

  // node_of[v] for variable v; filled by inputs and gate definitions.
  std::vector<NodeId> node_of(m + 1, NodeId{});
  std::vector<uint64_t> input_vars;
  for (uint64_t k = 0; k < i; ++k) {
    uint64_t lit = parse_number(reader.line());
    check_lit(lit);
    if (lit < 2 || lit % 2 != 0) throw AigerError("aiger: input literal must be even and nonzero");
    input_vars.push_back(lit / 2);
  }
  std::vector<uint64_t> output_lits;
  for (uint64_t k = 0; k < o; ++k) {
    uint64_t lit = parse_number(reader.line());
    check_lit(lit);
    output_lits.push_back(lit);
  }
  struct Gate {
    uint64_t lhs, rhs0, rhs1;
  };
  std::vector<Gate> gates;
  for (uint64_t k = 0; k < a; ++k) {
    auto fields = split_numbers(reader.line(), 3);
    check_lit(fields[0]);
    check_lit(fields[1]);
    check_lit(fields[2]);
    if (fields[0] % 2 != 0) throw AigerError("aiger: gate output literal must be even");
    gates.push_back({fields[0], fields[1], fields[2]});
  }

  // Optional symbol table: "i<pos> <name>" lines name the inputs.
  std::vector<std::string> input_names(i);
  std::string sym;
  while (reader.peek_line(sym)) {
    if (sym.empty() || sym[0] == 'c') break;
    if (sym[0] != 'i') continue;  // output/latch symbols are irrelevant here
    std::istringstream ss(sym.substr(1));
    uint64_t pos;
    std::string name;
    if (ss >> pos >> name && pos < i) input_names[pos] = name;
  }

  Circuit circuit;
  for (uint64_t k = 0; k < i; ++k) {
    std::string name = input_names[k].empty() ? "i" + std::to_string(k + 1) : input_names[k];
    NodeId atom = store.atom(name);
    node_of[input_vars[k]] = atom;
    circuit.inputs.push_back(atom);
  }

  auto node_for_lit = [&](uint64_t lit) {
    if (lit == 0) return store.false_node();
    if (lit == 1) return store.true_node();
    NodeId base = node_of[lit / 2];
    if (!base.valid())
      throw AigerError("aiger: literal " + std::to_string(lit) + " used before definition");
    return lit % 2 == 0 ? base : store.mk_not(base);
  };

  for (const Gate& g : gates) {
    if (node_of[g.lhs / 2].valid()) throw AigerError("aiger: gate output defined twice");
    node_of[g.lhs / 2] = store.mk_and(node_for_lit(g.rhs0), node_for_lit(g.rhs1));
  }
  for (uint64_t lit : output_lits) circuit.outputs.push_back(node_for_lit(lit));
  return circuit;
}

NodeId constrain_outputs(FormulaStore& store, const Circuit& circuit, double fraction,
                         uint64_t seed, ConstrainPolicy policy) {
  if (circuit.outputs.empty())
    throw std::invalid_argument("constrain_outputs: circuit has no outputs");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("constrain_outputs: fraction must be in (0, 1]");

  size_t count = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(circuit.outputs.size())));
  count = std::min(count, circuit.outputs.size());

  std::vector<size_t> order(circuit.outputs.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  Rng rng(seed);
  for (size_t k = order.size(); k > 1; --k)
    std::swap(order[k - 1], order[rng.below(k)]);
  order.resize(count);
  std::sort(order.begin(), order.end());

  NodeId conjunction{};
  for (size_t index : order) {
    NodeId out = circuit.outputs[index];
    bool assert_true = policy == ConstrainPolicy::AllOne ||
                       (policy == ConstrainPolicy::Random01 && rng.coin(0.5));
    NodeId term = assert_true ? out : store.mk_not(out);
    conjunction = conjunction.valid() ? store.mk_and(conjunction, term) : term;
  }
  return conjunction;
}

}  // namespace enumcnf
