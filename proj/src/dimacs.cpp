// SPDX-License-Identifier: Apache-2.0
#include "enumcnf/dimacs.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace enumcnf {

void write_dimacs(std::ostream& out, const FormulaStore& store, const CnfEncoding& cnf) {
  out << "c encoding " << tag_name(cnf.tag) << "\n";
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << "\n";
  out << "c p show";
  for (int v : cnf.important_vars) out << ' ' << v;
  out << " 0\n";
  for (int v = 1; v <= cnf.num_vars; ++v) {
    const VarInfo& info = cnf.var_info[static_cast<size_t>(v)];
    if (info.role == VarInfo::Role::Atom) {
      out << "c var " << v << " atom " << store.atom_name(info.node) << "\n";
    } else {
      out << "c var " << v << " label " << (info.role == VarInfo::Role::LabelPos ? "pos" : "neg")
          << ' ' << info.node.index << "\n";
    }
  }
  for (const Clause& c : cnf.clauses) {
    for (Lit l : c) out << l.code << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const FormulaStore& store, const CnfEncoding& cnf) {
  std::ostringstream out;
  write_dimacs(out, store, cnf);
  return out.str();
}

DimacsCnf parse_dimacs(std::string_view text) {
  DimacsCnf result;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  int num_clauses = -1;
  Clause pending;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") {
      std::string second;
      if (ls >> second && second == "p") {
        std::string third;
        if (ls >> third && third == "show") {
          int v;
          while (ls >> v && v != 0) result.show_vars.push_back(v);
        }
      }
      continue;
    }
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt) || fmt != "cnf" || !(ls >> result.num_vars >> num_clauses))
        throw DimacsError("dimacs: malformed problem line");
      header_seen = true;
      continue;
    }
    if (!header_seen) throw DimacsError("dimacs: clause before problem line");
    std::istringstream cs(line);
    int lit = 0;
    while (cs >> lit) {
      if (lit == 0) {
        result.clauses.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      if (std::abs(lit) > result.num_vars) throw DimacsError("dimacs: literal out of range");
      pending.push_back(Lit(lit));
    }
  }
  if (!header_seen) throw DimacsError("dimacs: missing problem line");
  if (!pending.empty()) throw DimacsError("dimacs: clause not terminated by 0");
  if (num_clauses >= 0 && result.clauses.size() != static_cast<size_t>(num_clauses))
    throw DimacsError("dimacs: clause count disagrees with the header");
  return result;
}

std::string model_line(std::span<const Lit> cube) {
  std::ostringstream out;
  for (Lit l : cube) out << l.code << ' ';
  out << '0';
  return out.str();
}

std::vector<std::vector<Lit>> parse_model_lines(std::istream& in) {
  std::vector<std::vector<Lit>> models;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '{' || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<Lit> cube;
    int lit;
    bool terminated = false;
    while (ls >> lit) {
      if (lit == 0) {
        terminated = true;
        break;
      }
      cube.push_back(Lit(lit));
    }
    if (!terminated && cube.empty()) continue;
    if (!terminated) throw DimacsError("model line not terminated by 0");
    models.push_back(std::move(cube));
  }
  return models;
}

}  // namespace enumcnf
