// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "enumcnf/formula.hpp"
#include "enumcnf/transform.hpp"

namespace enumcnf {

/// DIMACS CNF with the projection convention `c p show v1 ... 0` and
/// per-variable name comments `c var <id> atom <name>` /
/// `c var <id> label <pos|neg> <node>`.
void write_dimacs(std::ostream& out, const FormulaStore& store, const CnfEncoding& cnf);
std::string to_dimacs(const FormulaStore& store, const CnfEncoding& cnf);

struct DimacsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimacsCnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<int> show_vars;  // empty when no projection comment is present
};

DimacsCnf parse_dimacs(std::string_view text);

/// One enumerated assignment per line: signed important-var literals
/// terminated by 0.
std::string model_line(std::span<const Lit> cube);
std::vector<std::vector<Lit>> parse_model_lines(std::istream& in);

}  // namespace enumcnf
