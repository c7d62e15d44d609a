// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "enumcnf/bench.hpp"
#include "enumcnf/dimacs.hpp"
#include "enumcnf/enumerate.hpp"
#include "enumcnf/formula.hpp"
#include "enumcnf/oracle.hpp"
#include "enumcnf/solver.hpp"
#include "enumcnf/transform.hpp"

namespace py = pybind11;
using namespace enumcnf;

namespace {

struct PyFormula {
  std::shared_ptr<FormulaStore> store;
  NodeId root;
};

struct PyEncoding {
  std::shared_ptr<FormulaStore> store;
  CnfEncoding cnf;
};

EncodingTag tag_from_name(const std::string& name) {
  if (name == "ts") return EncodingTag::Tseitin;
  if (name == "pg") return EncodingTag::PlaistedGreenbaum;
  if (name == "nnf-pg") return EncodingTag::NnfPlaistedGreenbaum;
  if (name == "demorgan") return EncodingTag::DeMorgan;
  throw py::value_error("encoding must be one of ts|pg|nnf-pg|demorgan");
}

EnumMode mode_from_name(const std::string& name) {
  if (name == "disjoint") return EnumMode::Disjoint;
  if (name == "non-disjoint") return EnumMode::NonDisjoint;
  throw py::value_error("mode must be disjoint|non-disjoint");
}

PartialAssignment assignment_from_dict(FormulaStore& store, const py::dict& values) {
  PartialAssignment mu;
  for (auto item : values) {
    auto atom = store.find_atom(item.first.cast<std::string>());
    if (!atom) throw py::value_error("unknown atom '" + item.first.cast<std::string>() + "'");
    mu.set(*atom, item.second.cast<bool>());
  }
  return mu;
}

py::dict assignment_to_dict(const FormulaStore& store, const PartialAssignment& mu) {
  py::dict out;
  for (const auto& [atom, value] : mu) out[py::str(store.atom_name(atom))] = value;
  return out;
}

PyFormula py_parse(const std::string& text) {
  auto store = std::make_shared<FormulaStore>();
  NodeId root = parse(*store, text);
  return {store, root};
}

PyFormula py_gen_random(uint64_t seed, int atoms, int depth) {
  auto store = std::make_shared<FormulaStore>();
  RandomSpec spec;
  spec.seed = seed;
  spec.n_atoms = atoms;
  spec.depth = depth;
  NodeId root = gen_random(*store, spec);
  return {store, root};
}

PyFormula py_load_aiger(const std::string& text, double fraction, const std::string& policy,
                        uint64_t seed) {
  auto store = std::make_shared<FormulaStore>();
  Circuit circuit = load_aiger(*store, text);
  ConstrainPolicy p = policy == "one"    ? ConstrainPolicy::AllOne
                      : policy == "zero" ? ConstrainPolicy::AllZero
                      : policy == "random"
                          ? ConstrainPolicy::Random01
                          : throw py::value_error("policy must be one|zero|random");
  NodeId root = constrain_outputs(*store, circuit, fraction, seed, p);
  return {store, root};
}

PyEncoding py_encode(const PyFormula& formula, const std::string& tag, bool mutex) {
  return {formula.store, encode(*formula.store, formula.root, tag_from_name(tag), mutex)};
}

py::dict py_enumerate(const PyEncoding& enc, const std::string& mode, const std::string& phase,
                      bool phase_caching, std::optional<int64_t> timeout_ms,
                      std::optional<size_t> max_models) {
  SolverConfig config;
  config.phase_policy =
      phase == "true-first" ? PhasePolicy::TrueFirst : PhasePolicy::FalseFirst;
  config.phase_caching = phase_caching;
  EnumLimits limits;
  if (timeout_ms) limits.timeout = std::chrono::milliseconds(*timeout_ms);
  limits.max_models = max_models;

  EnumerationResult result = enumerate_projected(enc.cnf, mode_from_name(mode), config, limits);
  py::list cubes, named;
  for (const auto& cube : result.cubes) {
    py::list lits;
    for (Lit l : cube) lits.append(l.code);
    cubes.append(lits);
  }
  for (const auto& mu : result.assignments) named.append(assignment_to_dict(*enc.store, mu));

  py::dict stats;
  stats["n_assignments"] = result.stats.n_assignments;
  stats["n_sat_calls"] = result.stats.n_sat_calls;
  stats["time_ms"] = result.stats.elapsed.count();
  stats["status"] = result.stats.status == EnumStatus::Complete  ? "complete"
                    : result.stats.status == EnumStatus::Timeout ? "timeout"
                                                                 : "limit";
  py::dict out;
  out["cubes"] = cubes;
  out["assignments"] = named;
  out["stats"] = stats;
  return out;
}

py::dict py_verify(const PyFormula& formula, const py::list& assignments,
                   const std::string& mode) {
  std::vector<PartialAssignment> ta;
  for (auto item : assignments)
    ta.push_back(assignment_from_dict(*formula.store, item.cast<py::dict>()));
  VerifyReport report = verify_ta(*formula.store, formula.root, ta, mode_from_name(mode));
  py::dict out;
  out["sound"] = report.sound;
  out["complete"] = report.complete;
  out["disjoint"] = report.disjoint;
  out["model_count"] = report.model_count;
  out["ok"] = report.ok(mode_from_name(mode));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CNF transformations for projected AllSAT enumeration";

  py::class_<PyFormula>(m, "Formula")
      .def_static("parse", &py_parse, py::arg("text"))
      .def("__str__", [](const PyFormula& f) { return to_string(*f.store, f.root); })
      .def("size", [](const PyFormula& f) { return dag_size(*f.store, f.root); })
      .def("atoms",
           [](const PyFormula& f) {
             py::list names;
             for (NodeId a : f.store->atoms_of(f.root)) names.append(f.store->atom_name(a));
             return names;
           })
      .def(
          "residual",
          [](const PyFormula& f, const py::dict& values) {
            Truth3 v = residual(*f.store, f.root, assignment_from_dict(*f.store, values));
            return v == Truth3::True ? "true" : v == Truth3::False ? "false" : "unknown";
          },
          py::arg("assignment"))
      .def("model_count",
           [](const PyFormula& f) { return all_models(*f.store, f.root).masks.size(); });

  py::class_<PyEncoding>(m, "Encoding")
      .def_property_readonly("num_vars", [](const PyEncoding& e) { return e.cnf.num_vars; })
      .def_property_readonly("num_clauses",
                             [](const PyEncoding& e) { return e.cnf.clauses.size(); })
      .def_property_readonly("num_labels", [](const PyEncoding& e) { return e.cnf.num_labels(); })
      .def_property_readonly("important_vars",
                             [](const PyEncoding& e) { return e.cnf.important_vars; })
      .def("clauses",
           [](const PyEncoding& e) {
             py::list out;
             for (const Clause& c : e.cnf.clauses) {
               py::list lits;
               for (Lit l : c) lits.append(l.code);
               out.append(lits);
             }
             return out;
           })
      .def("to_dimacs", [](const PyEncoding& e) { return to_dimacs(*e.store, e.cnf); })
      .def("is_sat", [](const PyEncoding& e) { return Solver(e.cnf).solve().is_sat(); });

  m.def("parse", &py_parse, py::arg("text"));
  m.def("gen_random", &py_gen_random, py::arg("seed"), py::arg("atoms") = 20,
        py::arg("depth") = 8);
  m.def("load_aiger", &py_load_aiger, py::arg("text"), py::arg("fraction") = 1.0,
        py::arg("policy") = "one", py::arg("seed") = 0);
  m.def("encode", &py_encode, py::arg("formula"), py::arg("encoding") = "nnf-pg",
        py::arg("mutex") = true);
  m.def("enumerate_projected", &py_enumerate, py::arg("encoding"), py::arg("mode") = "disjoint",
        py::arg("phase") = "false-first", py::arg("phase_caching") = false,
        py::arg("timeout_ms") = py::none(), py::arg("max_models") = py::none());
  m.def("verify", &py_verify, py::arg("formula"), py::arg("assignments"),
        py::arg("mode") = "disjoint");

  py::register_exception<ParseError>(m, "FormulaParseError");
  py::register_exception<BudgetError>(m, "BudgetError");
  py::register_exception<AigerError>(m, "AigerFormatError");
}
