// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: encode | enumerate | verify | gen | bench | solve.
// Exit codes: 0 ok, 1 verification failed, 2 input error, 3 budget/timeout.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "enumcnf/bench.hpp"
#include "enumcnf/dimacs.hpp"
#include "enumcnf/enumerate.hpp"
#include "enumcnf/oracle.hpp"
#include "enumcnf/solver.hpp"
#include "enumcnf/transform.hpp"

using namespace enumcnf;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

struct InputOptions {
  double constrain_fraction = 1.0;
  std::string constrain_policy = "one";
  uint64_t constrain_seed = 0;
};

ConstrainPolicy parse_policy(const std::string& name) {
  if (name == "one") return ConstrainPolicy::AllOne;
  if (name == "zero") return ConstrainPolicy::AllZero;
  if (name == "random") return ConstrainPolicy::Random01;
  throw CLI::ValidationError("--constrain-policy", "expected one|zero|random");
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool looks_like_aiger(const std::string& path, const std::string& text) {
  if (path.size() > 4 && path.ends_with(".aag")) return true;
  return text.rfind("aag ", 0) == 0;
}

NodeId load_input(FormulaStore& store, const std::string& path, const InputOptions& opts) {
  std::string text = read_file(path);
  if (looks_like_aiger(path, text)) {
    Circuit circuit = load_aiger(store, text);
    return constrain_outputs(store, circuit, opts.constrain_fraction, opts.constrain_seed,
                             parse_policy(opts.constrain_policy));
  }
  return parse(store, text);
}

EncodingTag parse_encoding(const std::string& name) {
  if (name == "ts") return EncodingTag::Tseitin;
  if (name == "pg") return EncodingTag::PlaistedGreenbaum;
  if (name == "nnf-pg") return EncodingTag::NnfPlaistedGreenbaum;
  if (name == "demorgan") return EncodingTag::DeMorgan;
  throw CLI::ValidationError("--encoding", "expected ts|pg|nnf-pg|demorgan");
}

EnumMode parse_mode(const std::string& name) {
  if (name == "disjoint") return EnumMode::Disjoint;
  if (name == "non-disjoint") return EnumMode::NonDisjoint;
  throw CLI::ValidationError("--mode", "expected disjoint|non-disjoint");
}

std::string mode_name(EnumMode mode) {
  return mode == EnumMode::Disjoint ? "disjoint" : "non-disjoint";
}

std::string status_name(EnumStatus status) {
  switch (status) {
    case EnumStatus::Complete:
      return "complete";
    case EnumStatus::Timeout:
      return "timeout";
    case EnumStatus::LimitHit:
      return "limit";
  }
  return "?";
}

std::vector<Lit> parse_prefix(const FormulaStore& store, const CnfEncoding& cnf,
                              const std::string& spec) {
  std::vector<Lit> lits;
  std::istringstream ss(spec);
  std::string tok;
  while (ss >> tok) {
    bool positive = true;
    std::string name = tok;
    if (tok[0] == '-' || tok[0] == '+') {
      positive = tok[0] == '+';
      name = tok.substr(1);
    }
    auto atom = store.find_atom(name);
    if (!atom) throw std::runtime_error("unknown atom '" + name + "' in prefix");
    auto it = cnf.atom_var.find(*atom);
    if (it == cnf.atom_var.end()) throw std::runtime_error("atom '" + name + "' not in encoding");
    lits.emplace_back(it->second, positive);
  }
  return lits;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_encode(const std::string& input, const std::string& encoding, bool mutex,
               const std::string& out_path, const InputOptions& in_opts) {
  FormulaStore store;
  NodeId root = load_input(store, input, in_opts);
  CnfEncoding cnf = encode(store, root, parse_encoding(encoding), mutex);
  std::ofstream file;
  write_dimacs(open_output(file, out_path), store, cnf);
  return kExitOk;
}

int cmd_solve(const std::string& input, const std::string& encoding, const InputOptions& in_opts) {
  FormulaStore store;
  NodeId root = load_input(store, input, in_opts);
  auto start = std::chrono::steady_clock::now();
  CnfEncoding cnf = encode(store, root, parse_encoding(encoding));
  Solver solver(cnf);
  SolveResult result = solver.solve();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  std::cout << (result.is_sat() ? "SAT" : "UNSAT") << "\n";
  std::cout << "c time_ms " << ms << "\n";
  return kExitOk;
}

int cmd_enumerate(const std::string& input, const std::string& encoding, const std::string& mode,
                  const std::string& phase, bool phase_caching, const std::string& prefix,
                  int64_t timeout_ms, int64_t max_models, bool mutex, const std::string& out_path,
                  const InputOptions& in_opts) {
  FormulaStore store;
  NodeId root = load_input(store, input, in_opts);
  CnfEncoding cnf = encode(store, root, parse_encoding(encoding), mutex);

  SolverConfig config;
  config.phase_policy = phase == "true-first" ? PhasePolicy::TrueFirst : PhasePolicy::FalseFirst;
  config.phase_caching = phase_caching;

  EnumLimits limits;
  if (timeout_ms > 0) limits.timeout = std::chrono::milliseconds(timeout_ms);
  if (max_models > 0) limits.max_models = static_cast<size_t>(max_models);

  std::vector<Lit> prefix_lits;
  if (!prefix.empty()) prefix_lits = parse_prefix(store, cnf, prefix);

  EnumMode enum_mode = parse_mode(mode);
  EnumerationResult result = enumerate_projected(cnf, enum_mode, config, limits, prefix_lits);

  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  for (const auto& cube : result.cubes) out << model_line(cube) << "\n";
  json stats = {
      {"instance", input},
      {"encoding", encoding},
      {"mode", mode},
      {"n_assignments", result.stats.n_assignments},
      {"n_vars", cnf.num_vars},
      {"n_clauses", cnf.clauses.size()},
      {"n_labels", cnf.num_labels()},
      {"n_sat_calls", result.stats.n_sat_calls},
      {"time_ms", result.stats.elapsed.count()},
      {"status", status_name(result.stats.status)},
  };
  out << stats.dump() << "\n";
  return result.stats.status == EnumStatus::Timeout ? kExitBudget : kExitOk;
}

int cmd_verify(const std::string& input, const std::string& models_path, const std::string& mode,
               const InputOptions& in_opts) {
  FormulaStore store;
  NodeId root = load_input(store, input, in_opts);
  std::vector<NodeId> atoms = store.atoms_of(root);

  std::string models_text = read_file(models_path);
  std::istringstream models_in(models_text);
  std::vector<std::vector<Lit>> cubes = parse_model_lines(models_in);

  std::vector<PartialAssignment> ta;
  for (const auto& cube : cubes) {
    PartialAssignment mu;
    for (Lit l : cube) {
      if (l.var() < 1 || l.var() > static_cast<int>(atoms.size()))
        throw std::runtime_error("model literal " + std::to_string(l.code) +
                                 " is not an important var");
      mu.set(atoms[static_cast<size_t>(l.var()) - 1], l.positive());
    }
    ta.push_back(std::move(mu));
  }

  EnumMode enum_mode = parse_mode(mode);
  VerifyReport report = verify_ta(store, root, ta, enum_mode);
  std::cout << "sound: " << (report.sound ? "yes" : "no") << "\n";
  std::cout << "complete: " << (report.complete ? "yes" : "no") << "\n";
  if (enum_mode == EnumMode::Disjoint)
    std::cout << "disjoint: " << (report.disjoint ? "yes" : "no") << "\n";
  std::cout << "model_count: " << report.model_count << "\n";
  return report.ok(enum_mode) ? kExitOk : kExitVerifyFailed;
}

int cmd_gen(uint64_t seed, int atoms, int depth, int count, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    FormulaStore store;
    RandomSpec spec;
    spec.seed = seed + static_cast<uint64_t>(i);
    spec.n_atoms = atoms;
    spec.depth = depth;
    NodeId root = gen_random(store, spec);
    std::ostringstream name;
    name << "rand_a" << atoms << "_d" << depth << "_s" << spec.seed << ".fml";
    std::ofstream out(std::filesystem::path(out_dir) / name.str());
    if (!out) throw std::runtime_error("cannot write into '" + out_dir + "'");
    out << "# seed=" << spec.seed << " atoms=" << atoms << " depth=" << depth << "\n";
    out << to_string(store, root) << "\n";
  }
  return kExitOk;
}

struct BenchCell {
  std::string instance;
  std::string encoding;
  std::string mode;
};

std::mutex stderr_mutex_;

int cmd_bench(const std::vector<std::string>& instances, const std::string& encodings_csv,
              const std::string& modes_csv, int64_t timeout_ms, int64_t max_models,
              const std::string& csv_path, bool verify, int jobs, const InputOptions& in_opts) {
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
  };
  std::vector<std::string> encodings = split(encodings_csv);
  std::vector<std::string> modes = split(modes_csv);

  std::vector<BenchCell> cells;
  for (const std::string& inst : instances)
    for (const std::string& enc : encodings)
      for (const std::string& mode : modes) cells.push_back({inst, enc, mode});

  std::vector<std::string> rows(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t index = next.fetch_add(1);
      if (index >= cells.size()) return;
      const BenchCell& cell = cells[index];
      std::ostringstream row;
      row << cell.instance << ',' << cell.encoding << ',' << cell.mode << ',';
      try {
        FormulaStore store;
        NodeId root = load_input(store, cell.instance, in_opts);
        CnfEncoding cnf = encode(store, root, parse_encoding(cell.encoding));
        EnumLimits limits;
        if (timeout_ms > 0) limits.timeout = std::chrono::milliseconds(timeout_ms);
        if (max_models > 0) limits.max_models = static_cast<size_t>(max_models);
        EnumerationResult result =
            enumerate_projected(cnf, parse_mode(cell.mode), SolverConfig{}, limits);
        std::string status = status_name(result.stats.status);
        if (verify && result.stats.status == EnumStatus::Complete &&
            store.atoms_of(root).size() <= kOracleAtomBudget) {
          VerifyReport report = verify_ta(store, root, result.assignments, parse_mode(cell.mode));
          if (!report.ok(parse_mode(cell.mode))) status = "error";
        }
        row << cnf.num_vars << ',' << cnf.clauses.size() << ',' << cnf.num_labels() << ','
            << result.stats.n_assignments << ',' << result.stats.elapsed.count() << ',' << status;
      } catch (const std::exception& e) {
        row << "0,0,0,0,0,error";
        std::lock_guard<std::mutex> lock(stderr_mutex_);
        std::cerr << "bench: " << cell.instance << " (" << cell.encoding << "/" << cell.mode
                  << "): " << e.what() << "\n";
      }
      rows[index] = row.str();
    }
  };

  int n_workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream file;
  std::ostream& out = open_output(file, csv_path);
  out << "instance,encoding,mode,n_vars,n_clauses,n_labels,n_assignments,time_ms,status\n";
  for (const std::string& row : rows) out << row << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNF transformations for projected AllSAT enumeration"};
  app.require_subcommand(1);

  InputOptions in_opts;
  auto add_input_opts = [&](CLI::App* cmd) {
    cmd->add_option("--constrain-fraction", in_opts.constrain_fraction,
                    "Fraction of AIGER outputs to constrain (default 1.0)");
    cmd->add_option("--constrain-policy", in_opts.constrain_policy,
                    "AIGER output constraint: one|zero|random");
    cmd->add_option("--constrain-seed", in_opts.constrain_seed,
                    "Seed for AIGER output selection");
  };

  std::string input, out_path, encoding = "nnf-pg", mode = "disjoint", phase = "false-first";
  std::string bench_encodings = "ts,pg,nnf-pg", bench_modes = "disjoint,non-disjoint";
  std::string prefix, models_path, csv_path, out_dir = ".";
  bool mutex = true, phase_caching = false, verify = false;
  int64_t timeout_ms = 0, max_models = 0;
  uint64_t seed = 1;
  int atoms = 20, depth = 8, count = 1, jobs = 1;
  std::vector<std::string> instances;

  auto* enc_cmd = app.add_subcommand("encode", "CNF-ize a formula and emit DIMACS");
  enc_cmd->add_option("input", input, "Formula file (.fml grammar or .aag), '-' for stdin")
      ->required();
  enc_cmd->add_option("--encoding", encoding, "ts|pg|nnf-pg|demorgan");
  enc_cmd->add_flag("--mutex,!--no-mutex", mutex, "Mutual-exclusion clauses for nnf-pg");
  enc_cmd->add_option("--out,-o", out_path, "Output file (default stdout)");
  add_input_opts(enc_cmd);

  auto* enum_cmd = app.add_subcommand("enumerate", "Projected AllSAT over the input atoms");
  enum_cmd->add_option("input", input)->required();
  enum_cmd->add_option("--encoding", encoding, "ts|pg|nnf-pg|demorgan");
  enum_cmd->add_option("--mode", mode, "disjoint|non-disjoint");
  enum_cmd->add_option("--phase", phase, "false-first|true-first");
  enum_cmd->add_flag("--phase-caching", phase_caching, "Reuse the last assigned phase");
  enum_cmd->add_option("--force-prefix", prefix, "Literals decided first, e.g. \"-A3 -A4 -A7\"");
  enum_cmd->add_option("--timeout", timeout_ms, "Per-run timeout in ms");
  enum_cmd->add_option("--max-models", max_models, "Stop after this many assignments");
  enum_cmd->add_flag("--mutex,!--no-mutex", mutex, "Mutual-exclusion clauses for nnf-pg");
  enum_cmd->add_option("--out,-o", out_path, "Output file (default stdout)");
  add_input_opts(enum_cmd);

  auto* ver_cmd = app.add_subcommand("verify", "Replay an assignment set against brute force");
  ver_cmd->add_option("input", input)->required();
  ver_cmd->add_option("models", models_path, "Model stream file")->required();
  ver_cmd->add_option("--mode", mode, "disjoint|non-disjoint");
  add_input_opts(ver_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "Generate seeded random formulas");
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--atoms", atoms);
  gen_cmd->add_option("--depth", depth);
  gen_cmd->add_option("--count", count);
  gen_cmd->add_option("--out-dir", out_dir);

  auto* bench_cmd = app.add_subcommand("bench", "Run the instance x encoding x mode matrix");
  bench_cmd->add_option("--instances", instances, "Instance files")->required();
  bench_cmd->add_option("--encodings", bench_encodings, "Comma-separated list");
  bench_cmd->add_option("--modes", bench_modes, "Comma-separated list");
  bench_cmd->add_option("--timeout", timeout_ms, "Per-cell timeout in ms");
  bench_cmd->add_option("--max-models", max_models);
  bench_cmd->add_option("--csv", csv_path, "CSV output (default stdout)");
  bench_cmd->add_flag("--verify", verify, "Replay the oracle on small instances");
  bench_cmd->add_option("--jobs", jobs, "Parallel cells");
  add_input_opts(bench_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "One plain SAT call");
  solve_cmd->add_option("input", input)->required();
  solve_cmd->add_option("--encoding", encoding, "ts|pg|nnf-pg|demorgan");
  add_input_opts(solve_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (enc_cmd->parsed()) return cmd_encode(input, encoding, mutex, out_path, in_opts);
    if (enum_cmd->parsed())
      return cmd_enumerate(input, encoding, mode, phase, phase_caching, prefix, timeout_ms,
                           max_models, mutex, out_path, in_opts);
    if (ver_cmd->parsed()) return cmd_verify(input, models_path, mode, in_opts);
    if (gen_cmd->parsed()) return cmd_gen(seed, atoms, depth, count, out_dir);
    if (bench_cmd->parsed())
      return cmd_bench(instances, bench_encodings, bench_modes, timeout_ms, max_models, csv_path,
                       verify, jobs, in_opts);
    if (solve_cmd->parsed()) return cmd_solve(input, encoding, in_opts);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const EncodingBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
