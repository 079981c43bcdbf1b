// Command-line front end: check, validate, gen, ltl2dpa and solvepg.
//
// Exit codes: 0 when every checked formula holds at every initial state (or the
// model is valid), 1 when some formula fails (or validation finds problems),
// 2 on any error.

#include "acgs/benchmarks.hpp"
#include "acgs/engine.hpp"
#include "acgs/errors.hpp"
#include "acgs/io.hpp"
#include "acgs/ltl.hpp"
#include "acgs/parity_game.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace acgs;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> state_names(const Cgs& g, const StateSet& set) {
  std::vector<std::string> out;
  for (auto s = set.find_first(); s != StateSet::npos; s = set.find_next(s)) out.push_back(g.state_name(s));
  return out;
}

struct CheckArgs {
  std::string model;
  std::string formula;
  std::string algo = "auto";
  std::string solver = "zielonka";
  std::string dump;
  unsigned jobs = 0;
  bool json = false;
  bool show_states = false;
  bool show_stats = false;
};

// Summary over all coalitions of one formula.
ordered_json summary(const McStats& st) {
  std::string backend;
  std::uint64_t strategies = 0, vertices = 0;
  double solver_ms = 0;
  for (const auto& c : st.coalitions) {
    if (backend.find(c.backend) == std::string::npos) backend += (backend.empty() ? "" : "+") + c.backend;
    strategies += c.strategies_enumerated;
    vertices += c.game_vertices;
    solver_ms += c.solver_ms;
  }
  ordered_json j;
  j["backend"] = backend.empty() ? "fixpoint" : backend;
  j["strategies_enumerated"] = strategies;
  j["game_vertices"] = vertices;
  j["solver_ms"] = solver_ms;
  return j;
}

int run_check(const CheckArgs& a) {
  const Stcgs m = load_acgs(a.model);
  std::vector<std::string> formulas;
  if (std::filesystem::is_regular_file(a.formula)) {
    formulas = read_formula_lines(read_file(a.formula));
    if (formulas.empty()) throw std::runtime_error("no formula in '" + a.formula + "'");
  } else {
    formulas.push_back(a.formula);
  }

  EngineOptions o;
  o.algo = parse_algo(a.algo);
  o.jobs = a.jobs;
  if (a.solver == "zielonka") {
    o.solver = ParitySolver::Zielonka;
  } else if (a.solver == "spm") {
    o.solver = ParitySolver::SmallProgressMeasures;
  } else {
    throw std::invalid_argument("unknown solver '" + a.solver + "' (expected zielonka or spm)");
  }
  std::ofstream dump;
  if (!a.dump.empty()) {
    dump.open(a.dump, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot write '" + a.dump + "'");
    o.dump_games = &dump;
  }

  const Cgs& g = m.g();
  bool all_hold = true;
  ordered_json reports = ordered_json::array();
  for (const auto& text : formulas) {
    const FormulaPtr f = parse_formula(text);
    const CheckResult r = check(m, f, o);
    all_hold = all_hold && r.holds;
    if (a.json) {
      ordered_json j;
      j["formula"] = to_string(f);
      j["overall"] = r.holds ? "SAT" : "UNSAT";
      j["per_state"] = ordered_json::array();
      for (const auto& [s, ok] : r.per_initial) j["per_state"].push_back({{"state", g.state_name(s)}, {"holds", ok}});
      if (a.show_states) j["satisfying"] = state_names(g, r.satisfying);
      j["stats"] = summary(r.stats);
      if (a.show_stats) {
        ordered_json cs = ordered_json::array();
        for (const auto& c : r.stats.coalitions) {
          cs.push_back({{"formula", c.formula},
                        {"backend", c.backend},
                        {"strategies_enumerated", c.strategies_enumerated},
                        {"game_vertices", c.game_vertices},
                        {"game_edges", c.game_edges},
                        {"dpa_states", c.dpa_states},
                        {"solver_ms", c.solver_ms},
                        {"total_ms", c.total_ms}});
        }
        j["coalitions"] = cs;
        ordered_json subs = ordered_json::object();
        for (const auto& [name, sub] : r.stats.substitutions) subs[name] = sub;
        j["substitutions"] = subs;
      }
      reports.push_back(j);
      continue;
    }
    std::cout << "formula: " << to_string(f) << '\n';
    for (const auto& [s, ok] : r.per_initial) std::cout << "  " << g.state_name(s) << ": " << (ok ? "SAT" : "UNSAT") << '\n';
    if (a.show_states) std::cout << "states: " << describe_state_set(g, r.satisfying) << '\n';
    if (a.show_stats) {
      for (const auto& [name, sub] : r.stats.substitutions) std::cout << "  " << name << " := " << sub << '\n';
      for (const auto& c : r.stats.coalitions) {
        std::cout << "  [" << c.backend << "] " << c.formula << ": strategies=" << c.strategies_enumerated;
        if (c.backend == "parity") {
          std::cout << " vertices=" << c.game_vertices << " edges=" << c.game_edges << " dpa_states=" << c.dpa_states
                    << " solver_ms=" << c.solver_ms;
        }
        std::cout << " total_ms=" << c.total_ms << '\n';
      }
    }
    std::cout << "overall: " << (r.holds ? "SAT" : "UNSAT") << '\n';
  }
  if (a.json) std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << '\n';
  return all_hold ? 0 : 1;
}

int run_validate(const std::string& path) {
  const Stcgs m = load_acgs(path);
  const auto violations = validate(m);
  if (violations.empty()) {
    std::cout << "OK: " << m.g().num_states() << " states, " << m.g().num_agents() << " agents\n";
    return 0;
  }
  for (const auto& v : violations) std::cout << "violation: " << v.message << '\n';
  return 1;
}

struct GenArgs {
  std::string name;
  std::vector<int> params;
  std::string types;
  std::string out;
  bool reachable = false;
};

std::vector<StrategyType> parse_types(const std::string& text) {
  std::vector<StrategyType> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_strategy_type(item));
  return out;
}

int run_gen(const GenArgs& a) {
  auto param = [&](std::size_t k, const char* what) {
    if (k >= a.params.size()) throw std::invalid_argument("gen " + a.name + " needs " + what);
    return a.params[k];
  };
  const auto types = parse_types(a.types);
  auto two_types = [&] {
    if (types.empty()) return std::pair{StrategyType::IR, StrategyType::IR};
    if (types.size() != 2) throw std::invalid_argument("--types needs two entries");
    return std::pair{types[0], types[1]};
  };
  Benchmark b;
  std::string stem;
  if (a.name == "figure1") {
    const auto t = types.empty() ? std::pair{StrategyType::IR, StrategyType::ir} : two_types();
    b = gen_figure1(t.first, t.second);
    stem = "figure1";
  } else if (a.name == "dining") {
    const int n = param(0, "the number of cryptographers");
    b = gen_dining(n);
    stem = "dining" + std::to_string(n);
  } else if (a.name == "castle") {
    const int w = param(0, "the number of workers");
    const int hp = param(1, "the maximal health");
    b = gen_castle(w, hp, types, a.reachable ? CastleSpace::Reachable : CastleSpace::Full);
    stem = "castle" + std::to_string(w) + "_" + std::to_string(hp);
  } else if (a.name == "bookstore") {
    const auto t = two_types();
    b = gen_bookstore(t.first, t.second);
    stem = "bookstore";
  } else {
    throw std::invalid_argument("unknown benchmark '" + a.name + "' (expected figure1, dining, castle or bookstore)");
  }
  const std::string prefix = a.out.empty() ? stem : a.out;
  write_file(prefix + ".acgs", to_acgs(b.model));
  std::string spec;
  for (const auto& [name, text] : b.formulas) spec += "# " + name + "\n" + text + "\n";
  write_file(prefix + ".spec", spec);
  std::cout << "wrote " << prefix << ".acgs (" << b.model.g().num_states() << " states) and " << prefix << ".spec ("
            << b.formulas.size() << " formulae)\n";
  return 0;
}

int run_ltl2dpa(const std::string& text) {
  FormulaPtr f = parse_formula(text);
  if (f->op == Op::Coalition) f = f->lhs;
  std::cout << dpa_to_text(ltl_to_dpa(f));
  return 0;
}

int run_solvepg(const std::string& path, const std::string& solver) {
  ParityGame g = parse_parity_game(read_file(path));
  complete_dead_ends(g);
  const auto w = solve(g, solver == "spm" ? ParitySolver::SmallProgressMeasures : ParitySolver::Zielonka);
  auto list = [](const boost::dynamic_bitset<>& set) {
    std::string out;
    for (auto v = set.find_first(); v != boost::dynamic_bitset<>::npos; v = set.find_next(v)) {
      out += ' ' + std::to_string(v);
    }
    return out;
  };
  std::cout << "W0:" << list(w.w0) << '\n' << "W1:" << list(w.w1) << '\n';
  for (std::size_t v = 0; v < w.strategy.size(); ++v) {
    if (w.strategy[v] >= 0) std::cout << "strategy " << v << " -> " << w.strategy[v] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker for strategic and epistemic properties of concurrent game structures"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Check formulae against a model");
  check_cmd->add_option("model", ca.model, ".acgs model file")->required();
  check_cmd->add_option("formula", ca.formula, "formula text or a .spec file with one formula per line")->required();
  check_cmd->add_option("--algo", ca.algo, "backend: auto, enum or parity")->check(CLI::IsMember({"auto", "enum", "parity"}));
  check_cmd->add_option("--solver", ca.solver, "parity game solver: zielonka or spm")->check(CLI::IsMember({"zielonka", "spm"}));
  check_cmd->add_option("--jobs", ca.jobs, "worker threads (0: available parallelism)");
  check_cmd->add_option("--dump-games", ca.dump, "write every solved parity game to this file");
  check_cmd->add_flag("--json", ca.json, "machine-readable report");
  check_cmd->add_flag("--states", ca.show_states, "print the satisfying states");
  check_cmd->add_flag("--stats", ca.show_stats, "print per-coalition statistics");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model for structural problems");
  validate_cmd->add_option("model", validate_path)->required();

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark model and its formulae");
  gen_cmd->add_option("name", ga.name, "figure1, dining N, castle WORKERS MAX_HP or bookstore")->required();
  gen_cmd->add_option("params", ga.params, "numeric parameters");
  gen_cmd->add_option("--types", ga.types, "comma-separated strategy types in agent order, e.g. IR,ir");
  gen_cmd->add_option("-o,--out", ga.out, "output prefix for the .acgs and .spec files");
  gen_cmd->add_flag("--reachable", ga.reachable, "castle only: keep just the reachable states");

  std::string ltl_text;
  auto* ltl_cmd = app.add_subcommand("ltl2dpa", "Print the parity automaton of an LTL formula");
  ltl_cmd->add_option("formula", ltl_text)->required();

  std::string pg_path, pg_solver = "zielonka";
  auto* pg_cmd = app.add_subcommand("solvepg", "Solve a parity game in text format");
  pg_cmd->add_option("game", pg_path)->required();
  pg_cmd->add_option("--solver", pg_solver)->check(CLI::IsMember({"zielonka", "spm"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check_cmd) return run_check(ca);
    if (*validate_cmd) return run_validate(validate_path);
    if (*gen_cmd) return run_gen(ga);
    if (*ltl_cmd) return run_ltl2dpa(ltl_text);
    if (*pg_cmd) return run_solvepg(pg_path, pg_solver);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const UndecidableConfiguration& e) {
    std::cerr << "undecidable configuration: " << e.what() << '\n';
  } catch (const AlgorithmInapplicable& e) {
    std::cerr << "algorithm not applicable: " << e.what() << '\n';
  } catch (const StrategySpaceTooLarge& e) {
    std::cerr << "strategy space too large: " << e.what() << '\n';
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
