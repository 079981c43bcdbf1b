#pragma once

#include "acgs/formula.hpp"
#include "acgs/model.hpp"
#include "acgs/parity_game.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace acgs {

// Auto sends simple bodies to the enumeration backend and everything else to
// the parity backend. Simple bodies also go to the parity backend when a
// perfect-recall coalition member faces a memoryless opponent, or when the
// strategy space exceeds max_combinations.
enum class Algo { Auto, Enum, Parity };

std::string_view to_string(Algo a);
Algo parse_algo(std::string_view text);

struct EngineOptions {
  Algo algo = Algo::Auto;
  unsigned jobs = 0;
  std::uint64_t max_combinations = 1000000;
  ParitySolver solver = ParitySolver::Zielonka;
  std::ostream* dump_games = nullptr;
};

// One entry per coalition subformula that was evaluated.
struct CoalitionStats {
  std::string formula;  // after replacing nested state subformulae
  std::string backend;  // "enum" or "parity"
  std::uint64_t strategies_enumerated = 0;
  std::uint64_t game_vertices = 0;
  std::uint64_t game_edges = 0;
  std::size_t dpa_states = 0;
  double solver_ms = 0;
  double total_ms = 0;
};

struct McStats {
  std::vector<CoalitionStats> coalitions;
  // Fresh propositions introduced for nested state subformulae, in order.
  std::vector<std::pair<std::string, std::string>> substitutions;
};

// The set of states satisfying f. Throws UndecidableConfiguration when f has a
// coalition and some agent is iR, AlgorithmInapplicable when the enumeration
// backend is forced on a body it cannot handle, and ModelError for agent names
// missing from the model.
StateSet mc(const Stcgs& m, const FormulaPtr& f, const EngineOptions& options = {}, McStats* stats = nullptr);

struct CheckResult {
  StateSet satisfying;
  std::vector<std::pair<StateId, bool>> per_initial;
  bool holds = false;  // every initial state satisfies the formula
  McStats stats;
};

// Validates the model first and throws ModelError listing every violation.
CheckResult check(const Stcgs& m, const FormulaPtr& f, const EngineOptions& options = {});

// Evaluation under one strategy type for the agents of f and IR for all
// others. For sigma other than IR every coalition in f must name exactly the
// agents occurring in f. Throws std::invalid_argument outside that fragment,
// UndecidableConfiguration for iR, and ModelError if the resulting structure
// is not valid (imperfect-information types need no identity, perfect
// information types do).
StateSet semantics_sigma(const std::shared_ptr<const Cgs>& g, StrategyType sigma, const FormulaPtr& f,
                         const EngineOptions& options = {});

}  // namespace acgs
