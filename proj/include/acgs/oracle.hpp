#pragma once

// Brute-force reference semantics for tiny instances. Nothing here shares code
// with the fixpoint, enumeration or parity backends beyond the model accessors.

#include "acgs/formula.hpp"
#include "acgs/model.hpp"

#include <set>
#include <string>
#include <vector>

namespace acgs {

using Letter = std::set<std::string>;

// Evaluates a pure LTL formula at position 0 of stem . loop^omega.
bool eval_ltl_on_lasso(const FormulaPtr& phi, const std::vector<Letter>& stem, const std::vector<Letter>& loop);

struct OracleLimits {
  std::size_t max_states = 8;
  std::uint64_t max_strategy_pairs = 200000;
};

// <<coalition>> body for a pure LTL body, by enumerating memoryless uniform
// strategies of the coalition and of every memoryless opponent, and checking
// every simple lasso of the resulting graph. IR opponents are resolved by the
// path quantifier. Throws std::invalid_argument on iR agents or size limits.
StateSet oracle_simple_atl(const Stcgs& m, const std::vector<AgentId>& coalition, const FormulaPtr& body,
                           const OracleLimits& limits = {});

// Every state sequence of length k starting at s that some ability-respecting
// opponent behaviour produces while the agents of xi follow xi. Memoryless
// opponents (ir on their partition, Ir on the identity) commit to one
// strategy for the whole prefix; recall-typed opponents choose freely.
std::set<std::vector<StateId>> outcome_prefixes(const Stcgs& m, StateId s, const CollectiveStrategy& xi, std::size_t k,
                                                std::uint64_t max_strategies = 100000);

}  // namespace acgs
