#pragma once

// Simple coalition bodies (one X, U or R over state sets) decided by
// enumerating memoryless uniform strategies of the coalition and of the
// memoryless opponents, each combination reduced to a universal fixpoint.

#include "acgs/model.hpp"

#include <cstdint>

namespace acgs {

enum class Temporal { Next, Until, Release };

// Coalition agents of type IR become Ir; nobody else changes. Throws
// UndecidableConfiguration when an iR agent is present.
Stcgs normalize_abilities(const Stcgs& m, const std::vector<AgentId>& coalition);

// All-paths semantics over the given successor lists. lhs is ignored for Next.
StateSet ctl_universal(const std::vector<std::vector<StateId>>& succ, Temporal op, const StateSet& lhs,
                       const StateSet& rhs);
// Same on the unrestricted model.
StateSet ctl_universal(const Stcgs& m, Temporal op, const StateSet& lhs, const StateSet& rhs);

struct EnumOptions {
  std::uint64_t max_combinations = 1000000;
  unsigned jobs = 0;  // 0 means hardware concurrency
  // When set, only membership of these states is needed; the search stops as
  // soon as all of them are known to satisfy the formula.
  const StateSet* query = nullptr;
};

struct EnumStats {
  std::uint64_t coalition_strategies = 0;
  std::uint64_t opponent_strategies = 0;
  std::uint64_t combinations_checked = 0;
};

// Throws UndecidableConfiguration for iR agents and StrategySpaceTooLarge when
// the number of strategy combinations exceeds the bound.
StateSet check_simple_atl(const Stcgs& m, const std::vector<AgentId>& coalition, Temporal op, const StateSet& lhs,
                          const StateSet& rhs, const EnumOptions& options = {}, EnumStats* stats = nullptr);

}  // namespace acgs
