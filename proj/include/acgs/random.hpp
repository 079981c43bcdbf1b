#pragma once

// Seeded generators for property tests: formulas, lassos, models and games.

#include "acgs/formula.hpp"
#include "acgs/model.hpp"
#include "acgs/oracle.hpp"
#include "acgs/parity_game.hpp"

#include <random>

namespace acgs {



using Rng = std::mt19937_64;

// LTL formula with at most `size` operators over the given propositions.
FormulaPtr random_ltl(Rng& rng, const std::vector<std::string>& props, int size);

std::vector<Letter> random_word(Rng& rng, const std::vector<std::string>& props, std::size_t length);

struct RandomModelParams {
  int min_states = 3;
  int max_states = 6;
  int min_agents = 2;
  int max_agents = 3;
  int max_actions = 2;
  std::vector<std::string> props = {"p", "q"};
  // Abilities are drawn from this list. For IR and Ir agents the observation
  // is forced to the identity.
  std::vector<StrategyType> abilities = {StrategyType::IR, StrategyType::Ir, StrategyType::ir};
  // Probability that a protocol entry of a class is narrowed to a random subset.
  double protocol_narrowing = 0.3;
};

Stcgs random_stcgs(Rng& rng, const RandomModelParams& params = {});

// X q, p U q, p R q, G q or F q over random literals of the given propositions.
// With positive set, G and F are written as false R l and true U l so that
// negations only occur on atoms.
FormulaPtr random_simple_body(Rng& rng, const std::vector<std::string>& props, bool positive = false);

// A positive state formula: boolean combinations of literals and coalitions
// with simple bodies, nesting depth at most `depth`.
FormulaPtr random_positive_formula(Rng& rng, const std::vector<std::string>& props,
                                   const std::vector<std::string>& agents, int depth);

// Ability map pi1 that is coarser than pi2 with respect to the agents in keep.
// Agents with a non-identity observation only receive imperfect-information
// types, so that (g, pi1) stays a valid structure whenever (g, pi2) is.
AbilityMap random_coarser(Rng& rng, const Cgs& g, const AbilityMap& pi2, const std::vector<AgentId>& keep,
                          bool allow_iR = false);

ParityGame random_parity_game(Rng& rng, int max_vertices, std::uint32_t max_rank, int max_out_degree = 3);

}  // namespace acgs
