#pragma once

// Generators for the example systems: the four-state game with a blind second
// agent, the dining cryptographers, the castle game and a book store protocol.

#include "acgs/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace acgs {

struct Benchmark {
  Stcgs model;
  // Named formulae in the concrete syntax accepted by parse_formula.
  std::vector<std::pair<std::string, std::string>> formulas;
};

// Agents "1" (single action a) and "2" (b1, b2), states s0..s3 with q on
// s0, s1, s2. Agent 2 cannot tell s0, s1 and s2 apart when t2 is an
// imperfect-information type; otherwise its observation is the identity.
Benchmark gen_figure1(StrategyType t1 = StrategyType::IR, StrategyType t2 = StrategyType::ir);

// Cryptographers c1..cn and an environment env, reachable part only.
// c1 and c2 are ir, everybody else IR. Formulae psi1..psin. Throws
// std::invalid_argument for n < 3.
Benchmark gen_dining(int n);

enum class CastleSpace { Full, Reachable };

// Agents e, w1..wn (in this order). With CastleSpace::Full the states are the
// whole declared space ((max_hp+1)(n+2))^n * 4n, otherwise only the part
// reachable from the initial state. types lists abilities in the same order; an empty
// vector means all IR. Formulae phi1, phi2. Throws std::invalid_argument for
// fewer than two workers, max_hp outside 1..9 or a types vector of the wrong
// length.
Benchmark gen_castle(int workers, int max_hp, const AbilityMap& types = {},
                     CastleSpace space = CastleSpace::Full);

// Supplier S and purchaser P, reachable part only. Experimental: the
// transition relation is a reconstruction of the described protocol.
Benchmark gen_bookstore(StrategyType supplier = StrategyType::IR, StrategyType purchaser = StrategyType::IR);

// Local state and action names of the book store components, exposed for tests.
const std::vector<std::string>& bookstore_supplier_states();
const std::vector<std::string>& bookstore_supplier_actions();
const std::vector<std::string>& bookstore_purchaser_states();
const std::vector<std::string>& bookstore_purchaser_actions();

}  // namespace acgs
