#include "acgs/benchmarks.hpp"
#include "acgs/engine.hpp"
#include "acgs/errors.hpp"
#include "acgs/io.hpp"
#include "acgs/random.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <sstream>

using namespace acgs;
using T = StrategyType;

namespace {

StateSet states(std::size_t n, std::initializer_list<StateId> members) {
  StateSet s(n);
  for (StateId m : members) s.set(m);
  return s;
}

// States from which the coalition can force the next state into x, with
// perfect information: one coalition projection whose every completion lands in x.
StateSet controllable_pre(const Cgs& g, const std::vector<AgentId>& a, const StateSet& x) {
  StateSet out(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::map<std::vector<ActionId>, bool> good;
    for (const auto& succ : successors(g, s)) {
      std::vector<ActionId> proj;
      for (AgentId i : a) proj.push_back(succ.joint[i]);
      auto [it, fresh] = good.emplace(proj, true);
      it->second = it->second && x.test(succ.target);
    }
    for (const auto& [proj, ok] : good) {
      if (ok) out.set(s);
    }
  }
  return out;
}

StateSet attractor(const Cgs& g, const std::vector<AgentId>& a, const StateSet& target) {
  StateSet z = target;
  for (;;) {
    const StateSet next = z | controllable_pre(g, a, z);
    if (next == z) return z;
    z = next;
  }
}

StateSet safe_region(const Cgs& g, const std::vector<AgentId>& a, const StateSet& safe) {
  StateSet z = safe;
  for (;;) {
    const StateSet next = safe & controllable_pre(g, a, z);
    if (next == z) return z;
    z = next;
  }
}

EngineOptions with_algo(Algo a) {
  EngineOptions o;
  o.algo = a;
  return o;
}

}  // namespace

TEST_CASE("figure 1 verdicts") {
  const auto f = parse_formula("<<1>> G q");
  for (Algo a : {Algo::Auto, Algo::Enum, Algo::Parity}) {
    const auto blind = check(gen_figure1().model, f, with_algo(a));
    CHECK(blind.holds);
    CHECK(blind.satisfying == states(4, {0}));
    REQUIRE(blind.per_initial.size() == 1);
    CHECK(blind.per_initial[0] == std::pair<StateId, bool>{0, true});
    CHECK_FALSE(check(gen_figure1(T::IR, T::IR).model, f, with_algo(a)).holds);
  }
}

TEST_CASE("algorithm names") {
  for (Algo a : {Algo::Auto, Algo::Enum, Algo::Parity}) CHECK(parse_algo(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algo("fast"), std::invalid_argument);
}

TEST_CASE("epistemic operators on figure 1") {
  const Stcgs m = gen_figure1().model;
  CHECK(mc(m, parse_formula("K 2 q")) == states(4, {0, 1, 2}));
  CHECK(mc(m, parse_formula("K 1 q")) == states(4, {0, 1, 2}));
  CHECK(mc(m, parse_formula("E{1, 2} q")) == states(4, {0, 1, 2}));
  CHECK(mc(m, parse_formula("C{1, 2} q")) == states(4, {0, 1, 2}));
  CHECK(mc(m, parse_formula("D{1, 2} q")) == states(4, {0, 1, 2}));
  // <<1>> G q holds only at s0, which agent 2 cannot single out.
  CHECK(mc(m, parse_formula("K 2 <<1>> G q")).none());
  CHECK(mc(m, parse_formula("K 1 <<1>> G q")) == states(4, {0}));
  CHECK(mc(m, parse_formula("!K 2 q")) == states(4, {3}));
}

TEST_CASE("engine errors") {
  const Stcgs m = gen_figure1().model;
  CHECK_THROWS_AS(mc(m, parse_formula("<<bob>> X q")), ModelError);
  CHECK_THROWS_AS(mc(m, parse_formula("K bob q")), ModelError);
  CHECK_THROWS_AS(mc(m, parse_formula("<<1>> G F q"), with_algo(Algo::Enum)), AlgorithmInapplicable);
  CHECK_NOTHROW(mc(m, parse_formula("<<1>> G F q"), with_algo(Algo::Parity)));
  CHECK_THROWS_AS(mc(m, fm::eventually(fm::atom("q"))), std::invalid_argument);
  const Stcgs bad = gen_figure1(T::IR, T::ir).model.with_abilities({T::IR, T::IR});
  CHECK_THROWS_AS(check(bad, parse_formula("q")), ModelError);
}

TEST_CASE("iR agents block coalition formulae only") {
  const Stcgs m = gen_figure1(T::IR, T::iR).model;
  for (Algo a : {Algo::Auto, Algo::Enum, Algo::Parity}) {
    CHECK_THROWS_AS(mc(m, parse_formula("<<1>> X q"), with_algo(a)), UndecidableConfiguration);
    CHECK_THROWS_AS(mc(m, parse_formula("K 2 <<>> G q"), with_algo(a)), UndecidableConfiguration);
  }
  CHECK(mc(m, parse_formula("K 2 q")) == states(4, {0, 1, 2}));
  CHECK(check(m, parse_formula("q")).holds);
}

TEST_CASE("auto mode picks a backend per coalition") {
  McStats stats;
  const Stcgs blind = gen_figure1(T::ir, T::ir).model;
  mc(blind, parse_formula("<<1>> G q"), {}, &stats);
  REQUIRE(stats.coalitions.size() == 1);
  CHECK(stats.coalitions[0].backend == "enum");
  CHECK(stats.coalitions[0].strategies_enumerated > 0);

  stats = {};
  mc(blind, parse_formula("<<1>> G F q"), {}, &stats);
  REQUIRE(stats.coalitions.size() == 1);
  CHECK(stats.coalitions[0].backend == "parity");
  CHECK(stats.coalitions[0].game_vertices > 0);
  CHECK(stats.coalitions[0].dpa_states > 0);

  // A perfect-recall coalition facing a memoryless opponent.
  stats = {};
  mc(gen_figure1().model, parse_formula("<<1>> G q"), {}, &stats);
  CHECK(stats.coalitions.at(0).backend == "parity");

  // Strategy space above the enumeration limit.
  EngineOptions small;
  small.max_combinations = 1;
  stats = {};
  mc(blind, parse_formula("<<2>> F !q"), small, &stats);
  CHECK(stats.coalitions.at(0).backend == "parity");
}

TEST_CASE("nested coalitions are replaced by fresh propositions") {
  McStats stats;
  const Stcgs m = gen_figure1(T::IR, T::IR).model;
  const StateSet r = mc(m, parse_formula("<<2>> F <<2>> X !q"), with_algo(Algo::Parity), &stats);
  CHECK(r.count() == 4);
  REQUIRE(stats.substitutions.size() == 1);
  CHECK(stats.substitutions[0].first == "__sub0");
  CHECK(stats.substitutions[0].second == to_string(parse_formula("<<2>> X !q")));
  REQUIRE(stats.coalitions.size() == 2);
  CHECK(stats.coalitions[1].formula == "<<2>> F __sub0");
}

TEST_CASE("dumped games are written on request") {
  std::ostringstream out;
  EngineOptions o = with_algo(Algo::Parity);
  o.dump_games = &out;
  mc(gen_figure1().model, parse_formula("<<1>> G q"), o);
  CHECK_FALSE(out.str().empty());
}

TEST_CASE("perfect-information verdicts match alternating fixpoints") {
  Rng rng(8080);
  RandomModelParams params;
  params.abilities = {T::IR};
  for (int it = 0; it < 80; ++it) {
    const Stcgs m = random_stcgs(rng, params);
    const Cgs& g = m.g();
    std::vector<AgentId> a;
    std::vector<std::string> names;
    for (AgentId i = 0; i < g.num_agents(); ++i) {
      if (rng() % 2) {
        a.push_back(i);
        names.push_back(g.agent_name(i));
      }
    }
    StateSet p = g.label("p");
    p.resize(g.num_states());
    const StateSet x = controllable_pre(g, a, p);
    const StateSet f = attractor(g, a, p);
    const StateSet gl = safe_region(g, a, p);
    for (Algo algo : {Algo::Auto, Algo::Enum, Algo::Parity}) {
      const EngineOptions o = with_algo(algo);
      CHECK(mc(m, fm::coalition(names, fm::next(fm::atom("p"))), o) == x);
      CHECK(mc(m, fm::coalition(names, fm::eventually(fm::atom("p"))), o) == f);
      CHECK(mc(m, fm::coalition(names, fm::globally(fm::atom("p"))), o) == gl);
      // The dual is the complement of the coalition with the negated body.
      CHECK(mc(m, fm::dual(names, fm::eventually(fm::atom("p"))), o) ==
            ~mc(m, fm::coalition(names, fm::globally(fm::neg(fm::atom("p")))), o));
    }
  }
}

TEST_CASE("auto and parity agree on random nested formulae") {
  Rng rng(1234);
  for (int it = 0; it < 120; ++it) {
    const Stcgs m = random_stcgs(rng);
    std::vector<std::string> agents;
    for (AgentId i = 0; i < m.g().num_agents(); ++i) agents.push_back(m.g().agent_name(i));
    const FormulaPtr f = random_positive_formula(rng, {"p", "q"}, agents, 2);
    INFO(to_acgs(m) << to_string(f));
    CHECK(mc(m, f) == mc(m, f, with_algo(Algo::Parity)));
  }
}

TEST_CASE("semantics under a single strategy type") {
  const auto coarse = gen_figure1(T::IR, T::ir).model.cgs;
  const auto fine = gen_figure1(T::IR, T::IR).model.cgs;
  const auto f = parse_formula("<<2>> F !q");
  // From s0 either uniform choice traps agent 2 in s1 or s2.
  CHECK(semantics_sigma(coarse, T::ir, f) == states(4, {1, 2, 3}));
  for (T sigma : {T::IR, T::Ir, T::ir}) CHECK(semantics_sigma(fine, sigma, f) == StateSet(4).set());
  CHECK_THROWS_AS(semantics_sigma(coarse, T::IR, f), ModelError);
  CHECK_THROWS_AS(semantics_sigma(coarse, T::iR, f), UndecidableConfiguration);
  CHECK_THROWS_AS(semantics_sigma(fine, T::ir, parse_formula("<<1>> X q & <<2>> X q")), std::invalid_argument);
  CHECK_NOTHROW(semantics_sigma(fine, T::IR, parse_formula("<<1>> X q & <<2>> X q")));
}
