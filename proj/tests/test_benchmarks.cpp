#include "acgs/benchmarks.hpp"
#include "acgs/engine.hpp"
#include "acgs/io.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace acgs;
using T = StrategyType;

TEST_CASE("figure 1 structure") {
  const Benchmark b = gen_figure1();
  const Cgs& g = b.model.g();
  REQUIRE(g.num_states() == 4);
  REQUIRE(g.num_agents() == 2);
  CHECK(g.initial() == std::vector<StateId>{0});
  StateSet q = g.label("q");
  q.resize(4);
  CHECK(q.count() == 3);
  CHECK_FALSE(q.test(3));
  CHECK(validate(b.model).empty());
  // s3 returns to s0 whatever agent 2 does.
  const auto back = successors(g, 3);
  CHECK(back.size() == 2);
  for (const auto& s : back) CHECK(s.target == 0);
  std::set<StateId> from_s0;
  for (const auto& s : successors(g, 0)) from_s0.insert(s.target);
  CHECK(from_s0 == std::set<StateId>{1, 2});
  CHECK(b.formulas.at(0).second == "<<1>> G q");
  // The blind relation only appears for imperfect-information types.
  CHECK(gen_figure1(T::IR, T::IR).model.g().observation(1).blocks.size() == 4);
  CHECK(b.model.g().observation(1).blocks.size() == 2);
}

TEST_CASE("dining cryptographers sizes") {
  const std::pair<int, std::size_t> expected[] = {{3, 160}, {4, 384}, {5, 896}};
  for (const auto& [n, count] : expected) {
    const Benchmark b = gen_dining(n);
    CHECK(b.model.g().num_states() == count);
    CHECK(reachable_states(b.model.g()).count() == count);
    CHECK(validate(b.model).empty());
    CHECK(b.formulas.size() == static_cast<std::size_t>(n));
    CHECK(b.model.g().initial().size() == (std::size_t{1} << n));
    for (const auto& [name, text] : b.formulas) CHECK_NOTHROW(parse_formula(text));
  }
  CHECK_THROWS_AS(gen_dining(2), std::invalid_argument);
}

TEST_CASE("dining cryptographers formula shape") {
  const Benchmark b = gen_dining(3);
  const auto f = parse_formula(b.formulas.at(0).second);
  const auto expected = parse_formula(
      "<<>> G ((odd & !c1paid) -> (K c1 (c2paid | c3paid) & !K c1 c2paid & !K c1 c3paid))");
  CHECK(structurally_equal(f, expected));
  const auto& ab = b.model.ability;
  const Cgs& g = b.model.g();
  CHECK(ab[*g.find_agent("c1")] == T::ir);
  CHECK(ab[*g.find_agent("c2")] == T::ir);
  CHECK(ab[*g.find_agent("c3")] == T::IR);
}

TEST_CASE("castle game sizes") {
  CHECK(gen_castle(3, 3).model.g().num_states() == 96000);
  const Benchmark mini = gen_castle(2, 1, {}, CastleSpace::Reachable);
  CHECK(mini.model.g().num_states() == 113);
  CHECK(validate(mini.model).empty());
  const Benchmark full_mini = gen_castle(2, 1);
  CHECK(full_mini.model.g().num_states() == 8 * 8 * 8);
  CHECK(validate(full_mini.model).empty());
  CHECK(reachable_states(full_mini.model.g()).count() == 113);
  CHECK_THROWS_AS(gen_castle(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(gen_castle(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_castle(2, 1, {T::IR}), std::invalid_argument);
}

TEST_CASE("castle game rules") {
  const Benchmark b = gen_castle(2, 1, {}, CastleSpace::Reachable);
  const Cgs& g = b.model.g();
  const AgentId e = *g.find_agent("e");
  const AgentId w1 = *g.find_agent("w1");
  CHECK(g.num_actions(e) == 1);
  CHECK(g.num_actions(w1) == 3);  // idle, defend, one attack target
  CHECK(b.formulas.at(0).second == "<<w1, w2>> F castle2Defeated");
  CHECK(b.formulas.at(1).second == "<<w1, w2>> F allDefeated");
  // Both workers attacking each other's castle from the start defeats both.
  const StateSet all = mc(b.model, parse_formula("<<w1, w2>> X allDefeated"));
  CHECK(all.test(g.initial().at(0)));
  // A lone worker cannot beat a defender.
  CHECK_FALSE(mc(b.model, parse_formula("<<w1>> X castle2Defeated")).test(g.initial().at(0)));
  for (const auto& [name, text] : b.formulas) CHECK_NOTHROW(parse_formula(text));
}

TEST_CASE("book store protocol") {
  CHECK(bookstore_supplier_states().size() == 15);
  CHECK(bookstore_supplier_actions().size() == 13);
  CHECK(bookstore_purchaser_states().size() == 12);
  CHECK(bookstore_purchaser_actions().size() == 7);
  for (T s : {T::IR, T::Ir, T::ir}) {
    for (T p : {T::IR, T::Ir, T::ir}) {
      const Benchmark b = gen_bookstore(s, p);
      CHECK(validate(b.model).empty());
      CHECK(b.model.g().num_states() == 15);
    }
  }
  const Benchmark b = gen_bookstore();
  REQUIRE(b.formulas.size() == 2);
  for (const auto& [name, text] : b.formulas) CHECK_NOTHROW(parse_formula(text));
}

TEST_CASE("generated models survive the text format") {
  for (const Benchmark& b : {gen_figure1(), gen_dining(3), gen_castle(2, 1, {}, CastleSpace::Reachable), gen_bookstore()}) {
    const Stcgs back = parse_acgs(to_acgs(b.model));
    CHECK(to_acgs(back) == to_acgs(b.model));
    CHECK(validate(back).empty());
  }
}
