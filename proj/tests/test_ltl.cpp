#include "acgs/ltl.hpp"
#include "acgs/oracle.hpp"
#include "acgs/random.hpp"

#include <catch_amalgamated.hpp>

using namespace acgs;

namespace {

std::vector<std::uint32_t> letters(const Dpa& d, const std::vector<Letter>& w) {
  std::vector<std::uint32_t> out;
  for (const auto& l : w) out.push_back(letter_of(d, l));
  return out;
}

bool accepts(const Dpa& d, const std::vector<Letter>& stem, const std::vector<Letter>& loop) {
  return dpa_accepts_lasso(d, letters(d, stem), letters(d, loop));
}

void require_total(const Dpa& d) {
  REQUIRE(d.delta.size() == static_cast<std::size_t>(d.num_states()) * d.num_letters());
  for (auto t : d.delta) REQUIRE(t < d.num_states());
  for (auto r : d.rank) REQUIRE(r <= d.max_rank);
}

}  // namespace

TEST_CASE("true gives a one-state accepting automaton") {
  const Dpa d = ltl_to_dpa(parse_formula("true"));
  CHECK(d.num_states() == 1);
  CHECK(d.rank[0] == 0);
  CHECK(dpa_accepts_lasso(d, {}, {0}));
  const Dpa g = ltl_to_dpa(parse_formula("true"), DpaConstruction::General);
  CHECK(g.num_states() == 1);
  CHECK(dpa_accepts_lasso(g, {0, 0}, {0}));
}

TEST_CASE("G q accepts only words where q always holds") {
  for (auto how : {DpaConstruction::Auto, DpaConstruction::General}) {
    const Dpa d = ltl_to_dpa(parse_formula("G q"), how);
    require_total(d);
    CHECK(accepts(d, {}, {{"q"}}));
    CHECK(accepts(d, {{"q"}, {"q"}}, {{"q"}}));
    CHECK_FALSE(accepts(d, {{"q"}, {"q"}, {}}, {{"q"}}));
    CHECK_FALSE(accepts(d, {{"q"}}, {{}}));
  }
}

TEST_CASE("F p agrees with the lasso evaluator on random words") {
  Rng rng(7);
  const auto phi = parse_formula("F p");
  const std::vector<std::string> props{"p"};
  for (auto how : {DpaConstruction::Auto, DpaConstruction::General}) {
    const Dpa d = ltl_to_dpa(phi, how);
    for (int i = 0; i < 500; ++i) {
      const auto stem = random_word(rng, props, std::uniform_int_distribution<std::size_t>(0, 6)(rng));
      const auto loop = random_word(rng, props, std::uniform_int_distribution<std::size_t>(1, 6)(rng));
      REQUIRE(accepts(d, stem, loop) == eval_ltl_on_lasso(phi, stem, loop));
    }
  }
}

TEST_CASE("shortcut automata match the general construction") {
  Rng rng(11);
  const std::vector<std::string> props{"p", "q"};
  for (const char* text : {"X p", "X (p & !q)", "p U q", "p R q", "!p U (q | p)", "false R q", "p & !q"}) {
    const auto phi = parse_formula(text);
    const Dpa a = ltl_to_dpa(phi, DpaConstruction::Auto);
    const Dpa b = ltl_to_dpa(phi, DpaConstruction::General);
    CHECK(a.num_states() <= 4);
    for (int i = 0; i < 200; ++i) {
      const auto stem = random_word(rng, props, std::uniform_int_distribution<std::size_t>(0, 5)(rng));
      const auto loop = random_word(rng, props, std::uniform_int_distribution<std::size_t>(1, 5)(rng));
      const bool expected = eval_ltl_on_lasso(phi, stem, loop);
      INFO(text);
      REQUIRE(accepts(a, stem, loop) == expected);
      REQUIRE(accepts(b, stem, loop) == expected);
    }
  }
}

TEST_CASE("nested formulas and negation duality") {
  Rng rng(3);
  const std::vector<std::string> props{"a", "b", "c"};
  const char* corpus[] = {
      "G F a",          "F G a",          "G (a -> F b)",        "(a U b) U c",      "a U (b R c)",
      "G F a & G F b",  "F G a | G F b",  "X X a U !b",          "!(G F a -> G F b)", "(a R b) R (c U a)",
      "F (a & X (b U c))", "G (a -> X (b R !c))", "F a & F !a & G (b | c)",
  };
  for (const char* text : corpus) {
    const auto phi = parse_formula(text);
    const Dpa d = ltl_to_dpa(phi);
    const Dpa n = ltl_to_dpa(fm::neg(phi));
    require_total(d);
    for (int i = 0; i < 300; ++i) {
      const auto stem = random_word(rng, props, std::uniform_int_distribution<std::size_t>(0, 6)(rng));
      const auto loop = random_word(rng, props, std::uniform_int_distribution<std::size_t>(1, 6)(rng));
      const bool expected = eval_ltl_on_lasso(phi, stem, loop);
      INFO(text);
      REQUIRE(accepts(d, stem, loop) == expected);
      REQUIRE(accepts(n, stem, loop) == !expected);
    }
  }
}

TEST_CASE("lasso acceptance handles loops that need several turns to stabilise") {
  // X X a over a loop of length one and two.
  const auto phi = parse_formula("X X a");
  const Dpa d = ltl_to_dpa(phi, DpaConstruction::General);
  CHECK(accepts(d, {}, {{"a"}}));
  CHECK_FALSE(accepts(d, {}, {{}, {"a"}}));
  CHECK(accepts(d, {{}}, {{}, {"a"}}));
}

TEST_CASE("empty loop and non-LTL input are rejected") {
  const Dpa d = ltl_to_dpa(parse_formula("p"));
  CHECK_THROWS_AS(dpa_accepts_lasso(d, {0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(ltl_to_dpa(parse_formula("<<1>> X p")), std::invalid_argument);
}

TEST_CASE("alphabet is restricted to the formula's atoms") {
  const Dpa d = ltl_to_dpa(parse_formula("b U a"));
  REQUIRE(d.props == std::vector<std::string>{"a", "b"});
  CHECK(d.num_letters() == 4);
  CHECK(letter_of(d, {"a"}) == 1);
  CHECK(letter_of(d, {"b", "zzz"}) == 2);
}
