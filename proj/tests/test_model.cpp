#include "acgs/benchmarks.hpp"
#include "acgs/errors.hpp"
#include "acgs/formula.hpp"
#include "acgs/io.hpp"
#include "acgs/model.hpp"
#include "acgs/random.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace acgs;

namespace {

StateSet states(std::size_t n, std::initializer_list<StateId> members) {
  StateSet s(n);
  for (StateId x : members) s.set(x);
  return s;
}

std::set<StateId> targets(const Cgs& g, StateId s) {
  std::set<StateId> out;
  for (const auto& succ : successors(g, s)) out.insert(succ.target);
  return out;
}

const char* kSample = R"(# the layout from the format description
agents: w1 w2 e;
ability: w1=IR w2=ir e=IR;
states: s0 s1 s2 s3;
init: s0;
label q: s0 s1 s2;
actions w1: a b;
actions w2: b1 b2;
actions e: x;
obs w2: {s0 s1 s2} {s3};
protocol w1: s0 {a b}, s1 {a};
trans: s0 (a,b1,x) -> s1;
trans: s0 (a,b2,x) -> s2;
trans: s0 (b,b1,x) -> s0;
trans: s0 (b,b2,x) -> s3;
trans: s1 (a,b1,x) -> s1;
trans: s1 (a,b2,x) -> s3;
trans: s2 (a,b1,x) -> s3;
trans: s2 (b,b1,x) -> s3;
trans: s2 (a,b2,x) -> s2;
trans: s2 (b,b2,x) -> s2;
trans: s3 (a,b1,x) -> s0;
trans: s3 (a,b2,x) -> s0;
trans: s3 (b,b1,x) -> s0;
trans: s3 (b,b2,x) -> s0;
)";

}  // namespace

TEST_CASE("figure 1 model validates under the intended abilities") {
  CHECK(validate(gen_figure1(StrategyType::IR, StrategyType::ir).model).empty());
  CHECK(validate(gen_figure1(StrategyType::ir, StrategyType::ir).model).empty());
  CHECK(validate(gen_figure1(StrategyType::IR, StrategyType::IR).model).empty());
}

TEST_CASE("a perfect-information agent with a coarse relation is reported") {
  const Stcgs m = gen_figure1(StrategyType::IR, StrategyType::ir).model.with_abilities({StrategyType::IR, StrategyType::IR});
  const auto v = validate(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message.find("IR agent with non-identity relation") != std::string::npos);
}

TEST_CASE("structural violations are listed with their location") {
  auto g = std::make_shared<Cgs>();
  g->add_agent("1", {"a", "b"});
  g->add_state("s0");
  g->add_state("s1");
  g->set_initial({0});
  g->set_observation(0, Partition::from_blocks(2, {{0, 1}}));
  g->set_protocol(0, 0, {0});
  g->set_protocol(0, 1, {0, 1});
  g->finalize_protocols();
  g->set_transition(0, {0}, 1);
  const auto v = validate(Stcgs{g, {StrategyType::ir}});
  // Non-uniform protocol between s0 and s1, and s1 has no transitions.
  REQUIRE(v.size() == 3);
  CHECK(v[0].message.find("differs between indistinguishable states") != std::string::npos);
  CHECK(v[1].message.find("missing transition from 's1'") != std::string::npos);
}

TEST_CASE("epistemic classes of figure 1") {
  const Stcgs m = gen_figure1().model;
  CHECK(epistemic_class(m, 1, 0) == states(4, {0, 1, 2}));
  CHECK(epistemic_class(m, 1, 3) == states(4, {3}));
  CHECK(epistemic_class(m, 0, 1) == states(4, {1}));
}

TEST_CASE("group relations of figure 1") {
  const Stcgs m = gen_figure1().model;
  const Cgs& g = m.g();
  const auto d = group_relation(g, {0, 1}, GroupKind::Distributed);
  const auto c = group_relation(g, {0, 1}, GroupKind::Common);
  for (StateId s = 0; s < 4; ++s) {
    CHECK(d[s] == states(4, {s}));
    CHECK(c[s] == (s == 3 ? states(4, {3}) : states(4, {0, 1, 2})));
  }
  // A singleton group is the agent's own relation for every kind.
  for (auto kind : {GroupKind::Everybody, GroupKind::Distributed, GroupKind::Common}) {
    const auto r = group_relation(g, {1}, kind);
    for (StateId s = 0; s < 4; ++s) CHECK(r[s] == epistemic_class(m, 1, s));
  }
  CHECK_THROWS_AS(group_relation(g, {}, GroupKind::Everybody), std::invalid_argument);
}

TEST_CASE("group relations on random structures") {
  Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    const Stcgs m = random_stcgs(rng);
    const Cgs& g = m.g();
    std::vector<AgentId> all;
    for (AgentId i = 0; i < g.num_agents(); ++i) all.push_back(i);
    const auto e = group_relation(g, all, GroupKind::Everybody);
    const auto d = group_relation(g, all, GroupKind::Distributed);
    const auto c = group_relation(g, all, GroupKind::Common);
    for (StateId s = 0; s < g.num_states(); ++s) {
      CHECK(c[s].is_subset_of(c[s]));
      for (AgentId i : all) {
        const StateSet own = epistemic_class(m, i, s);
        CHECK(d[s].is_subset_of(own));
        CHECK(own.is_subset_of(e[s]));
      }
      CHECK(e[s].is_subset_of(c[s]));
      // c is transitive: the class of every member is the same set.
      for (auto t = c[s].find_first(); t != StateSet::npos; t = c[s].find_next(t)) CHECK(c[t] == c[s]);
      // and least: it is the closure of e reached by repeated expansion.
      StateSet reach = e[s];
      for (bool grew = true; grew;) {
        StateSet next = reach;
        for (auto t = reach.find_first(); t != StateSet::npos; t = reach.find_next(t)) next |= e[t];
        grew = next != reach;
        reach = next;
      }
      CHECK(reach == c[s]);
    }
  }
}

TEST_CASE("coarseness of ability maps") {
  using T = StrategyType;
  CHECK(coarser_than({T::IR, T::ir}, {T::IR, T::ir}, {0}));
  CHECK(coarser_than({T::IR, T::ir}, {T::IR, T::IR}, {0}));
  CHECK_FALSE(coarser_than({T::IR, T::Ir}, {T::IR, T::ir}, {0}));
  CHECK(coarser_than({T::IR, T::Ir}, {T::IR, T::IR}, {0}));
  CHECK(coarser_than({T::IR, T::iR}, {T::IR, T::IR}, {0}));
  CHECK_FALSE(coarser_than({T::IR, T::iR}, {T::IR, T::Ir}, {0}));
  CHECK_FALSE(coarser_than({T::IR, T::IR}, {T::IR, T::Ir}, {0}));
  // Agents in the reference set must agree exactly.
  CHECK_FALSE(coarser_than({T::ir, T::IR}, {T::IR, T::IR}, {0}));
}

TEST_CASE("uniform strategy counts") {
  const Stcgs m = gen_figure1().model;
  CHECK_THROWS_AS(enumerate_uniform_strategies(m, {0}), std::invalid_argument);
  CHECK(enumerate_uniform_strategies(normalize_memoryless(gen_figure1(StrategyType::ir, StrategyType::ir).model), {0}).size() == 1);
  // One choice for the class {s0, s1, s2} and one for s3, where both actions
  // are allowed.
  const auto two = enumerate_uniform_strategies(m, {1});
  CHECK(two.size() == 4);
  for (const auto& st : two) CHECK(st.choice[0][0] == st.choice[0][1]);
  CHECK_THROWS_AS(UniformStrategySpace(m, {0, 1}), std::invalid_argument);
  // Identity relation: m^k strategies.
  const Stcgs ir = gen_figure1(StrategyType::IR, StrategyType::Ir).model;
  CHECK(UniformStrategySpace(normalize_memoryless(ir), {1}).size() == 16);
}

TEST_CASE("uniform strategies are distinct and match the closed form on random models") {
  Rng rng(5);
  for (int it = 0; it < 40; ++it) {
    const Stcgs m = normalize_memoryless(random_stcgs(rng));
    std::vector<AgentId> agents;
    for (AgentId i = 0; i < m.g().num_agents(); ++i) {
      if (m.ability[i] == StrategyType::ir) agents.push_back(i);
    }
    std::uint64_t expected = 1;
    for (AgentId i : agents) {
      for (const auto& block : m.g().observation(i).blocks) expected *= m.g().protocol(i, block.front()).size();
    }
    const auto all = enumerate_uniform_strategies(m, agents);
    CHECK(all.size() == expected);
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) CHECK_FALSE(all[a] == all[b]);
    }
  }
}

TEST_CASE("successors and pruning of figure 1") {
  const Stcgs m = gen_figure1().model;
  const Cgs& g = m.g();
  const auto s3 = successors(g, 3);
  REQUIRE(s3.size() == 2);
  CHECK(s3[0].target == 0);
  CHECK(s3[1].target == 0);
  CHECK(targets(g, 1) == std::set<StateId>{1, 3});

  const Stcgs none = prune(m, {});
  for (StateId s = 0; s < 4; ++s) CHECK(targets(none.g(), s) == targets(g, s));

  const CollectiveStrategy b1{{1}, {{0, 0, 0, 0}}};
  const Stcgs p1 = prune(m, {b1});
  CHECK(targets(p1.g(), 0) == std::set<StateId>{1});
  CHECK(targets(p1.g(), 1) == std::set<StateId>{1});
  const CollectiveStrategy b2{{1}, {{1, 1, 1, 1}}};
  const Stcgs p2 = prune(m, {b2});
  CHECK(targets(p2.g(), 0) == std::set<StateId>{2});
  CHECK(targets(p2.g(), 2) == std::set<StateId>{2});
}

TEST_CASE("pruning with more strategies never adds transitions") {
  Rng rng(17);
  for (int it = 0; it < 40; ++it) {
    const Stcgs m = normalize_memoryless(random_stcgs(rng));
    const Cgs& g = m.g();
    std::vector<CollectiveStrategy> fixed;
    for (AgentId i = 0; i < g.num_agents(); ++i) {
      if (m.ability[i] != StrategyType::ir) continue;
      UniformStrategySpace space(m, {i});
      fixed.push_back(space.at(rng() % space.size()));
    }
    if (fixed.empty()) continue;
    const Stcgs one = prune(m, {fixed.front()});
    const Stcgs more = prune(m, fixed);
    for (StateId s = 0; s < g.num_states(); ++s) {
      std::set<std::pair<std::vector<ActionId>, StateId>> a, b;
      for (const auto& x : successors(one.g(), s)) a.emplace(x.joint, x.target);
      for (const auto& x : successors(more.g(), s)) b.emplace(x.joint, x.target);
      CHECK(!b.empty());
      for (const auto& e : b) CHECK(a.count(e) == 1);
    }
  }
}

TEST_CASE("the model format reads the documented layout") {
  const Stcgs m = parse_acgs(kSample);
  const Cgs& g = m.g();
  CHECK(g.num_agents() == 3);
  CHECK(g.num_states() == 4);
  CHECK(m.ability[1] == StrategyType::ir);
  CHECK(g.protocol(0, 1) == std::vector<ActionId>{0});
  CHECK(g.observation(1).same_class(0, 2));
  CHECK(g.label("q") == states(4, {0, 1, 2}));
  CHECK(validate(m).empty());
  // Round trip through the writer.
  const std::string text = to_acgs(m);
  CHECK(to_acgs(parse_acgs(text)) == text);
}

TEST_CASE("model format errors") {
  CHECK_THROWS_AS(parse_acgs("agents: a;\nstates: s0;\ninit: s1;\nactions a: x;\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_acgs("agents a;"), ParseError);
  CHECK_THROWS_AS(parse_acgs("agents: a;\nability: a=XY;\n"), std::runtime_error);
  // A missing transition parses but fails validation.
  const Stcgs m = parse_acgs("agents: a;\nstates: s0 s1;\ninit: s0;\nactions a: x;\ntrans: s0 (x) -> s1;\n");
  CHECK(validate(m).size() == 1);
}

TEST_CASE("generated random models survive the text round trip") {
  Rng rng(3);
  for (int it = 0; it < 30; ++it) {
    const Stcgs m = random_stcgs(rng);
    REQUIRE(validate(m).empty());
    const std::string text = to_acgs(m);
    const Stcgs back = parse_acgs(text);
    CHECK(to_acgs(back) == text);
    CHECK(back.ability == m.ability);
  }
}

TEST_CASE("parsing desugars derived operators") {
  using namespace fm;
  CHECK(structurally_equal(parse_formula("<<1>> G q"), coalition({"1"}, neg(until(top(), neg(atom("q")))))));
  CHECK(structurally_equal(parse_formula("[[1,2]] X p"), neg(coalition({"1", "2"}, neg(next(atom("p")))))));
  CHECK(structurally_equal(parse_formula("q"), atom("q")));
  CHECK(structurally_equal(parse_formula("p -> q"), disj(atom("q"), neg(atom("p")))));
  CHECK(to_string(parse_formula("<<1>> G q")) == "<<1>> G q");
  CHECK(parse_formula("p R q")->op == Op::Release);
}

TEST_CASE("formula syntax errors carry a position") {
  try {
    parse_formula("<<1>> (p U");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 11);
  }
  CHECK_THROWS_AS(parse_formula("p &"), ParseError);
  CHECK_THROWS_AS(parse_formula("<<1 p"), ParseError);
}

TEST_CASE("printing and parsing round trip") {
  Rng rng(23);
  const std::vector<std::string> agents = {"1", "2"};
  for (int it = 0; it < 300; ++it) {
    const FormulaPtr f = it % 2 ? random_ltl(rng, {"p", "q", "r"}, 5) : random_positive_formula(rng, {"p", "q"}, agents, 2);
    const FormulaPtr back = parse_formula(to_string(f));
    CHECK(structurally_equal(f, back));
  }
  for (const char* text : {"K 1 p", "E {1, 2} (p & q)", "D {1, 2} p", "C {1, 2} !p", "<<>> X p", "<<1>> (F p & G q)"}) {
    const FormulaPtr f = parse_formula(text);
    CHECK(structurally_equal(parse_formula(to_string(f)), f));
  }
}

TEST_CASE("classification") {
  auto c = classify(parse_formula("<<1>> X q"));
  CHECK(c.is_atl);
  CHECK(c.is_simple_coalitions);
  CHECK(c.is_positive);
  CHECK_FALSE(classify(parse_formula("!<<1>> X q")).is_positive);
  CHECK_FALSE(classify(parse_formula("[[1]] X q")).is_positive);
  c = classify(parse_formula("<<1>> (F p & G q)"));
  CHECK_FALSE(c.is_atl);
  CHECK(c.is_simple_coalitions);
  c = classify(parse_formula("<<1>> F <<2>> X p"));
  CHECK_FALSE(c.is_simple_coalitions);
  CHECK(c.agents_of == std::vector<std::string>{"1", "2"});
  CHECK(classify(parse_formula("K 3 <<1>> X p")).agents_of == std::vector<std::string>{"1", "3"});
}

TEST_CASE("positive formulas have negations only on atoms") {
  Rng rng(29);
  for (int it = 0; it < 200; ++it) {
    const FormulaPtr f = random_positive_formula(rng, {"p", "q"}, {"1", "2", "3"}, 2);
    REQUIRE(classify(f).is_positive);
    std::function<void(const FormulaPtr&)> scan = [&](const FormulaPtr& g) {
      if (!g) return;
      if (g->op == Op::Not) CHECK((g->lhs->op == Op::Atom || g->lhs->op == Op::True || g->lhs->op == Op::False));
      scan(g->lhs);
      scan(g->rhs);
    };
    scan(f);
  }
}

TEST_CASE("state subformulae are replaced by fresh names") {
  std::vector<std::string> seen;
  auto namer = [&](const FormulaPtr& sub) {
    seen.push_back(to_string(sub));
    return "q" + std::to_string(seen.size());
  };
  FormulaPtr body = parse_formula("<<1>> F <<2>> X p")->lhs;
  CHECK(to_string(substitute_state_subformulae(body, namer)) == "F q1");
  CHECK(seen == std::vector<std::string>{"<<2>> X p"});
  seen.clear();
  body = parse_formula("<<1>> G q")->lhs;
  CHECK(structurally_equal(substitute_state_subformulae(body, namer), body));
  CHECK(seen.empty());
  body = parse_formula("<<1>> ((!p & q) U p)")->lhs;
  CHECK(structurally_equal(substitute_state_subformulae(body, namer), body));
  CHECK(seen.empty());
  body = parse_formula("<<1>> ((K 1 p) U p)")->lhs;
  CHECK(to_string(substitute_state_subformulae(body, namer)) == "(q1 U p)");
}

TEST_CASE("names outside the identifier alphabet are not written") {
  auto g = std::make_shared<Cgs>();
  g->add_agent("1", {"a"});
  g->add_state("s.0");
  g->set_initial({0});
  g->finalize_protocols();
  g->set_transition(0, {0}, 0);
  CHECK_THROWS_AS(to_acgs(Stcgs{g, {StrategyType::IR}}), ModelError);
}
