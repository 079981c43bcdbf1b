#include "acgs/random.hpp"

#include <algorithm>

namespace acgs {
namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

FormulaPtr random_literal(Rng& rng, const std::vector<std::string>& props) {
  auto a = fm::atom(props[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(props.size()) - 1))]);
  return coin(rng, 0.3) ? fm::neg(a) : a;
}

}  // namespace

FormulaPtr random_ltl(Rng& rng, const std::vector<std::string>& props, int size) {
  if (size <= 0) {
    const int r = uniform(rng, 0, 9);
    if (r == 0) return fm::top();
    if (r == 1) return fm::bottom();
    return fm::atom(props[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(props.size()) - 1))]);
  }
  const int op = uniform(rng, 0, 7);
  if (op <= 3) {
    auto a = random_ltl(rng, props, size - 1);
    switch (op) {
      case 0: return fm::neg(a);
      case 1: return fm::next(a);
      case 2: return fm::eventually(a);
      default: return fm::globally(a);
    }
  }
  const int left = uniform(rng, 0, size - 1);
  auto a = random_ltl(rng, props, left);
  auto b = random_ltl(rng, props, size - 1 - left);
  switch (op) {
    case 4: return fm::conj(a, b);
    case 5: return fm::disj(a, b);
    case 6: return fm::until(a, b);
    default: return fm::release(a, b);
  }
}

std::vector<Letter> random_word(Rng& rng, const std::vector<std::string>& props, std::size_t length) {
  std::vector<Letter> w(length);
  for (auto& l : w) {
    for (const auto& p : props) {
      if (coin(rng)) l.insert(p);
    }
  }
  return w;
}

Stcgs random_stcgs(Rng& rng, const RandomModelParams& params) {
  auto g = std::make_shared<Cgs>();
  const int n = uniform(rng, params.min_states, params.max_states);
  const int agents = uniform(rng, params.min_agents, params.max_agents);
  AbilityMap ability;
  for (int i = 0; i < agents; ++i) {
    const int na = uniform(rng, 1, params.max_actions);
    std::vector<std::string> actions;
    for (int a = 0; a < na; ++a) actions.push_back("a" + std::to_string(i + 1) + "_" + std::to_string(a));
    g->add_agent(std::to_string(i + 1), actions);
    ability.push_back(params.abilities[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(params.abilities.size()) - 1))]);
  }
  for (int s = 0; s < n; ++s) g->add_state("s" + std::to_string(s));
  g->set_initial({0});
  for (int i = 0; i < agents; ++i) {
    const auto ai = static_cast<AgentId>(i);
    std::vector<std::vector<StateId>> blocks;
    if (perfect_information(ability[ai])) {
      for (int s = 0; s < n; ++s) blocks.push_back({static_cast<StateId>(s)});
    } else {
      const int k = uniform(rng, 1, n);
      blocks.resize(static_cast<std::size_t>(k));
      for (int s = 0; s < n; ++s) blocks[static_cast<std::size_t>(uniform(rng, 0, k - 1))].push_back(static_cast<StateId>(s));
      blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }), blocks.end());
    }
    const auto na = g->num_actions(ai);
    for (const auto& b : blocks) {
      std::vector<ActionId> allowed;
      if (na > 1 && coin(rng, params.protocol_narrowing)) {
        for (ActionId a = 0; a < na; ++a) {
          if (coin(rng)) allowed.push_back(a);
        }
        if (allowed.empty()) allowed.push_back(static_cast<ActionId>(uniform(rng, 0, static_cast<int>(na) - 1)));
      } else {
        for (ActionId a = 0; a < na; ++a) allowed.push_back(a);
      }
      for (StateId s : b) g->set_protocol(ai, s, allowed);
    }
    g->set_observation(ai, Partition::from_blocks(static_cast<std::size_t>(n), std::move(blocks)));
  }
  g->finalize_protocols();
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    for (std::size_t j = 0; j < g->joint_count(s); ++j) g->set_transition_at(s, j, static_cast<StateId>(uniform(rng, 0, n - 1)));
  }
  for (const auto& p : params.props) {
    for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
      if (coin(rng)) g->add_label(p, s);
    }
  }
  return Stcgs{std::move(g), std::move(ability)};
}

FormulaPtr random_simple_body(Rng& rng, const std::vector<std::string>& props, bool positive) {
  auto l1 = random_literal(rng, props);
  auto l2 = random_literal(rng, props);
  switch (uniform(rng, 0, 4)) {
    case 0: return fm::next(l1);
    case 1: return fm::until(l1, l2);
    case 2: return fm::release(l1, l2);
    case 3: return positive ? fm::release(fm::bottom(), l1) : fm::globally(l1);
    default: return fm::eventually(l1);
  }
}

FormulaPtr random_positive_formula(Rng& rng, const std::vector<std::string>& props,
                                   const std::vector<std::string>& agents, int depth) {
  const int r = uniform(rng, 0, depth <= 0 ? 1 : 4);
  if (r == 0) return random_literal(rng, props);
  if (r <= 2) {
    std::vector<std::string> coalition;
    for (const auto& a : agents) {
      if (coin(rng)) coalition.push_back(a);
    }
    return fm::coalition(coalition, random_simple_body(rng, props, true));
  }
  auto a = random_positive_formula(rng, props, agents, depth - 1);
  auto b = random_positive_formula(rng, props, agents, depth - 1);
  return r == 3 ? fm::conj(a, b) : fm::disj(a, b);
}

AbilityMap random_coarser(Rng& rng, const Cgs& g, const AbilityMap& pi2, const std::vector<AgentId>& keep, bool allow_iR) {
  AbilityMap pi1 = pi2;
  for (AgentId j = 0; j < pi2.size(); ++j) {
    if (std::find(keep.begin(), keep.end(), j) != keep.end()) continue;
    const bool identity = g.observation(j).is_identity();
    std::vector<StrategyType> options{StrategyType::ir};
    switch (pi2[j]) {
      case StrategyType::IR:
        if (identity) options.insert(options.end(), {StrategyType::IR, StrategyType::Ir});
        if (allow_iR) options.push_back(StrategyType::iR);
        break;
      case StrategyType::Ir:
        if (identity) options.push_back(StrategyType::Ir);
        break;
      case StrategyType::iR:
        if (allow_iR) options.push_back(StrategyType::iR);
        break;
      case StrategyType::ir:
        break;
    }
    pi1[j] = options[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(options.size()) - 1))];
  }
  return pi1;
}

ParityGame random_parity_game(Rng& rng, int max_vertices, std::uint32_t max_rank, int max_out_degree) {
  ParityGame g;
  const int n = uniform(rng, 1, max_vertices);
  for (int v = 0; v < n; ++v) {
    g.add_vertex(static_cast<std::uint8_t>(uniform(rng, 0, 1)),
                 static_cast<std::uint32_t>(uniform(rng, 0, static_cast<int>(max_rank))));
  }
  for (int v = 0; v < n; ++v) {
    const int d = uniform(rng, 1, std::min(max_out_degree, n));
    std::vector<VertexId> targets;
    while (static_cast<int>(targets.size()) < d) {
      const auto w = static_cast<VertexId>(uniform(rng, 0, n - 1));
      if (std::find(targets.begin(), targets.end(), w) == targets.end()) targets.push_back(w);
    }
    for (VertexId w : targets) g.add_edge(static_cast<VertexId>(v), w);
  }
  return g;
}

}  // namespace acgs
