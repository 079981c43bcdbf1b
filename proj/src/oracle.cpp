#include "acgs/oracle.hpp"

#include <stdexcept>

namespace acgs {
namespace {

// Truth value of f at every position of the lasso. Positions are folded so
// that the successor of the last loop position is the first loop position;
// until and release are then exact least and greatest fixpoints.
std::vector<bool> eval_positions(const FormulaPtr& f, const std::vector<const Letter*>& word, std::size_t loop_start) {
  const std::size_t n = word.size();
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
  std::vector<bool> out(n, false);
  switch (f->op) {
    case Op::True:
      out.assign(n, true);
      break;
    case Op::False:
      break;
    case Op::Atom:
      for (std::size_t i = 0; i < n; ++i) out[i] = word[i]->count(f->atom) != 0;
      break;
    case Op::Not: {
      auto a = eval_positions(f->lhs, word, loop_start);
      for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
      break;
    }
    case Op::And:
    case Op::Or: {
      auto a = eval_positions(f->lhs, word, loop_start);
      auto b = eval_positions(f->rhs, word, loop_start);
      for (std::size_t i = 0; i < n; ++i) out[i] = f->op == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
      break;
    }
    case Op::Next: {
      auto a = eval_positions(f->lhs, word, loop_start);
      for (std::size_t i = 0; i < n; ++i) out[i] = a[succ(i)];
      break;
    }
    case Op::Until:
    case Op::Release: {
      const bool until = f->op == Op::Until;
      auto a = eval_positions(f->lhs, word, loop_start);
      auto b = eval_positions(f->rhs, word, loop_start);
      out.assign(n, !until);
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = n; i-- > 0;) {
          const bool v = until ? (b[i] || (a[i] && out[succ(i)])) : (b[i] && (a[i] || out[succ(i)]));
          if (v != out[i]) {
            out[i] = v;
            changed = true;
          }
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("eval_ltl_on_lasso: not an LTL formula: " + to_string(f));
  }
  return out;
}

// Memoryless uniform strategies of a list of agents, enumerated by an odometer
// over (agent, class) digits.
class MemorylessFamily {
 public:
  MemorylessFamily(const Stcgs& m, const std::vector<AgentId>& agents) : g_(m.g()), agents_(agents) {
    const Cgs& g = m.g();
    for (std::size_t k = 0; k < agents.size(); ++k) {
      const AgentId i = agents[k];
      std::vector<std::vector<StateId>> classes;
      if (perfect_information(m.ability[i])) {
        for (StateId s = 0; s < g.num_states(); ++s) classes.push_back({s});
      } else {
        classes = g.observation(i).blocks;
      }
      for (auto& c : classes) {
        if (c.empty()) continue;
        digits_.push_back(Digit{k, c, g.protocol(i, c.front())});
        if (count_ > 0 && digits_.back().options.size() > UINT64_MAX / count_) {
          count_ = UINT64_MAX;
        } else {
          count_ *= digits_.back().options.size();
        }
      }
    }
  }

  std::uint64_t count() const { return count_; }

  // choice[k][s] for the index-th strategy.
  std::vector<std::vector<ActionId>> at(std::uint64_t index) const {
    std::vector<std::vector<ActionId>> choice(agents_.size(), std::vector<ActionId>(g_.num_states(), 0));
    for (const Digit& d : digits_) {
      const std::uint64_t r = d.options.size();
      const ActionId a = d.options[index % r];
      index /= r;
      for (StateId s : d.states) choice[d.slot][s] = a;
    }
    return choice;
  }

 private:
  struct Digit {
    std::size_t slot;
    std::vector<StateId> states;
    std::vector<ActionId> options;
  };
  const Cgs& g_;
  std::vector<AgentId> agents_;
  std::vector<Digit> digits_;
  std::uint64_t count_ = 1;
};

// Successor states of every state when some agents play fixed actions.
std::vector<std::vector<StateId>> graph_under(const Cgs& g, const std::vector<std::int32_t>& fixed_action_of_agent_at,
                                              std::size_t num_agents) {
  std::vector<std::vector<StateId>> succ(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::set<StateId> targets;
    for (const Successor& e : successors(g, s)) {
      bool ok = true;
      for (std::size_t i = 0; i < num_agents && ok; ++i) {
        const std::int32_t want = fixed_action_of_agent_at[s * num_agents + i];
        ok = want < 0 || static_cast<ActionId>(want) == e.joint[i];
      }
      if (ok) targets.insert(e.target);
    }
    succ[s].assign(targets.begin(), targets.end());
  }
  return succ;
}

class LassoChecker {
 public:
  LassoChecker(const FormulaPtr& body, const std::vector<Letter>& letters,
               const std::vector<std::vector<StateId>>& succ)
      : body_(body), letters_(letters), succ_(succ), on_path_(letters.size(), -1) {}

  // True iff the body holds on every simple lasso from s.
  bool all_hold(StateId s) {
    path_.assign(1, s);
    std::fill(on_path_.begin(), on_path_.end(), -1);
    on_path_[s] = 0;
    return dfs(s);
  }

 private:
  bool dfs(StateId v) {
    for (StateId w : succ_[v]) {
      if (on_path_[w] >= 0) {
        std::vector<Letter> stem, loop;
        const auto split = static_cast<std::size_t>(on_path_[w]);
        for (std::size_t i = 0; i < path_.size(); ++i) (i < split ? stem : loop).push_back(letters_[path_[i]]);
        if (!eval_ltl_on_lasso(body_, stem, loop)) return false;
      } else {
        on_path_[w] = static_cast<int>(path_.size());
        path_.push_back(w);
        const bool ok = dfs(w);
        path_.pop_back();
        on_path_[w] = -1;
        if (!ok) return false;
      }
    }
    return true;
  }

  const FormulaPtr& body_;
  const std::vector<Letter>& letters_;
  const std::vector<std::vector<StateId>>& succ_;
  std::vector<StateId> path_;
  std::vector<int> on_path_;
};

}  // namespace

bool eval_ltl_on_lasso(const FormulaPtr& phi, const std::vector<Letter>& stem, const std::vector<Letter>& loop) {
  if (loop.empty()) throw std::invalid_argument("eval_ltl_on_lasso: empty loop");
  std::vector<const Letter*> word;
  for (const auto& l : stem) word.push_back(&l);
  for (const auto& l : loop) word.push_back(&l);
  return eval_positions(phi, word, stem.size())[0];
}

StateSet oracle_simple_atl(const Stcgs& m, const std::vector<AgentId>& coalition, const FormulaPtr& body,
                           const OracleLimits& limits) {
  const Cgs& g = m.g();
  if (!is_ltl(body)) throw std::invalid_argument("oracle_simple_atl: body must be pure LTL");
  if (g.num_states() > limits.max_states) throw std::invalid_argument("oracle_simple_atl: model too large");
  const std::size_t n = g.num_agents();
  std::vector<bool> in_coalition(n, false);
  for (AgentId i : coalition) in_coalition[i] = true;
  std::vector<AgentId> memoryless_opponents;
  for (AgentId i = 0; i < n; ++i) {
    if (m.ability[i] == StrategyType::iR) throw std::invalid_argument("oracle_simple_atl: iR agent");
    if (in_coalition[i]) {
      if (m.ability[i] == StrategyType::IR && !g.observation(i).is_identity()) {
        throw std::invalid_argument("oracle_simple_atl: IR coalition agent needs identity observation");
      }
    } else if (!perfect_recall(m.ability[i])) {
      memoryless_opponents.push_back(i);
    }
  }
  // Memoryless coalition strategies suffice for simple bodies, whatever the recall.
  MemorylessFamily ours(m, coalition);
  MemorylessFamily theirs(m, memoryless_opponents);
  if (ours.count() == UINT64_MAX || theirs.count() == UINT64_MAX ||
      (theirs.count() > 0 && ours.count() > limits.max_strategy_pairs / theirs.count())) {
    throw std::invalid_argument("oracle_simple_atl: too many strategy pairs");
  }

  const auto atoms = atoms_of(body);
  std::vector<Letter> letters(g.num_states());
  for (const auto& p : atoms) {
    const StateSet ext = g.label(p);
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (ext.size() > s && ext.test(s)) letters[s].insert(p);
    }
  }

  StateSet result(g.num_states());
  std::vector<std::int32_t> fixed(g.num_states() * n, -1);
  for (std::uint64_t a = 0; a < ours.count(); ++a) {
    const auto mine = ours.at(a);
    StateSet good(g.num_states());
    good.set();
    for (std::uint64_t b = 0; b < theirs.count() && good.any(); ++b) {
      const auto other = theirs.at(b);
      std::fill(fixed.begin(), fixed.end(), -1);
      for (std::size_t k = 0; k < coalition.size(); ++k) {
        for (StateId s = 0; s < g.num_states(); ++s) fixed[s * n + coalition[k]] = static_cast<std::int32_t>(mine[k][s]);
      }
      for (std::size_t k = 0; k < memoryless_opponents.size(); ++k) {
        for (StateId s = 0; s < g.num_states(); ++s) {
          fixed[s * n + memoryless_opponents[k]] = static_cast<std::int32_t>(other[k][s]);
        }
      }
      const auto succ = graph_under(g, fixed, n);
      LassoChecker checker(body, letters, succ);
      for (StateId s = 0; s < g.num_states(); ++s) {
        if (good.test(s) && !checker.all_hold(s)) good.reset(s);
      }
    }
    result |= good;
  }
  return result;
}

std::set<std::vector<StateId>> outcome_prefixes(const Stcgs& m, StateId s, const CollectiveStrategy& xi, std::size_t k,
                                                std::uint64_t max_strategies) {
  const Cgs& g = m.g();
  const std::size_t n = g.num_agents();
  std::vector<bool> fixed_agent(n, false);
  for (AgentId i : xi.agents) fixed_agent[i] = true;
  std::vector<AgentId> memoryless_opponents;
  for (AgentId i = 0; i < n; ++i) {
    if (!fixed_agent[i] && !perfect_recall(m.ability[i])) memoryless_opponents.push_back(i);
  }
  MemorylessFamily theirs(m, memoryless_opponents);
  if (theirs.count() > max_strategies) throw std::invalid_argument("outcome_prefixes: too many opponent strategies");

  std::set<std::vector<StateId>> out;
  if (k == 0) return out;
  std::vector<std::int32_t> fixed(g.num_states() * n, -1);
  for (std::uint64_t b = 0; b < theirs.count(); ++b) {
    const auto other = theirs.at(b);
    std::fill(fixed.begin(), fixed.end(), -1);
    for (std::size_t j = 0; j < xi.agents.size(); ++j) {
      for (StateId t = 0; t < g.num_states(); ++t) fixed[t * n + xi.agents[j]] = static_cast<std::int32_t>(xi.choice[j][t]);
    }
    for (std::size_t j = 0; j < memoryless_opponents.size(); ++j) {
      for (StateId t = 0; t < g.num_states(); ++t) {
        fixed[t * n + memoryless_opponents[j]] = static_cast<std::int32_t>(other[j][t]);
      }
    }
    const auto succ = graph_under(g, fixed, n);
    std::vector<std::vector<StateId>> frontier{{s}};
    for (std::size_t step = 1; step < k; ++step) {
      std::vector<std::vector<StateId>> next;
      for (const auto& p : frontier) {
        for (StateId t : succ[p.back()]) {
          auto q = p;
          q.push_back(t);
          next.push_back(std::move(q));
        }
      }
      frontier.swap(next);
    }
    out.insert(frontier.begin(), frontier.end());
  }
  return out;
}

}  // namespace acgs
