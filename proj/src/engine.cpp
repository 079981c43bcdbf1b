#include "acgs/engine.hpp"

#include "acgs/enum_backend.hpp"
#include "acgs/errors.hpp"
#include "acgs/parity_backend.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

namespace acgs {

std::string_view to_string(Algo a) {
  switch (a) {
    case Algo::Auto: return "auto";
    case Algo::Enum: return "enum";
    case Algo::Parity: return "parity";
  }
  return "?";
}

Algo parse_algo(std::string_view text) {
  if (text == "auto") return Algo::Auto;
  if (text == "enum") return Algo::Enum;
  if (text == "parity") return Algo::Parity;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected auto, enum or parity)");
}

namespace {

bool has_coalition(const FormulaPtr& f) {
  if (!f) return false;
  return f->op == Op::Coalition || has_coalition(f->lhs) || has_coalition(f->rhs);
}

std::vector<AgentId> resolve_agents(const Cgs& g, const std::vector<std::string>& names) {
  std::vector<AgentId> ids;
  for (const auto& n : names) {
    auto id = g.find_agent(n);
    if (!id) throw ModelError("unknown agent '" + n + "' in formula");
    ids.push_back(*id);
  }
  return ids;
}

// {s | the block of s lies inside x}
StateSet boxed(const Partition& p, const StateSet& x) {
  StateSet out(x.size());
  for (const auto& block : p.blocks) {
    bool inside = true;
    for (StateId s : block) inside = inside && x.test(s);
    if (inside) {
      for (StateId s : block) out.set(s);
    }
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(const Stcgs& m, const EngineOptions& options, McStats* stats)
      : m_(m), g_(m.g()), options_(options), stats_(stats) {}

  StateSet eval(const FormulaPtr& f) {
    const std::string key = to_string(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    StateSet r = compute(f);
    memo_.emplace(key, r);
    return r;
  }

 private:
  StateSet all() const {
    StateSet s(g_.num_states());
    s.set();
    return s;
  }

  StateSet compute(const FormulaPtr& f) {
    const std::size_t n = g_.num_states();
    switch (f->op) {
      case Op::True: return all();
      case Op::False: return StateSet(n);
      case Op::Atom: {
        if (auto it = fresh_.find(f->atom); it != fresh_.end()) return it->second;
        StateSet s = g_.label(f->atom);
        s.resize(n);
        return s;
      }
      case Op::Not: return ~eval(f->lhs);
      case Op::And: return eval(f->lhs) & eval(f->rhs);
      case Op::Or: return eval(f->lhs) | eval(f->rhs);
      case Op::Know: {
        const auto ids = resolve_agents(g_, f->agents);
        return boxed(g_.observation(ids.at(0)), eval(f->lhs));
      }
      case Op::Everybody: {
        const StateSet x = eval(f->lhs);
        StateSet r = all();
        for (AgentId i : resolve_agents(g_, f->agents)) r &= boxed(g_.observation(i), x);
        return r;
      }
      case Op::Distributed: return boxed(distributed_partition(g_, resolve_agents(g_, f->agents)), eval(f->lhs));
      case Op::Common: return boxed(common_partition(g_, resolve_agents(g_, f->agents)), eval(f->lhs));
      case Op::Coalition: return coalition(f);
      case Op::Next:
      case Op::Until:
      case Op::Release:
        throw std::invalid_argument("temporal operator outside a coalition: " + to_string(f));
    }
    throw std::logic_error("unhandled operator");
  }

  StateSet coalition(const FormulaPtr& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto agents = resolve_agents(g_, f->agents);
    CoalitionStats cs;
    StateSet result;
    bool done = false;

    // The enumeration backend drops recall of IR coalition members. That is
    // exact unless some opponent is memoryless too: a perfect-recall coalition
    // can then learn the opponent's fixed choices, so auto mode leaves those
    // cases to the parity backend.
    const bool recall_matters = recall_sensitive(agents);
    if (options_.algo == Algo::Enum || (options_.algo == Algo::Auto && !recall_matters)) {
      const auto st = as_simple_temporal(f->lhs);
      if (!st) {
        if (options_.algo == Algo::Enum) {
          throw AlgorithmInapplicable("the enumeration backend needs a single X, U or R over state formulae: " +
                                      to_string(f));
        }
      } else {
        const StateSet lhs = st->lhs ? eval(st->lhs) : all();
        const StateSet rhs = eval(st->rhs);
        const Temporal op = st->op == Op::Next ? Temporal::Next : st->op == Op::Until ? Temporal::Until : Temporal::Release;
        EnumOptions eo;
        eo.jobs = options_.jobs;
        eo.max_combinations = options_.max_combinations;
        EnumStats es;
        try {
          result = check_simple_atl(m_, agents, op, lhs, rhs, eo, &es);
          cs.backend = "enum";
          cs.formula = to_string(f);
          cs.strategies_enumerated = es.combinations_checked;
          done = true;
        } catch (const StrategySpaceTooLarge&) {
          if (options_.algo == Algo::Enum) throw;
        }
      }
    }

    if (!done) {
      const FormulaPtr body = substitute_state_subformulae(f->lhs, [this](const FormulaPtr& sub) {
        const std::string key = to_string(sub);
        if (auto it = fresh_name_.find(key); it != fresh_name_.end()) return it->second;
        StateSet set = eval(sub);
        const std::string name = "__sub" + std::to_string(fresh_name_.size());
        fresh_name_.emplace(key, name);
        fresh_.emplace(name, std::move(set));
        if (stats_) stats_->substitutions.emplace_back(name, key);
        return name;
      });
      ParityOptions po;
      po.jobs = options_.jobs;
      po.solver = options_.solver;
      po.dump = options_.dump_games;
      ParityStats ps;
      result = check_simple_atlstar(m_, agents, body, fresh_, po, &ps);
      cs.backend = "parity";
      cs.formula = to_string(fm::coalition(f->agents, body));
      cs.strategies_enumerated = ps.coalition_strategies;
      cs.game_vertices = ps.game_vertices;
      cs.game_edges = ps.game_edges;
      cs.dpa_states = ps.dpa_states;
      cs.solver_ms = ps.solver_ms;
    }
    cs.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (stats_) stats_->coalitions.push_back(std::move(cs));
    return result;
  }

  bool recall_sensitive(const std::vector<AgentId>& coalition) const {
    bool recall = false;
    bool memoryless_opponent = false;
    for (AgentId i = 0; i < g_.num_agents(); ++i) {
      const bool in = std::find(coalition.begin(), coalition.end(), i) != coalition.end();
      if (in && m_.ability[i] == StrategyType::IR) recall = true;
      if (!in && !perfect_recall(m_.ability[i])) memoryless_opponent = true;
    }
    return recall && memoryless_opponent;
  }

  const Stcgs& m_;
  const Cgs& g_;
  const EngineOptions& options_;
  McStats* stats_;
  std::map<std::string, StateSet> memo_;
  std::map<std::string, StateSet> fresh_;
  std::map<std::string, std::string> fresh_name_;
};

}  // namespace

StateSet mc(const Stcgs& m, const FormulaPtr& f, const EngineOptions& options, McStats* stats) {
  if (!is_state_formula(f)) throw std::invalid_argument("not a state formula: " + to_string(f));
  if (has_coalition(f)) {
    for (AgentId i = 0; i < m.g().num_agents(); ++i) {
      if (m.ability[i] == StrategyType::iR) {
        throw UndecidableConfiguration("agent '" + m.g().agent_name(i) +
                                       "' has type iR; model checking coalition formulae is undecidable "
                                       "with imperfect information and perfect recall");
      }
    }
  }
  Evaluator ev(m, options, stats);
  return ev.eval(f);
}

CheckResult check(const Stcgs& m, const FormulaPtr& f, const EngineOptions& options) {
  const auto violations = validate(m);
  if (!violations.empty()) {
    std::string msg = "invalid model:";
    for (const auto& v : violations) msg += "\n  " + v.message;
    throw ModelError(msg);
  }
  CheckResult r;
  r.satisfying = mc(m, f, options, &r.stats);
  r.holds = true;
  for (StateId s : m.g().initial()) {
    const bool ok = r.satisfying.test(s);
    r.per_initial.emplace_back(s, ok);
    r.holds = r.holds && ok;
  }
  return r;
}

namespace {

void collect_coalitions(const FormulaPtr& f, std::vector<std::vector<std::string>>& out) {
  if (!f) return;
  if (f->op == Op::Coalition) out.push_back(f->agents);
  collect_coalitions(f->lhs, out);
  collect_coalitions(f->rhs, out);
}

}  // namespace

StateSet semantics_sigma(const std::shared_ptr<const Cgs>& g, StrategyType sigma, const FormulaPtr& f,
                         const EngineOptions& options) {
  if (sigma == StrategyType::iR) {
    throw UndecidableConfiguration("semantics under iR strategies is undecidable for coalition formulae");
  }
  const auto c = classify(f);
  if (sigma != StrategyType::IR) {
    std::vector<std::vector<std::string>> coalitions;
    collect_coalitions(f, coalitions);
    for (const auto& a : coalitions) {
      if (a != c.agents_of) {
        throw std::invalid_argument("every coalition must name exactly the agents of the formula for sigma = " +
                                    std::string(to_string(sigma)));
      }
    }
  }
  AbilityMap pi(g->num_agents(), StrategyType::IR);
  for (AgentId i : resolve_agents(*g, c.agents_of)) pi[i] = sigma;
  const Stcgs m{g, pi};
  const auto violations = validate(m);
  if (!violations.empty()) throw ModelError("structure is not valid under these strategy types: " + violations[0].message);
  return mc(m, f, options);
}

}  // namespace acgs
