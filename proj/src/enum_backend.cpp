#include "acgs/enum_backend.hpp"

#include "acgs/errors.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace acgs {

Stcgs normalize_abilities(const Stcgs& m, const std::vector<AgentId>& coalition) {
  AbilityMap pi = m.ability;
  for (AgentId i = 0; i < pi.size(); ++i) {
    if (pi[i] == StrategyType::iR) {
      throw UndecidableConfiguration("agent '" + m.g().agent_name(i) +
                                     "' has type iR; model checking coalition formulae is undecidable "
                                     "with imperfect information and perfect recall");
    }
  }
  for (AgentId i : coalition) {
    if (pi.at(i) == StrategyType::IR) pi[i] = StrategyType::Ir;
  }
  return m.with_abilities(std::move(pi));
}

StateSet ctl_universal(const std::vector<std::vector<StateId>>& succ, Temporal op, const StateSet& lhs,
                       const StateSet& rhs) {
  const std::size_t n = succ.size();
  StateSet z(n);
  if (op == Temporal::Next) {
    for (StateId s = 0; s < n; ++s) {
      bool all = true;
      for (StateId t : succ[s]) all = all && rhs.test(t);
      if (all) z.set(s);
    }
    return z;
  }
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s) {
    for (StateId t : succ[s]) pred[t].push_back(s);
  }
  std::vector<StateId> work;
  if (op == Temporal::Until) {
    // Least fixpoint of rhs | (lhs & AX Z): a state joins once all successors have.
    std::vector<std::uint32_t> missing(n);
    for (StateId s = 0; s < n; ++s) {
      missing[s] = static_cast<std::uint32_t>(succ[s].size());
      if (rhs.test(s)) {
        z.set(s);
        work.push_back(s);
      }
    }
    while (!work.empty()) {
      const StateId t = work.back();
      work.pop_back();
      for (StateId s : pred[t]) {
        if (z.test(s) || !lhs.test(s)) continue;
        if (--missing[s] == 0) {
          z.set(s);
          work.push_back(s);
        }
      }
    }
    return z;
  }
  // Greatest fixpoint of rhs & (lhs | AX Z), computed through its complement
  // !rhs | (!lhs & EX W), a backward reachability.
  StateSet w(n);
  for (StateId s = 0; s < n; ++s) {
    if (!rhs.test(s)) {
      w.set(s);
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const StateId t = work.back();
    work.pop_back();
    for (StateId s : pred[t]) {
      if (w.test(s) || lhs.test(s)) continue;
      w.set(s);
      work.push_back(s);
    }
  }
  w.flip();
  return w;
}

StateSet ctl_universal(const Stcgs& m, Temporal op, const StateSet& lhs, const StateSet& rhs) {
  return ctl_universal(restricted_successors(m.g(), Restriction::none(m.g())), op, lhs, rhs);
}

StateSet check_simple_atl(const Stcgs& input, const std::vector<AgentId>& coalition, Temporal op, const StateSet& lhs,
                          const StateSet& rhs, const EnumOptions& options, EnumStats* stats) {
  const Stcgs m = normalize_memoryless(normalize_abilities(input, coalition));
  const Cgs& g = m.g();
  std::vector<AgentId> ours(coalition.begin(), coalition.end());
  std::sort(ours.begin(), ours.end());
  ours.erase(std::unique(ours.begin(), ours.end()), ours.end());
  std::vector<AgentId> theirs;
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    if (!std::binary_search(ours.begin(), ours.end(), i) && m.ability[i] == StrategyType::ir) theirs.push_back(i);
  }
  const UniformStrategySpace mine(m, ours);
  const UniformStrategySpace other(m, theirs);
  const std::uint64_t a = mine.size();
  const std::uint64_t b = other.size();
  if (mine.saturated() || other.saturated() || (b != 0 && a > options.max_combinations / b)) {
    throw StrategySpaceTooLarge("enumeration would visit more than " + std::to_string(options.max_combinations) +
                                " strategy combinations (" + (mine.saturated() ? std::string(">2^64") : std::to_string(a)) +
                                " x " + (other.saturated() ? std::string(">2^64") : std::to_string(b)) +
                                "); use the parity backend");
  }
  if (stats) {
    stats->coalition_strategies = a;
    stats->opponent_strategies = b;
    stats->combinations_checked = 0;
  }

  const std::size_t n = g.num_states();
  StateSet result(n);
  std::mutex lock;
  std::atomic<bool> done{false};
  std::atomic<std::uint64_t> checked{0};

  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    StateSet local(n);
    Restriction r = Restriction::none(g);
    std::uint64_t count = 0;
    for (std::uint64_t x = begin; x < end && !done.load(std::memory_order_relaxed); ++x) {
      r = Restriction::none(g);
      r.apply(mine.at(x));
      const Restriction base = r;
      StateSet inter(n);
      inter.set();
      // States already won contribute nothing new; stop intersecting once
      // only those remain.
      for (std::uint64_t y = 0; y < b; ++y) {
        r = base;
        r.apply(other.at(y));
        inter &= ctl_universal(restricted_successors(g, r), op, lhs, rhs);
        ++count;
        if (!(inter - local).any()) break;
      }
      local |= inter;
      if (options.query && options.query->is_subset_of(local)) done = true;
    }
    checked += count;
    std::lock_guard<std::mutex> guard(lock);
    result |= local;
    if (options.query && options.query->is_subset_of(result)) done = true;
  };

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, a));
  if (jobs <= 1) {
    worker(0, a);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (a + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const std::uint64_t lo = j * chunk;
      const std::uint64_t hi = std::min(a, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  if (stats) stats->combinations_checked = checked.load();
  return result;
}

}  // namespace acgs
