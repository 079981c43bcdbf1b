#include "acgs/parity_backend.hpp"

#include "acgs/enum_backend.hpp"
#include "acgs/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

namespace acgs {

namespace {

Stcgs reject_iR(const Stcgs& m) {
  for (AgentId i = 0; i < m.g().num_agents(); ++i) {
    if (m.ability[i] == StrategyType::iR) {
      throw UndecidableConfiguration("agent '" + m.g().agent_name(i) +
                                     "' has type iR; model checking coalition formulae is undecidable "
                                     "with imperfect information and perfect recall");
    }
  }
  return normalize_memoryless(m);
}

std::vector<AgentId> sorted_unique(std::vector<AgentId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Reduction::Reduction(const Stcgs& m, std::vector<AgentId> coalition)
    : m_(reject_iR(m)), space_(UniformStrategySpace::unchecked(m_.g(), {})) {
  coalition = sorted_unique(std::move(coalition));
  const Cgs& g = m_.g();
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    const bool ours = std::binary_search(coalition.begin(), coalition.end(), i);
    const bool memoryless = m_.ability[i] == StrategyType::ir;
    (ours ? (memoryless ? a_ir_ : a_IR_) : (memoryless ? o_ir_ : o_IR_)).push_back(i);
  }
  space_ = UniformStrategySpace(m_, a_ir_);
}

std::size_t Reduction::num_picks(StateId s) const {
  std::size_t n = 1;
  for (AgentId i : a_IR_) n *= m_.g().protocol(i, s).size();
  return n;
}

std::vector<ActionId> Reduction::pick(StateId s, std::size_t index) const {
  std::vector<ActionId> f;
  f.reserve(a_IR_.size());
  for (AgentId i : a_IR_) {
    const auto& prot = m_.g().protocol(i, s);
    f.push_back(prot[index % prot.size()]);
    index /= prot.size();
  }
  return f;
}

std::map<StateId, KnowledgeSet> Reduction::successor_knowledge(StateId s, const CollectiveStrategy& f_top,
                                                               const std::vector<ActionId>& f,
                                                               const KnowledgeSet& G) const {
  const Cgs& g = m_.g();
  // Domain after the step: the old one plus the current class of every
  // memoryless opponent.
  std::vector<DomainKey> domain = G.domain;
  for (AgentId i : o_ir_) {
    const DomainKey key{i, g.observation(i).class_of[s]};
    if (!std::binary_search(G.domain.begin(), G.domain.end(), key)) domain.push_back(key);
  }
  std::sort(domain.begin(), domain.end());
  std::vector<std::size_t> old_pos(G.domain.size());
  for (std::size_t j = 0; j < G.domain.size(); ++j) {
    old_pos[j] = static_cast<std::size_t>(std::lower_bound(domain.begin(), domain.end(), G.domain[j]) - domain.begin());
  }
  std::vector<std::size_t> slot_pos(o_ir_.size());
  for (std::size_t k = 0; k < o_ir_.size(); ++k) {
    const DomainKey key{o_ir_[k], g.observation(o_ir_[k]).class_of[s]};
    slot_pos[k] = static_cast<std::size_t>(std::lower_bound(domain.begin(), domain.end(), key) - domain.begin());
  }

  // Opponent action tuples at s that are compatible with the coalition's
  // choices, with the targets they lead to.
  std::set<std::pair<std::vector<ActionId>, StateId>> moves;
  std::vector<ActionId> joint;
  std::vector<ActionId> tuple(o_ir_.size());
  for (std::size_t k = 0; k < g.joint_count(s); ++k) {
    g.decode_joint(s, k, joint);
    bool ok = true;
    for (std::size_t a = 0; a < a_ir_.size() && ok; ++a) ok = joint[a_ir_[a]] == f_top.choice[a][s];
    for (std::size_t a = 0; a < a_IR_.size() && ok; ++a) ok = joint[a_IR_[a]] == f[a];
    if (!ok) continue;
    const StateId t = g.target(s, k);
    if (t == kNoState) throw ModelError("missing transition from '" + g.state_name(s) + "'");
    for (std::size_t a = 0; a < o_ir_.size(); ++a) tuple[a] = joint[o_ir_[a]];
    moves.emplace(tuple, t);
  }

  std::map<StateId, std::set<std::vector<ActionId>>> grouped;
  std::vector<ActionId> extended(domain.size());
  for (const auto& member : G.members) {
    std::fill(extended.begin(), extended.end(), ActionId{0});
    for (std::size_t j = 0; j < member.size(); ++j) extended[old_pos[j]] = member[j];
    for (const auto& [acts, t] : moves) {
      bool consistent = true;
      auto candidate = extended;
      for (std::size_t a = 0; a < o_ir_.size() && consistent; ++a) {
        const std::size_t pos = slot_pos[a];
        const auto old = std::find(old_pos.begin(), old_pos.end(), pos);
        if (old != old_pos.end()) {
          consistent = member[static_cast<std::size_t>(old - old_pos.begin())] == acts[a];
        } else {
          candidate[pos] = acts[a];
        }
      }
      if (consistent) grouped[t].insert(std::move(candidate));
    }
  }
  std::map<StateId, KnowledgeSet> out;
  for (auto& [t, members] : grouped) {
    KnowledgeSet next;
    next.domain = domain;
    next.members.assign(members.begin(), members.end());
    out.emplace(t, std::move(next));
  }
  return out;
}

KnowledgeSet Reduction::successor_knowledge(StateId s, const CollectiveStrategy& f_top, const std::vector<ActionId>& f,
                                            const KnowledgeSet& G, StateId target) const {
  auto all = successor_knowledge(s, f_top, f, G);
  auto it = all.find(target);
  if (it == all.end()) return KnowledgeSet{};
  return std::move(it->second);
}

std::vector<std::uint32_t> state_letters(const Cgs& g, const Dpa& dpa, const std::map<std::string, StateSet>& extra) {
  std::vector<std::uint32_t> letters(g.num_states(), 0);
  for (std::size_t k = 0; k < dpa.props.size(); ++k) {
    auto it = extra.find(dpa.props[k]);
    const StateSet set = it != extra.end() ? it->second : g.label(dpa.props[k]);
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (s < set.size() && set.test(s)) letters[s] |= 1u << k;
    }
  }
  return letters;
}

namespace {

// Builds the reachable part of the game for one or more coalition strategies.
class GameBuilder {
 public:
  GameBuilder(const Reduction& r, const Dpa& dpa, const std::vector<std::uint32_t>& letters, std::uint64_t max_vertices,
              std::uint64_t max_entries, bool notes)
      : r_(r), dpa_(dpa), letters_(letters), max_vertices_(max_vertices), max_entries_(max_entries), notes_(notes) {}

  ParityGame& game() { return game_; }
  std::size_t knowledge_sets() const { return knowledge_.size(); }

  VertexId knowledge_vertex(std::uint64_t ftop, const CollectiveStrategy& f_top, StateId s, std::uint32_t p,
                            std::uint32_t kid) {
    auto key = std::make_tuple(ftop, s, p, kid);
    auto it = k_vertex_.find(key);
    if (it != k_vertex_.end()) return it->second;
    std::string note;
    if (notes_) {
      note = "K s=" + r_.model().g().state_name(s) + " p=" + std::to_string(p) + " f=" + std::to_string(ftop) +
             " G=" + std::to_string(kid);
    }
    const VertexId v = add(0, dpa_.rank[p], std::move(note));
    k_vertex_.emplace(key, v);
    pending_.push_back(Pending{v, ftop, &f_top, s, p, kid});
    return v;
  }

  std::uint32_t bottom() { return intern(KnowledgeSet::bottom()); }

  VertexId add(std::uint8_t owner, std::uint32_t rank, std::string note) {
    if (game_.size() >= max_vertices_) {
      throw StrategySpaceTooLarge("parity game exceeds " + std::to_string(max_vertices_) + " vertices");
    }
    return game_.add_vertex(owner, rank, std::move(note));
  }

  // Expands every knowledge vertex created so far, and those it creates.
  void expand_all() {
    while (!pending_.empty()) {
      const Pending item = pending_.back();
      pending_.pop_back();
      expand(item);
    }
  }

 private:
  struct Pending {
    VertexId v;
    std::uint64_t ftop;
    const CollectiveStrategy* f_top;
    StateId s;
    std::uint32_t p;
    std::uint32_t kid;
  };

  std::uint32_t intern(KnowledgeSet k) {
    auto it = knowledge_id_.find(k);
    if (it != knowledge_id_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(knowledge_.size());
    entries_ += k.members.size() * std::max<std::size_t>(1, k.domain.size());
    if (entries_ > max_entries_) {
      throw StrategySpaceTooLarge("knowledge sets of the memoryless opponents exceed " + std::to_string(max_entries_) +
                                  " stored actions");
    }
    knowledge_.push_back(k);
    knowledge_id_.emplace(std::move(k), id);
    return id;
  }

  void expand(const Pending& item) {
    const std::uint32_t p2 = dpa_.next(item.p, letters_[item.s]);
    const std::size_t picks = r_.num_picks(item.s);
    for (std::size_t fi = 0; fi < picks; ++fi) {
      const auto key = std::make_tuple(item.ftop, item.s, item.kid, static_cast<std::uint64_t>(fi));
      auto it = step_cache_.find(key);
      if (it == step_cache_.end()) {
        std::vector<std::pair<StateId, std::uint32_t>> row;
        const KnowledgeSet G = knowledge_[item.kid];
        for (auto& [t, next] : r_.successor_knowledge(item.s, *item.f_top, r_.pick(item.s, fi), G)) {
          row.emplace_back(t, intern(std::move(next)));
        }
        it = step_cache_.emplace(key, std::move(row)).first;
      }
      const auto row = it->second;
      const VertexId move = add(1, dpa_.rank[item.p], {});
      game_.add_edge(item.v, move);
      for (const auto& [t, kid2] : row) {
        const VertexId w = knowledge_vertex(item.ftop, *item.f_top, t, p2, kid2);
        game_.add_edge(move, w);
      }
    }
  }

  struct KnowledgeLess {
    bool operator()(const KnowledgeSet& a, const KnowledgeSet& b) const {
      return std::tie(a.domain, a.members) < std::tie(b.domain, b.members);
    }
  };

  const Reduction& r_;
  const Dpa& dpa_;
  const std::vector<std::uint32_t>& letters_;
  std::uint64_t max_vertices_;
  std::uint64_t max_entries_;
  std::uint64_t entries_ = 0;
  bool notes_;
  ParityGame game_;
  std::vector<KnowledgeSet> knowledge_;
  std::map<KnowledgeSet, std::uint32_t, KnowledgeLess> knowledge_id_;
  std::map<std::tuple<std::uint64_t, StateId, std::uint32_t, std::uint32_t>, VertexId> k_vertex_;
  std::map<std::tuple<std::uint64_t, StateId, std::uint32_t, std::uint64_t>, std::vector<std::pair<StateId, std::uint32_t>>>
      step_cache_;
  std::vector<Pending> pending_;
};

}  // namespace

BuiltGame build_game(const Stcgs& m, const std::vector<AgentId>& coalition, const Dpa& dpa,
                     const std::vector<std::uint32_t>& letters, StateId start) {
  const Reduction r(m, coalition);
  const ParityOptions defaults;
  GameBuilder b(r, dpa, letters, defaults.max_vertices, defaults.max_knowledge_entries, true);
  BuiltGame out;
  const auto& space = r.coalition_strategies();
  if (space.saturated()) throw StrategySpaceTooLarge("coalition strategy space exceeds 2^64 elements");
  const std::string name = r.model().g().state_name(start);
  out.initial = b.add(0, 0, "Initial s=" + name);
  std::vector<CollectiveStrategy> strategies;
  strategies.reserve(space.size());
  for (std::uint64_t x = 0; x < space.size(); ++x) strategies.push_back(space.at(x));
  const std::uint32_t bottom = b.bottom();
  for (std::uint64_t x = 0; x < space.size(); ++x) {
    const VertexId pick = b.add(1, 0, "Pick s=" + name + " f=" + std::to_string(x));
    b.game().add_edge(out.initial, pick);
    b.game().add_edge(pick, b.knowledge_vertex(x, strategies[x], start, dpa.initial, bottom));
  }
  b.expand_all();
  out.coalition_picks = space.size();
  out.game = std::move(b.game());
  complete_dead_ends(out.game);
  return out;
}

StateSet check_with_dpa(const Stcgs& m, const std::vector<AgentId>& coalition, const Dpa& dpa,
                        const std::vector<std::uint32_t>& letters, const ParityOptions& options, ParityStats* stats) {
  const Reduction r(m, coalition);
  const Cgs& g = r.model().g();
  const std::size_t n = g.num_states();
  const auto& space = r.coalition_strategies();
  if (space.saturated() || space.size() > options.max_subgames) {
    throw StrategySpaceTooLarge("the memoryless coalition members have " +
                                (space.saturated() ? std::string("more than 2^64") : std::to_string(space.size())) +
                                " uniform strategies, above the limit of " + std::to_string(options.max_subgames) +
                                " subgames");
  }
  const std::uint64_t count = space.size();

  StateSet wanted(n);
  if (options.query) {
    wanted = *options.query;
  } else {
    wanted.set();
  }
  StateSet result(n);
  std::mutex lock;
  std::atomic<std::uint64_t> next{0};
  ParityStats total;
  total.coalition_strategies = count;
  total.dpa_states = dpa.num_states();

  auto worker = [&]() {
    for (;;) {
      const std::uint64_t x = next.fetch_add(1);
      if (x >= count) return;
      StateSet starts(n);
      {
        std::lock_guard<std::mutex> guard(lock);
        starts = wanted - result;
      }
      if (starts.none()) return;
      const CollectiveStrategy f_top = space.at(x);
      GameBuilder b(r, dpa, letters, options.max_vertices, options.max_knowledge_entries, options.dump != nullptr);
      const std::uint32_t bottom = b.bottom();
      std::vector<std::pair<StateId, VertexId>> roots;
      for (auto s = starts.find_first(); s != StateSet::npos; s = starts.find_next(s)) {
        roots.emplace_back(static_cast<StateId>(s), b.knowledge_vertex(x, f_top, static_cast<StateId>(s), dpa.initial, bottom));
      }
      b.expand_all();
      ParityGame& game = b.game();
      complete_dead_ends(game);
      const auto t0 = std::chrono::steady_clock::now();
      const WinningRegions w = solve(game, options.solver);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::size_t edges = 0;
      for (const auto& row : game.succ) edges += row.size();
      std::lock_guard<std::mutex> guard(lock);
      for (const auto& [s, v] : roots) {
        if (w.w0.test(v)) result.set(s);
      }
      total.subgames_solved += 1;
      total.game_vertices += game.size();
      total.game_edges += edges;
      total.knowledge_sets += b.knowledge_sets();
      total.solver_ms += ms;
      if (options.dump) *options.dump << "# subgame f=" << x << "\n" << to_text(game);
    }
  };

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  if (options.dump) jobs = 1;
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(count, 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (stats) *stats = total;
  return result;
}

StateSet check_simple_atlstar(const Stcgs& m, const std::vector<AgentId>& coalition, const FormulaPtr& body,
                              const std::map<std::string, StateSet>& extra_labels, const ParityOptions& options,
                              ParityStats* stats) {
  const Dpa dpa = ltl_to_dpa(body);
  const auto letters = state_letters(m.g(), dpa, extra_labels);
  return check_with_dpa(m, coalition, dpa, letters, options, stats);
}

}  // namespace acgs
