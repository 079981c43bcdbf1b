#include "acgs/model.hpp"

#include "acgs/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace acgs {

std::string_view to_string(StrategyType t) {
  switch (t) {
    case StrategyType::IR: return "IR";
    case StrategyType::Ir: return "Ir";
    case StrategyType::iR: return "iR";
    case StrategyType::ir: return "ir";
  }
  return "?";
}

StrategyType parse_strategy_type(std::string_view text) {
  if (text == "IR") return StrategyType::IR;
  if (text == "Ir") return StrategyType::Ir;
  if (text == "iR") return StrategyType::iR;
  if (text == "ir") return StrategyType::ir;
  throw std::invalid_argument("unknown strategy type '" + std::string(text) + "' (expected IR, Ir, iR or ir)");
}

Partition Partition::identity(std::size_t num_states) {
  Partition p;
  p.class_of.resize(num_states);
  p.blocks.resize(num_states);
  for (std::size_t s = 0; s < num_states; ++s) {
    p.class_of[s] = static_cast<std::uint32_t>(s);
    p.blocks[s] = {static_cast<StateId>(s)};
  }
  return p;
}

Partition Partition::from_blocks(std::size_t num_states, std::vector<std::vector<StateId>> blocks) {
  constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
  Partition p;
  p.class_of.assign(num_states, unset);
  for (auto& b : blocks) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }), blocks.end());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (StateId s : blocks[k]) {
      if (s >= num_states) throw ModelError("observation block refers to unknown state");
      if (p.class_of[s] == unset) p.class_of[s] = static_cast<std::uint32_t>(k);
    }
  }
  p.blocks = std::move(blocks);
  for (std::size_t s = 0; s < num_states; ++s) {
    if (p.class_of[s] == unset) {
      p.class_of[s] = static_cast<std::uint32_t>(p.blocks.size());
      p.blocks.push_back({static_cast<StateId>(s)});
    }
  }
  return p;
}

bool Partition::is_identity() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.size() == 1; });
}

AgentId Cgs::add_agent(const std::string& name, const std::vector<std::string>& actions) {
  if (agent_index_.count(name)) throw ModelError("duplicate agent '" + name + "'");
  if (agent_names_.size() >= kMaxAgents) throw ModelError("too many agents");
  if (!state_names_.empty()) throw ModelError("agents must be declared before states");
  auto id = static_cast<AgentId>(agent_names_.size());
  agent_names_.push_back(name);
  agent_index_[name] = id;
  action_names_.push_back({});
  action_index_.push_back({});
  for (const auto& a : actions) {
    if (action_index_[id].count(a)) throw ModelError("duplicate action '" + a + "' for agent '" + name + "'");
    action_index_[id][a] = static_cast<ActionId>(action_names_[id].size());
    action_names_[id].push_back(a);
  }
  obs_.emplace_back();
  protocol_.emplace_back();
  return id;
}

StateId Cgs::add_state(const std::string& name) {
  if (state_index_.count(name)) throw ModelError("duplicate state '" + name + "'");
  if (protocols_finalized()) throw ModelError("states cannot be added after finalize_protocols");
  auto id = static_cast<StateId>(state_names_.size());
  state_names_.push_back(name);
  state_index_[name] = id;
  for (auto& p : protocol_) p.emplace_back();
  for (auto& [_, set] : labels_) set.resize(state_names_.size());
  return id;
}

void Cgs::set_observation(AgentId i, Partition p) {
  if (p.class_of.size() != num_states()) throw ModelError("observation partition has the wrong size");
  obs_.at(i) = std::move(p);
}

void Cgs::set_protocol(AgentId i, StateId s, std::vector<ActionId> allowed) {
  if (protocols_finalized()) throw ModelError("protocols are already finalized");
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  for (ActionId a : allowed) {
    if (a >= num_actions(i)) throw ModelError("protocol action out of range");
  }
  protocol_.at(i).at(s) = std::move(allowed);
}

void Cgs::add_label(const std::string& prop, StateId s) {
  auto& set = labels_[prop];
  set.resize(num_states());
  set.set(s);
}

void Cgs::set_label(const std::string& prop, StateSet states) {
  states.resize(num_states());
  labels_[prop] = std::move(states);
}

void Cgs::finalize_protocols() {
  if (protocols_finalized()) return;
  const std::size_t n = num_states();
  for (AgentId i = 0; i < num_agents(); ++i) {
    if (obs_[i].class_of.size() != n) obs_[i] = Partition::identity(n);
    for (StateId s = 0; s < n; ++s) {
      if (protocol_[i][s].empty()) {
        protocol_[i][s].resize(num_actions(i));
        std::iota(protocol_[i][s].begin(), protocol_[i][s].end(), 0);
      }
    }
  }
  offset_.assign(n + 1, 0);
  for (StateId s = 0; s < n; ++s) {
    std::size_t count = 1;
    for (AgentId i = 0; i < num_agents(); ++i) count *= protocol_[i][s].size();
    offset_[s + 1] = offset_[s] + count;
  }
  target_.assign(offset_[n], kNoState);
  for (auto& [_, set] : labels_) set.resize(n);
}

std::optional<std::size_t> Cgs::encode_joint(StateId s, const std::vector<ActionId>& joint) const {
  if (joint.size() != num_agents()) return std::nullopt;
  std::size_t index = 0;
  std::size_t stride = 1;
  for (AgentId i = 0; i < num_agents(); ++i) {
    const auto& prot = protocol_[i][s];
    auto it = std::lower_bound(prot.begin(), prot.end(), joint[i]);
    if (it == prot.end() || *it != joint[i]) return std::nullopt;
    index += static_cast<std::size_t>(it - prot.begin()) * stride;
    stride *= prot.size();
  }
  return index;
}

void Cgs::set_transition(StateId s, const std::vector<ActionId>& joint, StateId target) {
  if (!protocols_finalized()) throw ModelError("finalize_protocols must precede set_transition");
  auto idx = encode_joint(s, joint);
  if (!idx) throw ModelError("transition from '" + state_names_.at(s) + "' uses a joint action outside the protocol");
  set_transition_at(s, *idx, target);
}

void Cgs::set_transition_at(StateId s, std::size_t joint_index, StateId target) {
  if (target >= num_states()) throw ModelError("transition target out of range");
  target_.at(offset_[s] + joint_index) = target;
}

void Cgs::decode_positions(StateId s, std::size_t joint_index, std::vector<std::uint32_t>& out) const {
  out.resize(num_agents());
  for (AgentId i = 0; i < num_agents(); ++i) {
    const std::size_t radix = protocol_[i][s].size();
    out[i] = static_cast<std::uint32_t>(joint_index % radix);
    joint_index /= radix;
  }
}

void Cgs::decode_joint(StateId s, std::size_t joint_index, std::vector<ActionId>& out) const {
  out.resize(num_agents());
  for (AgentId i = 0; i < num_agents(); ++i) {
    const std::size_t radix = protocol_[i][s].size();
    out[i] = protocol_[i][s][joint_index % radix];
    joint_index /= radix;
  }
}

std::optional<StateId> Cgs::find_state(std::string_view name) const {
  auto it = state_index_.find(std::string(name));
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<AgentId> Cgs::find_agent(std::string_view name) const {
  auto it = agent_index_.find(std::string(name));
  if (it == agent_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> Cgs::find_action(AgentId i, std::string_view name) const {
  auto it = action_index_.at(i).find(std::string(name));
  if (it == action_index_[i].end()) return std::nullopt;
  return it->second;
}

StateSet Cgs::label(const std::string& prop) const {
  auto it = labels_.find(prop);
  if (it == labels_.end()) return StateSet(num_states());
  return it->second;
}

std::vector<std::string> Cgs::labels_of(StateId s) const {
  std::vector<std::string> out;
  for (const auto& [p, set] : labels_) {
    if (set.test(s)) out.push_back(p);
  }
  return out;
}

std::vector<Violation> validate_structure(const Cgs& g) {
  std::vector<Violation> out;
  auto report = [&](std::string m) { out.push_back({std::move(m)}); };
  const std::size_t n = g.num_states();
  if (n == 0) report("model has no states");
  if (g.num_agents() == 0) report("model has no agents");
  if (g.initial().empty()) report("model has no initial state");
  if (!g.protocols_finalized()) {
    report("protocols were never finalized");
    return out;
  }
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    const auto& name = g.agent_name(i);
    const auto& p = g.observation(i);
    std::vector<int> seen(n, 0);
    for (const auto& b : p.blocks) {
      for (StateId s : b) ++seen[s];
    }
    for (StateId s = 0; s < n; ++s) {
      if (seen[s] != 1) {
        report("observation of agent '" + name + "' places state '" + g.state_name(s) + "' in " +
               std::to_string(seen[s]) + " blocks");
      }
    }
    for (StateId s = 0; s < n; ++s) {
      const auto& prot = g.protocol(i, s);
      if (prot.empty()) report("agent '" + name + "' has an empty protocol at '" + g.state_name(s) + "'");
      for (ActionId a : prot) {
        if (a >= g.num_actions(i)) report("agent '" + name + "' protocol uses an undeclared action");
      }
    }
    for (const auto& b : p.blocks) {
      for (StateId s : b) {
        if (g.protocol(i, s) != g.protocol(i, b.front())) {
          report("protocol of agent '" + name + "' differs between indistinguishable states '" +
                 g.state_name(b.front()) + "' and '" + g.state_name(s) + "'");
        }
      }
    }
  }
  std::vector<ActionId> joint;
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < g.joint_count(s); ++k) {
      if (g.target(s, k) == kNoState) {
        g.decode_joint(s, k, joint);
        std::string txt;
        for (AgentId i = 0; i < g.num_agents(); ++i) {
          txt += (i ? "," : "") + g.action_name(i, joint[i]);
        }
        report("missing transition from '" + g.state_name(s) + "' under (" + txt + ")");
      }
    }
  }
  return out;
}

std::vector<Violation> validate(const Stcgs& m) {
  const Cgs& g = m.g();
  auto out = validate_structure(g);
  if (m.ability.size() != g.num_agents()) {
    out.push_back({"ability map covers " + std::to_string(m.ability.size()) + " agents, model has " +
                   std::to_string(g.num_agents())});
    return out;
  }
  if (!g.protocols_finalized()) return out;
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    if (perfect_information(m.ability[i]) && !g.observation(i).is_identity()) {
      out.push_back({std::string(to_string(m.ability[i])) + " agent with non-identity relation: '" +
                     g.agent_name(i) + "'"});
    }
  }
  return out;
}

StateSet epistemic_class(const Stcgs& m, AgentId i, StateId s) {
  const Cgs& g = m.g();
  if (i >= g.num_agents()) throw ModelError("unknown agent");
  if (s >= g.num_states()) throw ModelError("unknown state");
  StateSet out(g.num_states());
  const auto& p = g.observation(i);
  for (StateId t : p.blocks[p.class_of[s]]) out.set(t);
  return out;
}

namespace {

// Union-find over states, used for the join of partitions.
struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Partition partition_from_keys(const std::vector<std::vector<std::uint32_t>>& keys) {
  std::map<std::vector<std::uint32_t>, std::vector<StateId>> groups;
  for (StateId s = 0; s < keys.size(); ++s) groups[keys[s]].push_back(s);
  std::vector<std::vector<StateId>> blocks;
  for (auto& [_, b] : groups) blocks.push_back(std::move(b));
  std::sort(blocks.begin(), blocks.end());
  return Partition::from_blocks(keys.size(), std::move(blocks));
}

void require_agents(const Cgs& g, const std::vector<AgentId>& agents) {
  if (agents.empty()) throw std::invalid_argument("group relation needs a nonempty agent set");
  for (AgentId i : agents) {
    if (i >= g.num_agents()) throw ModelError("unknown agent in group relation");
  }
}

}  // namespace

Partition distributed_partition(const Cgs& g, const std::vector<AgentId>& agents) {
  require_agents(g, agents);
  std::vector<std::vector<std::uint32_t>> keys(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (AgentId i : agents) keys[s].push_back(g.observation(i).class_of[s]);
  }
  return partition_from_keys(keys);
}

Partition common_partition(const Cgs& g, const std::vector<AgentId>& agents) {
  require_agents(g, agents);
  DisjointSets ds(g.num_states());
  for (AgentId i : agents) {
    for (const auto& b : g.observation(i).blocks) {
      for (StateId s : b) ds.unite(b.front(), s);
    }
  }
  std::vector<std::vector<std::uint32_t>> keys(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) keys[s] = {ds.find(s)};
  return partition_from_keys(keys);
}

Relation group_relation(const Cgs& g, const std::vector<AgentId>& agents, GroupKind kind) {
  require_agents(g, agents);
  const std::size_t n = g.num_states();
  Relation rel(n, StateSet(n));
  auto fill_from = [&](const Partition& p) {
    for (const auto& b : p.blocks) {
      for (StateId s : b) {
        for (StateId t : b) rel[s].set(t);
      }
    }
  };
  switch (kind) {
    case GroupKind::Everybody:
      for (AgentId i : agents) fill_from(g.observation(i));
      break;
    case GroupKind::Distributed:
      fill_from(distributed_partition(g, agents));
      break;
    case GroupKind::Common:
      fill_from(common_partition(g, agents));
      break;
  }
  return rel;
}

bool coarser_than(const AbilityMap& pi1, const AbilityMap& pi2, const std::vector<AgentId>& agents) {
  if (pi1.size() != pi2.size()) return false;
  std::vector<bool> in_a(pi1.size(), false);
  for (AgentId i : agents) {
    if (i < in_a.size()) in_a[i] = true;
  }
  for (std::size_t j = 0; j < pi1.size(); ++j) {
    if (in_a[j]) {
      if (pi1[j] != pi2[j]) return false;
      continue;
    }
    using T = StrategyType;
    bool ok = false;
    switch (pi1[j]) {
      case T::IR: ok = pi2[j] == T::IR; break;
      case T::Ir: ok = pi2[j] == T::IR || pi2[j] == T::Ir; break;
      case T::iR: ok = pi2[j] == T::IR || pi2[j] == T::iR; break;
      case T::ir: ok = true; break;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<Successor> successors(const Cgs& g, StateId s) {
  if (s >= g.num_states()) throw ModelError("unknown state");
  std::vector<Successor> out;
  for (std::size_t k = 0; k < g.joint_count(s); ++k) {
    StateId t = g.target(s, k);
    if (t == kNoState) throw ModelError("missing transition from '" + g.state_name(s) + "'");
    Successor succ;
    g.decode_joint(s, k, succ.joint);
    succ.target = t;
    out.push_back(std::move(succ));
  }
  return out;
}

UniformStrategySpace::UniformStrategySpace(const Stcgs& m, std::vector<AgentId> agents)
    : UniformStrategySpace(m.g(), std::move(agents), true) {
  for (AgentId i : agents_) {
    if (perfect_recall(m.ability.at(i))) {
      throw std::invalid_argument("agent '" + m.g().agent_name(i) + "' has perfect recall (" +
                                  std::string(to_string(m.ability[i])) + "); no memoryless enumeration");
    }
  }
}

UniformStrategySpace UniformStrategySpace::unchecked(const Cgs& g, std::vector<AgentId> agents) {
  return UniformStrategySpace(g, std::move(agents), true);
}

UniformStrategySpace::UniformStrategySpace(const Cgs& g, std::vector<AgentId> agents, bool) : g_(&g), agents_(std::move(agents)) {
  for (std::uint32_t slot = 0; slot < agents_.size(); ++slot) {
    AgentId i = agents_[slot];
    if (i >= g.num_agents()) throw ModelError("unknown agent in strategy space");
    const auto& p = g.observation(i);
    for (std::uint32_t b = 0; b < p.blocks.size(); ++b) {
      auto radix = static_cast<std::uint32_t>(g.protocol(i, p.blocks[b].front()).size());
      digits_.push_back({slot, b, radix});
      if (radix > 1) {
        if (size_ > std::numeric_limits<std::uint64_t>::max() / radix) {
          saturated_ = true;
          size_ = std::numeric_limits<std::uint64_t>::max();
        } else if (!saturated_) {
          size_ *= radix;
        }
      }
    }
  }
}

CollectiveStrategy UniformStrategySpace::at(std::uint64_t index) const {
  if (saturated_) throw StrategySpaceTooLarge("strategy space exceeds 2^64 elements");
  if (index >= size_) throw std::out_of_range("strategy index out of range");
  CollectiveStrategy st;
  st.agents = agents_;
  st.choice.resize(agents_.size());
  for (std::size_t slot = 0; slot < agents_.size(); ++slot) st.choice[slot].assign(g_->num_states(), 0);
  // The last digit varies fastest, giving lexicographic order over (agent, block).
  for (std::size_t d = digits_.size(); d-- > 0;) {
    const Digit& dg = digits_[d];
    const AgentId i = agents_[dg.agent_slot];
    const auto& block = g_->observation(i).blocks[dg.block];
    const auto& prot = g_->protocol(i, block.front());
    const std::uint32_t pick = static_cast<std::uint32_t>(index % dg.radix);
    index /= dg.radix;
    for (StateId s : block) st.choice[dg.agent_slot][s] = prot[pick];
  }
  return st;
}

std::vector<CollectiveStrategy> enumerate_uniform_strategies(const Stcgs& m, const std::vector<AgentId>& agents) {
  UniformStrategySpace space(m, agents);
  if (space.saturated()) throw StrategySpaceTooLarge("strategy space exceeds 2^64 elements");
  std::vector<CollectiveStrategy> out;
  out.reserve(space.size());
  for (std::uint64_t k = 0; k < space.size(); ++k) out.push_back(space.at(k));
  return out;
}

Restriction Restriction::none(const Cgs& g) {
  Restriction r;
  r.fixed.assign(g.num_agents(), std::vector<std::int32_t>(g.num_states(), -1));
  return r;
}

void Restriction::apply(const CollectiveStrategy& st) {
  for (std::size_t k = 0; k < st.agents.size(); ++k) {
    auto& row = fixed.at(st.agents[k]);
    for (std::size_t s = 0; s < row.size(); ++s) row[s] = static_cast<std::int32_t>(st.choice[k][s]);
  }
}

Stcgs prune(const Stcgs& m, const std::vector<CollectiveStrategy>& fixed) {
  const Cgs& g = m.g();
  Restriction r = Restriction::none(g);
  for (const auto& st : fixed) r.apply(st);
  auto out = std::make_shared<Cgs>();
  for (AgentId i = 0; i < g.num_agents(); ++i) out->add_agent(g.agent_name(i), g.action_names(i));
  for (StateId s = 0; s < g.num_states(); ++s) out->add_state(g.state_name(s));
  out->set_initial(g.initial());
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    out->set_observation(i, g.observation(i));
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (r.fixed[i][s] >= 0) {
        out->set_protocol(i, s, {static_cast<ActionId>(r.fixed[i][s])});
      } else {
        out->set_protocol(i, s, g.protocol(i, s));
      }
    }
  }
  for (const auto& [p, set] : g.labels()) out->set_label(p, set);
  out->finalize_protocols();
  std::vector<ActionId> joint;
  for (StateId s = 0; s < g.num_states(); ++s) {
    for_each_joint(g, s, &r, [&](std::size_t k, StateId t) {
      g.decode_joint(s, k, joint);
      if (t != kNoState) out->set_transition(s, joint, t);
    });
  }
  return Stcgs{out, m.ability};
}

std::vector<std::vector<StateId>> restricted_successors(const Cgs& g, const Restriction& r) {
  std::vector<std::vector<StateId>> out(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    auto& row = out[s];
    for_each_joint(g, s, &r, [&](std::size_t, StateId t) { row.push_back(t); });
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return out;
}

Stcgs normalize_memoryless(const Stcgs& m) {
  const Cgs& g = m.g();
  bool needs_copy = false;
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    if (m.ability[i] == StrategyType::Ir && !g.observation(i).is_identity()) needs_copy = true;
  }
  Stcgs out = m;
  if (needs_copy) {
    auto copy = std::make_shared<Cgs>(g);
    for (AgentId i = 0; i < g.num_agents(); ++i) {
      if (m.ability[i] == StrategyType::Ir) copy->set_observation(i, Partition::identity(g.num_states()));
    }
    out.cgs = copy;
  }
  for (auto& t : out.ability) {
    if (t == StrategyType::Ir) t = StrategyType::ir;
  }
  return out;
}

StateSet reachable_states(const Cgs& g) {
  StateSet seen(g.num_states());
  std::vector<StateId> stack;
  for (StateId s : g.initial()) {
    if (!seen.test(s)) {
      seen.set(s);
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < g.joint_count(s); ++k) {
      StateId t = g.target(s, k);
      if (t != kNoState && !seen.test(t)) {
        seen.set(t);
        stack.push_back(t);
      }
    }
  }
  return seen;
}

std::string describe_state_set(const Cgs& g, const StateSet& set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto s = set.find_first(); s != StateSet::npos; s = set.find_next(s)) {
    os << (first ? "" : ", ") << g.state_name(static_cast<StateId>(s));
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace acgs
