#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace acgs {

using StateId = std::uint32_t;
using AgentId = std::uint32_t;
using ActionId = std::uint32_t;
using StateSet = boost::dynamic_bitset<>;

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

enum class StrategyType { IR, Ir, iR, ir };

std::string_view to_string(StrategyType t);
StrategyType parse_strategy_type(std::string_view text);
inline bool perfect_information(StrategyType t) { return t == StrategyType::IR || t == StrategyType::Ir; }
inline bool perfect_recall(StrategyType t) { return t == StrategyType::IR || t == StrategyType::iR; }

using AbilityMap = std::vector<StrategyType>;

// An observation partition of the state space. Blocks are kept as given so that
// validation can report overlaps; class_of points at the first block holding a state.
struct Partition {
  std::vector<std::uint32_t> class_of;
  std::vector<std::vector<StateId>> blocks;

  static Partition identity(std::size_t num_states);
  // States missing from every block become singletons.
  static Partition from_blocks(std::size_t num_states, std::vector<std::vector<StateId>> blocks);
  std::size_t size() const { return blocks.size(); }
  bool is_identity() const;
  bool same_class(StateId a, StateId b) const { return class_of[a] == class_of[b]; }
};

// Explicit concurrent game structure. Agents, states and actions are numbered in
// declaration order. Transitions are stored per state in a flat table indexed by
// the mixed-radix position of each agent's action inside its protocol list, the
// first agent being the least significant digit.
class Cgs {
 public:
  AgentId add_agent(const std::string& name, const std::vector<std::string>& actions);
  StateId add_state(const std::string& name);
  void set_initial(std::vector<StateId> initial) { initial_ = std::move(initial); }
  void add_initial(StateId s) { initial_.push_back(s); }
  void set_observation(AgentId i, Partition p);
  void set_protocol(AgentId i, StateId s, std::vector<ActionId> allowed);
  void add_label(const std::string& prop, StateId s);
  void set_label(const std::string& prop, StateSet states);

  // Fixes protocols (unset entries default to every action) and allocates the
  // transition table. Must be called before set_transition.
  void finalize_protocols();
  bool protocols_finalized() const { return !offset_.empty(); }
  void set_transition(StateId s, const std::vector<ActionId>& joint, StateId target);
  void set_transition_at(StateId s, std::size_t joint_index, StateId target);

  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_agents() const { return agent_names_.size(); }
  std::size_t num_actions(AgentId i) const { return action_names_[i].size(); }

  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& agent_names() const { return agent_names_; }
  const std::vector<std::string>& action_names(AgentId i) const { return action_names_[i]; }
  const std::string& state_name(StateId s) const { return state_names_[s]; }
  const std::string& agent_name(AgentId i) const { return agent_names_[i]; }
  const std::string& action_name(AgentId i, ActionId a) const { return action_names_[i][a]; }

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<AgentId> find_agent(std::string_view name) const;
  std::optional<ActionId> find_action(AgentId i, std::string_view name) const;

  const std::vector<StateId>& initial() const { return initial_; }
  const Partition& observation(AgentId i) const { return obs_[i]; }
  const std::vector<ActionId>& protocol(AgentId i, StateId s) const { return protocol_[i][s]; }
  const std::map<std::string, StateSet>& labels() const { return labels_; }
  // Empty set for unknown propositions; true/false are handled by the formula layer.
  StateSet label(const std::string& prop) const;
  std::vector<std::string> labels_of(StateId s) const;

  std::size_t joint_count(StateId s) const { return offset_[s + 1] - offset_[s]; }
  StateId target(StateId s, std::size_t joint_index) const { return target_[offset_[s] + joint_index]; }
  // Writes the action of every agent for the given joint index.
  void decode_joint(StateId s, std::size_t joint_index, std::vector<ActionId>& out) const;
  // Position-level decoding: out[i] is an index into protocol(i, s).
  void decode_positions(StateId s, std::size_t joint_index, std::vector<std::uint32_t>& out) const;
  std::optional<std::size_t> encode_joint(StateId s, const std::vector<ActionId>& joint) const;
  std::size_t num_transitions() const { return target_.size(); }

 private:
  std::vector<std::string> state_names_;
  std::vector<std::string> agent_names_;
  std::vector<std::vector<std::string>> action_names_;
  std::unordered_map<std::string, StateId> state_index_;
  std::unordered_map<std::string, AgentId> agent_index_;
  std::vector<std::unordered_map<std::string, ActionId>> action_index_;
  std::vector<StateId> initial_;
  std::vector<Partition> obs_;
  std::vector<std::vector<std::vector<ActionId>>> protocol_;
  std::map<std::string, StateSet> labels_;
  std::vector<std::size_t> offset_;
  std::vector<StateId> target_;
};

// A game structure together with the strategy type of every agent.
struct Stcgs {
  std::shared_ptr<const Cgs> cgs;
  AbilityMap ability;

  const Cgs& g() const { return *cgs; }
  Stcgs with_abilities(AbilityMap a) const { return Stcgs{cgs, std::move(a)}; }
};

struct Violation {
  std::string message;
};

std::vector<Violation> validate(const Stcgs& m);
std::vector<Violation> validate_structure(const Cgs& g);

StateSet epistemic_class(const Stcgs& m, AgentId i, StateId s);

enum class GroupKind { Everybody, Distributed, Common };

// Dense relation, one row per state. E is reflexive and symmetric but in general
// not transitive; D and C are equivalence relations.
using Relation = std::vector<StateSet>;
Relation group_relation(const Cgs& g, const std::vector<AgentId>& agents, GroupKind kind);
// Partitions for the two group relations that are equivalences.
Partition distributed_partition(const Cgs& g, const std::vector<AgentId>& agents);
Partition common_partition(const Cgs& g, const std::vector<AgentId>& agents);

// pi1 is coarser than pi2 with respect to agents.
bool coarser_than(const AbilityMap& pi1, const AbilityMap& pi2, const std::vector<AgentId>& agents);

struct Successor {
  std::vector<ActionId> joint;
  StateId target;
};
std::vector<Successor> successors(const Cgs& g, StateId s);

// Memoryless strategies for a set of agents: choice[k][s] is the action of agents[k] at s.
struct CollectiveStrategy {
  std::vector<AgentId> agents;
  std::vector<std::vector<ActionId>> choice;

  bool operator==(const CollectiveStrategy& o) const { return agents == o.agents && choice == o.choice; }
};

// The finite space of memoryless uniform strategies of some agents. Strategies are
// addressed by index so that ranges can be handed to workers independently.
class UniformStrategySpace {
 public:
  // Throws std::invalid_argument if an agent has perfect recall.
  UniformStrategySpace(const Stcgs& m, std::vector<AgentId> agents);
  // Same space, ignoring the agents' declared types.
  static UniformStrategySpace unchecked(const Cgs& g, std::vector<AgentId> agents);

  // Saturates at UINT64_MAX.
  std::uint64_t size() const { return size_; }
  bool saturated() const { return saturated_; }
  CollectiveStrategy at(std::uint64_t index) const;
  const std::vector<AgentId>& agents() const { return agents_; }

 private:
  UniformStrategySpace(const Cgs& g, std::vector<AgentId> agents, bool);
  struct Digit {
    std::uint32_t agent_slot;
    std::uint32_t block;
    std::uint32_t radix;
  };
  const Cgs* g_;
  std::vector<AgentId> agents_;
  std::vector<Digit> digits_;
  std::uint64_t size_ = 1;
  bool saturated_ = false;
};

std::vector<CollectiveStrategy> enumerate_uniform_strategies(const Stcgs& m, const std::vector<AgentId>& agents);

// Per agent and state: the single allowed action, or -1 when unconstrained.
struct Restriction {
  std::vector<std::vector<std::int32_t>> fixed;

  static Restriction none(const Cgs& g);
  void apply(const CollectiveStrategy& st);
};

// Same states; protocols of the fixed agents shrink to the chosen action.
Stcgs prune(const Stcgs& m, const std::vector<CollectiveStrategy>& fixed);

// Distinct successor states per state under a restriction.
std::vector<std::vector<StateId>> restricted_successors(const Cgs& g, const Restriction& r);

// Visits every protocol-conforming joint action at s that respects r.
template <class F>
void for_each_joint(const Cgs& g, StateId s, const Restriction* r, F&& f);

// Identity observations for Ir agents and type ir; everything else unchanged.
Stcgs normalize_memoryless(const Stcgs& m);

StateSet reachable_states(const Cgs& g);

std::string describe_state_set(const Cgs& g, const StateSet& set);

}  // namespace acgs

#include "acgs/model_inl.hpp"
