#pragma once

// Coalition formulae with arbitrary LTL bodies, decided by a parity game that
// combines the model, a deterministic parity automaton for the body and, for
// every memoryless opponent with imperfect information, the set of uniform
// partial strategies that is still consistent with the play so far.

#include "acgs/ltl.hpp"
#include "acgs/model.hpp"
#include "acgs/parity_game.hpp"

#include <iosfwd>
#include <map>

namespace acgs {

// One (agent, observation class) commitment slot of an opponent.
struct DomainKey {
  AgentId agent;
  std::uint32_t cls;
  auto operator<=>(const DomainKey&) const = default;
};

// Partial uniform strategies with a common domain. members[k][j] is the action
// that the k-th strategy assigns to domain[j]. Both vectors are kept sorted.
struct KnowledgeSet {
  std::vector<DomainKey> domain;
  std::vector<std::vector<ActionId>> members;

  // The singleton holding the strategy with the empty domain.
  static KnowledgeSet bottom() { return KnowledgeSet{{}, {{}}}; }
  bool empty() const { return members.empty(); }
  bool operator==(const KnowledgeSet&) const = default;
};

// Agent roles for a fixed coalition, after the Ir to ir rewrite.
class Reduction {
 public:
  // Throws UndecidableConfiguration on iR agents.
  Reduction(const Stcgs& m, std::vector<AgentId> coalition);

  const Stcgs& model() const { return m_; }
  const std::vector<AgentId>& coalition_memoryless() const { return a_ir_; }
  const std::vector<AgentId>& coalition_recall() const { return a_IR_; }
  const std::vector<AgentId>& opponents_memoryless() const { return o_ir_; }
  const std::vector<AgentId>& opponents_recall() const { return o_IR_; }

  // Total uniform strategies of the memoryless coalition members.
  const UniformStrategySpace& coalition_strategies() const { return space_; }

  // Action picks of the recall coalition members at s, by mixed-radix index.
  std::size_t num_picks(StateId s) const;
  std::vector<ActionId> pick(StateId s, std::size_t index) const;

  // The knowledge set following G when the coalition plays f_top and f at s,
  // for every successor s' that is reachable at all. Successors with an empty
  // set are absent.
  std::map<StateId, KnowledgeSet> successor_knowledge(StateId s, const CollectiveStrategy& f_top,
                                                      const std::vector<ActionId>& f, const KnowledgeSet& G) const;
  KnowledgeSet successor_knowledge(StateId s, const CollectiveStrategy& f_top, const std::vector<ActionId>& f,
                                   const KnowledgeSet& G, StateId target) const;

 private:
  Stcgs m_;
  std::vector<AgentId> a_ir_, a_IR_, o_ir_, o_IR_;
  UniformStrategySpace space_;
};

// DPA letter read at every state: bit k set iff dpa.props[k] holds there.
// Propositions are looked up in extra first, then in the model labelling.
std::vector<std::uint32_t> state_letters(const Cgs& g, const Dpa& dpa, const std::map<std::string, StateSet>& extra = {});

struct BuiltGame {
  ParityGame game;
  VertexId initial = 0;         // Initial(start)
  std::size_t coalition_picks = 0;
};

// The whole reachable game from Initial(start), covering every coalition strategy.
BuiltGame build_game(const Stcgs& m, const std::vector<AgentId>& coalition, const Dpa& dpa,
                     const std::vector<std::uint32_t>& letters, StateId start);

struct ParityOptions {
  unsigned jobs = 0;
  ParitySolver solver = ParitySolver::Zielonka;
  const StateSet* query = nullptr;  // start states of interest; all states when null
  std::ostream* dump = nullptr;     // receives every solved subgame in text form
  // Exceeding any of these raises StrategySpaceTooLarge.
  std::uint64_t max_vertices = 20000000;
  // Stored actions over all distinct knowledge sets (members times domain size).
  std::uint64_t max_knowledge_entries = 20000000;
  std::uint64_t max_subgames = 1000000;          // uniform strategies of the memoryless coalition members
};

struct ParityStats {
  std::uint64_t coalition_strategies = 0;
  std::uint64_t subgames_solved = 0;
  std::uint64_t game_vertices = 0;
  std::uint64_t game_edges = 0;
  std::uint64_t knowledge_sets = 0;
  std::size_t dpa_states = 0;
  double solver_ms = 0;
};

// States where the coalition enforces the LTL body, by one subgame per total
// strategy of the memoryless coalition members.
StateSet check_simple_atlstar(const Stcgs& m, const std::vector<AgentId>& coalition, const FormulaPtr& body,
                              const std::map<std::string, StateSet>& extra_labels = {},
                              const ParityOptions& options = {}, ParityStats* stats = nullptr);

// Same with a ready automaton and letters.
StateSet check_with_dpa(const Stcgs& m, const std::vector<AgentId>& coalition, const Dpa& dpa,
                        const std::vector<std::uint32_t>& letters, const ParityOptions& options = {},
                        ParityStats* stats = nullptr);

}  // namespace acgs
