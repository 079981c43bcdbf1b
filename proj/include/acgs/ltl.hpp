#pragma once

#include "acgs/formula.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace acgs {

// Deterministic parity automaton over letters that are bitmasks of props
// (bit k set means props[k] holds). A run is accepting when the least rank seen
// infinitely often is even.
struct Dpa {
  std::vector<std::string> props;
  std::uint32_t initial = 0;
  std::vector<std::uint32_t> delta;  // state * num_letters() + letter
  std::vector<std::uint32_t> rank;
  std::uint32_t max_rank = 0;

  std::uint32_t num_states() const { return static_cast<std::uint32_t>(rank.size()); }
  std::uint32_t num_letters() const { return 1u << props.size(); }
  std::uint32_t next(std::uint32_t p, std::uint32_t letter) const { return delta[p * num_letters() + letter]; }
};

enum class DpaConstruction {
  Auto,     // small direct automata for single X/U/R operators over propositional operands
  General,  // always go through the Buchi automaton and determinization
};

// Letters range over the atoms of phi. Throws if phi is not pure LTL.
Dpa ltl_to_dpa(const FormulaPtr& phi, DpaConstruction how = DpaConstruction::Auto);

std::uint32_t letter_of(const Dpa& dpa, const std::set<std::string>& true_props);
bool dpa_accepts_lasso(const Dpa& dpa, const std::vector<std::uint32_t>& stem, const std::vector<std::uint32_t>& loop);

// Plain text dump: header, then one line per state with rank and edges.
std::string dpa_to_text(const Dpa& dpa);

// Statistics of the last general construction on this thread (for debugging output).
struct DpaBuildInfo {
  std::size_t buchi_states = 0;
  std::size_t safra_states = 0;
  bool shortcut = false;
};
DpaBuildInfo last_dpa_build_info();

}  // namespace acgs
