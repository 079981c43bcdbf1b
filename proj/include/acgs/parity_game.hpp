#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace acgs {

using VertexId = std::uint32_t;

// Turn-based game; Player 0 wins a play when the least rank seen infinitely
// often is even.
struct ParityGame {
  std::vector<std::uint8_t> owner;
  std::vector<std::uint32_t> rank;
  std::vector<std::vector<VertexId>> succ;
  std::vector<std::string> note;  // free-form annotation per vertex, may be empty

  VertexId add_vertex(std::uint8_t player, std::uint32_t r, std::string annotation = {});
  void add_edge(VertexId from, VertexId to) { succ[from].push_back(to); }
  std::size_t size() const { return owner.size(); }
  std::uint32_t max_rank() const;
};

struct WinningRegions {
  boost::dynamic_bitset<> w0;
  boost::dynamic_bitset<> w1;
  // For every vertex won by its owner: the successor to play. -1 elsewhere.
  std::vector<std::int64_t> strategy;
};

enum class ParitySolver { Zielonka, SmallProgressMeasures };

// Adds a losing sink for the owner of every vertex without successors.
void complete_dead_ends(ParityGame& game);

// Both solvers throw std::invalid_argument on a vertex without successors.
WinningRegions solve(const ParityGame& game, ParitySolver solver = ParitySolver::Zielonka);
WinningRegions solve_zielonka(const ParityGame& game);
// Player 0 strategy only; the entries for Player 1 vertices stay -1.
WinningRegions solve_small_progress_measures(const ParityGame& game);

// Exhaustive search over positional strategies of both players.
WinningRegions brute_force_solve(const ParityGame& game, std::uint64_t max_profiles = 20000000);

// Outcome when both players follow the given positional choices from v.
bool player0_wins_play(const ParityGame& game, VertexId v, const std::vector<VertexId>& choice);

// Text format: one line per vertex "id owner rank succ1,succ2,..."; '#' starts a comment.
ParityGame parse_parity_game(std::string_view text);
std::string to_text(const ParityGame& game);

}  // namespace acgs
