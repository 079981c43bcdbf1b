#include "acgs/errors.hpp"
#include "acgs/parity_game.hpp"
#include "acgs/random.hpp"

#include <catch_amalgamated.hpp>

using namespace acgs;

namespace {

ParityGame loop_game(std::uint8_t owner, std::uint32_t rank) {
  ParityGame g;
  g.add_vertex(owner, rank);
  g.add_edge(0, 0);
  return g;
}

void require_partition(const ParityGame& g, const WinningRegions& w) {
  REQUIRE(w.w0.size() == g.size());
  REQUIRE(w.w1.size() == g.size());
  CHECK((w.w0 & w.w1).none());
  CHECK((w.w0 | w.w1).count() == g.size());
}

}  // namespace

TEST_CASE("one-vertex games") {
  for (auto solver : {ParitySolver::Zielonka, ParitySolver::SmallProgressMeasures}) {
    for (std::uint8_t owner : {0, 1}) {
      CHECK(solve(loop_game(owner, 0), solver).w0.test(0));
      CHECK(solve(loop_game(owner, 1), solver).w1.test(0));
      CHECK(solve(loop_game(owner, 4), solver).w0.test(0));
    }
  }
  CHECK(brute_force_solve(loop_game(0, 0)).w0.test(0));
  CHECK(brute_force_solve(loop_game(1, 1)).w1.test(0));
}

TEST_CASE("forced two-vertex cycle is decided by its least rank") {
  for (std::uint32_t a : {0u, 1u, 2u, 3u}) {
    for (std::uint32_t b : {0u, 1u, 2u, 3u}) {
      ParityGame g;
      g.add_vertex(0, a);
      g.add_vertex(1, b);
      g.add_edge(0, 1);
      g.add_edge(1, 0);
      const bool even = std::min(a, b) % 2 == 0;
      for (const auto& w : {solve_zielonka(g), solve_small_progress_measures(g), brute_force_solve(g)}) {
        CHECK(w.w0.test(0) == even);
        CHECK(w.w0.test(1) == even);
      }
    }
  }
}

TEST_CASE("dead ends are completed against their owner") {
  ParityGame g;
  g.add_vertex(0, 0);
  g.add_vertex(1, 0);
  CHECK_THROWS_AS(solve(g), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_solve(g), std::invalid_argument);
  complete_dead_ends(g);
  const auto w = solve(g);
  CHECK(w.w1.test(0));
  CHECK(w.w0.test(1));
}

TEST_CASE("brute force refuses large games") {
  Rng rng(1);
  ParityGame g;
  for (int v = 0; v < 30; ++v) g.add_vertex(static_cast<std::uint8_t>(v % 2), 1);
  for (VertexId v = 0; v < 30; ++v) {
    for (VertexId k = 1; k <= 3; ++k) g.add_edge(v, (v + k) % 30);
  }
  CHECK_THROWS_AS(brute_force_solve(g), std::invalid_argument);
}

TEST_CASE("solvers agree with brute force on random games") {
  Rng rng(2024);
  for (int it = 0; it < 300; ++it) {
    const ParityGame g = random_parity_game(rng, 10, 4);
    const auto bf = brute_force_solve(g);
    const auto z = solve_zielonka(g);
    const auto spm = solve_small_progress_measures(g);
    require_partition(g, z);
    require_partition(g, spm);
    CHECK(z.w0 == bf.w0);
    CHECK(spm.w0 == bf.w0);
  }
}

TEST_CASE("returned Player-0 strategies win against random opponents") {
  Rng rng(77);
  for (int it = 0; it < 100; ++it) {
    const ParityGame g = random_parity_game(rng, 10, 4);
    for (const auto& w : {solve_zielonka(g), solve_small_progress_measures(g)}) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<VertexId> choice(g.size());
        for (VertexId v = 0; v < g.size(); ++v) {
          if (g.owner[v] == 0 && w.w0.test(v)) {
            REQUIRE(w.strategy[v] >= 0);
            choice[v] = static_cast<VertexId>(w.strategy[v]);
          } else {
            choice[v] = g.succ[v][rng() % g.succ[v].size()];
          }
        }
        for (VertexId v = 0; v < g.size(); ++v) {
          if (w.w0.test(v)) CHECK(player0_wins_play(g, v, choice));
        }
      }
    }
  }
}

TEST_CASE("rank shifts") {
  Rng rng(99);
  for (int it = 0; it < 100; ++it) {
    const ParityGame g = random_parity_game(rng, 10, 4);
    const auto base = solve(g);
    ParityGame up = g;
    for (auto& r : up.rank) r += 2;
    CHECK(solve(up).w0 == base.w0);
    // One more and swapped owners: the same game seen from the other side.
    ParityGame dual = g;
    for (auto& r : dual.rank) r += 1;
    for (auto& o : dual.owner) o = static_cast<std::uint8_t>(1 - o);
    CHECK(solve(dual).w0 == base.w1);
  }
}

TEST_CASE("text format round trip and errors") {
  Rng rng(4);
  for (int it = 0; it < 20; ++it) {
    const ParityGame g = random_parity_game(rng, 8, 5);
    const ParityGame back = parse_parity_game(to_text(g));
    CHECK(back.owner == g.owner);
    CHECK(back.rank == g.rank);
    CHECK(back.succ == g.succ);
  }
  const ParityGame g = parse_parity_game("# comment\n0 0 0 0 # self loop\n");
  CHECK(g.size() == 1);
  CHECK(solve(g).w0.test(0));
  CHECK_THROWS_AS(parse_parity_game("0 2 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_parity_game("0 0 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_parity_game("0 0 x 0\n"), ParseError);
}
