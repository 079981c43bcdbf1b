#include "acgs/parity_game.hpp"

#include "acgs/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace acgs {

VertexId ParityGame::add_vertex(std::uint8_t player, std::uint32_t r, std::string annotation) {
  owner.push_back(player);
  rank.push_back(r);
  succ.emplace_back();
  note.push_back(std::move(annotation));
  return static_cast<VertexId>(owner.size() - 1);
}

std::uint32_t ParityGame::max_rank() const {
  std::uint32_t m = 0;
  for (auto r : rank) m = std::max(m, r);
  return m;
}

void complete_dead_ends(ParityGame& game) {
  std::int64_t sink0 = -1;  // won by Player 1
  std::int64_t sink1 = -1;  // won by Player 0
  const std::size_t n = game.size();
  for (VertexId v = 0; v < n; ++v) {
    if (!game.succ[v].empty()) continue;
    if (game.owner[v] == 0) {
      if (sink0 < 0) {
        sink0 = game.add_vertex(0, 1, "sink lost by player 0");
        game.add_edge(static_cast<VertexId>(sink0), static_cast<VertexId>(sink0));
      }
      game.add_edge(v, static_cast<VertexId>(sink0));
    } else {
      if (sink1 < 0) {
        sink1 = game.add_vertex(1, 0, "sink lost by player 1");
        game.add_edge(static_cast<VertexId>(sink1), static_cast<VertexId>(sink1));
      }
      game.add_edge(v, static_cast<VertexId>(sink1));
    }
  }
}

namespace {

void require_total(const ParityGame& g) {
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.succ[v].empty()) throw std::invalid_argument("parity game: vertex " + std::to_string(v) + " has no successor");
    for (VertexId w : g.succ[v]) {
      if (w >= g.size()) throw std::invalid_argument("parity game: edge to unknown vertex " + std::to_string(w));
    }
  }
}

using Mask = std::vector<char>;

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()), strategy_(g.size(), -1), count_(g.size(), 0) {
    for (VertexId v = 0; v < g.size(); ++v) {
      for (VertexId w : g.succ[v]) pred_[w].push_back(v);
    }
  }

  WinningRegions run() {
    Mask all(g_.size(), 1);
    Mask w0, w1;
    solve(all, w0, w1);
    WinningRegions r;
    r.w0.resize(g_.size());
    r.w1.resize(g_.size());
    r.strategy.assign(g_.size(), -1);
    for (VertexId v = 0; v < g_.size(); ++v) {
      if (w0[v]) r.w0.set(v);
      if (w1[v]) r.w1.set(v);
      const bool own_win = g_.owner[v] == 0 ? w0[v] : w1[v];
      if (own_win) r.strategy[v] = strategy_[v];
    }
    return r;
  }

 private:
  // Vertices of sub from which `player` forces a visit to target. Records the
  // attracting edge for player's vertices outside target.
  Mask attractor(int player, const Mask& target, const Mask& sub) {
    Mask in(g_.size(), 0);
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < g_.size(); ++v) {
      if (!sub[v]) continue;
      if (target[v]) {
        in[v] = 1;
        queue.push_back(v);
      } else if (g_.owner[v] != player) {
        std::uint32_t c = 0;
        for (VertexId w : g_.succ[v]) c += sub[w] ? 1 : 0;
        count_[v] = c;
      }
    }
    while (!queue.empty()) {
      const VertexId w = queue.front();
      queue.pop_front();
      for (VertexId u : pred_[w]) {
        if (!sub[u] || in[u]) continue;
        if (g_.owner[u] == player) {
          in[u] = 1;
          strategy_[u] = w;
          queue.push_back(u);
        } else if (--count_[u] == 0) {
          in[u] = 1;
          queue.push_back(u);
        }
      }
    }
    return in;
  }

  void solve(const Mask& sub, Mask& w0, Mask& w1) {
    const std::size_t n = g_.size();
    w0.assign(n, 0);
    w1.assign(n, 0);
    std::uint32_t d = UINT32_MAX;
    for (VertexId v = 0; v < n; ++v) {
      if (sub[v]) d = std::min(d, g_.rank[v]);
    }
    if (d == UINT32_MAX) return;
    const int p = static_cast<int>(d % 2);
    Mask top(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      if (!sub[v] || g_.rank[v] != d) continue;
      top[v] = 1;
      if (g_.owner[v] == p) {
        for (VertexId w : g_.succ[v]) {
          if (sub[w]) {
            strategy_[v] = w;
            break;
          }
        }
      }
    }
    const Mask a = attractor(p, top, sub);
    Mask rest(n, 0);
    for (VertexId v = 0; v < n; ++v) rest[v] = sub[v] && !a[v];
    Mask r0, r1;
    solve(rest, r0, r1);
    Mask& lost = p == 0 ? r1 : r0;
    if (std::none_of(lost.begin(), lost.end(), [](char c) { return c != 0; })) {
      Mask& won = p == 0 ? w0 : w1;
      won = sub;
      return;
    }
    const Mask b = attractor(1 - p, lost, sub);
    Mask rest2(n, 0);
    for (VertexId v = 0; v < n; ++v) rest2[v] = sub[v] && !b[v];
    Mask s0, s1;
    solve(rest2, s0, s1);
    for (VertexId v = 0; v < n; ++v) {
      const bool opp = b[v] || (p == 0 ? s1[v] : s0[v]);
      const bool mine = p == 0 ? s0[v] : s1[v];
      if (p == 0) {
        w0[v] = mine;
        w1[v] = opp;
      } else {
        w1[v] = mine;
        w0[v] = opp;
      }
    }
  }

  const ParityGame& g_;
  std::vector<std::vector<VertexId>> pred_;
  std::vector<std::int64_t> strategy_;
  std::vector<std::uint32_t> count_;
};

// Least rank on the cycle reached from v when every vertex plays choice[v].
std::uint32_t cycle_min_rank(const ParityGame& g, VertexId v, const std::vector<VertexId>& choice) {
  std::vector<int> seen(g.size(), -1);
  std::vector<VertexId> path;
  while (seen[v] < 0) {
    seen[v] = static_cast<int>(path.size());
    path.push_back(v);
    v = choice[v];
  }
  std::uint32_t m = UINT32_MAX;
  for (std::size_t i = static_cast<std::size_t>(seen[v]); i < path.size(); ++i) m = std::min(m, g.rank[path[i]]);
  return m;
}

// Odometer over the positional choices of one player's vertices.
class ChoiceOdometer {
 public:
  ChoiceOdometer(const ParityGame& g, std::uint8_t player, std::vector<VertexId>& choice) : g_(g), choice_(choice) {
    for (VertexId v = 0; v < g.size(); ++v) {
      if (g.owner[v] == player) {
        vertices_.push_back(v);
        choice_[v] = g.succ[v][0];
      }
    }
    pos_.assign(vertices_.size(), 0);
  }
  void reset() {
    std::fill(pos_.begin(), pos_.end(), 0);
    for (VertexId v : vertices_) choice_[v] = g_.succ[v][0];
  }
  bool advance() {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const VertexId v = vertices_[i];
      if (pos_[i] + 1 < g_.succ[v].size()) {
        choice_[v] = g_.succ[v][++pos_[i]];
        return true;
      }
      pos_[i] = 0;
      choice_[v] = g_.succ[v][0];
    }
    return false;
  }

 private:
  const ParityGame& g_;
  std::vector<VertexId>& choice_;
  std::vector<VertexId> vertices_;
  std::vector<std::size_t> pos_;
};

// Vertices from which `player` has a single positional strategy beating every
// positional reply, with a strategy that wins from all of them at once.
void brute_side(const ParityGame& g, std::uint8_t player, boost::dynamic_bitset<>& region,
                std::vector<std::int64_t>& strategy) {
  const std::size_t n = g.size();
  std::vector<VertexId> choice(n, 0);
  ChoiceOdometer mine(g, player, choice);
  ChoiceOdometer theirs(g, static_cast<std::uint8_t>(1 - player), choice);
  region.resize(n);
  region.reset();
  std::vector<boost::dynamic_bitset<>> wins_of;  // win set for each of my strategies, in order
  do {
    boost::dynamic_bitset<> wins(n);
    wins.set();
    theirs.reset();
    do {
      for (VertexId v = 0; v < n; ++v) {
        if (!wins.test(v)) continue;
        const bool even = cycle_min_rank(g, v, choice) % 2 == 0;
        if (even != (player == 0)) wins.reset(v);
      }
    } while (wins.any() && theirs.advance());
    region |= wins;
    wins_of.push_back(wins);
  } while (mine.advance());

  // Replay the enumeration to find one strategy covering the whole region.
  mine.reset();
  for (const auto& w : wins_of) {
    if (w == region) {
      for (VertexId v = 0; v < n; ++v) {
        if (g.owner[v] == player && region.test(v)) strategy[v] = choice[v];
      }
      return;
    }
    mine.advance();
  }
}

}  // namespace

WinningRegions solve_zielonka(const ParityGame& game) {
  require_total(game);
  return Zielonka(game).run();
}

WinningRegions solve_small_progress_measures(const ParityGame& game) {
  require_total(game);
  const std::size_t n = game.size();
  const std::uint32_t k = game.max_rank();
  const std::size_t digits = k / 2 + 1;  // digit j counts visits to rank 2j+1
  std::vector<std::uint32_t> cap(digits, 0);
  for (auto r : game.rank) {
    if (r % 2 == 1) ++cap[r / 2];
  }
  struct Measure {
    bool top = false;
    std::vector<std::uint32_t> d;
  };
  auto less = [](const Measure& a, const Measure& b) {
    if (a.top || b.top) return !a.top && b.top;
    return a.d < b.d;
  };
  auto prog = [&](const Measure& m, std::uint32_t r) {
    if (m.top) return m;
    Measure out = m;
    const std::size_t keep = r / 2 + (r % 2);  // digits for odd ranks <= r
    for (std::size_t j = keep; j < digits; ++j) out.d[j] = 0;
    if (r % 2 == 0) return out;
    for (std::size_t j = keep; j-- > 0;) {
      if (out.d[j] < cap[j]) {
        ++out.d[j];
        for (std::size_t t = j + 1; t < keep; ++t) out.d[t] = 0;
        return out;
      }
    }
    out.top = true;
    return out;
  };
  std::vector<Measure> m(n, Measure{false, std::vector<std::uint32_t>(digits, 0)});
  std::vector<std::vector<VertexId>> pred(n);
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : game.succ[v]) pred[w].push_back(v);
  }
  std::deque<VertexId> work;
  std::vector<char> queued(n, 1);
  for (VertexId v = 0; v < n; ++v) work.push_back(v);
  while (!work.empty()) {
    const VertexId v = work.front();
    work.pop_front();
    queued[v] = 0;
    if (m[v].top) continue;
    Measure best;
    bool first = true;
    for (VertexId w : game.succ[v]) {
      Measure c = prog(m[w], game.rank[v]);
      if (first || (game.owner[v] == 0 ? less(c, best) : less(best, c))) {
        best = std::move(c);
        first = false;
      }
    }
    if (less(m[v], best)) {
      m[v] = std::move(best);
      for (VertexId u : pred[v]) {
        if (!queued[u]) {
          queued[u] = 1;
          work.push_back(u);
        }
      }
    }
  }
  WinningRegions r;
  r.w0.resize(n);
  r.w1.resize(n);
  r.strategy.assign(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    if (m[v].top) {
      r.w1.set(v);
      continue;
    }
    r.w0.set(v);
    if (game.owner[v] == 0) {
      Measure best;
      bool first = true;
      for (VertexId w : game.succ[v]) {
        Measure c = prog(m[w], game.rank[v]);
        if (first || less(c, best)) {
          best = std::move(c);
          r.strategy[v] = w;
          first = false;
        }
      }
    }
  }
  return r;
}

WinningRegions solve(const ParityGame& game, ParitySolver solver) {
  return solver == ParitySolver::Zielonka ? solve_zielonka(game) : solve_small_progress_measures(game);
}

WinningRegions brute_force_solve(const ParityGame& game, std::uint64_t max_profiles) {
  require_total(game);
  std::uint64_t profiles = 1;
  for (const auto& s : game.succ) {
    if (profiles > max_profiles / s.size()) throw std::invalid_argument("brute_force_solve: game too large");
    profiles *= s.size();
  }
  WinningRegions r;
  r.strategy.assign(game.size(), -1);
  brute_side(game, 0, r.w0, r.strategy);
  brute_side(game, 1, r.w1, r.strategy);
  if ((r.w0 & r.w1).any() || (r.w0 | r.w1).count() != game.size()) {
    throw std::logic_error("brute_force_solve: regions do not partition the game");
  }
  return r;
}

bool player0_wins_play(const ParityGame& game, VertexId v, const std::vector<VertexId>& choice) {
  return cycle_min_rank(game, v, choice) % 2 == 0;
}

ParityGame parse_parity_game(std::string_view text) {
  struct Row {
    std::size_t line;
    long id, owner, rank;
    std::vector<long> succ;
    std::string note;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string note;
    if (auto h = line.find('#'); h != std::string::npos) {
      note = line.substr(h + 1);
      while (!note.empty() && note.front() == ' ') note.erase(note.begin());
      line = line.substr(0, h);
    }
    std::istringstream ls(line);
    std::string a, b, c, d;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> c)) throw ParseError("expected 'id owner rank successors'", line_no, 1);
    ls >> d;
    std::string extra;
    if (ls >> extra) throw ParseError("unexpected token '" + extra + "'", line_no, 1);
    Row row;
    row.line = line_no;
    try {
      row.id = std::stol(a);
      row.owner = std::stol(b);
      row.rank = std::stol(c);
      std::istringstream ss(d);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) row.succ.push_back(std::stol(item));
      }
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no, 1);
    }
    if (row.owner != 0 && row.owner != 1) throw ParseError("owner must be 0 or 1", line_no, 1);
    if (row.rank < 0 || row.id < 0) throw ParseError("negative id or rank", line_no, 1);
    row.note = note;
    rows.push_back(std::move(row));
  }
  ParityGame g;
  const std::size_t n = rows.size();
  std::vector<const Row*> by_id(n, nullptr);
  for (const Row& r : rows) {
    if (static_cast<std::size_t>(r.id) >= n || by_id[static_cast<std::size_t>(r.id)] != nullptr) {
      throw ParseError("vertex ids must be 0.." + std::to_string(n - 1) + " without repetition", r.line, 1);
    }
    by_id[static_cast<std::size_t>(r.id)] = &r;
  }
  for (std::size_t v = 0; v < n; ++v) {
    g.add_vertex(static_cast<std::uint8_t>(by_id[v]->owner), static_cast<std::uint32_t>(by_id[v]->rank), by_id[v]->note);
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (long w : by_id[v]->succ) {
      if (w < 0 || static_cast<std::size_t>(w) >= n) throw ParseError("edge to unknown vertex", by_id[v]->line, 1);
      g.add_edge(static_cast<VertexId>(v), static_cast<VertexId>(w));
    }
  }
  return g;
}

std::string to_text(const ParityGame& game) {
  std::ostringstream os;
  for (VertexId v = 0; v < game.size(); ++v) {
    os << v << ' ' << static_cast<int>(game.owner[v]) << ' ' << game.rank[v] << ' ';
    for (std::size_t k = 0; k < game.succ[v].size(); ++k) os << (k ? "," : "") << game.succ[v][k];
    if (!game.note[v].empty()) os << " # " << game.note[v];
    os << '\n';
  }
  return os.str();
}

}  // namespace acgs
