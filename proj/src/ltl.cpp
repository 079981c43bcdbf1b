#include "acgs/ltl.hpp"

#include "acgs/errors.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace acgs {
namespace {

thread_local DpaBuildInfo g_last_info;

constexpr std::size_t kMaxProps = 12;

// ---------------------------------------------------------------------------
// Negation normal form over a hash-consed node pool.

enum class K { T, F, Lit, And, Or, X, U, R };

struct Node {
  K k;
  int prop = -1;  // Lit
  bool pos = true;
  int a = -1;
  int b = -1;
};

class Pool {
 public:
  int make(K k, int a = -1, int b = -1, int prop = -1, bool pos = true) {
    if (k == K::And || k == K::Or) {
      const K absorbing = k == K::And ? K::F : K::T;
      const K neutral = k == K::And ? K::T : K::F;
      if (nodes_[a].k == absorbing || nodes_[b].k == absorbing) return make(absorbing);
      if (nodes_[a].k == neutral) return b;
      if (nodes_[b].k == neutral) return a;
      if (a == b) return a;
      if (a > b) std::swap(a, b);
    }
    auto key = std::make_tuple(static_cast<int>(k), a, b, prop, pos);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    nodes_.push_back(Node{k, prop, pos, a, b});
    const int id = static_cast<int>(nodes_.size()) - 1;
    index_.emplace(key, id);
    return id;
  }

  const Node& operator[](int i) const { return nodes_[i]; }
  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, int, int, bool>, int> index_;
};

int to_nnf(Pool& pool, const FormulaPtr& f, bool negated, const std::vector<std::string>& props) {
  switch (f->op) {
    case Op::True:
      return pool.make(negated ? K::F : K::T);
    case Op::False:
      return pool.make(negated ? K::T : K::F);
    case Op::Atom: {
      const int p = static_cast<int>(std::lower_bound(props.begin(), props.end(), f->atom) - props.begin());
      return pool.make(K::Lit, -1, -1, p, !negated);
    }
    case Op::Not:
      return to_nnf(pool, f->lhs, !negated, props);
    case Op::And:
    case Op::Or: {
      const bool is_and = (f->op == Op::And) != negated;
      const int a = to_nnf(pool, f->lhs, negated, props);
      const int b = to_nnf(pool, f->rhs, negated, props);
      return pool.make(is_and ? K::And : K::Or, a, b);
    }
    case Op::Next:
      return pool.make(K::X, to_nnf(pool, f->lhs, negated, props));
    case Op::Until:
    case Op::Release: {
      const bool is_until = (f->op == Op::Until) != negated;
      const int a = to_nnf(pool, f->lhs, negated, props);
      const int b = to_nnf(pool, f->rhs, negated, props);
      return pool.make(is_until ? K::U : K::R, a, b);
    }
    default:
      throw std::invalid_argument("ltl_to_dpa: not an LTL formula: " + to_string(f));
  }
}

bool is_propositional(const Pool& pool, int n) {
  const Node& x = pool[n];
  switch (x.k) {
    case K::T:
    case K::F:
    case K::Lit:
      return true;
    case K::And:
    case K::Or:
      return is_propositional(pool, x.a) && is_propositional(pool, x.b);
    default:
      return false;
  }
}

bool eval_prop(const Pool& pool, int n, std::uint32_t letter) {
  const Node& x = pool[n];
  switch (x.k) {
    case K::T:
      return true;
    case K::F:
      return false;
    case K::Lit:
      return (((letter >> x.prop) & 1u) != 0) == x.pos;
    case K::And:
      return eval_prop(pool, x.a, letter) && eval_prop(pool, x.b, letter);
    case K::Or:
      return eval_prop(pool, x.a, letter) || eval_prop(pool, x.b, letter);
    default:
      throw std::logic_error("eval_prop on temporal node");
  }
}

// ---------------------------------------------------------------------------
// Tableau expansion into covers: one-step obligations plus next-state sets.

using Obligations = std::vector<int>;  // sorted node ids

struct Cover {
  std::uint32_t pos = 0;  // literals required true
  std::uint32_t neg = 0;  // literals required false
  Obligations next;
  std::uint64_t postponed = 0;  // bit per until node that was postponed
  bool operator<(const Cover& o) const {
    return std::tie(pos, neg, next, postponed) < std::tie(o.pos, o.neg, o.next, o.postponed);
  }
};

class Expander {
 public:
  Expander(const Pool& pool, const std::map<int, int>& until_bit) : pool_(pool), until_bit_(until_bit) {}

  std::vector<Cover> expand(const Obligations& start) {
    out_.clear();
    Partial p;
    p.stack = start;
    run(std::move(p));
    std::vector<Cover> covers(out_.begin(), out_.end());
    return covers;
  }

 private:
  struct Partial {
    Cover c;
    std::vector<int> stack;
    std::vector<int> done;
  };

  void run(Partial p) {
    while (!p.stack.empty()) {
      const int f = p.stack.back();
      p.stack.pop_back();
      if (std::find(p.done.begin(), p.done.end(), f) != p.done.end()) continue;
      p.done.push_back(f);
      const Node& x = pool_[f];
      switch (x.k) {
        case K::T:
          break;
        case K::F:
          return;
        case K::Lit: {
          const std::uint32_t bit = 1u << x.prop;
          if (x.pos) {
            if (p.c.neg & bit) return;
            p.c.pos |= bit;
          } else {
            if (p.c.pos & bit) return;
            p.c.neg |= bit;
          }
          break;
        }
        case K::And:
          p.stack.push_back(x.a);
          p.stack.push_back(x.b);
          break;
        case K::Or: {
          Partial left = p;
          left.stack.push_back(x.a);
          run(std::move(left));
          p.stack.push_back(x.b);
          break;
        }
        case K::X:
          p.c.next.push_back(x.a);
          break;
        case K::U: {
          Partial fulfilled = p;
          fulfilled.stack.push_back(x.b);
          run(std::move(fulfilled));
          p.stack.push_back(x.a);
          p.c.next.push_back(f);
          p.c.postponed |= std::uint64_t{1} << until_bit_.at(f);
          break;
        }
        case K::R: {
          Partial both = p;
          both.stack.push_back(x.a);
          both.stack.push_back(x.b);
          run(std::move(both));
          p.stack.push_back(x.b);
          p.c.next.push_back(f);
          break;
        }
      }
    }
    std::sort(p.c.next.begin(), p.c.next.end());
    p.c.next.erase(std::unique(p.c.next.begin(), p.c.next.end()), p.c.next.end());
    out_.insert(p.c);
  }

  const Pool& pool_;
  const std::map<int, int>& until_bit_;
  std::set<Cover> out_;
};

// ---------------------------------------------------------------------------
// Degeneralized transition-based Buchi automaton.

struct Tba {
  std::uint32_t num_letters = 0;
  std::size_t num_states = 0;
  std::uint32_t initial = 0;
  // all[q * L + l] and acc[q * L + l]: successor sets, the second restricted to accepting edges
  std::vector<boost::dynamic_bitset<>> all;
  std::vector<boost::dynamic_bitset<>> acc;
};

Tba build_tba(const Pool& pool, int root, std::uint32_t num_letters) {
  std::map<int, int> until_bit;
  for (int i = 0; i < pool.size(); ++i) {
    if (pool[i].k == K::U) {
      const int bit = static_cast<int>(until_bit.size());
      if (bit >= 64) throw std::invalid_argument("ltl_to_dpa: too many until subformulae");
      until_bit.emplace(i, bit);
    }
  }
  const int num_untils = static_cast<int>(until_bit.size());
  // Level l waits for until number l; with no untils every edge is accepting.
  const int levels = std::max(1, num_untils);

  Expander expander(pool, until_bit);
  std::map<Obligations, int> set_id;
  std::vector<Obligations> sets;
  std::vector<std::vector<Cover>> covers;
  auto intern_set = [&](const Obligations& o) {
    auto it = set_id.find(o);
    if (it != set_id.end()) return it->second;
    const int id = static_cast<int>(sets.size());
    set_id.emplace(o, id);
    sets.push_back(o);
    covers.push_back(expander.expand(o));
    return id;
  };

  std::map<std::pair<int, int>, std::uint32_t> state_id;
  std::vector<std::pair<int, int>> states;
  auto intern_state = [&](int set, int level) {
    auto key = std::make_pair(set, level);
    auto it = state_id.find(key);
    if (it != state_id.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(states.size());
    state_id.emplace(key, id);
    states.push_back(key);
    return id;
  };

  struct Edge {
    std::uint32_t letter_pos, letter_neg;
    std::uint32_t target;
    bool accepting;
  };
  std::vector<std::vector<Edge>> edges;

  Tba tba;
  tba.num_letters = num_letters;
  tba.initial = intern_state(intern_set(Obligations{root}), 0);
  for (std::size_t q = 0; q < states.size(); ++q) {
    const auto [set, level] = states[q];
    std::vector<Edge> out;
    for (const Cover& c : covers[static_cast<std::size_t>(set)]) {
      int lvl = level;
      bool accepting = false;
      if (num_untils == 0) {
        accepting = true;
      } else {
        // Advance past every until that is satisfied on this edge, wrapping once.
        int steps = 0;
        while (steps < num_untils && ((c.postponed >> lvl) & 1u) == 0) {
          ++lvl;
          ++steps;
          if (lvl == levels) {
            accepting = true;
            lvl = 0;
            break;
          }
        }
      }
      const int next_set = intern_set(c.next);
      const std::uint32_t target = intern_state(next_set, lvl);
      out.push_back(Edge{c.pos, c.neg, target, accepting});
    }
    edges.push_back(std::move(out));
  }

  tba.num_states = states.size();
  const std::size_t n = tba.num_states;
  tba.all.assign(n * num_letters, boost::dynamic_bitset<>(n));
  tba.acc.assign(n * num_letters, boost::dynamic_bitset<>(n));
  for (std::size_t q = 0; q < n; ++q) {
    for (const Edge& e : edges[q]) {
      for (std::uint32_t l = 0; l < num_letters; ++l) {
        if ((l & e.letter_pos) != e.letter_pos || (l & e.letter_neg) != 0) continue;
        tba.all[q * num_letters + l].set(e.target);
        if (e.accepting) tba.acc[q * num_letters + l].set(e.target);
      }
    }
  }
  return tba;
}

// ---------------------------------------------------------------------------
// Safra trees. Nodes are stored in order of age, so the position in the vector
// is the node name and older siblings come first.

struct SafraTree {
  std::vector<int> parent;  // parent[0] == -1 for the root
  std::vector<boost::dynamic_bitset<>> label;

  std::string key() const {
    std::string k;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      k += std::to_string(parent[i]);
      k += ':';
      std::string bits;
      boost::to_string(label[i], bits);
      k += bits;
      k += ';';
    }
    return k;
  }
};

struct StepResult {
  SafraTree tree;
  std::uint32_t priority;
};

boost::dynamic_bitset<> image(const Tba& tba, const std::vector<boost::dynamic_bitset<>>& rel,
                              const boost::dynamic_bitset<>& from, std::uint32_t letter) {
  boost::dynamic_bitset<> out(tba.num_states);
  for (auto q = from.find_first(); q != boost::dynamic_bitset<>::npos; q = from.find_next(q)) {
    out |= rel[q * tba.num_letters + letter];
  }
  return out;
}

StepResult safra_step(const Tba& tba, const SafraTree& t, std::uint32_t letter, std::uint32_t neutral) {
  const std::size_t n0 = t.parent.size();
  std::vector<int> parent = t.parent;
  std::vector<boost::dynamic_bitset<>> label(n0);
  std::vector<bool> marked(n0, false);

  // Move every label and spawn a youngest child for runs through an accepting edge.
  for (std::size_t v = 0; v < n0; ++v) label[v] = image(tba, tba.all, t.label[v], letter);
  for (std::size_t v = 0; v < n0; ++v) {
    auto spawned = image(tba, tba.acc, t.label[v], letter);
    if (spawned.any()) {
      parent.push_back(static_cast<int>(v));
      label.push_back(std::move(spawned));
      marked.push_back(false);
    }
  }
  const std::size_t n1 = parent.size();

  // Horizontal merge: a state stays only in the oldest node that has it among
  // those that are not ancestors of each other. Processing nodes by age and
  // removing a state from every younger non-descendant achieves exactly that.
  std::vector<std::vector<int>> ancestors(n1);
  for (std::size_t v = 0; v < n1; ++v) {
    for (int p = parent[v]; p != -1; p = parent[static_cast<std::size_t>(p)]) ancestors[v].push_back(p);
  }
  auto is_ancestor = [&](std::size_t a, std::size_t d) {
    return std::find(ancestors[d].begin(), ancestors[d].end(), static_cast<int>(a)) != ancestors[d].end();
  };
  // Order: depth first by seniority, so that an older sibling subtree wins over
  // a younger sibling subtree.
  std::vector<std::vector<std::size_t>> children(n1);
  for (std::size_t v = 1; v < n1; ++v) children[static_cast<std::size_t>(parent[v])].push_back(v);
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t v = order[i];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const std::size_t w = order[j];
      if (!is_ancestor(v, w)) label[w] -= label[v];
    }
  }

  // Remove empty nodes along with their subtrees.
  std::vector<bool> alive(n1, true);
  std::size_t min_removed = n1 + 1;
  for (std::size_t v : order) {
    const bool parent_dead = parent[v] != -1 && !alive[static_cast<std::size_t>(parent[v])];
    if (parent_dead || label[v].none()) {
      alive[v] = false;
      if (v < n0) min_removed = std::min(min_removed, v);
    }
  }

  // Vertical merge: a node whose label is covered by its children is marked and
  // loses its descendants.
  std::size_t min_marked = n1 + 1;
  for (std::size_t v : order) {
    if (!alive[v]) continue;
    boost::dynamic_bitset<> uni(tba.num_states);
    bool has_child = false;
    for (std::size_t c : children[v]) {
      if (alive[c]) {
        uni |= label[c];
        has_child = true;
      }
    }
    if (has_child && uni == label[v]) {
      marked[v] = true;
      min_marked = std::min(min_marked, v);
      std::vector<std::size_t> desc(children[v].begin(), children[v].end());
      while (!desc.empty()) {
        const std::size_t d = desc.back();
        desc.pop_back();
        if (alive[d] && d < n0) min_removed = std::min(min_removed, d);
        alive[d] = false;
        desc.insert(desc.end(), children[d].begin(), children[d].end());
      }
    }
  }

  // Priority from the oldest event, then renumber the survivors compactly.
  std::uint32_t priority = neutral;
  if (min_removed <= n1) priority = std::min<std::uint32_t>(priority, 2 * static_cast<std::uint32_t>(min_removed + 1) - 1);
  if (min_marked <= n1) priority = std::min<std::uint32_t>(priority, 2 * static_cast<std::uint32_t>(min_marked + 1));

  StepResult r;
  std::vector<int> renumber(n1, -1);
  for (std::size_t v = 0; v < n1; ++v) {
    if (!alive[v]) continue;
    renumber[v] = static_cast<int>(r.tree.parent.size());
    r.tree.parent.push_back(parent[v] == -1 ? -1 : renumber[static_cast<std::size_t>(parent[v])]);
    r.tree.label.push_back(std::move(label[v]));
  }
  r.priority = priority;
  return r;
}

// ---------------------------------------------------------------------------
// Post-processing on the deterministic automaton.

void compress_ranks(Dpa& d) {
  std::vector<std::uint32_t> used(d.rank.begin(), d.rank.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<std::uint32_t, std::uint32_t> remap;
  std::uint32_t value = used.empty() ? 0 : used.front() % 2;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (i > 0 && used[i] % 2 != used[i - 1] % 2) ++value;
    remap[used[i]] = value;
  }
  d.max_rank = 0;
  for (auto& r : d.rank) {
    r = remap[r];
    d.max_rank = std::max(d.max_rank, r);
  }
}

Dpa minimize(const Dpa& d) {
  const std::uint32_t n = d.num_states();
  const std::uint32_t letters = d.num_letters();
  std::vector<std::uint32_t> cls(n);
  {
    std::map<std::uint32_t, std::uint32_t> by_rank;
    for (std::uint32_t p = 0; p < n; ++p) {
      auto it = by_rank.emplace(d.rank[p], static_cast<std::uint32_t>(by_rank.size())).first;
      cls[p] = it->second;
    }
  }
  std::size_t num_classes = 0;
  for (;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> sig;
    std::vector<std::uint32_t> next(n);
    for (std::uint32_t p = 0; p < n; ++p) {
      std::vector<std::uint32_t> key;
      key.reserve(letters + 1);
      key.push_back(cls[p]);
      for (std::uint32_t l = 0; l < letters; ++l) key.push_back(cls[d.next(p, l)]);
      auto it = sig.emplace(std::move(key), static_cast<std::uint32_t>(sig.size())).first;
      next[p] = it->second;
    }
    cls.swap(next);
    if (sig.size() == num_classes) break;
    num_classes = sig.size();
  }

  // Renumber classes in order of discovery from the initial state.
  std::vector<std::int64_t> id(num_classes, -1);
  std::vector<std::uint32_t> rep;
  std::vector<std::uint32_t> queue{d.initial};
  id[cls[d.initial]] = 0;
  rep.push_back(d.initial);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const std::uint32_t p = queue[i];
    for (std::uint32_t l = 0; l < letters; ++l) {
      const std::uint32_t q = d.next(p, l);
      if (id[cls[q]] == -1) {
        id[cls[q]] = static_cast<std::int64_t>(rep.size());
        rep.push_back(q);
        queue.push_back(q);
      }
    }
  }
  Dpa m;
  m.props = d.props;
  m.initial = 0;
  m.rank.resize(rep.size());
  m.delta.resize(rep.size() * letters);
  for (std::size_t c = 0; c < rep.size(); ++c) {
    m.rank[c] = d.rank[rep[c]];
    for (std::uint32_t l = 0; l < letters; ++l) {
      m.delta[c * letters + l] = static_cast<std::uint32_t>(id[cls[d.next(rep[c], l)]]);
    }
  }
  compress_ranks(m);
  return m;
}

// A state that no edge enters is visited once, so its rank never decides
// acceptance. Try each rank in use for it and keep the smallest quotient.
Dpa minimize_free_initial(Dpa d) {
  bool entered = false;
  for (auto t : d.delta) entered = entered || t == d.initial;
  if (entered) return minimize(d);
  std::set<std::uint32_t> used(d.rank.begin(), d.rank.end());
  Dpa best;
  bool have = false;
  for (std::uint32_t r : used) {
    d.rank[d.initial] = r;
    Dpa m = minimize(d);
    if (!have || m.num_states() < best.num_states()) {
      best = std::move(m);
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Direct automata for common small shapes.

Dpa shortcut_propositional(const Pool& pool, int n, const std::vector<std::string>& props) {
  // 0: initial, 1: accept sink, 2: reject sink
  Dpa d;
  d.props = props;
  const std::uint32_t L = d.num_letters();
  d.rank = {1, 0, 1};
  d.delta.assign(3 * L, 0);
  for (std::uint32_t l = 0; l < L; ++l) {
    d.delta[0 * L + l] = eval_prop(pool, n, l) ? 1 : 2;
    d.delta[1 * L + l] = 1;
    d.delta[2 * L + l] = 2;
  }
  return d;
}

Dpa shortcut_next(const Pool& pool, int a, const std::vector<std::string>& props) {
  // 0: initial, 1: check a, 2: accept sink, 3: reject sink
  Dpa d;
  d.props = props;
  const std::uint32_t L = d.num_letters();
  d.rank = {1, 1, 0, 1};
  d.delta.assign(4 * L, 0);
  for (std::uint32_t l = 0; l < L; ++l) {
    d.delta[0 * L + l] = 1;
    d.delta[1 * L + l] = eval_prop(pool, a, l) ? 2 : 3;
    d.delta[2 * L + l] = 2;
    d.delta[3 * L + l] = 3;
  }
  return d;
}

Dpa shortcut_until_release(const Pool& pool, bool until, int a, int b, const std::vector<std::string>& props) {
  // 0: waiting, 1: accept sink, 2: reject sink.
  // Until waits with an odd rank, release waits with an even rank.
  Dpa d;
  d.props = props;
  const std::uint32_t L = d.num_letters();
  d.rank = {until ? 1u : 0u, 0, 1};
  d.delta.assign(3 * L, 0);
  for (std::uint32_t l = 0; l < L; ++l) {
    const bool va = eval_prop(pool, a, l);
    const bool vb = eval_prop(pool, b, l);
    std::uint32_t t;
    if (until) {
      t = vb ? 1 : (va ? 0 : 2);
    } else {
      t = !vb ? 2 : (va ? 1 : 0);
    }
    d.delta[0 * L + l] = t;
    d.delta[1 * L + l] = 1;
    d.delta[2 * L + l] = 2;
  }
  return d;
}

// The automata read the first letter from the initial state and the rank of
// a state is the rank of entering it, so shortcut outputs share the semantics
// of the general construction.

}  // namespace

Dpa ltl_to_dpa(const FormulaPtr& phi, DpaConstruction how) {
  if (!is_ltl(phi)) throw std::invalid_argument("ltl_to_dpa: not an LTL formula: " + to_string(phi));
  const std::vector<std::string> props = atoms_of(phi);
  if (props.size() > kMaxProps) {
    throw std::invalid_argument("ltl_to_dpa: too many propositions (" + std::to_string(props.size()) + ")");
  }
  Pool pool;
  const int root = to_nnf(pool, phi, false, props);
  const std::uint32_t letters = 1u << props.size();
  g_last_info = DpaBuildInfo{};

  if (how == DpaConstruction::Auto) {
    const Node& r = pool[root];
    Dpa d;
    bool done = false;
    if (is_propositional(pool, root)) {
      d = shortcut_propositional(pool, root, props);
      done = true;
    } else if (r.k == K::X && is_propositional(pool, r.a)) {
      d = shortcut_next(pool, r.a, props);
      done = true;
    } else if ((r.k == K::U || r.k == K::R) && is_propositional(pool, r.a) && is_propositional(pool, r.b)) {
      d = shortcut_until_release(pool, r.k == K::U, r.a, r.b, props);
      done = true;
    }
    if (done) {
      g_last_info.shortcut = true;
      return minimize_free_initial(std::move(d));
    }
  }

  const Tba tba = build_tba(pool, root, letters);
  g_last_info.buchi_states = tba.num_states;
  const std::uint32_t neutral = 2 * static_cast<std::uint32_t>(2 * tba.num_states + 2) + 1;

  // Deterministic automaton with state = (tree, priority of the edge into it).
  std::unordered_map<std::string, std::uint32_t> tree_id;
  std::vector<SafraTree> trees;
  auto intern_tree = [&](SafraTree t) {
    std::string k = t.key();
    auto it = tree_id.find(k);
    if (it != tree_id.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(trees.size());
    tree_id.emplace(std::move(k), id);
    trees.push_back(std::move(t));
    return id;
  };
  SafraTree init;
  init.parent = {-1};
  init.label = {boost::dynamic_bitset<>(tba.num_states)};
  init.label[0].set(tba.initial);
  const std::uint32_t init_tree = intern_tree(std::move(init));

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> tree_edges;  // per tree, per letter
  for (std::size_t t = 0; t < trees.size(); ++t) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> row(letters);
    for (std::uint32_t l = 0; l < letters; ++l) {
      StepResult res;
      if (trees[t].parent.empty()) {
        res.priority = 1;
      } else {
        res = safra_step(tba, trees[t], l, neutral);
      }
      const std::uint32_t target = intern_tree(std::move(res.tree));
      row[l] = {target, res.priority};
    }
    tree_edges.push_back(std::move(row));
  }
  g_last_info.safra_states = trees.size();

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> sid;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> states;
  auto intern_state = [&](std::uint32_t tree, std::uint32_t prio) {
    auto key = std::make_pair(tree, prio);
    auto it = sid.find(key);
    if (it != sid.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(states.size());
    sid.emplace(key, id);
    states.push_back(key);
    return id;
  };
  Dpa d;
  d.props = props;
  d.initial = intern_state(init_tree, neutral);
  for (std::size_t p = 0; p < states.size(); ++p) {
    const std::uint32_t tree = states[p].first;
    for (std::uint32_t l = 0; l < letters; ++l) {
      const auto [t2, prio] = tree_edges[tree][l];
      const std::uint32_t q = intern_state(t2, prio);
      d.delta.resize(states.size() * letters);
      d.delta[p * letters + l] = q;
    }
  }
  d.delta.resize(states.size() * letters);
  d.rank.resize(states.size());
  for (std::size_t p = 0; p < states.size(); ++p) d.rank[p] = states[p].second;
  return minimize_free_initial(std::move(d));
}

std::uint32_t letter_of(const Dpa& dpa, const std::set<std::string>& true_props) {
  std::uint32_t l = 0;
  for (std::size_t k = 0; k < dpa.props.size(); ++k) {
    if (true_props.count(dpa.props[k]) != 0) l |= 1u << k;
  }
  return l;
}

bool dpa_accepts_lasso(const Dpa& dpa, const std::vector<std::uint32_t>& stem, const std::vector<std::uint32_t>& loop) {
  if (loop.empty()) throw std::invalid_argument("dpa_accepts_lasso: empty loop");
  std::uint32_t p = dpa.initial;
  for (std::uint32_t l : stem) p = dpa.next(p, l);
  // Iterate the loop until the state at the loop start repeats. Ranks seen
  // from the first repetition onwards are the ones seen infinitely often.
  std::map<std::uint32_t, std::size_t> seen;
  std::vector<std::uint32_t> starts;
  while (seen.find(p) == seen.end()) {
    seen.emplace(p, starts.size());
    starts.push_back(p);
    for (std::uint32_t l : loop) p = dpa.next(p, l);
  }
  std::uint32_t q = p;
  std::uint32_t least = UINT32_MAX;
  const std::size_t cycle = starts.size() - seen[p];
  for (std::size_t i = 0; i < cycle; ++i) {
    for (std::uint32_t l : loop) {
      q = dpa.next(q, l);
      least = std::min(least, dpa.rank[q]);
    }
  }
  return least % 2 == 0;
}

std::string dpa_to_text(const Dpa& dpa) {
  std::ostringstream os;
  os << "dpa states=" << dpa.num_states() << " initial=" << dpa.initial << " max_rank=" << dpa.max_rank << " props=";
  for (std::size_t k = 0; k < dpa.props.size(); ++k) os << (k ? "," : "") << dpa.props[k];
  os << '\n';
  for (std::uint32_t p = 0; p < dpa.num_states(); ++p) {
    os << p << " rank " << dpa.rank[p] << ':';
    for (std::uint32_t l = 0; l < dpa.num_letters(); ++l) os << ' ' << l << "->" << dpa.next(p, l);
    os << '\n';
  }
  return os.str();
}

DpaBuildInfo last_dpa_build_info() { return g_last_info; }

}  // namespace acgs
