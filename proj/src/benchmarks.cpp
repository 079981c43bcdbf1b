#include "acgs/benchmarks.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace acgs {
namespace {

using Key = std::uint64_t;

// Explicit description of a system over integer-coded global states. Either
// every key below `product` is a state (in key order), or the states are the
// keys reachable from `initial`, numbered breadth first.
struct Blueprint {
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> actions;
  AbilityMap abilities;
  std::vector<Key> initial;
  Key product = 0;
  std::vector<std::string> props;
  std::function<std::string(Key)> name;
  std::function<std::vector<ActionId>(Key, AgentId)> protocol;
  std::function<Key(Key, const std::vector<ActionId>&)> step;
  std::function<bool(Key, std::size_t)> holds;  // (state, index into props)
  // Observation key of an imperfect-information agent; agents of the other
  // types always get the identity.
  std::function<Key(Key, AgentId)> observe;
};

void for_each_joint_action(const std::vector<std::vector<ActionId>>& prot, const std::function<void(const std::vector<ActionId>&)>& f) {
  std::vector<std::size_t> pos(prot.size(), 0);
  std::vector<ActionId> joint(prot.size());
  while (true) {
    for (std::size_t i = 0; i < prot.size(); ++i) joint[i] = prot[i][pos[i]];
    f(joint);
    std::size_t i = 0;
    for (; i < prot.size(); ++i) {
      if (++pos[i] < prot[i].size()) break;
      pos[i] = 0;
    }
    if (i == prot.size()) return;
  }
}

Stcgs assemble(const Blueprint& bp) {
  const std::size_t na = bp.agents.size();
  std::vector<Key> keys;
  std::unordered_map<Key, StateId> index;
  if (bp.product > 0) {
    keys.reserve(bp.product);
    for (Key k = 0; k < bp.product; ++k) keys.push_back(k);
  } else {
    std::deque<Key> queue;
    auto visit = [&](Key k) {
      if (index.emplace(k, static_cast<StateId>(keys.size())).second) {
        keys.push_back(k);
        queue.push_back(k);
      }
    };
    for (Key k : bp.initial) visit(k);
    while (!queue.empty()) {
      const Key k = queue.front();
      queue.pop_front();
      std::vector<std::vector<ActionId>> prot(na);
      for (AgentId i = 0; i < na; ++i) prot[i] = bp.protocol(k, i);
      for_each_joint_action(prot, [&](const std::vector<ActionId>& joint) { visit(bp.step(k, joint)); });
    }
  }
  auto id_of = [&](Key k) -> StateId {
    if (bp.product > 0) return static_cast<StateId>(k);
    return index.at(k);
  };

  auto g = std::make_shared<Cgs>();
  for (std::size_t i = 0; i < na; ++i) g->add_agent(bp.agents[i], bp.actions[i]);
  for (Key k : keys) g->add_state(bp.name(k));
  const std::size_t n = keys.size();
  std::vector<StateId> init;
  for (Key k : bp.initial) init.push_back(id_of(k));
  g->set_initial(init);

  for (AgentId i = 0; i < na; ++i) {
    if (perfect_information(bp.abilities[i])) continue;
    std::unordered_map<Key, std::size_t> block_of;
    std::vector<std::vector<StateId>> blocks;
    for (StateId s = 0; s < n; ++s) {
      const Key o = bp.observe(keys[s], i);
      auto [it, fresh] = block_of.emplace(o, blocks.size());
      if (fresh) blocks.emplace_back();
      blocks[it->second].push_back(s);
    }
    g->set_observation(i, Partition::from_blocks(n, std::move(blocks)));
  }
  for (AgentId i = 0; i < na; ++i) {
    for (StateId s = 0; s < n; ++s) g->set_protocol(i, s, bp.protocol(keys[s], i));
  }
  for (std::size_t p = 0; p < bp.props.size(); ++p) {
    StateSet set(n);
    for (StateId s = 0; s < n; ++s) {
      if (bp.holds(keys[s], p)) set.set(s);
    }
    g->set_label(bp.props[p], std::move(set));
  }
  g->finalize_protocols();
  std::vector<ActionId> joint;
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < g->joint_count(s); ++j) {
      g->decode_joint(s, j, joint);
      g->set_transition_at(s, j, id_of(bp.step(keys[s], joint)));
    }
  }
  return Stcgs{g, bp.abilities};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Benchmark gen_figure1(StrategyType t1, StrategyType t2) {
  Blueprint bp;
  bp.agents = {"1", "2"};
  bp.actions = {{"a"}, {"b1", "b2"}};
  bp.abilities = {t1, t2};
  bp.initial = {0};
  bp.product = 4;
  bp.props = {"q"};
  bp.name = [](Key k) { return "s" + std::to_string(k); };
  bp.protocol = [](Key, AgentId i) { return i == 0 ? std::vector<ActionId>{0} : std::vector<ActionId>{0, 1}; };
  bp.step = [](Key k, const std::vector<ActionId>& joint) -> Key {
    const bool b1 = joint[1] == 0;
    switch (k) {
      case 0: return b1 ? 1 : 2;
      case 1: return b1 ? 1 : 3;
      case 2: return b1 ? 3 : 2;
      default: return 0;
    }
  };
  bp.holds = [](Key k, std::size_t) { return k != 3; };
  // Agent 2 cannot distinguish s0, s1 and s2; agent 1 sees everything.
  bp.observe = [](Key k, AgentId i) -> Key { return i == 1 && k != 3 ? 0 : k + 1; };
  return Benchmark{assemble(bp), {{"fig1", "<<1>> G q"}}};
}

// ---------------------------------------------------------------------------
// Dining cryptographers. A global state is (coins, payer, phase, parity).
// Each round the environment picks who pays (a cryptographer or nobody), then
// every cryptographer announces whether its coin and its left neighbour's coin
// agree. Only the payer may announce the opposite, which flips the parity of
// the announcements. The environment then tosses fresh coins and the next
// round starts with the previous parity still visible.

Benchmark gen_dining(int n) {
  if (n < 3) throw std::invalid_argument("the dining cryptographers need at least 3 cryptographers");
  if (n > 16) throw std::invalid_argument("at most 16 cryptographers are supported");
  enum Phase : Key { Fresh, Bill, Announced, Settled, Waiting };
  const Key nsa = static_cast<Key>(n);  // nobody at the table paid
  const Key none = nsa + 1;             // payer not chosen yet
  const Key payers = static_cast<Key>(n) + 2;
  const Key tosses = Key{1} << n;
  const AgentId env = static_cast<AgentId>(n);

  struct S {
    Key coins, payer, phase, par;
  };
  auto encode = [=](const S& s) { return ((s.coins * payers + s.payer) * 5 + s.phase) * 2 + s.par; };
  auto decode = [=](Key k) {
    S s;
    s.par = k % 2;
    k /= 2;
    s.phase = k % 5;
    k /= 5;
    s.payer = k % payers;
    s.coins = k / payers;
    return s;
  };
  auto coin = [](Key coins, int i) { return (coins >> i) & 1U; };
  auto left = [n](int i) { return (i + n - 1) % n; };
  auto truthful_diff = [=](Key coins, int i) { return coin(coins, i) != coin(coins, left(i)); };

  // Cryptographer actions: nop, same, diff. Environment: nop, pay_c1..pay_cn,
  // pay_nsa, then one toss action per coin vector.
  Blueprint bp;
  for (int i = 0; i < n; ++i) {
    bp.agents.push_back("c" + std::to_string(i + 1));
    bp.actions.push_back({"nop", "same", "diff"});
    bp.abilities.push_back(i < 2 ? StrategyType::ir : StrategyType::IR);
  }
  bp.agents.push_back("env");
  {
    std::vector<std::string> acts = {"nop"};
    for (int i = 0; i < n; ++i) acts.push_back("pay_c" + std::to_string(i + 1));
    acts.push_back("pay_nsa");
    for (Key t = 0; t < tosses; ++t) {
      std::string bits;
      for (int i = 0; i < n; ++i) bits += coin(t, i) ? '1' : '0';
      acts.push_back("toss_" + bits);
    }
    bp.actions.push_back(acts);
  }
  bp.abilities.push_back(StrategyType::IR);
  const ActionId first_pay = 1;
  const ActionId first_toss = static_cast<ActionId>(n) + 2;

  for (Key c = 0; c < tosses; ++c) bp.initial.push_back(encode({c, none, Fresh, 0}));

  bp.name = [=](Key k) {
    static const char* names[] = {"fresh", "bill", "announced", "settled", "waiting"};
    const S s = decode(k);
    std::string out = names[s.phase];
    out += "_";
    for (int i = 0; i < n; ++i) out += coin(s.coins, i) ? '1' : '0';
    if (s.payer < static_cast<Key>(n)) out += "_c" + std::to_string(s.payer + 1);
    if (s.payer == nsa) out += "_nsa";
    out += "_p" + std::to_string(s.par);
    return out;
  };
  bp.protocol = [=](Key k, AgentId i) -> std::vector<ActionId> {
    const S s = decode(k);
    if (i == env) {
      if (s.phase == Fresh || s.phase == Waiting) {
        std::vector<ActionId> out;
        for (ActionId a = first_pay; a < first_toss; ++a) out.push_back(a);
        return out;
      }
      if (s.phase == Settled) {
        std::vector<ActionId> out;
        for (Key t = 0; t < tosses; ++t) out.push_back(first_toss + static_cast<ActionId>(t));
        return out;
      }
      return {0};
    }
    if (s.phase != Bill) return {0};
    if (s.payer == i) return {1, 2};
    return {truthful_diff(s.coins, static_cast<int>(i)) ? ActionId{2} : ActionId{1}};
  };
  bp.step = [=](Key k, const std::vector<ActionId>& joint) {
    S s = decode(k);
    const ActionId e = joint[env];
    switch (s.phase) {
      case Fresh:
      case Waiting:
        s.payer = e - first_pay;
        s.phase = Bill;
        break;
      case Bill: {
        const bool lied = s.payer < static_cast<Key>(n) &&
                          (joint[s.payer] == 2) != truthful_diff(s.coins, static_cast<int>(s.payer));
        s.par = lied ? 1 : 0;
        s.phase = Announced;
        break;
      }
      case Announced:
        s.payer = none;
        s.phase = Settled;
        break;
      default:
        s.coins = e - first_toss;
        s.phase = Waiting;
        break;
    }
    return encode(s);
  };
  for (int i = 0; i < n; ++i) bp.props.push_back("c" + std::to_string(i + 1) + "paid");
  bp.props.push_back("odd");
  bp.holds = [=](Key k, std::size_t p) {
    const S s = decode(k);
    if (p == static_cast<std::size_t>(n)) return s.phase == Announced && s.par == 1;
    return (s.phase == Bill || s.phase == Announced) && s.payer == p;
  };
  // Own coin, left coin, phase, parity, own payer status and, once announced,
  // the whole announcement vector.
  bp.observe = [=](Key k, AgentId ag) -> Key {
    const S s = decode(k);
    const int i = static_cast<int>(ag);
    Key announcements = 0;
    if (s.phase == Announced) {
      for (int j = 0; j < n; ++j) {
        const bool flip = s.payer == static_cast<Key>(j) && s.par == 1;
        if ((coin(s.coins, j) != coin(s.coins, left(j))) != flip) announcements |= Key{1} << j;
      }
    }
    Key o = coin(s.coins, i);
    o = o * 2 + coin(s.coins, left(i));
    o = o * 5 + s.phase;
    o = o * 2 + s.par;
    o = o * 2 + (s.payer == static_cast<Key>(i) ? 1 : 0);
    return (o << n) | announcements;
  };

  Benchmark b{assemble(bp), {}};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::string> others_paid;
    std::vector<std::string> not_known;
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      others_paid.push_back("c" + std::to_string(j) + "paid");
      not_known.push_back("!K c" + std::to_string(i) + " c" + std::to_string(j) + "paid");
    }
    const std::string me = "c" + std::to_string(i);
    b.formulas.emplace_back("psi" + std::to_string(i), "<<>> G ((odd & !" + me + "paid) -> (K " + me + " (" +
                                                          join(others_paid, " | ") + ") & " + join(not_known, " & ") +
                                                          "))");
  }
  return b;
}

// ---------------------------------------------------------------------------
// Castle game. Worker wi serves castle i. Every round each worker idles,
// defends its own castle or attacks another castle that still stands; it may
// not repeat a defend or an attack on the same castle in two consecutive
// rounds, and the workers of a defeated castle can only idle. A castle loses
// (attackers - defenders) HP when that difference is positive. Each worker
// remembers its previous action; the environment only counts rounds modulo 4n.

Benchmark gen_castle(int workers, int max_hp, const AbilityMap& types, CastleSpace space) {
  if (workers < 2) throw std::invalid_argument("the castle game needs at least 2 workers");
  if (max_hp < 1 || max_hp > 9) throw std::invalid_argument("max_hp must lie in 1..9");
  const int n = workers;
  const std::size_t agents = static_cast<std::size_t>(n) + 1;
  if (!types.empty() && types.size() != agents) {
    throw std::invalid_argument("the castle game has " + std::to_string(agents) + " agents (e, w1..w" +
                                std::to_string(n) + ")");
  }
  const Key hp_radix = static_cast<Key>(max_hp) + 1;
  const Key mem_radix = static_cast<Key>(n) + 2;  // fresh, idle, defend, one attack per other castle
  const Key digit = hp_radix * mem_radix;
  const Key rounds = 4 * static_cast<Key>(n);
  enum : Key { MemFresh = 0, MemIdle = 1, MemDefend = 2 };

  auto hp = [=](Key k, int i) {
    Key x = k / rounds;
    for (int j = 0; j < i; ++j) x /= digit;
    return (x % digit) / mem_radix;
  };
  auto mem = [=](Key k, int i) {
    Key x = k / rounds;
    for (int j = 0; j < i; ++j) x /= digit;
    return x % mem_radix;
  };
  // Castle attacked by attack slot `slot` of worker i.
  auto target = [](int i, Key slot) { return static_cast<int>(slot) < i ? static_cast<int>(slot) : static_cast<int>(slot) + 1; };

  Blueprint bp;
  bp.agents.push_back("e");
  bp.actions.push_back({"tick"});
  for (int i = 0; i < n; ++i) {
    bp.agents.push_back("w" + std::to_string(i + 1));
    std::vector<std::string> acts = {"idle", "defend"};
    for (int j = 0; j < n; ++j) {
      if (j != i) acts.push_back("attack" + std::to_string(j + 1));
    }
    bp.actions.push_back(acts);
  }
  bp.abilities = types.empty() ? AbilityMap(agents, StrategyType::IR) : types;
  Key total = rounds;
  for (int i = 0; i < n; ++i) total *= digit;
  if (space == CastleSpace::Full) bp.product = total;
  {
    Key init = 0;
    for (int i = n - 1; i >= 0; --i) init = init * digit + static_cast<Key>(max_hp) * mem_radix + MemFresh;
    bp.initial = {init * rounds};
  }
  bp.name = [=](Key k) {
    std::string h = "h", m = "_m";
    for (int i = 0; i < n; ++i) {
      h += static_cast<char>('0' + hp(k, i));
      m += static_cast<char>('0' + mem(k, i));
    }
    return h + m + "_r" + std::to_string(k % rounds);
  };
  bp.protocol = [=](Key k, AgentId a) -> std::vector<ActionId> {
    if (a == 0) return {0};
    const int i = static_cast<int>(a) - 1;
    if (hp(k, i) == 0) return {0};
    std::vector<ActionId> out = {0};
    const Key last = mem(k, i);
    if (last != MemDefend) out.push_back(1);
    for (Key slot = 0; slot + 1 < static_cast<Key>(n); ++slot) {
      if (hp(k, target(i, slot)) > 0 && last != 3 + slot) out.push_back(static_cast<ActionId>(2 + slot));
    }
    return out;
  };
  bp.step = [=](Key k, const std::vector<ActionId>& joint) {
    std::vector<int> attackers(static_cast<std::size_t>(n), 0), defenders(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      const ActionId act = joint[static_cast<std::size_t>(i) + 1];
      if (act == 1) ++defenders[static_cast<std::size_t>(i)];
      if (act >= 2) ++attackers[static_cast<std::size_t>(target(i, act - 2))];
    }
    Key next = 0;
    for (int i = n - 1; i >= 0; --i) {
      const int damage = std::max(0, attackers[static_cast<std::size_t>(i)] - defenders[static_cast<std::size_t>(i)]);
      const Key h = static_cast<Key>(std::max<long long>(0, static_cast<long long>(hp(k, i)) - damage));
      const Key m = joint[static_cast<std::size_t>(i) + 1] + 1;
      next = next * digit + h * mem_radix + m;
    }
    return next * rounds + (k % rounds + 1) % rounds;
  };
  for (int i = 0; i < n; ++i) bp.props.push_back("castle" + std::to_string(i + 1) + "Defeated");
  bp.props.push_back("allDefeated");
  bp.holds = [=](Key k, std::size_t p) {
    if (p < static_cast<std::size_t>(n)) return hp(k, static_cast<int>(p)) == 0;
    for (int i = 0; i < n; ++i) {
      if (hp(k, i) != 0) return false;
    }
    return true;
  };
  // Workers with imperfect information see every HP and their own last
  // action; the environment sees its round counter.
  bp.observe = [=](Key k, AgentId a) -> Key {
    if (a == 0) return k % rounds;
    Key o = 0;
    for (int i = 0; i < n; ++i) o = o * hp_radix + hp(k, i);
    return o * mem_radix + mem(k, static_cast<int>(a) - 1);
  };

  const std::string third = "castle" + std::to_string(std::min(n, 3)) + "Defeated";
  return Benchmark{assemble(bp), {{"phi1", "<<w1, w2>> F " + third}, {"phi2", "<<w1, w2>> F allDefeated"}}};
}

// ---------------------------------------------------------------------------
// Book store. The purchaser orders, the supplier checks stock and accepts or
// rejects, asks for payment, then delivers or refunds. Before paying the
// purchaser may revoke the order, and either side may terminate early.

namespace {

const std::vector<std::string> kSupplierStates = {
    "s_idle",      "s_order_received", "s_checking",  "s_accepted", "s_rejected",
    "s_awaiting",  "s_paid",           "s_shipping",  "s_delivered", "s_refunding",
    "s_refunded",  "s_revoked",        "s_terminated", "s_end_success", "s_end_fail"};
const std::vector<std::string> kSupplierActions = {
    "nop",      "check",  "accept", "reject", "request_payment", "confirm_payment", "deliver",
    "refund",   "complete", "close", "revoke", "terminate",      "restock"};
const std::vector<std::string> kPurchaserStates = {"p_idle",     "p_ordered", "p_waiting", "p_accepted",
                                                   "p_rejected", "p_invoiced", "p_paid",   "p_received",
                                                   "p_refunded", "p_revoked", "p_terminated", "p_done"};
const std::vector<std::string> kPurchaserActions = {"nop", "order", "pay", "confirm", "revoke", "terminate", "ack"};

enum SState : Key {
  SIdle, SOrderReceived, SChecking, SAccepted, SRejected, SAwaiting, SPaid, SShipping,
  SDelivered, SRefunding, SRefunded, SRevoked, STerminated, SEndSuccess, SEndFail
};
enum SAction : ActionId {
  SNop, SCheck, SAccept, SReject, SRequestPayment, SConfirmPayment, SDeliver,
  SRefund, SComplete, SClose, SRevoke, STerminate, SRestock
};
enum PState : Key {
  PIdle, POrdered, PWaiting, PAccepted, PRejected, PInvoiced, PPaid, PReceived,
  PRefunded, PRevoked, PTerminated, PDone
};
enum PAction : ActionId { PNop, POrder, PPay, PConfirm, PRevoke, PTerminate, PAck };

std::vector<ActionId> supplier_protocol(Key s) {
  switch (s) {
    case SIdle: return {SNop};
    case SOrderReceived: return {SCheck, SReject, STerminate};
    case SChecking: return {SAccept, SReject, SRestock};
    case SAccepted: return {SRequestPayment, SRevoke};
    case SAwaiting: return {SNop};
    case SPaid: return {SConfirmPayment, SRefund};
    case SShipping: return {SDeliver};
    case SDelivered: return {SComplete};
    case SRefunding: return {SRefund};
    case SRejected:
    case SRefunded:
    case SRevoked:
    case STerminated: return {SClose};
    default: return {SNop};
  }
}

std::vector<ActionId> purchaser_protocol(Key p) {
  switch (p) {
    case PIdle: return {PNop, POrder, PTerminate};
    case POrdered: return {PNop, PRevoke};
    case PWaiting: return {PNop, PRevoke, PTerminate};
    case PAccepted: return {PNop, PRevoke};
    case PInvoiced: return {PPay, PRevoke, PTerminate};
    case PPaid: return {PNop};
    case PReceived: return {PConfirm};
    case PRejected:
    case PRefunded:
    case PRevoked:
    case PTerminated: return {PAck};
    default: return {PNop};
  }
}

Key supplier_next(Key s, ActionId a, ActionId b) {
  // The purchaser's revocation or termination wins over the supplier's move
  // while the deal is still open.
  if (b == PTerminate && (s == SIdle || s == SOrderReceived || s == SChecking || s == SAwaiting)) return STerminated;
  if (b == PRevoke && (s == SOrderReceived || s == SChecking || s == SAccepted || s == SAwaiting)) return SRevoked;
  switch (s) {
    case SIdle: return b == POrder ? SOrderReceived : SIdle;
    case SOrderReceived: return a == SCheck ? SChecking : a == SReject ? SRejected : STerminated;
    case SChecking: return a == SAccept ? SAccepted : a == SReject ? SRejected : SChecking;
    case SAccepted: return a == SRequestPayment ? SAwaiting : SRevoked;
    case SAwaiting: return b == PPay ? SPaid : SAwaiting;
    case SPaid: return a == SConfirmPayment ? SShipping : SRefunding;
    case SShipping: return SDelivered;
    case SDelivered: return SEndSuccess;
    case SRefunding: return SRefunded;
    case SRejected:
    case SRefunded:
    case SRevoked:
    case STerminated: return SEndFail;
    default: return s;
  }
}

Key purchaser_next(Key p, ActionId b, ActionId a) {
  switch (p) {
    case PIdle: return b == POrder ? POrdered : b == PTerminate ? PTerminated : PIdle;
    case POrdered:
      if (b == PRevoke) return PRevoked;
      if (a == SCheck) return PWaiting;
      if (a == SReject) return PRejected;
      if (a == STerminate) return PTerminated;
      return POrdered;
    case PWaiting:
      if (b == PRevoke) return PRevoked;
      if (b == PTerminate) return PTerminated;
      if (a == SAccept) return PAccepted;
      if (a == SReject) return PRejected;
      return PWaiting;
    case PAccepted:
      if (b == PRevoke || a == SRevoke) return PRevoked;
      return a == SRequestPayment ? PInvoiced : PAccepted;
    case PInvoiced: return b == PPay ? PPaid : b == PRevoke ? PRevoked : PTerminated;
    case PPaid: return a == SDeliver ? PReceived : a == SRefund ? PRefunded : PPaid;
    case PReceived: return PDone;
    case PRejected:
    case PRefunded:
    case PRevoked:
    case PTerminated: return PDone;
    default: return p;
  }
}

}  // namespace

const std::vector<std::string>& bookstore_supplier_states() { return kSupplierStates; }
const std::vector<std::string>& bookstore_supplier_actions() { return kSupplierActions; }
const std::vector<std::string>& bookstore_purchaser_states() { return kPurchaserStates; }
const std::vector<std::string>& bookstore_purchaser_actions() { return kPurchaserActions; }

Benchmark gen_bookstore(StrategyType supplier, StrategyType purchaser) {
  const Key np = kPurchaserStates.size();
  Blueprint bp;
  bp.agents = {"S", "P"};
  bp.actions = {kSupplierActions, kPurchaserActions};
  bp.abilities = {supplier, purchaser};
  bp.initial = {SIdle * np + PIdle};
  bp.name = [np](Key k) { return kSupplierStates[k / np] + "_" + kPurchaserStates[k % np]; };
  bp.protocol = [np](Key k, AgentId i) { return i == 0 ? supplier_protocol(k / np) : purchaser_protocol(k % np); };
  bp.step = [np](Key k, const std::vector<ActionId>& joint) {
    return supplier_next(k / np, joint[0], joint[1]) * np + purchaser_next(k % np, joint[1], joint[0]);
  };
  bp.props = {"SP_no_T", "trade_end", "trade_success"};
  bp.holds = [np](Key k, std::size_t p) {
    const Key s = k / np, q = k % np;
    switch (p) {
      case 0: return s != STerminated && q != PTerminated;
      case 1: return (s == SEndSuccess || s == SEndFail) && q == PDone;
      default: return s == SEndSuccess;
    }
  };
  // Each side only sees its own local state.
  bp.observe = [np](Key k, AgentId i) { return i == 0 ? k / np : k % np; };
  return Benchmark{assemble(bp),
                   {{"phi1", "<<>> G (SP_no_T -> K S <<S, P>> F trade_end)"},
                    {"phi2", "<<S, P>> (SP_no_T U (trade_end & !trade_success))"}}};
}

}  // namespace acgs
