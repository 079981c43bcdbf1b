#include "acgs/io.hpp"

#include "acgs/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace acgs {

namespace {

struct Token {
  enum Kind { Name, Symbol, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool accept(std::string_view sym) {
    if (tok_.kind == Token::Symbol && tok_.text == sym) {
      advance();
      return true;
    }
    return false;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail("expected '" + std::string(sym) + "'");
  }
  std::string name() {
    if (tok_.kind != Token::Name) fail("expected a name");
    return take().text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = tok_.kind == Token::End ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(msg + ", got " + got, tok_.line, tok_.column);
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        ++pos_;
        line_start_ = pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    const std::size_t col = pos_ - line_start_ + 1;
    if (pos_ >= src_.size()) {
      tok_ = {Token::End, "", line_, col};
      return;
    }
    auto is_name = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (is_name(src_[pos_])) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_name(src_[pos_])) ++pos_;
      tok_ = {Token::Name, std::string(src_.substr(start, pos_ - start)), line_, col};
      return;
    }
    if (src_.compare(pos_, 2, "->") == 0) {
      pos_ += 2;
      tok_ = {Token::Symbol, "->", line_, col};
      return;
    }
    std::string_view singles = ":;{}(),=*";
    if (singles.find(src_[pos_]) != std::string_view::npos) {
      tok_ = {Token::Symbol, std::string(1, src_[pos_]), line_, col};
      ++pos_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", line_, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
  Token tok_{Token::End, "", 1, 1};
};

struct Located {
  std::string name;
  std::size_t line;
  std::size_t column;
};

struct TransLine {
  Located from;
  std::vector<Located> joint;  // "*" stands for any allowed action
  Located to;
};

struct RawModel {
  std::vector<std::string> agents;
  std::map<std::string, std::string> ability;
  std::vector<std::string> states;
  std::vector<Located> init;
  std::vector<std::pair<std::string, std::vector<Located>>> labels;
  std::map<std::string, std::vector<std::string>> actions;
  std::map<std::string, std::vector<std::vector<Located>>> obs;
  std::vector<std::pair<std::string, std::pair<Located, std::vector<Located>>>> protocol;
  std::vector<TransLine> trans;
  bool saw_agents = false;
  bool saw_states = false;
};

Located located(Lexer& lx) {
  const Token& t = lx.peek();
  Located l{"", t.line, t.column};
  l.name = lx.name();
  return l;
}

std::vector<std::string> name_list(Lexer& lx) {
  std::vector<std::string> out;
  while (lx.peek().kind == Token::Name) out.push_back(lx.take().text);
  return out;
}

std::vector<Located> located_list(Lexer& lx) {
  std::vector<Located> out;
  while (lx.peek().kind == Token::Name) out.push_back(located(lx));
  return out;
}

RawModel read_raw(std::string_view text) {
  Lexer lx(text);
  RawModel raw;
  while (lx.peek().kind != Token::End) {
    Token kw = lx.peek();
    std::string key = lx.name();
    if (key == "agents") {
      lx.expect(":");
      raw.agents = name_list(lx);
      raw.saw_agents = true;
    } else if (key == "ability") {
      lx.expect(":");
      while (lx.peek().kind == Token::Name) {
        std::string agent = lx.take().text;
        lx.expect("=");
        raw.ability[agent] = lx.name();
      }
    } else if (key == "states") {
      lx.expect(":");
      raw.states = name_list(lx);
      raw.saw_states = true;
    } else if (key == "init") {
      lx.expect(":");
      auto more = located_list(lx);
      raw.init.insert(raw.init.end(), more.begin(), more.end());
    } else if (key == "label") {
      std::string prop = lx.name();
      lx.expect(":");
      raw.labels.emplace_back(prop, located_list(lx));
    } else if (key == "actions") {
      std::string agent = lx.name();
      lx.expect(":");
      raw.actions[agent] = name_list(lx);
    } else if (key == "obs") {
      std::string agent = lx.name();
      lx.expect(":");
      auto& blocks = raw.obs[agent];
      while (lx.accept("{")) {
        blocks.push_back(located_list(lx));
        lx.expect("}");
      }
    } else if (key == "protocol") {
      std::string agent = lx.name();
      lx.expect(":");
      do {
        Located st = located(lx);
        lx.expect("{");
        auto acts = located_list(lx);
        lx.expect("}");
        raw.protocol.push_back({agent, {st, acts}});
      } while (lx.accept(","));
    } else if (key == "trans") {
      lx.expect(":");
      do {
        TransLine tl;
        tl.from = located(lx);
        lx.expect("(");
        do {
          if (lx.peek().kind == Token::Symbol && lx.peek().text == "*") {
            Token t = lx.take();
            tl.joint.push_back({"*", t.line, t.column});
          } else {
            tl.joint.push_back(located(lx));
          }
        } while (lx.accept(","));
        lx.expect(")");
        lx.expect("->");
        tl.to = located(lx);
        raw.trans.push_back(std::move(tl));
      } while (lx.accept(","));
    } else {
      throw ParseError("unknown statement '" + key + "'", kw.line, kw.column);
    }
    lx.expect(";");
  }
  return raw;
}

[[noreturn]] void fail_at(const Located& l, const std::string& msg) { throw ParseError(msg, l.line, l.column); }

}  // namespace

Stcgs parse_acgs(std::string_view text) {
  RawModel raw = read_raw(text);
  if (!raw.saw_agents) throw ParseError("missing 'agents' statement", 1, 1);
  if (!raw.saw_states) throw ParseError("missing 'states' statement", 1, 1);
  auto g = std::make_shared<Cgs>();
  for (const auto& a : raw.agents) {
    auto it = raw.actions.find(a);
    if (it == raw.actions.end() || it->second.empty()) {
      throw ModelError("agent '" + a + "' has no 'actions' statement");
    }
    g->add_agent(a, it->second);
  }
  for (const auto& [a, _] : raw.actions) {
    if (!g->find_agent(a)) throw ModelError("actions declared for unknown agent '" + a + "'");
  }
  for (const auto& s : raw.states) g->add_state(s);
  auto state_of = [&](const Located& l) {
    auto s = g->find_state(l.name);
    if (!s) fail_at(l, "unknown state '" + l.name + "'");
    return *s;
  };
  auto agent_of = [&](const std::string& name) {
    auto i = g->find_agent(name);
    if (!i) throw ModelError("unknown agent '" + name + "'");
    return *i;
  };
  for (const auto& l : raw.init) g->add_initial(state_of(l));
  for (const auto& [prop, states] : raw.labels) {
    StateSet set(g->num_states());
    for (const auto& l : states) set.set(state_of(l));
    auto existing = g->label(prop);
    g->set_label(prop, set | existing);
  }
  for (const auto& [agent, blocks] : raw.obs) {
    AgentId i = agent_of(agent);
    std::vector<std::vector<StateId>> ids;
    for (const auto& b : blocks) {
      ids.emplace_back();
      for (const auto& l : b) ids.back().push_back(state_of(l));
    }
    // Overlapping blocks are kept; validate reports them.
    Partition p = Partition::from_blocks(g->num_states(), ids);
    g->set_observation(i, std::move(p));
  }
  for (const auto& [agent, entry] : raw.protocol) {
    AgentId i = agent_of(agent);
    std::vector<ActionId> acts;
    for (const auto& l : entry.second) {
      auto a = g->find_action(i, l.name);
      if (!a) fail_at(l, "unknown action '" + l.name + "' for agent '" + agent + "'");
      acts.push_back(*a);
    }
    if (acts.empty()) fail_at(entry.first, "empty protocol for agent '" + agent + "'");
    g->set_protocol(i, state_of(entry.first), std::move(acts));
  }
  g->finalize_protocols();
  for (const auto& tl : raw.trans) {
    StateId from = state_of(tl.from);
    StateId to = state_of(tl.to);
    if (tl.joint.size() != g->num_agents()) {
      fail_at(tl.from, "joint action has " + std::to_string(tl.joint.size()) + " components, expected " +
                           std::to_string(g->num_agents()));
    }
    // Expand wildcards over the protocol at the source state.
    std::vector<std::vector<ActionId>> options(g->num_agents());
    for (AgentId i = 0; i < g->num_agents(); ++i) {
      const auto& l = tl.joint[i];
      if (l.name == "*") {
        options[i] = g->protocol(i, from);
        continue;
      }
      auto a = g->find_action(i, l.name);
      if (!a) fail_at(l, "unknown action '" + l.name + "' for agent '" + g->agent_name(i) + "'");
      options[i] = {*a};
    }
    std::vector<std::size_t> pos(g->num_agents(), 0);
    std::vector<ActionId> joint(g->num_agents());
    while (true) {
      for (AgentId i = 0; i < g->num_agents(); ++i) joint[i] = options[i][pos[i]];
      auto idx = g->encode_joint(from, joint);
      if (!idx) fail_at(tl.from, "joint action outside the protocol of state '" + tl.from.name + "'");
      StateId old = g->target(from, *idx);
      if (old != kNoState && old != to) {
        fail_at(tl.from, "conflicting transitions from '" + tl.from.name + "' for the same joint action");
      }
      g->set_transition_at(from, *idx, to);
      std::size_t i = 0;
      for (; i < pos.size(); ++i) {
        if (++pos[i] < options[i].size()) break;
        pos[i] = 0;
      }
      if (i == pos.size()) break;
    }
  }
  AbilityMap ability(g->num_agents(), StrategyType::IR);
  for (const auto& [agent, type] : raw.ability) {
    ability[agent_of(agent)] = parse_strategy_type(type);
  }
  return Stcgs{g, ability};
}

Stcgs load_acgs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_acgs(buf.str());
}

namespace {

// The reader only accepts letters, digits and underscores in names.
void require_writable_names(const Cgs& g) {
  auto check = [](std::string_view kind, const std::string& name) {
    const bool ok = !name.empty() && std::all_of(name.begin(), name.end(), [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    });
    if (!ok) throw ModelError(std::string(kind) + " name '" + name + "' cannot be written in .acgs format");
  };
  for (const auto& a : g.agent_names()) check("agent", a);
  for (const auto& s : g.state_names()) check("state", s);
  for (const auto& [p, set] : g.labels()) check("proposition", p);
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    for (const auto& a : g.action_names(i)) check("action", a);
  }
}

}  // namespace

void write_acgs(std::ostream& os, const Stcgs& m) {
  const Cgs& g = m.g();
  require_writable_names(g);
  os << "agents:";
  for (const auto& a : g.agent_names()) os << ' ' << a;
  os << ";\nability:";
  for (AgentId i = 0; i < g.num_agents(); ++i) os << ' ' << g.agent_name(i) << '=' << to_string(m.ability[i]);
  os << ";\nstates:";
  for (const auto& s : g.state_names()) os << ' ' << s;
  os << ";\ninit:";
  for (StateId s : g.initial()) os << ' ' << g.state_name(s);
  os << ";\n";
  for (const auto& [p, set] : g.labels()) {
    os << "label " << p << ':';
    for (auto s = set.find_first(); s != StateSet::npos; s = set.find_next(s)) os << ' ' << g.state_name(s);
    os << ";\n";
  }
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    os << "actions " << g.agent_name(i) << ':';
    for (const auto& a : g.action_names(i)) os << ' ' << a;
    os << ";\n";
  }
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    const auto& p = g.observation(i);
    if (p.is_identity()) continue;
    os << "obs " << g.agent_name(i) << ':';
    for (const auto& b : p.blocks) {
      if (b.size() < 2) continue;
      os << " {";
      for (std::size_t k = 0; k < b.size(); ++k) os << (k ? " " : "") << g.state_name(b[k]);
      os << '}';
    }
    os << ";\n";
  }
  for (AgentId i = 0; i < g.num_agents(); ++i) {
    bool any = false;
    for (StateId s = 0; s < g.num_states(); ++s) {
      const auto& prot = g.protocol(i, s);
      if (prot.size() == g.num_actions(i)) continue;
      os << (any ? ",\n  " : "protocol " + g.agent_name(i) + ": ") << g.state_name(s) << " {";
      for (std::size_t k = 0; k < prot.size(); ++k) os << (k ? " " : "") << g.action_name(i, prot[k]);
      os << '}';
      any = true;
    }
    if (any) os << ";\n";
  }
  std::vector<ActionId> joint;
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (std::size_t k = 0; k < g.joint_count(s); ++k) {
      StateId t = g.target(s, k);
      if (t == kNoState) continue;
      g.decode_joint(s, k, joint);
      os << "trans: " << g.state_name(s) << " (";
      for (AgentId i = 0; i < g.num_agents(); ++i) os << (i ? "," : "") << g.action_name(i, joint[i]);
      os << ") -> " << g.state_name(t) << ";\n";
    }
  }
}

std::string to_acgs(const Stcgs& m) {
  std::ostringstream os;
  write_acgs(os, m);
  return os.str();
}

std::vector<std::string> read_formula_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      auto last = line.find_last_not_of(" \t\r");
      out.push_back(line.substr(first, last - first + 1));
    }
    start = end + 1;
  }
  return out;
}

}  // namespace acgs
