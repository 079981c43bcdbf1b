#include "acgs/formula.hpp"

#include "acgs/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace acgs {

namespace fm {

namespace {
FormulaPtr make(Op op, FormulaPtr lhs = nullptr, FormulaPtr rhs = nullptr) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}
}  // namespace

FormulaPtr top() {
  static const FormulaPtr t = make(Op::True);
  return t;
}
FormulaPtr bottom() {
  static const FormulaPtr f = make(Op::False);
  return f;
}
FormulaPtr atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Atom;
  f->atom = std::move(name);
  return f;
}
FormulaPtr neg(FormulaPtr a) { return make(Op::Not, std::move(a)); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(Op::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(Op::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return disj(std::move(b), neg(std::move(a))); }
FormulaPtr next(FormulaPtr a) { return make(Op::Next, std::move(a)); }
FormulaPtr until(FormulaPtr a, FormulaPtr b) { return make(Op::Until, std::move(a), std::move(b)); }
FormulaPtr release(FormulaPtr a, FormulaPtr b) { return make(Op::Release, std::move(a), std::move(b)); }
FormulaPtr eventually(FormulaPtr a) { return until(top(), std::move(a)); }
FormulaPtr globally(FormulaPtr a) { return neg(eventually(neg(std::move(a)))); }

FormulaPtr coalition(std::vector<std::string> agents, FormulaPtr body) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  auto f = std::make_shared<Formula>();
  f->op = Op::Coalition;
  f->agents = std::move(agents);
  f->lhs = std::move(body);
  return f;
}
FormulaPtr dual(std::vector<std::string> agents, FormulaPtr body) {
  return neg(coalition(std::move(agents), neg(std::move(body))));
}
FormulaPtr know(std::string agent, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Know;
  f->agents = {std::move(agent)};
  f->lhs = std::move(a);
  return f;
}
FormulaPtr group(Op kind, std::vector<std::string> agents, FormulaPtr a) {
  if (kind != Op::Everybody && kind != Op::Distributed && kind != Op::Common) {
    throw std::invalid_argument("group modality must be E, D or C");
  }
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  auto f = std::make_shared<Formula>();
  f->op = kind;
  f->agents = std::move(agents);
  f->lhs = std::move(a);
  return f;
}

}  // namespace fm

namespace {

struct Tok {
  std::string text;
  bool name;
  std::size_t col;
};

std::vector<Tok> tokenize(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto is_name = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_name(c)) {
      std::size_t j = i;
      while (j < s.size() && is_name(s[j])) ++j;
      out.push_back({std::string(s.substr(i, j - i)), true, i + 1});
      i = j;
      continue;
    }
    std::string_view two = s.substr(i, 2);
    if (two == "<<" || two == ">>" || two == "[[" || two == "]]" || two == "->") {
      out.push_back({std::string(two), false, i + 1});
      i += 2;
      continue;
    }
    if (std::string_view("(){},!&|").find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), false, i + 1});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", 1, i + 1);
  }
  return out;
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, std::size_t end_col) : toks_(std::move(toks)), end_col_(end_col) {}

  FormulaPtr parse() {
    FormulaPtr f = implication();
    if (pos_ != toks_.size()) fail("unexpected token '" + toks_[pos_].text + "'");
    return f;
  }

 private:
  bool at(std::string_view sym) const { return pos_ < toks_.size() && !toks_[pos_].name && toks_[pos_].text == sym; }
  bool at_name(std::string_view kw) const { return pos_ < toks_.size() && toks_[pos_].name && toks_[pos_].text == kw; }
  void expect(std::string_view sym) {
    if (!at(sym)) fail("expected '" + std::string(sym) + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t col = pos_ < toks_.size() ? toks_[pos_].col : end_col_;
    throw ParseError(msg, 1, col);
  }
  std::string agent_name() {
    if (pos_ >= toks_.size() || !toks_[pos_].name) fail("expected an agent name");
    return toks_[pos_++].text;
  }
  std::vector<std::string> agent_list(std::string_view close) {
    std::vector<std::string> out;
    if (at(close)) {
      ++pos_;
      return out;
    }
    out.push_back(agent_name());
    while (at(",")) {
      ++pos_;
      out.push_back(agent_name());
    }
    expect(close);
    return out;
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (at("->")) {
      ++pos_;
      return fm::implies(lhs, implication());
    }
    return lhs;
  }
  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (at("|")) {
      ++pos_;
      f = fm::disj(f, conjunction());
    }
    return f;
  }
  FormulaPtr conjunction() {
    FormulaPtr f = binary_temporal();
    while (at("&")) {
      ++pos_;
      f = fm::conj(f, binary_temporal());
    }
    return f;
  }
  FormulaPtr binary_temporal() {
    FormulaPtr lhs = unary();
    if (at_name("U")) {
      ++pos_;
      return fm::until(lhs, binary_temporal());
    }
    if (at_name("R")) {
      ++pos_;
      return fm::release(lhs, binary_temporal());
    }
    return lhs;
  }
  FormulaPtr unary() {
    if (pos_ >= toks_.size()) fail("unexpected end of formula");
    if (at("!")) {
      ++pos_;
      return fm::neg(unary());
    }
    if (at("<<")) {
      ++pos_;
      auto agents = agent_list(">>");
      return fm::coalition(agents, unary());
    }
    if (at("[[")) {
      ++pos_;
      auto agents = agent_list("]]");
      return fm::dual(agents, unary());
    }
    if (at("(")) {
      ++pos_;
      FormulaPtr f = implication();
      expect(")");
      return f;
    }
    const Tok& t = toks_[pos_];
    if (!t.name) fail("unexpected token '" + t.text + "'");
    ++pos_;
    if (t.text == "X") return fm::next(unary());
    if (t.text == "F") return fm::eventually(unary());
    if (t.text == "G") return fm::globally(unary());
    if (t.text == "K") {
      std::string a = agent_name();
      return fm::know(a, unary());
    }
    if (t.text == "E" || t.text == "D" || t.text == "C") {
      Op kind = t.text == "E" ? Op::Everybody : t.text == "D" ? Op::Distributed : Op::Common;
      expect("{");
      auto agents = agent_list("}");
      if (agents.empty()) fail("group modality needs at least one agent");
      return fm::group(kind, agents, unary());
    }
    if (t.text == "true") return fm::top();
    if (t.text == "false") return fm::bottom();
    if (t.text == "U" || t.text == "R") {
      --pos_;
      fail("binary operator '" + t.text + "' without left operand");
    }
    if (std::isdigit(static_cast<unsigned char>(t.text[0]))) {
      --pos_;
      fail("proposition names cannot start with a digit");
    }
    return fm::atom(t.text);
  }

  std::vector<Tok> toks_;
  std::size_t end_col_;
  std::size_t pos_ = 0;
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k];
  return out;
}

void print(const FormulaPtr& f, std::string& out) {
  switch (f->op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += f->atom; return;
    case Op::Not: {
      const auto& x = f->lhs;
      if (x->op == Op::Until && x->lhs->op == Op::True && x->rhs->op == Op::Not) {
        out += "G ";
        print(x->rhs->lhs, out);
        return;
      }
      if (x->op == Op::Coalition && x->lhs->op == Op::Not) {
        out += "[[" + join(x->agents) + "]] ";
        print(x->lhs->lhs, out);
        return;
      }
      out += "!";
      print(x, out);
      return;
    }
    case Op::And:
    case Op::Or:
    case Op::Release:
      out += "(";
      print(f->lhs, out);
      out += f->op == Op::And ? " & " : f->op == Op::Or ? " | " : " R ";
      print(f->rhs, out);
      out += ")";
      return;
    case Op::Until:
      if (f->lhs->op == Op::True) {
        out += "F ";
        print(f->rhs, out);
        return;
      }
      out += "(";
      print(f->lhs, out);
      out += " U ";
      print(f->rhs, out);
      out += ")";
      return;
    case Op::Next:
      out += "X ";
      print(f->lhs, out);
      return;
    case Op::Coalition:
      out += "<<" + join(f->agents) + ">> ";
      print(f->lhs, out);
      return;
    case Op::Know:
      out += "K " + f->agents.front() + " ";
      print(f->lhs, out);
      return;
    case Op::Everybody:
    case Op::Distributed:
    case Op::Common:
      out += f->op == Op::Everybody ? "E {" : f->op == Op::Distributed ? "D {" : "C {";
      out += join(f->agents) + "} ";
      print(f->lhs, out);
      return;
  }
}

bool is_epistemic(Op op) { return op == Op::Know || op == Op::Everybody || op == Op::Distributed || op == Op::Common; }

void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->op == Op::Atom) out.insert(f->atom);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

void collect_agents(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->op == Op::Coalition || is_epistemic(f->op)) out.insert(f->agents.begin(), f->agents.end());
  collect_agents(f->lhs, out);
  collect_agents(f->rhs, out);
}

// Negations occur only directly above atoms or constants.
bool negations_at_leaves(const FormulaPtr& f) {
  if (!f) return true;
  if (f->op == Op::Not) {
    Op c = f->lhs->op;
    return c == Op::Atom || c == Op::True || c == Op::False;
  }
  return negations_at_leaves(f->lhs) && negations_at_leaves(f->rhs);
}

bool has_dual(const FormulaPtr& f) {
  if (!f) return false;
  if (f->op == Op::Not && f->lhs->op == Op::Coalition && f->lhs->lhs->op == Op::Not) return true;
  return has_dual(f->lhs) || has_dual(f->rhs);
}

void classify_into(const FormulaPtr& f, Classification& c) {
  if (!f) return;
  if (f->op == Op::Coalition) {
    if (!is_ltl(f->lhs)) c.is_simple_coalitions = false;
    auto st = as_simple_temporal(f->lhs);
    if (!st) {
      c.is_atl = false;
    } else {
      // The operands of an ATL body are state formulae; check their structure too.
      if (st->lhs) classify_into(st->lhs, c);
      classify_into(st->rhs, c);
      return;
    }
  }
  classify_into(f->lhs, c);
  classify_into(f->rhs, c);
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
  Parser p(tokenize(text), text.size() + 1);
  return p.parse();
}

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, out);
  return out;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->atom != b->atom || a->agents != b->agents) return false;
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

bool is_temporal(Op op) { return op == Op::Next || op == Op::Until || op == Op::Release; }

bool is_state_formula(const FormulaPtr& f) {
  if (!f) return true;
  if (is_temporal(f->op)) return false;
  if (f->op == Op::Coalition) return true;
  return is_state_formula(f->lhs) && is_state_formula(f->rhs);
}

bool is_ltl(const FormulaPtr& f) {
  if (!f) return true;
  if (f->op == Op::Coalition || is_epistemic(f->op)) return false;
  return is_ltl(f->lhs) && is_ltl(f->rhs);
}

std::vector<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

std::optional<SimpleTemporal> as_simple_temporal(const FormulaPtr& body) {
  const FormulaPtr* cur = &body;
  bool negated = false;
  while ((*cur)->op == Op::Not && !is_state_formula(*cur)) {
    negated = !negated;
    cur = &(*cur)->lhs;
  }
  const FormulaPtr& f = *cur;
  if (!is_temporal(f->op)) return std::nullopt;
  if (!is_state_formula(f->lhs) || (f->rhs && !is_state_formula(f->rhs))) return std::nullopt;
  if (!negated) return SimpleTemporal{f->op, f->op == Op::Next ? nullptr : f->lhs, f->op == Op::Next ? f->lhs : f->rhs};
  switch (f->op) {
    case Op::Next: return SimpleTemporal{Op::Next, nullptr, fm::neg(f->lhs)};
    case Op::Until: return SimpleTemporal{Op::Release, fm::neg(f->lhs), fm::neg(f->rhs)};
    case Op::Release: return SimpleTemporal{Op::Until, fm::neg(f->lhs), fm::neg(f->rhs)};
    default: return std::nullopt;
  }
}

Classification classify(const FormulaPtr& f) {
  Classification c;
  classify_into(f, c);
  c.is_positive = c.is_simple_coalitions && !has_dual(f) && negations_at_leaves(f);
  std::set<std::string> agents;
  collect_agents(f, agents);
  c.agents_of.assign(agents.begin(), agents.end());
  return c;
}

namespace {

bool propositional(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False: return true;
    case Op::Not: return propositional(f->lhs);
    case Op::And:
    case Op::Or: return propositional(f->lhs) && propositional(f->rhs);
    default: return false;
  }
}

}  // namespace

FormulaPtr substitute_state_subformulae(const FormulaPtr& body,
                                        const std::function<std::string(const FormulaPtr&)>& fresh) {
  // Boolean combinations of atoms are plain LTL already.
  if (propositional(body)) return body;
  if (is_state_formula(body)) return fm::atom(fresh(body));
  auto copy = std::make_shared<Formula>(*body);
  if (copy->lhs) copy->lhs = substitute_state_subformulae(copy->lhs, fresh);
  if (copy->rhs) copy->rhs = substitute_state_subformulae(copy->rhs, fresh);
  return copy;
}

}  // namespace acgs
