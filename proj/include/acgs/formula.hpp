#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acgs {

// One node type covers both state and path formulae; the distinction is made by
// is_state_formula. Derived operators are expanded at construction time.
enum class Op { True, False, Atom, Not, And, Or, Next, Until, Release, Coalition, Know, Everybody, Distributed, Common };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string atom;                 // Atom
  std::vector<std::string> agents;  // Coalition, Know (one entry), Everybody, Distributed, Common
  FormulaPtr lhs;                   // unary operand or left operand
  FormulaPtr rhs;                   // right operand of And, Or, Until, Release
};

namespace fm {
FormulaPtr top();
FormulaPtr bottom();
FormulaPtr atom(std::string name);
FormulaPtr neg(FormulaPtr a);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr next(FormulaPtr a);
FormulaPtr until(FormulaPtr a, FormulaPtr b);
FormulaPtr release(FormulaPtr a, FormulaPtr b);
FormulaPtr eventually(FormulaPtr a);
FormulaPtr globally(FormulaPtr a);
FormulaPtr coalition(std::vector<std::string> agents, FormulaPtr body);
FormulaPtr dual(std::vector<std::string> agents, FormulaPtr body);
FormulaPtr know(std::string agent, FormulaPtr a);
FormulaPtr group(Op kind, std::vector<std::string> agents, FormulaPtr a);
}  // namespace fm

FormulaPtr parse_formula(std::string_view text);
std::string to_string(const FormulaPtr& f);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

bool is_temporal(Op op);
// No temporal operator outside the scope of a coalition.
bool is_state_formula(const FormulaPtr& f);
// Only atoms, constants, boolean and temporal operators.
bool is_ltl(const FormulaPtr& f);
// Fixed, sorted list of the atoms occurring in f (constants excluded).
std::vector<std::string> atoms_of(const FormulaPtr& f);

// A coalition body of the shape X a, a U b or a R b over state formulae,
// possibly under path negations that can be pushed through the operator.
struct SimpleTemporal {
  Op op;           // Next, Until or Release
  FormulaPtr lhs;  // unused for Next
  FormulaPtr rhs;
};
std::optional<SimpleTemporal> as_simple_temporal(const FormulaPtr& body);

struct Classification {
  bool is_atl = true;
  bool is_simple_coalitions = true;
  bool is_positive = true;
  std::vector<std::string> agents_of;  // sorted, deduplicated
};
Classification classify(const FormulaPtr& f);

// Replaces every maximal state subformula of a path formula that is not a
// boolean combination of atoms by a fresh proposition. The callback supplies the name and
// receives the replaced subformula. Returns the rewritten pure LTL formula.
FormulaPtr substitute_state_subformulae(const FormulaPtr& body,
                                        const std::function<std::string(const FormulaPtr&)>& fresh);

}  // namespace acgs
