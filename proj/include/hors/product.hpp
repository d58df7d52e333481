#pragma once
// Product of a strong-simple-form scheme with an alternating automaton. The
// resulting parity scheme generates the automaton's run tree over the input
// scheme's tree, so solving it answers acceptance.

#include <string>
#include <utility>
#include <vector>

#include "hors/automaton.hpp"
#include "hors/errors.hpp"
#include "hors/normalize.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace hors {

// Empirical corpus-wide factor in
//   schemeSize(product) <= factor * maxArity(g) * schemeSize(g) * aptSize(a)^3.
inline constexpr long long kProductSizeFactor = 2;

// Each argument position is repeated once per state; order is preserved.
inline TypePtr ddagType(const TypePtr& t, int numStates) {
  if (isGround(t)) return t;
  TypePtr arg = ddagType(t->param, numStates);
  TypePtr rest = ddagType(t->result, numStates);
  for (int i = 0; i < numStates; ++i) rest = arrow(arg, rest);
  return rest;
}

inline std::string productName(const std::string& base, const std::string& state) {
  return base + "@" + state;
}

// Pairs a constructor-free term with a state: names pick up the state tag,
// and every argument is fanned out over all states in declaration order, so
// the result can later be read in whichever state the automaton is in.
inline TermPtr prTerm(const std::string& q, const TermPtr& m,
                      const std::vector<std::string>& states) {
  switch (m->kind) {
    case TermKind::Nonterminal:
      return nonterminal(productName(m->name, q));
    case TermKind::Var:
      return variable(productName(m->name, q));
    case TermKind::Node:
      throw NodeConstructorInPr("node constructor reached by pairing; the scheme was not in strong simple form");
    case TermKind::App: {
      TermPtr fun = prTerm(q, m->fun, states);
      std::vector<TermPtr> args;
      args.reserve(states.size());
      for (const std::string& p : states) args.push_back(prTerm(p, m->arg, states));
      return appN(std::move(fun), args);
    }
  }
  throw Error("malformed term", 3);
}

inline RecursionScheme buildProduct(const RecursionScheme& g, const Apt& a) {
  validateScheme(g);
  if (!isStrongSimpleForm(g))
    throw NotSimpleForm("product requires a scheme in strong simple form");
  validateAutomaton(a, g, /*requireOmega=*/false);
  for (const std::string& nt : g.ntOrder) {
    if (nt.find('@') != std::string::npos)
      throw ValidationError("nonterminal names may not contain '@': " + nt);
    for (const std::string& y : g.rules.at(nt).params)
      if (y.find('@') != std::string::npos)
        throw ValidationError("parameter names may not contain '@': " + y);
  }

  const std::vector<std::string>& states = a.states;
  int n = static_cast<int>(states.size());

  RecursionScheme out;
  out.maxPriority = maxPriorityOf(a);
  out.start = productName(g.start, a.initial);
  for (const std::string& nt : g.ntOrder)
    for (const std::string& q : states)
      declareNonterminal(out, productName(nt, q), ddagType(g.ntType.at(nt), n));

  for (const std::string& nt : g.ntOrder) {
    const Rule& rule = g.rules.at(nt);

    std::vector<std::string> params;
    std::vector<TermPtr> paramVars;
    params.reserve(rule.params.size() * static_cast<std::size_t>(n));
    for (const std::string& y : rule.params)
      for (const std::string& p : states) {
        params.push_back(productName(y, p));
        paramVars.push_back(variable(params.back()));
      }

    for (const std::string& q : states) {
      TermPtr body;
      if (rule.body->kind == TermKind::Node) {
        const Label& label = rule.body->label;
        if (label.parity) throw ValidationError("products run on plain-labeled schemes");
        int count = static_cast<int>(rule.body->children.size());
        Player owner = isExistential(a, q) ? Player::Eve : Player::Adam;
        int prio = priorityOf(a, q, label.name);
        std::vector<TermPtr> kids;
        for (const AptMove& mv : movesOf(a, q, label.name, count)) {
          if (mv.direction == 0)
            kids.push_back(appN(nonterminal(productName(nt, mv.state)), paramVars));
          else
            kids.push_back(prTerm(mv.state, rule.body->children[static_cast<std::size_t>(mv.direction - 1)], states));
        }
        body = node(parityLabel(owner, prio), std::move(kids));
      } else {
        body = prTerm(q, rule.body, states);
      }
      out.rules[productName(nt, q)] = {params, std::move(body)};
    }
  }

  try {
    validateScheme(out);
  } catch (const Error& e) {
    throw Error(std::string("product scheme is invalid: ") + e.what(), 3);
  }
  return out;
}

}  // namespace hors
