#pragma once

// Order-reducing transformation for parity recursion schemes. Every trailing
// ground argument position is replaced by a declared priority bound drawn from
// D_d = {1,...,d} + {2d}; applications of all-ground-argument functions turn
// into branching nodes where Adam may challenge the declaration.

#include <string>
#include <unordered_map>
#include <vector>

#include "hors/errors.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace hors {

// A(1),...,A(l) for the l trailing ground arguments, counted from the right.
using DeclMap = std::vector<int>;

// Ground-variable name -> declared bound.
using VarDeclEnv = std::unordered_map<std::string, int>;

inline const char* kTopName = "Top";  // even self-loop: the opponent's claim failed
inline const char* kBotName = "Bot";  // odd self-loop: the declaration was violated

// ... <= 5 <= 3 <= 1 <= 2 <= 4 <= ...; larger is better for Eve.
inline int priorityRank(int p) { return p % 2 == 0 ? p : -p; }
inline bool priorityWorseEq(int a, int b) { return priorityRank(a) <= priorityRank(b); }

// D_d in canonical order 1 < 2 < ... < d < 2d.
inline std::vector<int> declarationDomain(int d) {
  std::vector<int> out;
  for (int r = 1; r <= d; ++r) out.push_back(r);
  out.push_back(2 * d);
  return out;
}

// Residual of declaration r after priority p is seen.
inline int shift(int r, int p) {
  if (p % 2 == 1 && p > r) return p + 1;
  if (p % 2 == 0 && p >= r) return p - 1;
  return r;
}

inline VarDeclEnv shiftEnv(const VarDeclEnv& z, int p) {
  VarDeclEnv out;
  out.reserve(z.size());
  for (const auto& [name, r] : z) out.emplace(name, shift(r, p));
  return out;
}

// Greatest priority of the sequence, 1 when empty.
inline int leader(const std::vector<int>& seq) {
  int best = 1;
  for (int p : seq) best = std::max(best, p);
  return best;
}

inline bool fulfils(const std::vector<int>& seq, int r) {
  return priorityWorseEq(r, leader(seq));
}

// All |D_d|^garValue maps in lexicographic order, index 1 most significant.
inline std::vector<DeclMap> enumerateDeclMaps(int garValue, int d) {
  std::vector<int> dom = declarationDomain(d);
  std::vector<DeclMap> out{DeclMap{}};
  for (int i = 0; i < garValue; ++i) {
    std::vector<DeclMap> next;
    next.reserve(out.size() * dom.size());
    for (const auto& m : out)
      for (int r : dom) {
        DeclMap ext = m;
        ext.push_back(r);
        next.push_back(std::move(ext));
      }
    out = std::move(next);
  }
  return out;
}

// base$[A(l),...,A(1)]. Injective: a lexable name never ends with an
// unclosed group, so the appended group decomposes uniquely.
inline std::string declName(const std::string& base, const DeclMap& a) {
  std::string s = base + "$[";
  for (std::size_t i = a.size(); i > 0; --i) {
    s += std::to_string(a[i - 1]);
    if (i > 1) s += ",";
  }
  s += "]";
  return s;
}

// Drop the trailing ground arguments; replicate every remaining argument
// once per declaration map over its own ground arity.
inline TypePtr dagType(const TypePtr& t, int d) {
  auto spine = paramTypes(t);
  int keep = static_cast<int>(spine.size()) - garOfType(t);
  std::vector<TypePtr> params;
  for (int i = 0; i < keep; ++i) {
    TypePtr rep = dagType(spine[static_cast<std::size_t>(i)], d);
    long long copies = 1;
    for (int j = 0; j < garOfType(spine[static_cast<std::size_t>(i)]); ++j) copies *= d + 1;
    for (long long c = 0; c < copies; ++c) params.push_back(rep);
  }
  return arrows(params, ground());
}

namespace detail {

struct TrContext {
  const RecursionScheme& g;
  const TypeEnv& env;
  int d;
};

inline TermPtr trTermGo(const TrContext& cx, const DeclMap& a, const VarDeclEnv& z,
                        const TermPtr& m) {
  switch (m->kind) {
    case TermKind::Nonterminal:
      return nonterminal(declName(m->name, a));
    case TermKind::Var: {
      auto it = z.find(m->name);
      if (it == z.end()) return variable(declName(m->name, a));
      return it->second % 2 == 1 ? nonterminal(kTopName) : nonterminal(kBotName);
    }
    case TermKind::Node: {
      if (!m->label.parity) throw NotParityScheme("plain node label in parity transformation");
      VarDeclEnv under = shiftEnv(z, m->label.priority);
      std::vector<TermPtr> kids;
      kids.reserve(m->children.size());
      for (const auto& c : m->children) kids.push_back(trTermGo(cx, DeclMap{}, under, c));
      return node(m->label, std::move(kids));
    }
    case TermKind::App: {
      const TermPtr& k = m->fun;
      const TermPtr& l = m->arg;
      TypePtr tk = typeOf(k, cx.env, cx.g);
      if (arityOfType(tk) == garOfType(tk)) {
        // All arguments of the head are ground: Eve declares a bound r for
        // the argument; Adam may accept the declaration or challenge it.
        std::vector<TermPtr> kids;
        for (int r : declarationDomain(cx.d)) {
          DeclMap ext = a;
          ext.push_back(r);
          TermPtr kr = trTermGo(cx, ext, z, k);
          if (r == 2 * cx.d) {
            kids.push_back(std::move(kr));
          } else {
            TermPtr lr = trTermGo(cx, DeclMap{}, shiftEnv(z, r), l);
            kids.push_back(node(parityLabel(Player::Adam, 1),
                                {std::move(kr), node(parityLabel(Player::Eve, r), {std::move(lr)})}));
          }
        }
        return node(parityLabel(Player::Eve, 1), std::move(kids));
      }
      // Some argument of the head is functional: fan the argument out over
      // every declaration map for its own trailing ground arguments.
      TypePtr tl = typeOf(l, cx.env, cx.g);
      std::vector<TermPtr> args;
      for (const auto& b : enumerateDeclMaps(garOfType(tl), cx.d))
        args.push_back(trTermGo(cx, b, z, l));
      return appN(trTermGo(cx, a, z, k), args);
    }
  }
  throw Error("malformed term in transformation", 3);
}

}  // namespace detail

inline TermPtr trTerm(const DeclMap& a, const VarDeclEnv& z, const TermPtr& m, int d,
                      const RecursionScheme& g, const TypeEnv& env) {
  detail::TrContext cx{g, env, d};
  return detail::trTermGo(cx, a, z, m);
}

// One order-reduction step: G over priorities [1,d] in simple form, order
// n >= 1, to a scheme of order n-1 whose tree has the same winner.
inline RecursionScheme transformScheme(const RecursionScheme& g) {
  validateScheme(g);
  if (alphabetKind(g) == AlphabetKind::Plain || g.maxPriority < 1)
    throw NotParityScheme("order reduction needs a parity scheme with declared priorities");
  if (!isSimpleForm(g)) throw NotSimpleForm("order reduction needs application depth <= 2");
  if (schemeOrder(g) < 1) throw Error("scheme is already order 0", 2);
  const int d = g.maxPriority;

  RecursionScheme out;
  out.maxPriority = std::max(d, 2);  // gadget rules use priorities 1 and 2
  for (const auto& x : g.ntOrder) {
    const TypePtr& tx = g.ntType.at(x);
    const Rule& rule = g.rules.at(x);
    auto spine = paramTypes(tx);
    const int k = static_cast<int>(spine.size());
    const int l = garOfType(tx);
    TypeEnv env;
    for (int i = 0; i < k; ++i) env[rule.params[static_cast<std::size_t>(i)]] = spine[static_cast<std::size_t>(i)];

    for (const auto& a : enumerateDeclMaps(l, d)) {
      std::vector<std::string> params;
      for (int i = 0; i < k - l; ++i) {
        const std::string& y = rule.params[static_cast<std::size_t>(i)];
        for (const auto& b : enumerateDeclMaps(garOfType(spine[static_cast<std::size_t>(i)]), d))
          params.push_back(declName(y, b));
      }
      VarDeclEnv z;
      for (int i = 1; i <= l; ++i)
        z.emplace(rule.params[static_cast<std::size_t>(k - l + i - 1)],
                  a[static_cast<std::size_t>(l - i)]);  // z_i gets A(l+1-i)
      TermPtr body = trTerm(DeclMap{}, z, rule.body, d, g, env);
      std::string name = declName(x, a);
      declareNonterminal(out, name, dagType(tx, d));
      out.rules[name] = Rule{std::move(params), std::move(body)};
    }
  }
  declareNonterminal(out, kBotName, ground());
  out.rules[kBotName] = Rule{{}, node(parityLabel(Player::Eve, 1), {nonterminal(kBotName)})};
  declareNonterminal(out, kTopName, ground());
  out.rules[kTopName] = Rule{{}, node(parityLabel(Player::Eve, 2), {nonterminal(kTopName)})};
  out.start = declName(g.start, DeclMap{});

  try {
    validateScheme(out);
  } catch (const Error& e) {
    throw Error(std::string("order reduction produced an invalid scheme: ") + e.what(), 3);
  }
  return out;
}

}  // namespace hors
