#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hors/errors.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace hors {

struct Rule {
  std::vector<std::string> params;
  TermPtr body;
};

// Rules X y1 ... yk -> R over a parity alphabet (maxPriority = d >= 1) or a
// plain one (maxPriority = 0). ntOrder fixes rendering and the start symbol.
struct RecursionScheme {
  std::vector<std::string> ntOrder;
  std::unordered_map<std::string, TypePtr> ntType;
  std::unordered_map<std::string, Rule> rules;
  std::string start;
  int maxPriority = 0;
};

inline void declareNonterminal(RecursionScheme& g, const std::string& name, TypePtr type) {
  if (g.ntType.count(name)) throw ValidationError("duplicate nonterminal: " + name);
  g.ntOrder.push_back(name);
  g.ntType.emplace(name, std::move(type));
}

inline const TypePtr& ntTypeOf(const RecursionScheme& g, const std::string& name) {
  auto it = g.ntType.find(name);
  if (it == g.ntType.end()) throw UnboundName(name);
  return it->second;
}

inline const Rule& ruleOf(const RecursionScheme& g, const std::string& name) {
  auto it = g.rules.find(name);
  if (it == g.rules.end()) throw UnboundName(name);
  return it->second;
}

using TypeEnv = std::unordered_map<std::string, TypePtr>;

// Parameter name -> type environment for one rule, read off the nonterminal's type.
inline TypeEnv ruleEnv(const RecursionScheme& g, const std::string& nt) {
  const Rule& r = ruleOf(g, nt);
  auto spine = paramTypes(ntTypeOf(g, nt));
  if (spine.size() != r.params.size())
    throw ArityMismatch("rule for " + nt + " binds " + std::to_string(r.params.size()) +
                        " parameters but its type has arity " + std::to_string(spine.size()));
  TypeEnv env;
  for (std::size_t i = 0; i < r.params.size(); ++i) env[r.params[i]] = spine[i];
  return env;
}

inline TypePtr typeOf(const TermPtr& t, const TypeEnv& env, const RecursionScheme& g) {
  switch (t->kind) {
    case TermKind::Nonterminal:
      return ntTypeOf(g, t->name);
    case TermKind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw UnboundName(t->name);
      return it->second;
    }
    case TermKind::Node: {
      for (const auto& c : t->children)
        if (!isGround(typeOf(c, env, g)))
          throw TypeMismatch("constructor child is not ground-typed");
      return ground();
    }
    case TermKind::App: {
      TypePtr f = typeOf(t->fun, env, g);
      if (isGround(f)) throw TypeMismatch("ground term applied to an argument");
      TypePtr a = typeOf(t->arg, env, g);
      if (!typeEq(f->param, a))
        throw TypeMismatch("argument type " + typeToString(a) + " does not match expected " +
                           typeToString(f->param));
      return f->result;
    }
  }
  throw TypeMismatch("malformed term");
}

enum class AlphabetKind { Empty, Parity, Plain };

namespace detail {
inline void scanLabels(const TermPtr& t, AlphabetKind& kind, int& maxPrio,
                       std::set<std::pair<std::string, int>>* plainArities) {
  switch (t->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return;
    case TermKind::Node: {
      AlphabetKind here = t->label.parity ? AlphabetKind::Parity : AlphabetKind::Plain;
      if (kind == AlphabetKind::Empty) kind = here;
      if (kind != here) throw ValidationError("mixed parity and plain node labels");
      if (t->label.parity) maxPrio = std::max(maxPrio, t->label.priority);
      if (!t->label.parity && plainArities)
        plainArities->insert({t->label.name, static_cast<int>(t->children.size())});
      for (const auto& c : t->children) scanLabels(c, kind, maxPrio, plainArities);
      return;
    }
    case TermKind::App:
      scanLabels(t->fun, kind, maxPrio, plainArities);
      scanLabels(t->arg, kind, maxPrio, plainArities);
      return;
  }
}
}  // namespace detail

inline AlphabetKind alphabetKind(const RecursionScheme& g) {
  AlphabetKind kind = AlphabetKind::Empty;
  int maxPrio = 0;
  for (const auto& nt : g.ntOrder)
    if (auto it = g.rules.find(nt); it != g.rules.end())
      detail::scanLabels(it->second.body, kind, maxPrio, nullptr);
  return kind;
}

// (label, arity) pairs occurring in rule bodies of a plain scheme.
inline std::set<std::pair<std::string, int>> usedLabelArities(const RecursionScheme& g) {
  AlphabetKind kind = AlphabetKind::Empty;
  int maxPrio = 0;
  std::set<std::pair<std::string, int>> out;
  for (const auto& nt : g.ntOrder)
    if (auto it = g.rules.find(nt); it != g.rules.end())
      detail::scanLabels(it->second.body, kind, maxPrio, &out);
  return out;
}

inline int maxUsedPriority(const RecursionScheme& g) {
  AlphabetKind kind = AlphabetKind::Empty;
  int maxPrio = 0;
  for (const auto& nt : g.ntOrder)
    if (auto it = g.rules.find(nt); it != g.rules.end())
      detail::scanLabels(it->second.body, kind, maxPrio, nullptr);
  return maxPrio;
}

inline void validateScheme(const RecursionScheme& g) {
  if (g.ntOrder.empty()) throw ValidationError("scheme declares no nonterminals");
  if (g.ntOrder.size() != g.ntType.size()) throw ValidationError("nonterminal index out of sync");
  if (g.ntType.find(g.start) == g.ntType.end())
    throw ValidationError("start symbol " + g.start + " is not declared");
  if (!isGround(g.ntType.at(g.start)))
    throw ValidationError("start symbol " + g.start + " is not ground-typed");
  for (const auto& nt : g.ntOrder)
    if (!g.rules.count(nt)) throw ValidationError("nonterminal " + nt + " has no rule");
  for (const auto& [nt, rule] : g.rules) {
    if (!g.ntType.count(nt)) throw ValidationError("rule for undeclared nonterminal " + nt);
    std::unordered_set<std::string> seen;
    for (const auto& p : rule.params) {
      if (!seen.insert(p).second)
        throw ValidationError("rule for " + nt + " repeats parameter " + p);
      if (g.ntType.count(p))
        throw ValidationError("parameter " + p + " of " + nt + " shadows a nonterminal");
    }
    TypeEnv env = ruleEnv(g, nt);
    if (!isGround(typeOf(rule.body, env, g)))
      throw TypeMismatch("body of " + nt + " is not ground-typed");
  }
  AlphabetKind kind = alphabetKind(g);
  if (kind == AlphabetKind::Parity || g.maxPriority > 0) {
    if (kind == AlphabetKind::Plain)
      throw ValidationError("plain labels in a scheme declared with priorities");
    if (g.maxPriority < 1) throw ValidationError("parity scheme must declare maxPriority >= 1");
    int used = maxUsedPriority(g);
    if (used > g.maxPriority)
      throw ValidationError("priority " + std::to_string(used) + " exceeds declared bound " +
                            std::to_string(g.maxPriority));
  }
}

// Head rewrite of a closed ground term; absent when the head is a constructor
// (or the term is otherwise not rewritable).
inline std::optional<TermPtr> headStep(const RecursionScheme& g, const TermPtr& t) {
  auto [head, args] = flattenApp(t);
  if (head->kind != TermKind::Nonterminal) return std::nullopt;
  auto it = g.rules.find(head->name);
  if (it == g.rules.end()) throw UnboundName(head->name);
  const Rule& rule = it->second;
  if (rule.params.size() != args.size()) return std::nullopt;
  if (args.empty()) return rule.body;
  std::unordered_map<std::string, TermPtr> bind;
  for (std::size_t i = 0; i < args.size(); ++i) bind.emplace(rule.params[i], args[i]);
  return substitute(rule.body, bind);
}

inline int schemeOrder(const RecursionScheme& g) {
  int ord = 0;
  for (const auto& nt : g.ntOrder) ord = std::max(ord, orderOfType(g.ntType.at(nt)));
  return ord;
}

// Sum of |R| + k over all rules X y1 ... yk -> R.
inline long long schemeSize(const RecursionScheme& g) {
  long long s = 0;
  for (const auto& nt : g.ntOrder) {
    const Rule& r = g.rules.at(nt);
    s += termSize(r.body) + static_cast<long long>(r.params.size());
  }
  return s;
}

// Every rule body has application depth at most 2.
inline bool isSimpleForm(const RecursionScheme& g) {
  for (const auto& nt : g.ntOrder)
    if (applicationDepth(g.rules.at(nt).body) > 2) return false;
  return true;
}

// Largest arity among all types appearing in nonterminal signatures.
inline int maxArity(const RecursionScheme& g) {
  int a = 0;
  for (const auto& nt : g.ntOrder) a = std::max(a, deepMaxArity(g.ntType.at(nt)));
  return a;
}

inline std::string freshName(const RecursionScheme& g, const std::string& base) {
  if (!g.ntType.count(base)) return base;
  for (int i = 2;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!g.ntType.count(cand)) return cand;
  }
}

}  // namespace hors
