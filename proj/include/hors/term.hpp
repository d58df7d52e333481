#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hors/types.hpp"

namespace hors {

enum class Player { Eve, Adam };

inline Player opponent(Player p) { return p == Player::Eve ? Player::Adam : Player::Eve; }

// Tree node label: (owner, priority) for parity alphabets, a bare name otherwise.
struct Label {
  bool parity = false;
  Player owner = Player::Eve;
  int priority = 0;
  std::string name;
};

inline Label parityLabel(Player owner, int priority) { return Label{true, owner, priority, {}}; }
inline Label plainLabel(std::string name) { return Label{false, Player::Eve, 0, std::move(name)}; }

inline bool operator==(const Label& a, const Label& b) {
  if (a.parity != b.parity) return false;
  if (a.parity) return a.owner == b.owner && a.priority == b.priority;
  return a.name == b.name;
}
inline bool operator!=(const Label& a, const Label& b) { return !(a == b); }

inline std::string labelToString(const Label& l) {
  if (!l.parity) return l.name;
  return (l.owner == Player::Eve ? std::string("E ") : std::string("A ")) + std::to_string(l.priority);
}

enum class TermKind { Nonterminal, Var, Node, App };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable applicative term. Hash is precomputed so memo tables stay cheap.
struct Term {
  TermKind kind;
  std::string name;               // Nonterminal, Var
  Label label;                    // Node
  std::vector<TermPtr> children;  // Node
  TermPtr fun;                    // App
  TermPtr arg;                    // App
  std::size_t hash = 0;
};

namespace detail {
inline std::size_t hashMix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
inline std::size_t hashLabel(const Label& l) {
  if (l.parity)
    return hashMix(l.owner == Player::Eve ? 11 : 13, static_cast<std::size_t>(l.priority));
  return hashMix(17, std::hash<std::string>{}(l.name));
}
}  // namespace detail

inline TermPtr nonterminal(std::string name) {
  std::size_t h = detail::hashMix(1, std::hash<std::string>{}(name));
  return std::make_shared<Term>(Term{TermKind::Nonterminal, std::move(name), {}, {}, nullptr, nullptr, h});
}

inline TermPtr variable(std::string name) {
  std::size_t h = detail::hashMix(2, std::hash<std::string>{}(name));
  return std::make_shared<Term>(Term{TermKind::Var, std::move(name), {}, {}, nullptr, nullptr, h});
}

inline TermPtr node(Label label, std::vector<TermPtr> children) {
  std::size_t h = detail::hashMix(3, detail::hashLabel(label));
  for (const auto& c : children) h = detail::hashMix(h, c->hash);
  return std::make_shared<Term>(
      Term{TermKind::Node, {}, std::move(label), std::move(children), nullptr, nullptr, h});
}

inline TermPtr app(TermPtr fun, TermPtr arg) {
  std::size_t h = detail::hashMix(5, fun->hash);
  h = detail::hashMix(h, arg->hash);
  return std::make_shared<Term>(Term{TermKind::App, {}, {}, {}, std::move(fun), std::move(arg), h});
}

inline TermPtr appN(TermPtr fun, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(fun);
  for (const auto& a : args) t = app(t, a);
  return t;
}

inline bool termEq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return a->name == b->name;
    case TermKind::Node: {
      if (a->label != b->label || a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!termEq(a->children[i], b->children[i])) return false;
      return true;
    }
    case TermKind::App:
      return termEq(a->fun, b->fun) && termEq(a->arg, b->arg);
  }
  return false;
}

struct TermHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash; }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return termEq(a, b); }
};

// Head and argument list of a (possibly nested) application spine.
inline std::pair<TermPtr, std::vector<TermPtr>> flattenApp(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr head = t;
  while (head->kind == TermKind::App) {
    args.push_back(head->arg);
    head = head->fun;
  }
  std::reverse(args.begin(), args.end());
  return {head, std::move(args)};
}

// |X| = |y| = 1, |K L| = 1 + |K| + |L|, |<a,K1..Kk>| = 1 + sum |Ki|.
inline long long termSize(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return 1;
    case TermKind::Node: {
      long long s = 1;
      for (const auto& c : t->children) s += termSize(c);
      return s;
    }
    case TermKind::App:
      return 1 + termSize(t->fun) + termSize(t->arg);
  }
  return 0;
}

// Maximal number of applications on one branch; a compound application
// X K1 ... Kk counts once. Childless constructors give 0.
inline int applicationDepth(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return 0;
    case TermKind::Node: {
      int best = 0;
      for (const auto& c : t->children) best = std::max(best, applicationDepth(c));
      return best;
    }
    case TermKind::App: {
      auto [head, args] = flattenApp(t);
      int best = 0;
      for (const auto& a : args) best = std::max(best, applicationDepth(a) + 1);
      return best;
    }
  }
  return 0;
}

// Simultaneous substitution; the calculus has no binders, so no capture.
inline TermPtr substitute(const TermPtr& t,
                          const std::unordered_map<std::string, TermPtr>& bindings) {
  switch (t->kind) {
    case TermKind::Nonterminal:
      return t;
    case TermKind::Var: {
      auto it = bindings.find(t->name);
      return it == bindings.end() ? t : it->second;
    }
    case TermKind::Node: {
      std::vector<TermPtr> kids;
      kids.reserve(t->children.size());
      bool changed = false;
      for (const auto& c : t->children) {
        kids.push_back(substitute(c, bindings));
        changed = changed || kids.back().get() != c.get();
      }
      return changed ? node(t->label, std::move(kids)) : t;
    }
    case TermKind::App: {
      TermPtr f = substitute(t->fun, bindings);
      TermPtr a = substitute(t->arg, bindings);
      return (f.get() == t->fun.get() && a.get() == t->arg.get()) ? t : app(std::move(f), std::move(a));
    }
  }
  return t;
}

inline void collectFreeVars(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      out.push_back(t->name);
      return;
    case TermKind::Nonterminal:
      return;
    case TermKind::Node:
      for (const auto& c : t->children) collectFreeVars(c, out);
      return;
    case TermKind::App:
      collectFreeVars(t->fun, out);
      collectFreeVars(t->arg, out);
      return;
  }
}

}  // namespace hors
