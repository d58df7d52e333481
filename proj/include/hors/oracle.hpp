#pragma once
// Bounded semantics used as independent test oracles: truncated value trees,
// explicit-substitution reduction, expansion, the tree-level counterpart of
// the order reduction, and a whole-tree winner oracle for regular cases.

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hors/bounded_tree.hpp"
#include "hors/errors.hpp"
#include "hors/game.hpp"
#include "hors/reduce.hpp"
#include "hors/scheme.hpp"

namespace hors {

inline BtPtr boundedBT(const RecursionScheme& g, const TermPtr& m, int depth,
                       int stepBudget) {
  if (depth <= 0) return btCutoff();
  TermPtr t = m;
  for (int step = 0;; ++step) {
    if (t->kind == TermKind::Node) break;
    if (step >= stepBudget) return btCutoff();
    std::optional<TermPtr> next = headStep(g, t);
    if (!next) throw Error("closed ground term neither steps nor starts with a constructor", 3);
    t = *next;
  }
  std::vector<BtPtr> kids;
  kids.reserve(t->children.size());
  for (const TermPtr& k : t->children)
    kids.push_back(boundedBT(g, k, depth - 1, stepBudget));
  return btNode(t->label, std::move(kids));
}

struct ExtSubst {
  std::string binder;
  TermPtr bound;
};

// Ground core under a stack of explicit substitutions, innermost first.
struct ExtendedTerm {
  TermPtr core;
  std::vector<ExtSubst> substs;
};

inline std::optional<ExtendedTerm> extStep(const ExtendedTerm& e,
                                           const RecursionScheme& g,
                                           int& freshCounter) {
  auto [head, args] = flattenApp(e.core);
  if (head->kind != TermKind::Nonterminal) return std::nullopt;
  const TypePtr& tp = ntTypeOf(g, head->name);
  size_t ar = static_cast<size_t>(arityOfType(tp));
  size_t gar = static_cast<size_t>(garOfType(tp));
  if (args.size() != ar)
    throw Error("ground head application is not saturated", 3);
  const Rule& rule = ruleOf(g, head->name);

  std::unordered_map<std::string, TermPtr> map;
  std::vector<ExtSubst> added;
  for (size_t j = 0; j + gar < ar; ++j) map[rule.params[j]] = args[j];
  for (size_t i = 0; i < gar; ++i) {
    std::string fresh = kFreshVarPrefix + std::to_string(freshCounter++);
    map[rule.params[ar - gar + i]] = variable(fresh);
    added.push_back({std::move(fresh), args[ar - gar + i]});
  }
  ExtendedTerm out;
  out.core = substitute(rule.body, map);
  out.substs = std::move(added);
  out.substs.insert(out.substs.end(), e.substs.begin(), e.substs.end());
  return out;
}

namespace detail {

struct ExtUnfolder {
  const RecursionScheme& g;
  int stepBudget;  // shared across the whole unfolding, not per branch
  int freshCounter = 1;
  int stepsUsed = 0;

  BtPtr go(ExtendedTerm e, int depth) {
    if (depth <= 0) return btCutoff();
    for (;;) {
      auto [head, args] = flattenApp(e.core);
      (void)args;
      if (head->kind != TermKind::Nonterminal) break;
      if (stepsUsed >= stepBudget) return btCutoff();
      ++stepsUsed;
      e = *extStep(e, g, freshCounter);
    }
    if (!e.substs.empty()) {
      ExtSubst outer = e.substs.back();
      e.substs.pop_back();
      BtPtr body = go(std::move(e), depth - 1);
      BtPtr bound = go({outer.bound, {}}, depth - 1);
      return btSubst(std::move(body), std::move(outer.binder), std::move(bound));
    }
    if (e.core->kind == TermKind::Var) return btVar(e.core->name);
    if (e.core->kind != TermKind::Node)
      throw Error("extended core resolved to a non-constructor head", 3);
    std::vector<BtPtr> kids;
    kids.reserve(e.core->children.size());
    for (const TermPtr& k : e.core->children)
      kids.push_back(go({k, {}}, depth - 1));
    return btNode(e.core->label, std::move(kids));
  }
};

}  // namespace detail

inline BtPtr boundedBTExt(const RecursionScheme& g, const ExtendedTerm& e,
                          int depth, int stepBudget) {
  detail::ExtUnfolder u{g, stepBudget};
  return canonicalizeBinders(u.go(e, depth));
}

namespace detail {

// Pending substitutions as an immutable chain, innermost first. A variable
// resolves to its bound tree read under the strictly outer part of the chain.
struct ExpandEnv {
  std::string binder;
  BtPtr bound;
  std::shared_ptr<const ExpandEnv> outer;
};

inline BtPtr expandGo(const BtPtr& t, std::shared_ptr<const ExpandEnv> env,
                      int depth) {
  switch (t->kind) {
    case BtKind::Cutoff:
      return btCutoff();
    case BtKind::OmegaLeaf:
      return btOmega();
    case BtKind::ExplSubst: {
      auto inner =
          std::make_shared<ExpandEnv>(ExpandEnv{t->name, t->bound, env});
      return expandGo(t->body, std::move(inner), depth);
    }
    case BtKind::VarLeaf: {
      for (const ExpandEnv* s = env.get(); s; s = s->outer.get())
        if (s->binder == t->name) return expandGo(s->bound, s->outer, depth);
      throw FreeVariable("no substitution binds " + t->name);
    }
    case BtKind::Node: {
      if (depth <= 0) return btCutoff();
      std::vector<BtPtr> kids;
      kids.reserve(t->children.size());
      for (const BtPtr& k : t->children)
        kids.push_back(expandGo(k, env, depth - 1));
      return btNode(t->label, std::move(kids));
    }
  }
  return btCutoff();
}

}  // namespace detail

inline BtPtr expand(const BtPtr& t, int depth) {
  return detail::expandGo(t, nullptr, depth);
}

namespace detail {

struct TreeReducer {
  int d;

  BtPtr chain(int priority, int outDepth) {
    if (outDepth <= 0) return btCutoff();
    return btNode(parityLabel(Player::Eve, priority),
                  {chain(priority, outDepth - 1)});
  }

  BtPtr go(const VarDeclEnv& z, const BtPtr& t, int outDepth) {
    switch (t->kind) {
      case BtKind::Cutoff:
        return btCutoff();
      case BtKind::OmegaLeaf:
        throw Error("unexpected omega leaf in an extended tree", 3);
      case BtKind::VarLeaf: {
        auto it = z.find(t->name);
        if (it == z.end())
          throw UnboundVariable("no declaration for " + t->name);
        return chain(it->second % 2 == 1 ? 2 : 1, outDepth);
      }
      case BtKind::Node: {
        if (outDepth <= 0) return btCutoff();
        if (!t->label.parity)
          throw Error("constructor without owner/priority in tree reduction", 3);
        VarDeclEnv shifted = shiftEnv(z, t->label.priority);
        std::vector<BtPtr> kids;
        kids.reserve(t->children.size());
        for (const BtPtr& k : t->children)
          kids.push_back(go(shifted, k, outDepth - 1));
        return btNode(t->label, std::move(kids));
      }
      case BtKind::ExplSubst: {
        if (outDepth <= 0) return btCutoff();
        std::vector<BtPtr> kids;
        for (int r = 1; r <= d; ++r) {
          if (outDepth - 1 <= 0) {
            kids.push_back(btCutoff());
            continue;
          }
          VarDeclEnv withR = z;
          withR[t->name] = r;
          BtPtr inner = go(withR, t->body, outDepth - 2);
          BtPtr watch =
              outDepth - 2 <= 0
                  ? btCutoff()
                  : btNode(parityLabel(Player::Eve, r),
                           {go(shiftEnv(z, r), t->bound, outDepth - 3)});
          kids.push_back(btNode(parityLabel(Player::Adam, 1),
                                {std::move(inner), std::move(watch)}));
        }
        VarDeclEnv withTop = z;
        withTop[t->name] = 2 * d;
        kids.push_back(go(withTop, t->body, outDepth - 1));
        return btNode(parityLabel(Player::Eve, 1), std::move(kids));
      }
    }
    return btCutoff();
  }
};

}  // namespace detail

inline BtPtr trTree(const VarDeclEnv& z, const BtPtr& t, int d, int outDepth) {
  detail::TreeReducer r{d};
  return r.go(z, t, outDepth);
}

inline std::optional<Player> finiteGameOracle(const RecursionScheme& g,
                                              int nodeBudget) {
  validateScheme(g);
  if (alphabetKind(g) == AlphabetKind::Plain)
    throw NotParityScheme("constructors carry no owner/priority");

  struct Explorer {
    const RecursionScheme& g;
    int budget;
    ParityGameGraph game;
    std::unordered_map<TermPtr, int, TermHash, TermEq> memo;
    bool overflow = false;

    int resolve(const TermPtr& start) {  // -1 once overflowed
      std::vector<TermPtr> chain;
      std::unordered_set<TermPtr, TermHash, TermEq> seen;
      TermPtr t = start;
      for (;;) {
        auto it = memo.find(t);
        if (it != memo.end()) {
          for (const TermPtr& c : chain) memo.emplace(c, it->second);
          return it->second;
        }
        if (t->kind == TermKind::Node) break;
        if (!seen.insert(t).second)
          throw UnproductiveCycle("head reduction loops without a constructor");
        chain.push_back(t);
        if (static_cast<int>(chain.size()) > budget) {
          overflow = true;
          return -1;
        }
        std::optional<TermPtr> next = headStep(g, t);
        if (!next)
          throw Error("closed ground term neither steps nor starts with a constructor", 3);
        t = *next;
      }
      if (static_cast<int>(game.vertices.size()) >= budget) {
        overflow = true;
        return -1;
      }
      if (!t->label.parity)
        throw NotParityScheme("constructor " + t->label.name +
                              " carries no owner/priority");
      if (t->children.empty())
        throw ChildlessConstructor("constructor with priority " +
                                   std::to_string(t->label.priority) +
                                   " has no children");
      int id = static_cast<int>(game.vertices.size());
      game.vertices.push_back({t->label.owner, t->label.priority, {}});
      memo.emplace(t, id);
      for (const TermPtr& c : chain) memo.emplace(c, id);
      std::vector<int> ss;
      for (const TermPtr& k : t->children) {
        int s = resolve(k);
        if (s < 0) return -1;
        ss.push_back(s);
      }
      game.vertices[id].succ = std::move(ss);
      return id;
    }
  };

  Explorer ex{g, nodeBudget, {}, {}, false};
  int root = ex.resolve(nonterminal(g.start));
  if (root < 0 || ex.overflow) return std::nullopt;
  ex.game.root = root;
  Solution sol = solveZielonka(ex.game);
  return sol.winner[root];
}

}  // namespace hors
