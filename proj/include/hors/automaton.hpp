#pragma once
// Alternating parity tree automata: totality checks against a scheme's
// alphabet, bounded run trees, the set of states accepting the divergent
// tree, and the wrapper step that turns divergence into visible input.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hors/bounded_tree.hpp"
#include "hors/errors.hpp"
#include "hors/game.hpp"
#include "hors/scheme.hpp"

namespace hors {

// Reserved label names; user alphabets may use neither.
inline const std::string kOmegaLabel = "_omega";
inline const std::string kEpsilonLabel = "_eps";

struct AptMove {
  std::string state;
  int direction = 0;  // 0 re-reads the current input node
};

inline bool operator==(const AptMove& a, const AptMove& b) {
  return a.state == b.state && a.direction == b.direction;
}

// (state, label, child count). Rows are keyed by the child count actually
// seen, so one label may carry rows for several arities up to maxChildArity.
using AptDeltaKey = std::tuple<std::string, std::string, int>;

struct Apt {
  std::vector<std::pair<std::string, int>> alphabet;  // declaration order; _omega stays implicit
  int maxChildArity = 0;
  std::vector<std::string> states;  // declaration order fixes every per-state iteration
  std::set<std::string> existential;
  std::string initial;
  std::map<AptDeltaKey, std::vector<AptMove>> delta;
  std::map<std::pair<std::string, std::string>, int> priority;
};

inline bool isExistential(const Apt& a, const std::string& q) {
  return a.existential.count(q) != 0;
}

inline const std::vector<AptMove>& movesOf(const Apt& a, const std::string& q,
                                           const std::string& label, int childCount) {
  auto it = a.delta.find({q, label, childCount});
  if (it == a.delta.end() || it->second.empty())
    throw MissingTransition("no transition for (" + q + ", " + label + ", " +
                            std::to_string(childCount) + ")");
  return it->second;
}

inline int priorityOf(const Apt& a, const std::string& q, const std::string& label) {
  auto it = a.priority.find({q, label});
  if (it == a.priority.end())
    throw MissingTransition("no priority for (" + q + ", " + label + ")");
  return it->second;
}

// Size counts transition entries, not states.
inline long long aptSize(const Apt& a) {
  long long s = 0;
  for (const auto& [key, moves] : a.delta) s += static_cast<long long>(moves.size());
  return s;
}

inline int maxPriorityOf(const Apt& a) {
  int d = 0;
  for (const auto& [key, p] : a.priority) d = std::max(d, p);
  return d;
}

// Internal consistency, independent of any scheme.
inline void checkAutomaton(const Apt& a) {
  if (a.states.empty()) throw ValidationError("automaton declares no states");
  std::set<std::string> qs(a.states.begin(), a.states.end());
  if (qs.size() != a.states.size()) throw ValidationError("duplicate state declaration");
  if (!qs.count(a.initial)) throw ValidationError("initial state not declared: " + a.initial);
  for (const auto& q : a.existential)
    if (!qs.count(q)) throw ValidationError("existential state not declared: " + q);

  std::set<std::string> labels;
  for (const auto& [name, arity] : a.alphabet) {
    if (name == kOmegaLabel) throw ValidationError(kOmegaLabel + " may not be declared");
    if (!labels.insert(name).second) throw ValidationError("duplicate label: " + name);
    if (arity < 0 || arity > a.maxChildArity)
      throw ValidationError("arity of " + name + " outside [0, maxChildArity]");
  }

  for (const auto& [key, moves] : a.delta) {
    const auto& [q, label, count] = key;
    if (!qs.count(q)) throw ValidationError("transition from undeclared state: " + q);
    if (label != kOmegaLabel && !labels.count(label))
      throw ValidationError("transition on undeclared label: " + label);
    if (label == kOmegaLabel && count != 0)
      throw ValidationError(kOmegaLabel + " rows must have child count 0");
    if (count < 0 || count > a.maxChildArity)
      throw ArityExceedsMax("child count " + std::to_string(count) + " exceeds maximum");
    if (moves.empty())
      throw ValidationError("empty transition set for (" + q + ", " + label + ")");
    for (const AptMove& mv : moves) {
      if (!qs.count(mv.state)) throw ValidationError("transition into undeclared state: " + mv.state);
      if (mv.direction < 0 || mv.direction > count)
        throw DirectionOutOfRange("direction " + std::to_string(mv.direction) + " at (" + q +
                                  ", " + label + ", " + std::to_string(count) + ")");
    }
  }

  for (const auto& [key, p] : a.priority) {
    if (!qs.count(key.first)) throw ValidationError("priority for undeclared state: " + key.first);
    if (key.second != kOmegaLabel && !labels.count(key.second))
      throw ValidationError("priority for undeclared label: " + key.second);
    if (p < 1) throw ValidationError("priorities must be positive");
  }
}

// Totality relative to a scheme: every (label, child count) the scheme's
// bodies can produce must have a transition and a priority from every state.
// requireOmega additionally demands the divergence rows; it is dropped for
// automata produced by epsilonEliminate, whose input trees never diverge.
inline void validateAutomaton(const Apt& a, const RecursionScheme& g, bool requireOmega = true) {
  checkAutomaton(a);
  if (alphabetKind(g) == AlphabetKind::Parity)
    throw ValidationError("automata run on plain-labeled schemes");

  std::map<std::string, int> declared(a.alphabet.begin(), a.alphabet.end());
  for (const auto& [label, arity] : usedLabelArities(g)) {
    if (!declared.count(label)) throw ValidationError("label not in automaton alphabet: " + label);
    if (arity > a.maxChildArity)
      throw ArityExceedsMax("label " + label + " used with " + std::to_string(arity) +
                            " children, maximum is " + std::to_string(a.maxChildArity));
    for (const std::string& q : a.states) {
      movesOf(a, q, label, arity);
      priorityOf(a, q, label);
    }
  }
  if (requireOmega) {
    for (const std::string& q : a.states) {
      movesOf(a, q, kOmegaLabel, 0);
      priorityOf(a, q, kOmegaLabel);
    }
  }
}

// States from which the automaton accepts the single-node divergent tree.
// Reading that tree never moves, so the run is a play over Q alone: a finite
// parity game with the omega rows as edges.
inline std::set<std::string> computeQacc(const Apt& a) {
  checkAutomaton(a);
  std::map<std::string, int> index;
  for (const std::string& q : a.states) index.emplace(q, static_cast<int>(index.size()));

  ParityGameGraph game;
  for (const std::string& q : a.states) {
    GameVertex v;
    v.owner = isExistential(a, q) ? Player::Eve : Player::Adam;
    v.priority = priorityOf(a, q, kOmegaLabel);
    for (const AptMove& mv : movesOf(a, q, kOmegaLabel, 0)) v.succ.push_back(index.at(mv.state));
    game.vertices.push_back(std::move(v));
  }
  game.root = 0;

  Solution sol = solveZielonka(game);
  std::set<std::string> acc;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    if (sol.winner[i] == Player::Eve) acc.insert(a.states[i]);
  return acc;
}

// Run tree of the automaton on a truncated input tree, itself truncated.
// Each run node consumes one unit of depth; the input position descends at
// most one level per step, so an input resolved to depth k supports an exact
// run tree to depth k. The divergence leaf is read through the omega rows.
inline BtPtr boundedRunTree(const Apt& a, const std::string& q, const BtPtr& t, int depth) {
  if (depth <= 0) return btCutoff();

  std::string label;
  int count = 0;
  switch (t->kind) {
    case BtKind::Cutoff:
      return btCutoff();
    case BtKind::OmegaLeaf:
      label = kOmegaLabel;
      break;
    case BtKind::Node:
      if (t->label.parity) throw ValidationError("run trees are defined over plain-labeled trees");
      label = t->label.name;
      count = static_cast<int>(t->children.size());
      break;
    case BtKind::VarLeaf:
      throw Error("run tree over a tree with free variables", 3);
    case BtKind::ExplSubst:
      throw Error("run tree over a tree with explicit substitutions", 3);
  }

  Player owner = isExistential(a, q) ? Player::Eve : Player::Adam;
  int p = priorityOf(a, q, label);
  std::vector<BtPtr> kids;
  for (const AptMove& mv : movesOf(a, q, label, count)) {
    if (mv.direction > count)
      throw DirectionOutOfRange("direction " + std::to_string(mv.direction) + " at (" + q + ", " +
                                label + ", " + std::to_string(count) + ")");
    const BtPtr& next = mv.direction == 0 ? t : t->children[static_cast<std::size_t>(mv.direction - 1)];
    kids.push_back(boundedRunTree(a, mv.state, next, depth - 1));
  }
  return btNode(parityLabel(owner, p), std::move(kids));
}

// Makes every rewriting step of the scheme visible to the automaton: each
// rule body is wrapped in an epsilon node, and the automaton's epsilon rows
// pass through it without moving state. Divergence then shows up as an
// infinite epsilon chain; its priority is even exactly from the states that
// accepted the divergent tree, so acceptance is preserved while the omega
// rows become dead weight and are dropped. Shifting every alphabet priority
// by 2 keeps the relative parity order intact.
inline std::pair<RecursionScheme, Apt> epsilonEliminate(const RecursionScheme& g, const Apt& a) {
  validateScheme(g);
  for (const auto& [label, arity] : usedLabelArities(g))
    if (label == kOmegaLabel || label == kEpsilonLabel)
      throw ValidationError("reserved label in scheme: " + label);
  validateAutomaton(a, g, /*requireOmega=*/true);
  std::set<std::string> acc = computeQacc(a);

  RecursionScheme g2 = g;
  for (auto& [name, rule] : g2.rules)
    rule.body = node(plainLabel(kEpsilonLabel), {rule.body});

  Apt a2;
  a2.alphabet = a.alphabet;
  a2.alphabet.emplace_back(kEpsilonLabel, 1);
  a2.maxChildArity = std::max(a.maxChildArity, 1);
  a2.states = a.states;
  a2.existential = a.existential;
  a2.initial = a.initial;
  for (const auto& [key, moves] : a.delta)
    if (std::get<1>(key) != kOmegaLabel) a2.delta.emplace(key, moves);
  for (const auto& [key, p] : a.priority)
    if (key.second != kOmegaLabel) a2.priority.emplace(key, p + 2);
  for (const std::string& q : a.states) {
    a2.delta[{q, kEpsilonLabel, 0}] = {AptMove{q, 0}};
    for (int l = 1; l <= a2.maxChildArity; ++l) a2.delta[{q, kEpsilonLabel, l}] = {AptMove{q, 1}};
    a2.priority[{q, kEpsilonLabel}] = acc.count(q) ? 2 : 1;
  }
  return {std::move(g2), std::move(a2)};
}

}  // namespace hors
