#pragma once

// Shared test utilities: independent recomputations used as oracles, type
// enumeration, and a deterministic RNG for reproducible random cases.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hors/game.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace horstest {

// Structural scheme equality: same declarations, rules, and start data.
inline bool schemeEq(const hors::RecursionScheme& a, const hors::RecursionScheme& b) {
  if (a.ntOrder != b.ntOrder || a.start != b.start || a.maxPriority != b.maxPriority) return false;
  for (const auto& nt : a.ntOrder) {
    if (!b.ntType.count(nt) || !hors::typeEq(a.ntType.at(nt), b.ntType.at(nt))) return false;
    auto ra = a.rules.find(nt);
    auto rb = b.rules.find(nt);
    if ((ra == a.rules.end()) != (rb == b.rules.end())) return false;
    if (ra == a.rules.end()) continue;
    if (ra->second.params != rb->second.params) return false;
    if (!hors::termEq(ra->second.body, rb->second.body)) return false;
  }
  return true;
}

// Independent size recomputation over an explicit stack.
inline long long termSizeNaive(const hors::TermPtr& root) {
  long long n = 0;
  std::vector<hors::TermPtr> stack{root};
  while (!stack.empty()) {
    hors::TermPtr t = stack.back();
    stack.pop_back();
    ++n;
    if (t->kind == hors::TermKind::App) {
      stack.push_back(t->fun);
      stack.push_back(t->arg);
    } else if (t->kind == hors::TermKind::Node) {
      for (const auto& c : t->children) stack.push_back(c);
    }
  }
  return n;
}

// Independent application-depth recomputation: enumerate every root-to-leaf
// path and count how many application spines it enters.
inline void appDepthPaths(const hors::TermPtr& t, int entered, int& best) {
  if (entered > best) best = entered;
  switch (t->kind) {
    case hors::TermKind::Nonterminal:
    case hors::TermKind::Var:
      return;
    case hors::TermKind::Node:
      for (const auto& c : t->children) appDepthPaths(c, entered, best);
      return;
    case hors::TermKind::App: {
      auto [head, args] = hors::flattenApp(t);
      (void)head;
      for (const auto& a : args) appDepthPaths(a, entered + 1, best);
      return;
    }
  }
}

inline int applicationDepthNaive(const hors::TermPtr& t) {
  int best = 0;
  appDepthPaths(t, 0, best);
  return best;
}

inline long long schemeSizeNaive(const hors::RecursionScheme& g) {
  long long s = 0;
  for (const auto& nt : g.ntOrder) {
    const auto& r = g.rules.at(nt);
    s += termSizeNaive(r.body) + static_cast<long long>(r.params.size());
  }
  return s;
}

inline int countArrows(const hors::TypePtr& t) {
  if (hors::isGround(t)) return 0;
  return 1 + countArrows(t->param) + countArrows(t->result);
}

// All simple types with order <= maxOrder, arity <= maxArity at every level,
// and at most maxArrows arrows in total. Fixpoint closure under
// "arrows(k-tuple of known types, o)"; every type decomposes that way.
inline std::vector<hors::TypePtr> enumerateTypes(int maxOrder, int maxArity, int maxArrows) {
  std::vector<hors::TypePtr> out{hors::ground()};
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t n = out.size();
    for (int k = 1; k <= maxArity; ++k) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
      while (true) {
        std::vector<hors::TypePtr> params;
        for (std::size_t i : idx) params.push_back(out[i]);
        hors::TypePtr cand = hors::arrows(params, hors::ground());
        if (countArrows(cand) <= maxArrows && hors::orderOfType(cand) <= maxOrder) {
          bool fresh = true;
          for (const auto& t : out)
            if (hors::typeEq(t, cand)) {
              fresh = false;
              break;
            }
          if (fresh) {
            out.push_back(cand);
            grew = true;
          }
        }
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] + 1 == n) {
          idx[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
      }
    }
  }
  return out;
}

// Deterministic RNG (64-bit LCG) so failures reproduce across runs.
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 17;
  }
  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline hors::ParityGameGraph genGame(Lcg& rng, int n, int d, int maxOut = 2) {
  hors::ParityGameGraph game;
  game.vertices.resize(n);
  for (int v = 0; v < n; ++v) {
    hors::GameVertex& gv = game.vertices[v];
    gv.owner = rng.range(0, 1) ? hors::Player::Adam : hors::Player::Eve;
    gv.priority = rng.range(1, d);
    int out = rng.range(1, std::min(maxOut, n));
    while (static_cast<int>(gv.succ.size()) < out) {
      int s = rng.range(0, n - 1);
      if (std::find(gv.succ.begin(), gv.succ.end(), s) == gv.succ.end())
        gv.succ.push_back(s);
    }
  }
  game.root = rng.range(0, n - 1);
  return game;
}

// All games on n vertices with priorities in [1, d] and out-degree 1 or 2.
template <class F>
void forEachGame(int n, int d, F&& fn) {
  std::vector<std::vector<int>> succSets;
  for (int i = 0; i < n; ++i) succSets.push_back({i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) succSets.push_back({i, j});
  long long perVertex = 2LL * d * static_cast<long long>(succSets.size());
  std::vector<long long> idx(n, 0);
  for (;;) {
    hors::ParityGameGraph game;
    game.vertices.resize(n);
    for (int v = 0; v < n; ++v) {
      long long code = idx[v];
      hors::GameVertex& gv = game.vertices[v];
      gv.owner = code % 2 ? hors::Player::Adam : hors::Player::Eve;
      code /= 2;
      gv.priority = 1 + static_cast<int>(code % d);
      code /= d;
      gv.succ = succSets[static_cast<size_t>(code)];
    }
    fn(game);
    int v = 0;
    while (v < n && ++idx[v] == perVertex) idx[v++] = 0;
    if (v == n) return;
  }
}

}  // namespace horstest
