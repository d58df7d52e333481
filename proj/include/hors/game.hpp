#pragma once
// Finite parity games: extraction from order-0 schemes, Zielonka's recursive
// solver, and a positional-strategy enumeration solver used as an oracle.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hors/errors.hpp"
#include "hors/scheme.hpp"

namespace hors {

struct GameVertex {
  Player owner = Player::Eve;
  int priority = 1;
  std::vector<int> succ;
};

struct ParityGameGraph {
  std::vector<GameVertex> vertices;
  int root = 0;
};

// winner is defined for every vertex; strategy[v] is the chosen successor
// where owner[v] == winner[v], and -1 elsewhere.
struct Solution {
  std::vector<Player> winner;
  std::vector<int> strategy;
};

inline void checkGame(const ParityGameGraph& game) {
  int n = static_cast<int>(game.vertices.size());
  if (n == 0) throw Error("game has no vertices", 3);
  if (game.root < 0 || game.root >= n) throw Error("game root out of range", 3);
  for (int v = 0; v < n; ++v) {
    const GameVertex& gv = game.vertices[v];
    if (gv.succ.empty())
      throw Error("vertex " + std::to_string(v) + " has no successor", 3);
    if (gv.priority < 1)
      throw Error("vertex " + std::to_string(v) + " has priority < 1", 3);
    for (int s : gv.succ)
      if (s < 0 || s >= n)
        throw Error("successor id out of range at vertex " + std::to_string(v), 3);
  }
}

inline void dumpGame(const ParityGameGraph& game, std::ostream& out) {
  for (size_t v = 0; v < game.vertices.size(); ++v) {
    const GameVertex& gv = game.vertices[v];
    out << "vertex " << v << ' ' << (gv.owner == Player::Eve ? 'E' : 'A') << ' '
        << gv.priority << " -> ";
    for (size_t i = 0; i < gv.succ.size(); ++i) {
      if (i) out << ',';
      out << gv.succ[i];
    }
    out << '\n';
  }
}

inline std::string dumpGameString(const ParityGameGraph& game) {
  std::ostringstream os;
  dumpGame(game, os);
  return os.str();
}

namespace detail {

struct ZielonkaState {
  const ParityGameGraph& g;
  std::vector<std::vector<int>> pred;
  Solution sol;

  explicit ZielonkaState(const ParityGameGraph& game) : g(game) {
    int n = static_cast<int>(g.vertices.size());
    pred.resize(n);
    for (int v = 0; v < n; ++v)
      for (int s : g.vertices[v].succ) pred[s].push_back(v);
    sol.winner.assign(n, Player::Eve);
    sol.strategy.assign(n, -1);
  }

  // Least set containing target and closed under pl-moves into it; pull moves
  // for newly attracted pl-vertices land in moves.
  std::vector<char> attractor(const std::vector<char>& act,
                              const std::vector<char>& target, Player pl,
                              std::vector<int>& moves) {
    int n = static_cast<int>(g.vertices.size());
    std::vector<char> in = target;
    std::vector<int> degree(n, 0);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
      if (!act[v]) continue;
      if (in[v]) stack.push_back(v);
      if (g.vertices[v].owner != pl)
        for (int s : g.vertices[v].succ)
          if (act[s]) ++degree[v];
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : pred[v]) {
        if (!act[u] || in[u]) continue;
        if (g.vertices[u].owner == pl) {
          in[u] = 1;
          moves[u] = v;
          stack.push_back(u);
        } else if (--degree[u] == 0) {
          in[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return in;
  }

  void solve(const std::vector<char>& act) {
    int n = static_cast<int>(g.vertices.size());
    int p = -1;
    for (int v = 0; v < n; ++v)
      if (act[v]) p = std::max(p, g.vertices[v].priority);
    if (p < 0) return;
    Player pl = p % 2 == 0 ? Player::Eve : Player::Adam;
    Player op = opponent(pl);

    std::vector<char> top(n, 0);
    for (int v = 0; v < n; ++v)
      if (act[v] && g.vertices[v].priority == p) top[v] = 1;
    std::vector<int> pull(n, -1);
    std::vector<char> attr = attractor(act, top, pl, pull);

    std::vector<char> rest(n, 0);
    for (int v = 0; v < n; ++v) rest[v] = act[v] && !attr[v];
    solve(rest);

    bool oppWins = false;
    for (int v = 0; v < n; ++v)
      if (rest[v] && sol.winner[v] == op) oppWins = true;

    if (!oppWins) {
      for (int v = 0; v < n; ++v) {
        if (!attr[v]) continue;
        sol.winner[v] = pl;
        if (g.vertices[v].owner != pl) {
          sol.strategy[v] = -1;
        } else if (top[v]) {
          for (int s : g.vertices[v].succ)
            if (act[s]) {
              sol.strategy[v] = s;
              break;
            }
        } else {
          sol.strategy[v] = pull[v];
        }
      }
      return;
    }

    std::vector<char> won(n, 0);
    for (int v = 0; v < n; ++v) won[v] = rest[v] && sol.winner[v] == op;
    std::vector<int> pullB(n, -1);
    std::vector<char> trap = attractor(act, won, op, pullB);
    for (int v = 0; v < n; ++v) {
      if (!trap[v]) continue;
      if (won[v]) continue;  // keeps the recursive result
      sol.winner[v] = op;
      sol.strategy[v] = g.vertices[v].owner == op ? pullB[v] : -1;
    }
    std::vector<char> remain(n, 0);
    for (int v = 0; v < n; ++v) remain[v] = act[v] && !trap[v];
    solve(remain);
  }
};

// True when some vertex of seeds is reachable from v along edges of succMask.
inline bool maskReaches(const std::vector<uint32_t>& succMask, int v,
                        uint32_t seeds) {
  uint32_t reach = 0;
  uint32_t frontier = succMask[v];
  while (frontier & ~reach) {
    uint32_t fresh = frontier & ~reach;
    reach |= fresh;
    frontier = 0;
    uint32_t m = fresh;
    while (m) {
      int u = __builtin_ctz(m);
      m &= m - 1;
      frontier |= succMask[u];
    }
  }
  return (reach & seeds) != 0;
}

// Vertices from which the fixed strategy of pl loses: some reachable cycle in
// the restricted graph has its maximum priority of the opposing parity.
inline uint32_t badVerticesFor(const ParityGameGraph& g,
                               const std::vector<uint32_t>& succMask,
                               Player pl) {
  int n = static_cast<int>(g.vertices.size());
  uint32_t seeds = 0;
  for (int t = 0; t < n; ++t) {
    bool plGood = (g.vertices[t].priority % 2 == 0) == (pl == Player::Eve);
    if (plGood) continue;
    uint32_t allow = 0;
    for (int u = 0; u < n; ++u)
      if (g.vertices[u].priority <= g.vertices[t].priority) allow |= 1u << u;
    std::vector<uint32_t> restricted(n);
    for (int u = 0; u < n; ++u) restricted[u] = succMask[u] & allow;
    if (maskReaches(restricted, t, 1u << t)) seeds |= 1u << t;
  }
  uint32_t bad = seeds;
  for (;;) {
    uint32_t grown = bad;
    for (int v = 0; v < n; ++v)
      if (succMask[v] & bad) grown |= 1u << v;
    if (grown == bad) return bad;
    bad = grown;
  }
}

}  // namespace detail

inline Solution solveZielonka(const ParityGameGraph& game) {
  checkGame(game);
  detail::ZielonkaState z(game);
  std::vector<char> all(game.vertices.size(), 1);
  z.solve(all);
  return z.sol;
}

inline Solution bruteForceSolve(const ParityGameGraph& game,
                                int vertexLimit = 12) {
  checkGame(game);
  int n = static_cast<int>(game.vertices.size());
  if (n > vertexLimit || n > 25)
    throw TooLarge("game with " + std::to_string(n) +
                   " vertices exceeds the strategy-enumeration bound");

  uint32_t all = (1u << n) - 1;
  Solution out;
  out.winner.assign(n, Player::Eve);
  out.strategy.assign(n, -1);

  for (Player pl : {Player::Eve, Player::Adam}) {
    std::vector<int> own;
    long long combos = 1;
    for (int v = 0; v < n; ++v)
      if (game.vertices[v].owner == pl) {
        own.push_back(v);
        combos *= static_cast<long long>(game.vertices[v].succ.size());
        if (combos > (1LL << 26))
          throw TooLarge("too many positional strategies to enumerate");
      }

    std::vector<uint32_t> succMask(n, 0);
    for (int v = 0; v < n; ++v)
      if (game.vertices[v].owner != pl)
        for (int s : game.vertices[v].succ) succMask[v] |= 1u << s;

    uint32_t winUnion = 0;
    std::vector<int> choice(own.size(), 0);
    std::vector<int> uniform;
    for (int pass = 0; pass < 2; ++pass) {
      std::fill(choice.begin(), choice.end(), 0);
      for (;;) {
        for (size_t i = 0; i < own.size(); ++i)
          succMask[own[i]] = 1u << game.vertices[own[i]].succ[choice[i]];
        uint32_t win = all & ~detail::badVerticesFor(game, succMask, pl);
        if (pass == 0) {
          winUnion |= win;
        } else if (win == winUnion) {
          uniform = choice;
          break;
        }
        size_t i = 0;
        while (i < own.size()) {
          if (++choice[i] < static_cast<int>(game.vertices[own[i]].succ.size()))
            break;
          choice[i++] = 0;
        }
        if (i == own.size()) break;
      }
      if (pass == 1 && uniform.empty() && !own.empty() && winUnion != 0)
        throw Error("no uniform positional strategy found", 3);
    }

    if (pl == Player::Eve) {
      for (int v = 0; v < n; ++v)
        out.winner[v] = (winUnion & (1u << v)) ? Player::Eve : Player::Adam;
    } else {
      for (int v = 0; v < n; ++v) {
        bool adamWins = (winUnion & (1u << v)) != 0;
        if (adamWins != (out.winner[v] == Player::Adam))
          throw Error("winning regions do not partition the vertices", 3);
      }
    }
    for (size_t i = 0; i < own.size(); ++i)
      if (winUnion & (1u << own[i]))
        out.strategy[own[i]] = game.vertices[own[i]].succ[uniform[i]];
  }
  return out;
}

// Checks the certificate: strategies stay inside the owner's region, the
// loser cannot leave it, and no cycle inside a region has a hostile maximum.
inline bool certifyStrategy(const ParityGameGraph& game, const Solution& sol) {
  int n = static_cast<int>(game.vertices.size());
  if (static_cast<int>(sol.winner.size()) != n ||
      static_cast<int>(sol.strategy.size()) != n)
    return false;
  for (int v = 0; v < n; ++v) {
    Player w = sol.winner[v];
    const GameVertex& gv = game.vertices[v];
    if (gv.owner == w) {
      int s = sol.strategy[v];
      if (s < 0 || std::find(gv.succ.begin(), gv.succ.end(), s) == gv.succ.end())
        return false;
      if (sol.winner[s] != w) return false;
    } else {
      for (int s : gv.succ)
        if (sol.winner[s] != w) return false;
    }
  }
  // Restricted successor lists inside each region.
  std::vector<std::vector<int>> rsucc(n);
  for (int v = 0; v < n; ++v) {
    if (game.vertices[v].owner == sol.winner[v])
      rsucc[v] = {sol.strategy[v]};
    else
      rsucc[v] = game.vertices[v].succ;
  }
  for (int t = 0; t < n; ++t) {
    Player w = sol.winner[t];
    bool good = (game.vertices[t].priority % 2 == 0) == (w == Player::Eve);
    if (good) continue;
    // A hostile cycle through t inside its region would stay below p(t).
    std::vector<char> seen(n, 0);
    std::vector<int> stack{t};
    bool back = false;
    while (!stack.empty() && !back) {
      int v = stack.back();
      stack.pop_back();
      for (int s : rsucc[v]) {
        if (sol.winner[s] != w ||
            game.vertices[s].priority > game.vertices[t].priority)
          continue;
        if (s == t) {
          back = true;
          break;
        }
        if (!seen[s]) {
          seen[s] = 1;
          stack.push_back(s);
        }
      }
    }
    if (back) return false;
  }
  return true;
}

namespace detail {

struct GameBuilder {
  const RecursionScheme& g;
  ParityGameGraph out;
  std::unordered_map<TermPtr, int, TermHash, TermEq> memo;

  TermPtr deref(TermPtr t) {
    std::unordered_set<std::string> chain;
    while (t->kind == TermKind::Nonterminal) {
      if (!chain.insert(t->name).second)
        throw UnproductiveCycle("nonterminal cycle through " + t->name +
                                " never reaches a constructor");
      t = ruleOf(g, t->name).body;
    }
    return t;
  }

  int build(const TermPtr& raw) {
    TermPtr t = deref(raw);
    if (t->kind != TermKind::Node)
      throw Error("order-0 rule body is not a constructor tree", 3);
    auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    if (!t->label.parity)
      throw NotParityScheme("constructor " + t->label.name +
                            " carries no owner/priority");
    if (t->children.empty())
      throw ChildlessConstructor("constructor with priority " +
                                 std::to_string(t->label.priority) +
                                 " has no children");
    int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back({t->label.owner, t->label.priority, {}});
    memo.emplace(t, id);
    std::vector<int> ss;
    ss.reserve(t->children.size());
    for (const TermPtr& k : t->children) ss.push_back(build(k));
    out.vertices[id].succ = std::move(ss);
    return id;
  }
};

}  // namespace detail

inline ParityGameGraph extractGame(const RecursionScheme& g) {
  validateScheme(g);
  if (schemeOrder(g) != 0)
    throw Error("game extraction needs an order-0 scheme", 3);
  if (alphabetKind(g) == AlphabetKind::Plain)
    throw NotParityScheme("constructors carry no owner/priority");
  detail::GameBuilder b{g, {}, {}};
  b.out.root = b.build(nonterminal(g.start));
  return b.out;
}

}  // namespace hors
