#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hors/errors.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace hors {

struct NormalizationReport {
  int freshNonterminalsIntroduced = 0;
  long long sizeBefore = 0;
  long long sizeAfter = 0;
  int arityBefore = 0;
  int arityAfter = 0;
};

// Growth constant asserted by the tests:
// sizeAfter <= kNormalizeGrowth * max(1, arityBefore) * sizeBefore.
inline constexpr long long kNormalizeGrowth = 8;

namespace detail {

inline bool anyConstructor(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return false;
    case TermKind::Node:
      return true;
    case TermKind::App:
      return anyConstructor(t->fun) || anyConstructor(t->arg);
  }
  return false;
}

}  // namespace detail

// A constructor occurring anywhere but at the body root.
inline bool hasProperConstructor(const TermPtr& body) {
  if (body->kind == TermKind::Node) {
    for (const auto& c : body->children)
      if (detail::anyConstructor(c)) return true;
    return false;
  }
  return detail::anyConstructor(body);
}

inline bool isStrongSimpleForm(const RecursionScheme& g) {
  for (const auto& nt : g.ntOrder) {
    const TermPtr& body = g.rules.at(nt).body;
    if (applicationDepth(body) > 2 || hasProperConstructor(body)) return false;
  }
  return true;
}

namespace detail {

// Splits rules of one scheme in place. Fresh rules receive every parameter of
// the rule they were carved out of, so their bodies stay closed.
struct Splitter {
  RecursionScheme& g;
  NormalizationReport& report;
  std::unordered_map<std::string, int> counters;

  std::string freshFor(const std::string& host) {
    int& n = counters[host];
    for (;;) {
      std::string cand = host + "#h" + std::to_string(++n);
      if (!g.ntType.count(cand)) return cand;
    }
  }

  // Fresh parameter names for the trailing arguments, avoiding the inherited ones.
  std::vector<std::string> trailingNames(const std::vector<std::string>& taken, std::size_t m) {
    std::vector<std::string> out;
    int n = 0;
    while (out.size() < m) {
      std::string cand = "w" + std::to_string(++n);
      bool clash = g.ntType.count(cand) > 0;
      for (const auto& p : taken) clash = clash || p == cand;
      if (!clash) out.push_back(cand);
    }
    return out;
  }

  // Rewrites the first offending occurrence (post-order, left to right) to a
  // fresh-nonterminal call and moves it into a new rule; returns false when
  // the body has no offending occurrence left.
  template <class Offends>
  bool hoistOnce(const std::string& host, Offends&& offends) {
    Rule& rule = g.rules.at(host);
    TermPtr hoisted;
    TermPtr body = rewrite(rule.body, true, false, offends, hoisted);
    if (!hoisted) return false;

    TypeEnv env = ruleEnv(g, host);
    TypePtr hoistedType = typeOf(hoisted, env, g);
    auto trailingTypes = paramTypes(hoistedType);
    auto trailing = trailingNames(rule.params, trailingTypes.size());

    std::string fresh = freshFor(host);
    std::vector<TypePtr> hostParamTypes = paramTypes(ntTypeOf(g, host));
    declareNonterminal(g, fresh, arrows(hostParamTypes, hoistedType));

    std::vector<TermPtr> hostArgs;
    for (const auto& p : rule.params) hostArgs.push_back(variable(p));
    TermPtr call = appN(nonterminal(fresh), hostArgs);
    rule.body = substituteMarker(body, call);

    std::vector<std::string> freshParams = rule.params;
    std::vector<TermPtr> trailingVars;
    for (const auto& w : trailing) {
      freshParams.push_back(w);
      trailingVars.push_back(variable(w));
    }
    g.rules.emplace(fresh, Rule{std::move(freshParams), appN(hoisted, trailingVars)});
    ++report.freshNonterminalsIntroduced;
    return true;
  }

 private:
  // Stand-in spliced where the hoisted occurrence was; the fresh call replaces
  // it once the fresh name exists.
  static const TermPtr& marker() {
    static const TermPtr m = variable("#hoist");
    return m;
  }

  static TermPtr substituteMarker(const TermPtr& t, const TermPtr& call) {
    if (t.get() == marker().get()) return call;
    switch (t->kind) {
      case TermKind::Nonterminal:
      case TermKind::Var:
        return t;
      case TermKind::Node: {
        std::vector<TermPtr> kids;
        bool changed = false;
        for (const auto& c : t->children) {
          kids.push_back(substituteMarker(c, call));
          changed = changed || kids.back().get() != c.get();
        }
        return changed ? node(t->label, std::move(kids)) : t;
      }
      case TermKind::App: {
        TermPtr f = substituteMarker(t->fun, call);
        TermPtr a = substituteMarker(t->arg, call);
        return (f.get() == t->fun.get() && a.get() == t->arg.get()) ? t
                                                                    : app(std::move(f), std::move(a));
      }
    }
    return t;
  }

  // Post-order walk over constructor children and application arguments of
  // flattened spines; the first occurrence with offends(..) true is swapped
  // for the marker and recorded in hoisted. underArg marks positions inside
  // an application argument.
  template <class Offends>
  TermPtr rewrite(const TermPtr& t, bool root, bool underArg, Offends&& offends,
                  TermPtr& hoisted) {
    if (hoisted) return t;
    switch (t->kind) {
      case TermKind::Nonterminal:
      case TermKind::Var:
        return t;
      case TermKind::Node: {
        std::vector<TermPtr> kids;
        bool changed = false;
        for (const auto& c : t->children) {
          kids.push_back(rewrite(c, false, underArg, offends, hoisted));
          changed = changed || kids.back().get() != c.get();
        }
        if (changed) return node(t->label, std::move(kids));
        if (offends(t, root, underArg)) {
          hoisted = t;
          return marker();
        }
        return t;
      }
      case TermKind::App: {
        auto [head, args] = flattenApp(t);
        std::vector<TermPtr> rebuilt;
        bool changed = false;
        for (const auto& a : args) {
          rebuilt.push_back(rewrite(a, false, true, offends, hoisted));
          changed = changed || rebuilt.back().get() != a.get();
        }
        if (changed) return appN(head, rebuilt);
        if (offends(t, root, underArg)) {
          hoisted = t;
          return marker();
        }
        return t;
      }
    }
    return t;
  }
};

inline bool offendingConstructor(const TermPtr& t, bool root, bool) {
  return !root && t->kind == TermKind::Node;
}

// An application of depth exactly 2 inside another application's argument is
// what makes a body exceed depth 2; minimal such subterms are the targets.
inline bool offendingApplication(const TermPtr& t, bool, bool underArg) {
  return underArg && t->kind == TermKind::App && applicationDepth(t) == 2;
}

inline void splitDeepApplications(Splitter& s, const std::string& host) {
  while (applicationDepth(s.g.rules.at(host).body) > 2)
    if (!s.hoistOnce(host, offendingApplication))
      throw Error("rule splitting failed to reduce application depth", 3);
}

}  // namespace detail

// Splits rules until every body has application depth at most 2. The tree is
// preserved: each carved-out subterm K of a rule X y1..yk -> R becomes a rule
// Y y1..yk w1..wm -> K w1..wm (trailing variables eta-expand non-ground K)
// and its occurrence in R becomes Y y1..yk.
inline std::pair<RecursionScheme, NormalizationReport> toSimpleForm(const RecursionScheme& g) {
  validateScheme(g);
  RecursionScheme out = g;
  NormalizationReport report;
  report.sizeBefore = schemeSize(g);
  report.arityBefore = maxArity(g);
  detail::Splitter splitter{out, report, {}};
  for (std::size_t i = 0; i < out.ntOrder.size(); ++i) {
    std::string host = out.ntOrder[i];
    detail::splitDeepApplications(splitter, host);
  }
  if (!isSimpleForm(out)) throw Error("rule splitting left a deep body", 3);
  report.sizeAfter = schemeSize(out);
  report.arityAfter = maxArity(out);
  return {std::move(out), report};
}

// Additionally forces constructors to rule roots: every proper constructor
// subterm moves to its own rule first, then deep applications are split (the
// second pass only ever carves out constructor-free subterms).
inline std::pair<RecursionScheme, NormalizationReport> toStrongSimpleForm(const RecursionScheme& g) {
  validateScheme(g);
  RecursionScheme out = g;
  NormalizationReport report;
  report.sizeBefore = schemeSize(g);
  report.arityBefore = maxArity(g);
  detail::Splitter splitter{out, report, {}};
  for (std::size_t i = 0; i < out.ntOrder.size(); ++i) {
    std::string host = out.ntOrder[i];
    while (hasProperConstructor(out.rules.at(host).body))
      if (!splitter.hoistOnce(host, detail::offendingConstructor))
        throw Error("rule splitting failed to expose a constructor", 3);
  }
  for (std::size_t i = 0; i < out.ntOrder.size(); ++i) {
    std::string host = out.ntOrder[i];
    detail::splitDeepApplications(splitter, host);
  }
  if (!isStrongSimpleForm(out)) throw Error("strong form postcondition failed", 3);
  report.sizeAfter = schemeSize(out);
  report.arityAfter = maxArity(out);
  return {std::move(out), report};
}

}  // namespace hors
