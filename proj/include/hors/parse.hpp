#pragma once
// Concrete syntax. Schemes: `NAME : TYPE.` declarations followed by rules
// `NAME param* -> TERM.`; terms juxtapose atoms left-associatively, arrows
// associate right, `--` comments to end of line. Automata: %-sections.
// renderScheme emits text that parseScheme maps back to an equal scheme.

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "hors/automaton.hpp"
#include "hors/errors.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"
#include "hors/types.hpp"

namespace hors {

namespace detail {

enum class TokKind { Ident, Int, Colon, Dot, Arrow, LParen, RParen, LBracket, RBracket, Comma, Percent, End };

struct Tok {
  TokKind kind;
  std::string text;
  long long value = 0;
  int line = 1, column = 1;
};

inline bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '#';
}

// Identifiers may end in index groups `$[2,1]` or `$[]`, kept verbatim so
// generated nonterminal names survive a round trip.
inline std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  std::size_t i = 0;
  int line = 1, column = 1;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    Tok t;
    t.line = line;
    t.column = column;
    if (c == '-') {
      if (i + 1 >= src.size() || src[i + 1] != '>')
        throw ParseError("stray '-' (expected '->' or a '--' comment)", line, column);
      t.kind = TokKind::Arrow;
      bump(2);
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case ':': t.kind = TokKind::Colon; bump(1); out.push_back(std::move(t)); continue;
      case '.': t.kind = TokKind::Dot; bump(1); out.push_back(std::move(t)); continue;
      case '(': t.kind = TokKind::LParen; bump(1); out.push_back(std::move(t)); continue;
      case ')': t.kind = TokKind::RParen; bump(1); out.push_back(std::move(t)); continue;
      case '[': t.kind = TokKind::LBracket; bump(1); out.push_back(std::move(t)); continue;
      case ']': t.kind = TokKind::RBracket; bump(1); out.push_back(std::move(t)); continue;
      case ',': t.kind = TokKind::Comma; bump(1); out.push_back(std::move(t)); continue;
      case '%': t.kind = TokKind::Percent; bump(1); out.push_back(std::move(t)); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        digits.push_back(src[i]);
        bump(1);
      }
      t.kind = TokKind::Int;
      t.text = digits;
      t.value = std::stoll(digits);
      out.push_back(std::move(t));
      continue;
    }
    if (identStart(c)) {
      std::string name;
      while (i < src.size() && identChar(src[i])) {
        name.push_back(src[i]);
        bump(1);
      }
      while (i + 1 < src.size() && src[i] == '$' && src[i + 1] == '[') {
        name += "$[";
        bump(2);
        if (i < src.size() && src[i] != ']') {
          while (true) {
            if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i])))
              throw ParseError("malformed index group in '" + name + "'", line, column);
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
              name.push_back(src[i]);
              bump(1);
            }
            if (i < src.size() && src[i] == ',') {
              name.push_back(',');
              bump(1);
              continue;
            }
            break;
          }
        }
        if (i >= src.size() || src[i] != ']')
          throw ParseError("malformed index group in '" + name + "'", line, column);
        name.push_back(']');
        bump(1);
      }
      t.kind = TokKind::Ident;
      t.text = std::move(name);
      out.push_back(std::move(t));
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, column);
  }
  Tok end;
  end.kind = TokKind::End;
  end.line = line;
  end.column = column;
  out.push_back(std::move(end));
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  std::size_t at = 0;

  const Tok& cur() const { return toks[at]; }
  const Tok& ahead() const { return toks[std::min(at + 1, toks.size() - 1)]; }
  Tok take() { return toks[at++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().column);
  }
  Tok expect(TokKind kind, const std::string& what) {
    if (cur().kind != kind) fail("expected " + what);
    return take();
  }

  TypePtr parseAtomType() {
    if (cur().kind == TokKind::Ident && cur().text == "o") {
      take();
      return ground();
    }
    if (cur().kind == TokKind::LParen) {
      take();
      TypePtr t = parseType();
      expect(TokKind::RParen, "')'");
      return t;
    }
    fail("expected a type");
  }
  TypePtr parseType() {
    TypePtr lhs = parseAtomType();
    if (cur().kind == TokKind::Arrow) {
      take();
      return arrow(std::move(lhs), parseType());
    }
    return lhs;
  }

  bool startsAtom() const {
    return cur().kind == TokKind::Ident || cur().kind == TokKind::LParen ||
           cur().kind == TokKind::LBracket;
  }

  TermPtr parseAtom(const RecursionScheme& g, const std::vector<std::string>& params) {
    if (cur().kind == TokKind::Ident) {
      Tok t = take();
      if (std::find(params.begin(), params.end(), t.text) != params.end())
        return variable(t.text);
      if (g.ntType.count(t.text)) return nonterminal(t.text);
      throw ParseError("unbound name: " + t.text, t.line, t.column);
    }
    if (cur().kind == TokKind::LParen) {
      take();
      TermPtr t = parseTerm(g, params);
      expect(TokKind::RParen, "')'");
      return t;
    }
    expect(TokKind::LBracket, "a term");
    Tok name = expect(TokKind::Ident, "a label");
    Label label;
    if ((name.text == "E" || name.text == "A") && cur().kind == TokKind::Int) {
      Tok prio = take();
      if (prio.value < 1) throw ParseError("priorities must be positive", prio.line, prio.column);
      label = parityLabel(name.text == "E" ? Player::Eve : Player::Adam,
                          static_cast<int>(prio.value));
    } else {
      label = plainLabel(name.text);
    }
    std::vector<TermPtr> kids;
    while (cur().kind == TokKind::Comma) {
      take();
      kids.push_back(parseTerm(g, params));
    }
    expect(TokKind::RBracket, "']'");
    return node(std::move(label), std::move(kids));
  }

  TermPtr parseTerm(const RecursionScheme& g, const std::vector<std::string>& params) {
    TermPtr t = parseAtom(g, params);
    while (startsAtom()) t = app(std::move(t), parseAtom(g, params));
    return t;
  }
};

}  // namespace detail

inline RecursionScheme parseScheme(const std::string& text) {
  detail::Parser p{detail::lex(text)};
  RecursionScheme g;
  while (p.cur().kind != detail::TokKind::End) {
    detail::Tok name = p.expect(detail::TokKind::Ident, "a nonterminal name");
    if (p.cur().kind == detail::TokKind::Colon) {
      p.take();
      TypePtr type = p.parseType();
      p.expect(detail::TokKind::Dot, "'.'");
      if (g.ntType.count(name.text))
        throw ParseError("duplicate declaration of " + name.text, name.line, name.column);
      declareNonterminal(g, name.text, std::move(type));
      continue;
    }
    if (!g.ntType.count(name.text))
      throw ParseError("rule for undeclared nonterminal " + name.text, name.line, name.column);
    if (g.rules.count(name.text))
      throw ParseError("duplicate rule for " + name.text, name.line, name.column);
    std::vector<std::string> params;
    while (p.cur().kind == detail::TokKind::Ident) params.push_back(p.take().text);
    p.expect(detail::TokKind::Arrow, "'->'");
    TermPtr body = p.parseTerm(g, params);
    p.expect(detail::TokKind::Dot, "'.'");
    g.rules[name.text] = {std::move(params), std::move(body)};
  }
  if (!g.ntOrder.empty()) g.start = g.ntOrder.front();
  g.maxPriority = maxUsedPriority(g);
  validateScheme(g);
  return g;
}

inline std::string renderType(const TypePtr& t) { return typeToString(t); }

inline std::string renderTerm(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Nonterminal:
    case TermKind::Var:
      return t->name;
    case TermKind::Node: {
      std::string out = "[" + labelToString(t->label);
      for (const TermPtr& k : t->children) out += ", " + renderTerm(k);
      return out + "]";
    }
    case TermKind::App: {
      auto [head, args] = flattenApp(t);
      std::string out = renderTerm(head);
      for (const TermPtr& a : args) {
        if (a->kind == TermKind::App)
          out += " (" + renderTerm(a) + ")";
        else
          out += " " + renderTerm(a);
      }
      return out;
    }
  }
  return {};
}

inline std::string renderScheme(const RecursionScheme& g) {
  std::string out;
  for (const std::string& nt : g.ntOrder) out += nt + " : " + renderType(g.ntType.at(nt)) + ".\n";
  out += "\n";
  for (const std::string& nt : g.ntOrder) {
    const Rule& rule = g.rules.at(nt);
    out += nt;
    for (const std::string& y : rule.params) out += " " + y;
    out += " -> " + renderTerm(rule.body) + ".\n";
  }
  return out;
}

inline Apt parseAutomaton(const std::string& text) {
  detail::Parser p{detail::lex(text)};
  Apt a;
  bool sawInitial = false;
  while (p.cur().kind != detail::TokKind::End) {
    p.expect(detail::TokKind::Percent, "a '%' section");
    detail::Tok sec = p.expect(detail::TokKind::Ident, "a section name");
    if (sec.text == "alphabet") {
      while (p.cur().kind == detail::TokKind::Ident) {
        detail::Tok name = p.take();
        if (name.text == kOmegaLabel || name.text == kEpsilonLabel)
          throw ParseError("reserved label: " + name.text, name.line, name.column);
        p.expect(detail::TokKind::Colon, "':'");
        detail::Tok ar = p.expect(detail::TokKind::Int, "an arity");
        a.alphabet.emplace_back(name.text, static_cast<int>(ar.value));
      }
    } else if (sec.text == "states") {
      while (p.cur().kind == detail::TokKind::Ident) a.states.push_back(p.take().text);
    } else if (sec.text == "existential") {
      while (p.cur().kind == detail::TokKind::Ident) a.existential.insert(p.take().text);
    } else if (sec.text == "initial") {
      a.initial = p.expect(detail::TokKind::Ident, "a state").text;
      sawInitial = true;
    } else if (sec.text == "delta") {
      std::string q = p.expect(detail::TokKind::Ident, "a state").text;
      std::string label = p.expect(detail::TokKind::Ident, "a label").text;
      detail::Tok count = p.expect(detail::TokKind::Int, "a child count");
      p.expect(detail::TokKind::Arrow, "'->'");
      std::vector<AptMove> moves;
      while (p.cur().kind == detail::TokKind::LParen) {
        p.take();
        std::string state = p.expect(detail::TokKind::Ident, "a state").text;
        p.expect(detail::TokKind::Comma, "','");
        detail::Tok dir = p.expect(detail::TokKind::Int, "a direction");
        p.expect(detail::TokKind::RParen, "')'");
        moves.push_back({std::move(state), static_cast<int>(dir.value)});
      }
      if (moves.empty()) p.fail("expected at least one '(state,direction)' move");
      p.expect(detail::TokKind::Dot, "'.'");
      AptDeltaKey key{q, label, static_cast<int>(count.value)};
      if (a.delta.count(key))
        throw ParseError("duplicate transition for (" + q + ", " + label + ", " + count.text + ")",
                         sec.line, sec.column);
      a.delta.emplace(std::move(key), std::move(moves));
    } else if (sec.text == "priority") {
      std::string q = p.expect(detail::TokKind::Ident, "a state").text;
      std::string label = p.expect(detail::TokKind::Ident, "a label").text;
      p.expect(detail::TokKind::Arrow, "'->'");
      detail::Tok prio = p.expect(detail::TokKind::Int, "a priority");
      p.expect(detail::TokKind::Dot, "'.'");
      if (a.priority.count({q, label}))
        throw ParseError("duplicate priority for (" + q + ", " + label + ")", sec.line, sec.column);
      a.priority[{std::move(q), std::move(label)}] = static_cast<int>(prio.value);
    } else {
      throw ParseError("unknown section %" + sec.text, sec.line, sec.column);
    }
  }
  for (const auto& [name, arity] : a.alphabet) a.maxChildArity = std::max(a.maxChildArity, arity);
  if (!sawInitial) throw ParseError("missing %initial section", p.cur().line, p.cur().column);
  checkAutomaton(a);
  for (const std::string& q : a.states) {
    movesOf(a, q, kOmegaLabel, 0);
    priorityOf(a, q, kOmegaLabel);
  }
  return a;
}

}  // namespace hors
