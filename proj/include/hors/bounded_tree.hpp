#pragma once
// Depth-truncated trees. Cutoff marks the truncation frontier and is treated
// as "unknown" by every comparison; a finite budget can never certify omega.

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hors/errors.hpp"
#include "hors/term.hpp"

namespace hors {

enum class BtKind { Node, VarLeaf, ExplSubst, Cutoff, OmegaLeaf };

struct BoundedTree;
using BtPtr = std::shared_ptr<const BoundedTree>;

struct BoundedTree {
  BtKind kind = BtKind::Cutoff;
  Label label;                   // Node
  std::string name;              // VarLeaf name, ExplSubst binder
  std::vector<BtPtr> children;   // Node
  BtPtr body;                    // ExplSubst
  BtPtr bound;                   // ExplSubst
};

inline BtPtr btNode(Label label, std::vector<BtPtr> children) {
  auto t = std::make_shared<BoundedTree>();
  t->kind = BtKind::Node;
  t->label = std::move(label);
  t->children = std::move(children);
  return t;
}

inline BtPtr btVar(std::string name) {
  auto t = std::make_shared<BoundedTree>();
  t->kind = BtKind::VarLeaf;
  t->name = std::move(name);
  return t;
}

inline BtPtr btSubst(BtPtr body, std::string binder, BtPtr bound) {
  auto t = std::make_shared<BoundedTree>();
  t->kind = BtKind::ExplSubst;
  t->body = std::move(body);
  t->name = std::move(binder);
  t->bound = std::move(bound);
  return t;
}

inline BtPtr btCutoff() {
  static const BtPtr one = std::make_shared<BoundedTree>();
  return one;
}

inline BtPtr btOmega() {
  static const BtPtr one = [] {
    auto t = std::make_shared<BoundedTree>();
    t->kind = BtKind::OmegaLeaf;
    return BtPtr(t);
  }();
  return one;
}

inline bool btEq(const BtPtr& a, const BtPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BtKind::Cutoff:
    case BtKind::OmegaLeaf:
      return true;
    case BtKind::VarLeaf:
      return a->name == b->name;
    case BtKind::ExplSubst:
      return a->name == b->name && btEq(a->body, b->body) &&
             btEq(a->bound, b->bound);
    case BtKind::Node: {
      if (!(a->label == b->label)) return false;
      if (a->children.size() != b->children.size()) return false;
      for (size_t i = 0; i < a->children.size(); ++i)
        if (!btEq(a->children[i], b->children[i])) return false;
      return true;
    }
  }
  return false;
}

// Equality outside the unknown regions: a Cutoff on either side matches
// anything below it.
inline bool agreesUpToCutoff(const BtPtr& a, const BtPtr& b) {
  if (a->kind == BtKind::Cutoff || b->kind == BtKind::Cutoff) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BtKind::Cutoff:
    case BtKind::OmegaLeaf:
      return true;
    case BtKind::VarLeaf:
      return a->name == b->name;
    case BtKind::ExplSubst:
      return a->name == b->name && agreesUpToCutoff(a->body, b->body) &&
             agreesUpToCutoff(a->bound, b->bound);
    case BtKind::Node: {
      if (!(a->label == b->label)) return false;
      if (a->children.size() != b->children.size()) return false;
      for (size_t i = 0; i < a->children.size(); ++i)
        if (!agreesUpToCutoff(a->children[i], b->children[i])) return false;
      return true;
    }
  }
  return false;
}

inline bool containsCutoff(const BtPtr& t) {
  switch (t->kind) {
    case BtKind::Cutoff:
      return true;
    case BtKind::VarLeaf:
    case BtKind::OmegaLeaf:
      return false;
    case BtKind::ExplSubst:
      return containsCutoff(t->body) || containsCutoff(t->bound);
    case BtKind::Node:
      for (const BtPtr& k : t->children)
        if (containsCutoff(k)) return true;
      return false;
  }
  return false;
}

// Depth of the fully resolved prefix: how far one can descend before any
// branch runs into a Cutoff.
inline int resolvedDepth(const BtPtr& t) {
  switch (t->kind) {
    case BtKind::Cutoff:
      return 0;
    case BtKind::VarLeaf:
    case BtKind::OmegaLeaf:
      return 1 << 20;
    case BtKind::ExplSubst:
      return 1 + std::min(resolvedDepth(t->body), resolvedDepth(t->bound));
    case BtKind::Node: {
      int worst = 1 << 20;
      for (const BtPtr& k : t->children)
        worst = std::min(worst, resolvedDepth(k));
      return 1 + (t->children.empty() ? 1 << 20 : worst);
    }
  }
  return 0;
}

constexpr const char* kFreshVarPrefix = "z@";

// Binders become z@1, z@2, ... in preorder, body before bound; trees equal up
// to bound-variable names become structurally equal.
inline BtPtr canonicalizeBinders(const BtPtr& root) {
  struct Scope {
    std::string from, to;
    std::shared_ptr<const Scope> outer;
  };
  struct Impl {
    int counter = 1;
    BtPtr go(const BtPtr& t, std::shared_ptr<const Scope> env) {
      switch (t->kind) {
        case BtKind::Cutoff:
        case BtKind::OmegaLeaf:
          return t;
        case BtKind::VarLeaf: {
          for (const Scope* s = env.get(); s; s = s->outer.get())
            if (s->from == t->name) return btVar(s->to);
          return t;
        }
        case BtKind::Node: {
          std::vector<BtPtr> kids;
          kids.reserve(t->children.size());
          for (const BtPtr& k : t->children) kids.push_back(go(k, env));
          return btNode(t->label, std::move(kids));
        }
        case BtKind::ExplSubst: {
          std::string fresh = kFreshVarPrefix + std::to_string(counter++);
          auto inner = std::make_shared<Scope>(Scope{t->name, fresh, env});
          BtPtr body = go(t->body, inner);
          BtPtr bound = go(t->bound, env);  // binder is not in scope here
          return btSubst(std::move(body), std::move(fresh), std::move(bound));
        }
      }
      return t;
    }
  };
  Impl impl;
  return impl.go(root, nullptr);
}

namespace detail {

inline void btPrint(const BtPtr& t, int indent, std::ostringstream& out) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  switch (t->kind) {
    case BtKind::Cutoff:
      out << pad << "<cut>\n";
      return;
    case BtKind::OmegaLeaf:
      out << pad << "<omega>\n";
      return;
    case BtKind::VarLeaf:
      out << pad << t->name << "\n";
      return;
    case BtKind::Node:
      out << pad << labelToString(t->label) << "\n";
      for (const BtPtr& k : t->children) btPrint(k, indent + 1, out);
      return;
    case BtKind::ExplSubst:
      btPrint(t->body, indent, out);
      out << pad << "[" << t->name << " := ...]\n";
      btPrint(t->bound, indent + 1, out);
      return;
  }
}

}  // namespace detail

inline std::string btToString(const BtPtr& t) {
  std::ostringstream out;
  detail::btPrint(t, 0, out);
  return out.str();
}

}  // namespace hors
