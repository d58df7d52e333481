#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hors {

struct SimpleType;
using TypePtr = std::shared_ptr<const SimpleType>;

// Type grammar: o | a -> b. Null param encodes the ground type o.
struct SimpleType {
  TypePtr param;
  TypePtr result;
};

inline const TypePtr& ground() {
  static const TypePtr o = std::make_shared<SimpleType>();
  return o;
}

inline bool isGround(const TypePtr& t) { return t->param == nullptr; }

inline TypePtr arrow(TypePtr param, TypePtr result) {
  return std::make_shared<SimpleType>(SimpleType{std::move(param), std::move(result)});
}

// arrows({a,b}, r) = a -> b -> r
inline TypePtr arrows(const std::vector<TypePtr>& params, TypePtr result) {
  TypePtr t = std::move(result);
  for (auto it = params.rbegin(); it != params.rend(); ++it) t = arrow(*it, t);
  return t;
}

inline bool typeEq(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (isGround(a) || isGround(b)) return isGround(a) && isGround(b);
  return typeEq(a->param, b->param) && typeEq(a->result, b->result);
}

inline int orderOfType(const TypePtr& t) {
  if (isGround(t)) return 0;
  return std::max(orderOfType(t->param) + 1, orderOfType(t->result));
}

inline int arityOfType(const TypePtr& t) {
  int k = 0;
  for (TypePtr c = t; !isGround(c); c = c->result) ++k;
  return k;
}

// Argument types along the spine: a1 -> ... -> ak -> o  gives  [a1,...,ak].
inline std::vector<TypePtr> paramTypes(const TypePtr& t) {
  std::vector<TypePtr> out;
  for (TypePtr c = t; !isGround(c); c = c->result) out.push_back(c->param);
  return out;
}

// Count of trailing ground arguments: the l in a1 -> ... -> ak => o^l -> o.
inline int garOfType(const TypePtr& t) {
  int gar = 0;
  for (TypePtr c = t; !isGround(c); c = c->result) {
    if (isGround(c->param))
      ++gar;
    else
      gar = 0;
  }
  return gar;
}

// Type left after applying n arguments.
inline TypePtr dropParams(const TypePtr& t, int n) {
  TypePtr c = t;
  for (int i = 0; i < n; ++i) c = c->result;
  return c;
}

// Largest arity among the type and all types nested inside it.
inline int deepMaxArity(const TypePtr& t) {
  int best = arityOfType(t);
  for (TypePtr c = t; !isGround(c); c = c->result)
    best = std::max(best, deepMaxArity(c->param));
  return best;
}

inline std::string typeToString(const TypePtr& t) {
  if (isGround(t)) return "o";
  std::string lhs = typeToString(t->param);
  if (!isGround(t->param)) lhs = "(" + lhs + ")";
  return lhs + " -> " + typeToString(t->result);
}

}  // namespace hors
