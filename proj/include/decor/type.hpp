// Object-language types: base types, unit, empty, products, coproducts and
// the value types V[n] attached to locations / exception names.

#ifndef DECOR_TYPE_HPP
#define DECOR_TYPE_HPP

#include <cstdint>
#include <memory>
#include <string>

namespace decor {

enum class TypeTag : uint8_t { Base, Unit, Empty, Prod, Coprod, Val };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeTag tag;
  std::string name;  // Base / Val
  Type left, right;  // Prod / Coprod
  size_t hash;
};

namespace detail {
inline size_t hashCombine(size_t a, size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}
}  // namespace detail

inline Type makeType(TypeTag tag, std::string name, Type l, Type r) {
  size_t h = static_cast<size_t>(tag) * 0x9e3779b9;
  h = detail::hashCombine(h, std::hash<std::string>{}(name));
  if (l) h = detail::hashCombine(h, l->hash);
  if (r) h = detail::hashCombine(h, r->hash);
  return std::make_shared<TypeNode>(TypeNode{tag, std::move(name), std::move(l), std::move(r), h});
}

inline Type baseType(std::string name) { return makeType(TypeTag::Base, std::move(name), nullptr, nullptr); }
inline Type unitType() {
  static const Type t = makeType(TypeTag::Unit, "", nullptr, nullptr);
  return t;
}
inline Type emptyType() {
  static const Type t = makeType(TypeTag::Empty, "", nullptr, nullptr);
  return t;
}
inline Type prodType(Type a, Type b) { return makeType(TypeTag::Prod, "", std::move(a), std::move(b)); }
inline Type coprodType(Type a, Type b) { return makeType(TypeTag::Coprod, "", std::move(a), std::move(b)); }
inline Type valType(std::string name) { return makeType(TypeTag::Val, std::move(name), nullptr, nullptr); }

inline bool equal(const Type& a, const Type& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->tag != b->tag) return false;
  switch (a->tag) {
    case TypeTag::Base:
    case TypeTag::Val: return a->name == b->name;
    case TypeTag::Unit:
    case TypeTag::Empty: return true;
    case TypeTag::Prod:
    case TypeTag::Coprod: return equal(a->left, b->left) && equal(a->right, b->right);
  }
  return false;
}

// Grammar: NAME | "1" | "0" | t "*" t | t "+" t | "V[" NAME "]".
// "*" binds tighter than "+"; both associate to the right in printing.
inline std::string show(const Type& t, int prec = 0) {
  switch (t->tag) {
    case TypeTag::Base: return t->name;
    case TypeTag::Unit: return "1";
    case TypeTag::Empty: return "0";
    case TypeTag::Val: return "V[" + t->name + "]";
    case TypeTag::Prod: {
      std::string s = show(t->left, 2) + " * " + show(t->right, 2);
      return prec >= 2 ? "(" + s + ")" : s;
    }
    case TypeTag::Coprod: {
      std::string s = show(t->left, 1) + " + " + show(t->right, 1);
      return prec >= 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace decor

#endif
