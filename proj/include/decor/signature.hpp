// Signatures: base types, pure symbols, locations, exception names, pure
// axioms and inhabitants. Validation happens in parse.hpp / on construction
// helpers; the struct itself is a plain immutable value.

#ifndef DECOR_SIGNATURE_HPP
#define DECOR_SIGNATURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "term.hpp"
#include "type.hpp"

namespace decor {

enum class EqKind : uint8_t { Strong, Weak };

struct Equation {
  EqKind kind;
  Term lhs, rhs;
};

inline bool equal(const Equation& a, const Equation& b) {
  return a.kind == b.kind && equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
}

inline std::string show(const Equation& e) {
  return show(e.lhs) + (e.kind == EqKind::Strong ? " == " : " ~~ ") + show(e.rhs);
}

struct SymbolDecl {
  std::string name;
  Type source, target;
};

struct EffectDecl {  // a location or an exception name, with its value type
  std::string name;
  Type valueType;
};

struct AxiomDecl {  // strong or weak equation between pure terms
  std::string name;
  Equation eq;
};

struct InhabitantDecl {
  Type type;      // the inhabited type
  Term witness;   // closed pure term 1 -> type
};

struct Signature {
  std::vector<std::string> baseTypes;
  std::vector<SymbolDecl> symbols;
  std::vector<EffectDecl> locations;
  std::vector<EffectDecl> exceptions;
  std::vector<AxiomDecl> axioms;
  // Inhabitants are state-side data: in an exceptions signature they describe
  // the dualized (state) signature, which is where the decision procedure
  // needs them.
  std::vector<InhabitantDecl> inhabitants;

  const SymbolDecl* findSymbol(const std::string& n) const {
    for (auto& s : symbols)
      if (s.name == n) return &s;
    return nullptr;
  }
  const EffectDecl* findLocation(const std::string& n) const {
    for (auto& l : locations)
      if (l.name == n) return &l;
    return nullptr;
  }
  const EffectDecl* findException(const std::string& n) const {
    for (auto& e : exceptions)
      if (e.name == n) return &e;
    return nullptr;
  }
  const AxiomDecl* findAxiom(const std::string& n) const {
    for (auto& a : axioms)
      if (a.name == n) return &a;
    return nullptr;
  }
  const Term* findInhabitant(const Type& t) const {
    for (auto& i : inhabitants)
      if (equal(i.type, t)) return &i.witness;
    return nullptr;
  }
  bool knownName(const std::string& n) const {
    for (auto& b : baseTypes)
      if (b == n) return true;
    return findSymbol(n) || findLocation(n) || findException(n);
  }
};

}  // namespace decor

#endif
