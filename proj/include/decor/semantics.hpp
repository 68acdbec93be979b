// Finite-set models and the semantic oracle.
//
// A state model interprets a term at its largest decoration as a function
// table A x S -> B x S, with S the product of the location carriers in
// declaration order. An exception model interprets a term as a table
// A + E -> B + E, with E the sum of the exception carriers in declaration
// order (ordinary elements first in every A + E index space).
//
// Elements are flat indices; products are ordered with the left component
// most significant, coproducts list the left summand first.

#ifndef DECOR_SEMANTICS_HPP
#define DECOR_SEMANTICS_HPP

#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "check.hpp"
#include "error.hpp"
#include "parse.hpp"
#include "signature.hpp"

namespace decor {

struct Model {
  enum Kind : uint8_t { State, Exception } kind;
  const Signature* sig = nullptr;
  std::map<std::string, long> base;                  // base type name -> carrier size
  std::map<std::string, std::vector<long>> tables;   // pure symbol -> output per input index

  long card(const Type& t) const {
    switch (t->tag) {
      case TypeTag::Base: {
        auto it = base.find(t->name);
        if (it == base.end()) throw EvalError("no carrier for base type '" + t->name + "'");
        return it->second;
      }
      case TypeTag::Unit: return 1;
      case TypeTag::Empty: return 0;
      case TypeTag::Prod: return card(t->left) * card(t->right);
      case TypeTag::Coprod: return card(t->left) + card(t->right);
      case TypeTag::Val: return card(valueTypeOf(t->name));
    }
    return 0;
  }

  Type valueTypeOf(const std::string& n) const {
    if (const EffectDecl* l = sig->findLocation(n)) return l->valueType;
    if (const EffectDecl* e = sig->findException(n)) return e->valueType;
    throw EvalError("unknown location or exception name '" + n + "'");
  }

  // state component layout: first declared location is most significant
  long stateSize() const {
    long s = 1;
    for (auto& l : sig->locations) s *= card(l.valueType);
    return s;
  }
  long stateStride(const std::string& x) const {
    long stride = 1;
    bool seen = false;
    for (auto it = sig->locations.rbegin(); it != sig->locations.rend(); ++it) {
      if (it->name == x) {
        seen = true;
        break;
      }
      stride *= card(it->valueType);
    }
    if (!seen) throw EvalError("unknown location '" + x + "'");
    return stride;
  }
  long stateGet(long s, const std::string& x) const {
    return (s / stateStride(x)) % card(valueTypeOf(x));
  }
  long stateSet(long s, const std::string& x, long v) const {
    long stride = stateStride(x);
    return s + (v - stateGet(s, x)) * stride;
  }

  long excSize() const {
    long e = 0;
    for (auto& t : sig->exceptions) e += card(t.valueType);
    return e;
  }
  long excOffset(const std::string& t) const {
    long off = 0;
    for (auto& e : sig->exceptions) {
      if (e.name == t) return off;
      off += card(e.valueType);
    }
    throw EvalError("unknown exception name '" + t + "'");
  }
  // which exception name a flat E index belongs to, and its value therein
  std::pair<const EffectDecl*, long> excSplit(long e) const {
    for (auto& t : sig->exceptions) {
      long c = card(t.valueType);
      if (e < c) return {&t, e};
      e -= c;
    }
    throw EvalError("exception index out of range");
  }

  const std::vector<long>& table(const std::string& n) const {
    auto it = tables.find(n);
    if (it == tables.end()) throw EvalError("no table for symbol '" + n + "'");
    return it->second;
  }
};

// ---- element display / parsing ----

inline std::string showElem(const Type& t, long i, const Model& m) {
  switch (t->tag) {
    case TypeTag::Base: return t->name + std::to_string(i);
    case TypeTag::Unit: return "*";
    case TypeTag::Empty: throw EvalError("the empty type has no elements");
    case TypeTag::Prod: {
      long cr = m.card(t->right);
      return "(" + showElem(t->left, i / cr, m) + "," + showElem(t->right, i % cr, m) + ")";
    }
    case TypeTag::Coprod: {
      long cl = m.card(t->left);
      if (i < cl) return "inl(" + showElem(t->left, i, m) + ")";
      return "inr(" + showElem(t->right, i - cl, m) + ")";
    }
    case TypeTag::Val: return showElem(m.valueTypeOf(t->name), i, m);
  }
  return "?";
}

namespace detail {

inline long parseElemAt(Parser& p, const Type& t, const Model& m) {
  switch (t->tag) {
    case TypeTag::Base: {
      std::string n = p.expectName();
      if (n.size() <= t->name.size() || n.compare(0, t->name.size(), t->name) != 0)
        p.fail("expected an element of " + t->name);
      long i = std::stol(n.substr(t->name.size()));
      if (i < 0 || i >= m.card(t)) p.fail("element index out of range");
      return i;
    }
    case TypeTag::Unit: p.expect("*"); return 0;
    case TypeTag::Empty: p.fail("the empty type has no elements");
    case TypeTag::Prod: {
      p.expect("(");
      long l = parseElemAt(p, t->left, m);
      p.expect(",");
      long r = parseElemAt(p, t->right, m);
      p.expect(")");
      return l * m.card(t->right) + r;
    }
    case TypeTag::Coprod: {
      if (p.accept("inl")) {
        p.expect("(");
        long i = parseElemAt(p, t->left, m);
        p.expect(")");
        return i;
      }
      p.expect("inr");
      p.expect("(");
      long i = parseElemAt(p, t->right, m);
      p.expect(")");
      return m.card(t->left) + i;
    }
    case TypeTag::Val: return parseElemAt(p, m.valueTypeOf(t->name), m);
  }
  p.fail("bad element");
}

}  // namespace detail

// ---- pure evaluation (decoration 0) ----

inline long evalPure(const Term& t, long a, const Model& m) {
  switch (t->tag) {
    case TermTag::Id: return a;
    case TermTag::Comp: return evalPure(t->a, evalPure(t->b, a, m), m);
    case TermTag::Pair: {
      Typing ty2 = typecheck(t->b, *m.sig);
      return evalPure(t->a, a, m) * m.card(ty2.target) + evalPure(t->b, a, m);
    }
    case TermTag::Proj1: return a / m.card(t->t2);
    case TermTag::Proj2: return a % m.card(t->t2);
    case TermTag::Final: return 0;
    case TermTag::In1: return a;
    case TermTag::In2: return m.card(t->t1) + a;
    case TermTag::Initial: throw EvalError("no input for the initial map");
    case TermTag::Copair: {
      long cl = m.card(typecheck(t->a, *m.sig).source);
      return a < cl ? evalPure(t->a, a, m) : evalPure(t->b, a - cl, m);
    }
    case TermTag::Sym: {
      const std::vector<long>& tb = m.table(t->name);
      if (a < 0 || a >= static_cast<long>(tb.size())) throw EvalError("input out of range for '" + t->name + "'");
      return tb[a];
    }
    default: throw EvalError("term is not pure");
  }
}

// ---- state models: modifier-level tables A x S -> B x S ----
// index (a, s) = a * S + s; output likewise

inline std::vector<long> evalState(const Term& t, const Model& m) {
  if (m.kind != Model::State) throw EvalError("state evaluation needs a state model");
  Typing ty = typecheck(t, *m.sig);
  long S = m.stateSize();
  long cA = m.card(ty.source);
  auto at = [&](auto&& self, const Term& u, long a, long s) -> std::pair<long, long> {
    switch (u->tag) {
      case TermTag::Comp: {
        auto [b, s1] = self(self, u->b, a, s);
        return self(self, u->a, b, s1);
      }
      case TermTag::Lookup: return {m.stateGet(s, u->name), s};
      case TermTag::Update: return {0, m.stateSet(s, u->name, a)};
      case TermTag::Pair:
      case TermTag::LPair:
      case TermTag::RPair: {
        auto [b1, s1] = self(self, u->a, a, s);
        auto [b2, s2] = self(self, u->b, a, s);
        long cb2 = m.card(typecheck(u->b, *m.sig).target);
        long sOut = s;
        if (u->tag == TermTag::LPair) sOut = s2;
        else if (u->tag == TermTag::RPair) sOut = s1;
        // a plain pair has components of decoration <= 1: neither writes
        return {b1 * cb2 + b2, sOut};
      }
      case TermTag::Copair: {
        long cl = m.card(typecheck(u->a, *m.sig).source);
        return a < cl ? self(self, u->a, a, s) : self(self, u->b, a - cl, s);
      }
      case TermTag::Id:
      case TermTag::Proj1:
      case TermTag::Proj2:
      case TermTag::Final:
      case TermTag::In1:
      case TermTag::In2:
      case TermTag::Initial:
      case TermTag::Sym: return {evalPure(u, a, m), s};
      default: throw EvalError("constructor not interpretable in a state model");
    }
  };
  std::vector<long> out(static_cast<size_t>(cA * S));
  for (long a = 0; a < cA; ++a)
    for (long s = 0; s < S; ++s) {
      auto [b, s1] = at(at, t, a, s);
      out[static_cast<size_t>(a * S + s)] = b * S + s1;
    }
  return out;
}

// ---- exception models: catcher-level tables A + E -> B + E ----
// ordinary elements first: index < card(A) is ordinary, the rest is E

inline std::vector<long> evalExc(const Term& t, const Model& m) {
  if (m.kind != Model::Exception) throw EvalError("exception evaluation needs an exception model");
  Typing ty = typecheck(t, *m.sig);
  long E = m.excSize();
  long cA = m.card(ty.source);
  // x: input index in Dom + E where Dom is the term's source; returns index in
  // Cod + E. `exc` marks whether x is the E part.
  auto at = [&](auto&& self, const Term& u, long x, bool exc) -> std::pair<long, bool> {
    switch (u->tag) {
      case TermTag::Comp: {
        auto [y, e] = self(self, u->b, x, exc);
        return self(self, u->a, y, e);
      }
      case TermTag::Tag: {
        if (exc) return {x, true};
        return {m.excOffset(u->name) + x, true};
      }
      case TermTag::Untag: {
        if (!exc) throw EvalError("untag has no ordinary inputs");
        auto [decl, v] = m.excSplit(x);
        if (decl->name == u->name) return {v, false};
        return {x, true};
      }
      case TermTag::Copair: {
        if (exc) return {x, true};  // propagator copair
        long cl = m.card(typecheck(u->a, *m.sig).source);
        return x < cl ? self(self, u->a, x, false) : self(self, u->b, x - cl, false);
      }
      case TermTag::LCopair: {
        long cl = m.card(typecheck(u->a, *m.sig).source);
        if (exc) return self(self, u->b, x, true);  // the catcher handles incoming exceptions
        return x < cl ? self(self, u->a, x, false) : self(self, u->b, x - cl, false);
      }
      case TermTag::RCopair: {
        long cl = m.card(typecheck(u->a, *m.sig).source);
        if (exc) return self(self, u->a, x, true);
        return x < cl ? self(self, u->a, x, false) : self(self, u->b, x - cl, false);
      }
      case TermTag::Downcast: {
        if (exc) return {x, true};  // a downcast propagates
        return self(self, u->a, x, false);
      }
      case TermTag::Pair: {
        if (exc) return {x, true};
        long cb2 = m.card(typecheck(u->b, *m.sig).target);
        return {evalPure(u->a, x, m) * cb2 + evalPure(u->b, x, m), false};
      }
      case TermTag::Id:
      case TermTag::Proj1:
      case TermTag::Proj2:
      case TermTag::Final:
      case TermTag::In1:
      case TermTag::In2:
      case TermTag::Initial:
      case TermTag::Sym: {
        if (exc) return {x, true};
        return {evalPure(u, x, m), false};
      }
      default: throw EvalError("constructor not interpretable in an exception model");
    }
  };
  std::vector<long> out(static_cast<size_t>(cA + E));
  long cB = m.card(ty.target);
  for (long i = 0; i < cA + E; ++i) {
    bool exc = i >= cA;
    auto [y, e] = at(at, t, exc ? i - cA : i, exc);
    out[static_cast<size_t>(i)] = e ? cB + y : y;
  }
  return out;
}

// ---- equation checking ----

inline bool holds(const Equation& e, const Model& m) {
  if (m.kind == Model::State) {
    std::vector<long> l = evalState(e.lhs, m);
    std::vector<long> r = evalState(e.rhs, m);
    if (e.kind == EqKind::Strong) return l == r;
    long S = m.stateSize();
    for (size_t i = 0; i < l.size(); ++i)
      if (l[i] / S != r[i] / S) return false;  // compare result components
    return true;
  }
  std::vector<long> l = evalExc(e.lhs, m);
  std::vector<long> r = evalExc(e.rhs, m);
  if (e.kind == EqKind::Strong) return l == r;
  long cA = m.card(typecheck(e.lhs, *m.sig).source);
  for (long i = 0; i < cA; ++i)  // ordinary inputs only
    if (l[static_cast<size_t>(i)] != r[static_cast<size_t>(i)]) return false;
  return true;
}

inline bool satisfiesAxioms(const Model& m) {
  for (auto& a : m.sig->axioms)
    if (!holds(a.eq, m)) return false;
  return true;
}

// ---- model enumeration ----

inline unsigned long enumerationSeed() {
  if (const char* s = std::getenv("DECOR_SEED")) return std::strtoul(s, nullptr, 10);
  return 12345;
}

// All models with base carrier sizes in 1..maxSize, in a deterministic order.
// When a size assignment admits more than `cap` table combinations, that
// assignment is covered by `cap` seeded pseudorandom samples instead.
inline std::vector<Model> enumerateModels(const Signature& sig, long maxSize, Model::Kind kind, long cap = 10000) {
  std::vector<Model> out;
  if (maxSize < 1) return out;
  size_t nBases = sig.baseTypes.size();
  std::vector<long> sizes(nBases, 1);
  std::mt19937 rng(static_cast<unsigned>(enumerationSeed()));
  for (;;) {
    Model proto{kind, &sig, {}, {}};
    for (size_t i = 0; i < nBases; ++i) proto.base[sig.baseTypes[i]] = sizes[i];
    // function space sizes per symbol
    bool possible = true;
    double total = 1;
    std::vector<std::pair<long, long>> dims;  // (domain, codomain) per symbol
    for (auto& s : sig.symbols) {
      long cA = proto.card(s.source), cB = proto.card(s.target);
      dims.push_back({cA, cB});
      double n = 1;
      for (long k = 0; k < cA; ++k) n *= static_cast<double>(cB);
      if (n == 0) possible = false;
      total *= n;
    }
    if (possible && total <= static_cast<double>(cap)) {
      // exhaustive odometer over all tables
      std::vector<std::vector<long>> ts;
      for (auto& [cA, cB] : dims) ts.push_back(std::vector<long>(static_cast<size_t>(cA), 0));
      for (;;) {
        Model m = proto;
        for (size_t i = 0; i < sig.symbols.size(); ++i) m.tables[sig.symbols[i].name] = ts[i];
        out.push_back(std::move(m));
        // advance
        bool carry = true;
        for (size_t i = 0; carry && i < ts.size(); ++i)
          for (size_t j = 0; carry && j < ts[i].size(); ++j) {
            if (++ts[i][j] < dims[i].second) carry = false;
            else ts[i][j] = 0;
          }
        if (carry) break;
      }
    } else if (possible) {
      for (long n = 0; n < cap; ++n) {
        Model m = proto;
        for (size_t i = 0; i < sig.symbols.size(); ++i) {
          std::vector<long> tb(static_cast<size_t>(dims[i].first));
          for (auto& v : tb) v = static_cast<long>(rng() % static_cast<unsigned long>(dims[i].second));
          m.tables[sig.symbols[i].name] = tb;
        }
        out.push_back(std::move(m));
      }
    }
    // next size assignment
    bool carry = true;
    for (size_t i = 0; carry && i < nBases; ++i) {
      if (++sizes[i] <= maxSize) carry = false;
      else sizes[i] = 1;
    }
    if (carry || nBases == 0) break;
  }
  return out;
}

// ---- model file IO ----

inline std::string showModel(const Model& m) {
  std::ostringstream out;
  out << "model " << (m.kind == Model::State ? "state" : "exception") << ";\n";
  for (auto& b : m.sig->baseTypes) {
    out << "carrier " << b << " = {";
    long n = m.base.at(b);
    for (long i = 0; i < n; ++i) out << (i ? ", " : " ") << b << i;
    out << " };\n";
  }
  for (auto& s : m.sig->symbols) {
    out << "table " << s.name << " = [";
    const std::vector<long>& tb = m.table(s.name);
    for (size_t i = 0; i < tb.size(); ++i) out << (i ? ", " : " ") << showElem(s.target, tb[i], m);
    out << " ];\n";
  }
  return out.str();
}

inline Model parseModel(const std::string& text, const Signature& sig) {
  Parser p(text);
  Model m{Model::State, &sig, {}, {}};
  p.expect("model");
  if (p.accept("state")) m.kind = Model::State;
  else if (p.accept("exception")) m.kind = Model::Exception;
  else p.fail("expected 'state' or 'exception'");
  p.expect(";");
  while (!p.atEnd()) {
    if (p.accept("carrier")) {
      std::string b = p.expectName();
      bool declared = false;
      for (auto& x : sig.baseTypes) declared |= (x == b);
      if (!declared) p.fail("unknown base type '" + b + "'");
      p.expect("=");
      p.expect("{");
      long n = 0;
      if (!p.peekIs("}")) {
        do {
          p.expectName();
          ++n;
        } while (p.accept(","));
      }
      p.expect("}");
      m.base[b] = n;
    } else if (p.accept("table")) {
      std::string s = p.expectName();
      const SymbolDecl* d = sig.findSymbol(s);
      if (!d) p.fail("unknown symbol '" + s + "'");
      p.expect("=");
      p.expect("[");
      std::vector<long> tb;
      if (!p.peekIs("]")) {
        do tb.push_back(detail::parseElemAt(p, d->target, m));
        while (p.accept(","));
      }
      p.expect("]");
      if (static_cast<long>(tb.size()) != m.card(d->source))
        p.fail("table for '" + s + "' must have " + std::to_string(m.card(d->source)) + " rows");
      m.tables[s] = std::move(tb);
    } else {
      p.fail("expected 'carrier' or 'table'");
    }
    p.expect(";");
  }
  for (auto& b : sig.baseTypes)
    if (!m.base.count(b)) throw ParseError("missing carrier for base type '" + b + "'", 0, 0);
  for (auto& s : sig.symbols)
    if (!m.tables.count(s.name)) throw ParseError("missing table for symbol '" + s.name + "'", 0, 0);
  return m;
}

// human-readable function table of a term in a model
inline std::string showTable(const Term& t, const Model& m) {
  Typing ty = typecheck(t, *m.sig);
  std::ostringstream out;
  if (m.kind == Model::State) {
    std::vector<long> tb = evalState(t, m);
    long S = m.stateSize();
    Type st = unitType();  // display states as tuples of location values
    for (auto it = m.sig->locations.rbegin(); it != m.sig->locations.rend(); ++it)
      st = equal(st, unitType()) ? Type(valType(it->name)) : prodType(valType(it->name), st);
    for (long a = 0; a < m.card(ty.source); ++a)
      for (long s = 0; s < S; ++s) {
        long o = tb[static_cast<size_t>(a * S + s)];
        out << "(" << showElem(ty.source, a, m) << ", " << showElem(st, s, m) << ") |-> ("
            << showElem(ty.target, o / S, m) << ", " << showElem(st, o % S, m) << ")\n";
      }
  } else {
    std::vector<long> tb = evalExc(t, m);
    long cA = m.card(ty.source), cB = m.card(ty.target);
    auto excName = [&](long e) {
      auto [decl, v] = m.excSplit(e);
      return "exc " + decl->name + "(" + showElem(decl->valueType, v, m) + ")";
    };
    for (long i = 0; i < cA + m.excSize(); ++i) {
      long o = tb[static_cast<size_t>(i)];
      out << (i < cA ? showElem(ty.source, i, m) : excName(i - cA)) << " |-> "
          << (o < cB ? showElem(ty.target, o, m) : excName(o - cB)) << "\n";
    }
  }
  return out.str();
}

}  // namespace decor

#endif
