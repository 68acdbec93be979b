// Type checking and minimal-decoration inference.

#ifndef DECOR_CHECK_HPP
#define DECOR_CHECK_HPP

#include <algorithm>
#include <string>

#include "error.hpp"
#include "signature.hpp"

namespace decor {

enum class Theory : uint8_t { Com, Mon, St, Exc };

inline std::string show(Theory th) {
  switch (th) {
    case Theory::Com: return "L_com";
    case Theory::Mon: return "L_mon";
    case Theory::St: return "L_st";
    case Theory::Exc: return "L_exc";
  }
  return "?";
}

struct Typing {
  Type source, target;
};

namespace detail {

inline void checkTypeDeclared(const Type& t, const Signature& sig, const std::string& path) {
  switch (t->tag) {
    case TypeTag::Base:
      for (auto& b : sig.baseTypes)
        if (b == t->name) return;
      throw TypeError("unknown base type '" + t->name + "'", path);
    case TypeTag::Val:
      if (!sig.findLocation(t->name) && !sig.findException(t->name))
        throw TypeError("V[" + t->name + "]: '" + t->name + "' is not a declared location or exception name", path);
      return;
    case TypeTag::Prod:
    case TypeTag::Coprod:
      checkTypeDeclared(t->left, sig, path);
      checkTypeDeclared(t->right, sig, path);
      return;
    default: return;
  }
}

inline Typing typecheckAt(const Term& t, const Signature& sig, const std::string& path) {
  auto child = [&](const char* i) { return path.empty() ? std::string(i) : path + "." + i; };
  switch (t->tag) {
    case TermTag::Id:
      checkTypeDeclared(t->t1, sig, path);
      return {t->t1, t->t1};
    case TermTag::Comp: {
      Typing g = typecheckAt(t->a, sig, child("1"));
      Typing f = typecheckAt(t->b, sig, child("2"));
      if (!equal(f.target, g.source))
        throw TypeError("composition mismatch: inner term targets " + show(f.target) + " but outer term sources " +
                            show(g.source),
                        path);
      return {f.source, g.target};
    }
    case TermTag::Pair:
    case TermTag::LPair:
    case TermTag::RPair: {
      Typing f1 = typecheckAt(t->a, sig, child("1"));
      Typing f2 = typecheckAt(t->b, sig, child("2"));
      if (!equal(f1.source, f2.source))
        throw TypeError("pair components have different sources: " + show(f1.source) + " vs " + show(f2.source), path);
      return {f1.source, prodType(f1.target, f2.target)};
    }
    case TermTag::Copair:
    case TermTag::LCopair:
    case TermTag::RCopair: {
      Typing f1 = typecheckAt(t->a, sig, child("1"));
      Typing f2 = typecheckAt(t->b, sig, child("2"));
      if (!equal(f1.target, f2.target))
        throw TypeError("copair components have different targets: " + show(f1.target) + " vs " + show(f2.target),
                        path);
      return {coprodType(f1.source, f2.source), f1.target};
    }
    case TermTag::Proj1:
      checkTypeDeclared(t->t1, sig, path);
      checkTypeDeclared(t->t2, sig, path);
      return {prodType(t->t1, t->t2), t->t1};
    case TermTag::Proj2:
      checkTypeDeclared(t->t1, sig, path);
      checkTypeDeclared(t->t2, sig, path);
      return {prodType(t->t1, t->t2), t->t2};
    case TermTag::Final:
      checkTypeDeclared(t->t1, sig, path);
      return {t->t1, unitType()};
    case TermTag::In1:
      checkTypeDeclared(t->t1, sig, path);
      checkTypeDeclared(t->t2, sig, path);
      return {t->t1, coprodType(t->t1, t->t2)};
    case TermTag::In2:
      checkTypeDeclared(t->t1, sig, path);
      checkTypeDeclared(t->t2, sig, path);
      return {t->t2, coprodType(t->t1, t->t2)};
    case TermTag::Initial:
      checkTypeDeclared(t->t1, sig, path);
      return {emptyType(), t->t1};
    case TermTag::Sym: {
      const SymbolDecl* s = sig.findSymbol(t->name);
      if (!s) throw TypeError("unknown symbol '" + t->name + "'", path);
      return {s->source, s->target};
    }
    case TermTag::Lookup: {
      if (!sig.findLocation(t->name)) throw TypeError("unknown location '" + t->name + "'", path);
      return {unitType(), valType(t->name)};
    }
    case TermTag::Update: {
      if (!sig.findLocation(t->name)) throw TypeError("unknown location '" + t->name + "'", path);
      return {valType(t->name), unitType()};
    }
    case TermTag::Tag: {
      if (!sig.findException(t->name)) throw TypeError("unknown exception name '" + t->name + "'", path);
      return {valType(t->name), emptyType()};
    }
    case TermTag::Untag: {
      if (!sig.findException(t->name)) throw TypeError("unknown exception name '" + t->name + "'", path);
      return {emptyType(), valType(t->name)};
    }
    case TermTag::Downcast: return typecheckAt(t->a, sig, child("1"));
  }
  throw TypeError("malformed term", path);
}

}  // namespace detail

inline Typing typecheck(const Term& t, const Signature& sig) { return detail::typecheckAt(t, sig, ""); }

// Minimal decoration: 0 pure, 1 accessor/propagator, 2 modifier/catcher.
// Composites and (co)pairs take the maximum of their children; downcast caps
// its argument at 1. Throws DecorationError for constructors the theory does
// not declare.
inline int decorate(const Term& t, Theory th) {
  auto stOnly = [&](const char* what) {
    if (th != Theory::St) throw DecorationError(std::string(what) + " is not available in " + show(th));
  };
  auto excOnly = [&](const char* what) {
    if (th != Theory::Exc) throw DecorationError(std::string(what) + " is not available in " + show(th));
  };
  switch (t->tag) {
    case TermTag::Id:
    case TermTag::Proj1:
    case TermTag::Proj2:
    case TermTag::Final:
    case TermTag::In1:
    case TermTag::In2:
    case TermTag::Initial:
    case TermTag::Sym: return 0;
    case TermTag::Lookup: stOnly("lkp"); return 1;
    case TermTag::Update: stOnly("upd"); return 2;
    case TermTag::Tag: excOnly("tag"); return 1;
    case TermTag::Untag: excOnly("untag"); return 2;
    case TermTag::Comp:
    case TermTag::Pair:
    case TermTag::Copair: return std::max(decorate(t->a, th), decorate(t->b, th));
    case TermTag::LPair:
    case TermTag::RPair: stOnly("lpair/rpair"); return std::max(decorate(t->a, th), decorate(t->b, th));
    case TermTag::LCopair:
    case TermTag::RCopair: excOnly("lcopair/rcopair"); return std::max(decorate(t->a, th), decorate(t->b, th));
    case TermTag::Downcast: excOnly("down"); return std::min(decorate(t->a, th), 1);
  }
  return 0;
}

}  // namespace decor

#endif
