// The syntactic state/exceptions duality on types, terms, equations and
// signatures: products swap with coproducts, 1 with 0, lookup with tag,
// update with untag, and composition order reverses. Locations and exception
// names (and pure symbol names) are preserved, so dualizing twice is the
// identity.

#ifndef DECOR_DUALITY_HPP
#define DECOR_DUALITY_HPP

#include "check.hpp"
#include "signature.hpp"

namespace decor {

inline Type dualType(const Type& t) {
  switch (t->tag) {
    case TypeTag::Base: return t;
    case TypeTag::Val: return t;
    case TypeTag::Unit: return emptyType();
    case TypeTag::Empty: return unitType();
    case TypeTag::Prod: return coprodType(dualType(t->left), dualType(t->right));
    case TypeTag::Coprod: return prodType(dualType(t->left), dualType(t->right));
  }
  return t;
}

inline Term dualTerm(const Term& t) {
  switch (t->tag) {
    case TermTag::Id: return id(dualType(t->t1));
    case TermTag::Comp: return comp(dualTerm(t->b), dualTerm(t->a));  // (g.f)° = f°.g°
    case TermTag::Pair: return copair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::Copair: return pair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::LPair: return lcopair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::LCopair: return lpair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::RPair: return rcopair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::RCopair: return rpair(dualTerm(t->a), dualTerm(t->b));
    case TermTag::Proj1: return in1(dualType(t->t1), dualType(t->t2));
    case TermTag::In1: return proj1(dualType(t->t1), dualType(t->t2));
    case TermTag::Proj2: return in2(dualType(t->t1), dualType(t->t2));
    case TermTag::In2: return proj2(dualType(t->t1), dualType(t->t2));
    case TermTag::Final: return initial(dualType(t->t1));
    case TermTag::Initial: return final_(dualType(t->t1));
    case TermTag::Sym: return t;
    case TermTag::Lookup: return tagTerm(t->name);
    case TermTag::Tag: return lookup(t->name);
    case TermTag::Update: return untag(t->name);
    case TermTag::Untag: return update(t->name);
    case TermTag::Downcast:
      throw FragmentError("down(...) has no dual: term is outside the duality-closed fragment");
  }
  return t;
}

// Equation kinds are preserved: weak-for-states (post-compose the counit) and
// weak-for-exceptions (pre-compose the unit) are mirror notions.
inline Equation dualEquation(const Equation& e) { return {e.kind, dualTerm(e.lhs), dualTerm(e.rhs)}; }

inline Theory dualTheory(Theory th) {
  switch (th) {
    case Theory::Com: return Theory::Mon;
    case Theory::Mon: return Theory::Com;
    case Theory::St: return Theory::Exc;
    case Theory::Exc: return Theory::St;
  }
  return th;
}

// Locations become exception names and vice versa; a pure symbol u : A -> B
// becomes the symbol with the same name at B° -> A°. Inhabitants are
// state-side data and are carried across unchanged.
inline Signature dualSignature(const Signature& sig) {
  Signature d;
  d.baseTypes = sig.baseTypes;
  for (auto& s : sig.symbols) d.symbols.push_back({s.name, dualType(s.target), dualType(s.source)});
  for (auto& l : sig.locations) d.exceptions.push_back({l.name, dualType(l.valueType)});
  for (auto& e : sig.exceptions) d.locations.push_back({e.name, dualType(e.valueType)});
  for (auto& a : sig.axioms) d.axioms.push_back({a.name, dualEquation(a.eq)});
  d.inhabitants = sig.inhabitants;
  return d;
}

}  // namespace decor

#endif
