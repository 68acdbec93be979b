// State-specific algorithms for a single location: canonical forms for
// accessors and modifiers, reduction of decorated equations to pure
// equations, the decision procedure and sequential products.
//
// Fragment: composition spines over pure symbols, id, final, lookup and
// update (no products, coproducts or empty type inside the terms handed to
// the normalizer / decision procedure).

#ifndef DECOR_STATE_THEORY_HPP
#define DECOR_STATE_THEORY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prover.hpp"
#include "semantics.hpp"

namespace decor {

// a == v . lkp . final(X) with v pure, or a pure term as-is
struct CanonicalAccessor {
  bool isPure;
  Term pureTerm;     // when isPure
  Term v;            // pure V -> Y otherwise
  Type source;       // X
  std::string loc;

  Term term() const {
    if (isPure) return pureTerm;
    return comp(v, comp(lookup(loc), final_(source)));
  }
};

// f == u . lkp . upd . a with u pure and a an accessor, or an accessor as-is
struct CanonicalModifier {
  bool isAccessor;
  CanonicalAccessor acc;  // when isAccessor
  Term u, a;
  Type source;
  std::string loc;

  Term term() const {
    if (isAccessor) return acc.term();
    return comp(u, comp(lookup(loc), comp(update(loc), a)));
  }
};

namespace detail {

inline std::string theLocation(const Signature& sig) {
  if (sig.locations.size() != 1) throw FragmentError("the state procedures need exactly one location");
  return sig.locations[0].name;
}

inline void requireSpineTerm(const Term& t) {
  switch (t->tag) {
    case TermTag::Comp:
      requireSpineTerm(t->a);
      requireSpineTerm(t->b);
      return;
    case TermTag::Id:
    case TermTag::Sym:
    case TermTag::Final:
    case TermTag::Lookup:
    case TermTag::Update: return;
    default: throw FragmentError("term is outside the composition-spine state fragment: " + show(t));
  }
}

inline size_t firstTag(const std::vector<Term>& atoms, TermTag tag) {
  for (size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i]->tag == tag) return i;
  return atoms.size();
}

// proof that final(1)-like pure accessors into 1 are the identity:
// concludes s == id(1) for s : 1 -> 1 of decoration <= 1
inline size_t unitEndoIsId(Prover& p, const Term& s) {
  return p.trans(p.finalU(s), p.sym(p.finalU(id(unitType()))));
}

// b : 1 -> Y given as its spine atoms; returns (v, proof of b == v . lkp)
// with v pure (b is rebuilt as rightAssoc(atoms, 1))
inline std::pair<Term, size_t> unitAccessorAsVLkp(Prover& p, const std::vector<Term>& atoms, const std::string& x) {
  Term b = rightAssoc(atoms, unitType());
  Term lkp = lookup(x);
  size_t k = firstTag(atoms, TermTag::Lookup);
  if (k == atoms.size()) {
    // pure: pad with final(V) . lkp
    Term v = equal(b, id(unitType())) ? final_(valType(x)) : comp(b, final_(valType(x)));
    size_t pw;
    if (equal(b, id(unitType()))) {
      pw = p.sym(unitEndoIsId(p, comp(final_(valType(x)), lkp)));  // id(1) == final(V) . lkp
      return {final_(valType(x)), pw};
    }
    pw = p.padWithLookup(x, b);  // b == b . (final(V) . lkp)
    size_t g = p.eqByReassoc(comp(b, comp(final_(valType(x)), lkp)), comp(v, lkp));
    return {v, p.trans(pw, g)};
  }
  std::vector<Term> pre(atoms.begin(), atoms.begin() + k);
  std::vector<Term> suf(atoms.begin() + k + 1, atoms.end());
  Term v = rightAssoc(pre, valType(x));
  Term s1 = rightAssoc(suf, unitType());  // 1 -> 1 accessor
  size_t e0 = unitEndoIsId(p, s1);                          // s1 == id(1)
  size_t e1 = p.repl(v, p.repl(lkp, e0));                   // v.(lkp.s1) == v.(lkp.id)
  size_t e2 = p.eqByReassoc(b, comp(v, comp(lkp, s1)));     // b == v.(lkp.s1)
  size_t e3 = p.eqByReassoc(comp(v, comp(lkp, id(unitType()))), comp(v, lkp));
  return {v, p.chain({e2, e1, e3})};
}

// returns (canonical form, step proving a == canonical term)
inline std::pair<CanonicalAccessor, size_t> normalizeAccessorIn(Prover& p, const Term& a, const Signature& sig) {
  requireSpineTerm(a);
  std::string x = theLocation(sig);
  Typing ty = typecheck(a, sig);
  int d = decorate(a, Theory::St);
  if (d > 1) throw FragmentError("accessor normalization needs decoration <= 1");
  if (d == 0) return {{true, a, {}, ty.source, x}, p.refl(a)};

  std::vector<Term> atoms = flatten(a);
  size_t k = firstTag(atoms, TermTag::Lookup);
  std::vector<Term> pre(atoms.begin(), atoms.begin() + k);
  std::vector<Term> suf(atoms.begin() + k + 1, atoms.end());
  Term v = rightAssoc(pre, valType(x));
  Term a1 = rightAssoc(suf, ty.source);  // X -> 1 accessor
  size_t e0 = p.finalU(a1);              // a1 == final(X)
  size_t e1 = p.repl(v, p.repl(lookup(x), e0));
  size_t e2 = p.eqByReassoc(a, comp(v, comp(lookup(x), a1)));
  return {{false, {}, v, ty.source, x}, p.chain({e2, e1})};
}

// returns (canonical form, step proving f == canonical term)
inline std::pair<CanonicalModifier, size_t> normalizeModifierIn(Prover& p, const Term& f, const Signature& sig) {
  requireSpineTerm(f);
  std::string x = theLocation(sig);
  Typing ty = typecheck(f, sig);
  if (decorate(f, Theory::St) <= 1) {
    auto [acc, i] = normalizeAccessorIn(p, f, sig);
    return {{true, acc, {}, {}, ty.source, x}, i};
  }
  Term lkp = lookup(x), upd = update(x);
  Term cur = f;
  size_t proof = p.refl(f);  // f == cur
  for (;;) {
    std::vector<Term> atoms = flatten(cur);
    size_t i = firstTag(atoms, TermTag::Update);
    std::vector<Term> rest(atoms.begin() + i + 1, atoms.end());
    size_t j = i + 1 + firstTag(rest, TermTag::Update);
    if (j >= atoms.size()) {
      // exactly one update left: b . upd . a with b : 1 -> Y accessor
      std::vector<Term> bAtoms(atoms.begin(), atoms.begin() + i);
      std::vector<Term> aAtoms(atoms.begin() + i + 1, atoms.end());
      Term b = rightAssoc(bAtoms, unitType());
      Term a = rightAssoc(aAtoms, ty.source);
      auto [v, pv] = unitAccessorAsVLkp(p, bAtoms, x);
      size_t s0 = p.eqByReassoc(cur, comp(b, comp(upd, a)));
      size_t s1 = p.subs(comp(upd, a), pv);  // b.(upd.a) == (v.lkp).(upd.a)
      Term canon = comp(v, comp(lkp, comp(upd, a)));
      size_t s2 = p.eqByReassoc(comp(comp(v, lkp), comp(upd, a)), canon);
      size_t concl = p.chain({proof, s0, s1, s2});
      return {{false, {}, v, a, ty.source, x}, concl};
    }
    // two leftmost updates at i < j; collapse the inner lkp . upd redex
    std::vector<Term> f1Atoms(atoms.begin() + i + 1, atoms.end());
    std::vector<Term> b1Atoms(atoms.begin() + i + 1, atoms.begin() + j);
    std::vector<Term> f2Atoms(atoms.begin() + j + 1, atoms.end());
    Term bOuter = rightAssoc(std::vector<Term>(atoms.begin(), atoms.begin() + i), unitType());
    Term f1 = rightAssoc(f1Atoms, ty.source);  // X -> V, has >= 1 update
    Term f2 = rightAssoc(f2Atoms, ty.source);  // X -> V
    auto [w, pw] = unitAccessorAsVLkp(p, b1Atoms, x);  // b1 == w . lkp
    size_t t0 = p.eqByReassoc(f1, comp(rightAssoc(b1Atoms, unitType()), comp(upd, f2)));
    size_t t1 = p.subs(comp(upd, f2), pw);  // b1.(upd.f2) == (w.lkp).(upd.f2)
    size_t t2 = p.eqByReassoc(comp(comp(w, lkp), comp(upd, f2)), comp(w, comp(lkp, comp(upd, f2))));
    size_t cl = p.collapseLkpUpd(x, w, f2);   // w.(lkp.(upd.f2)) ~~ canonical(w.f2)
    size_t weak = p.chain({t0, t1, t2, cl});  // f1 ~~ canonical(w.f2)
    Term g = p.eqAt(weak).rhs;
    size_t uc = p.updCong(x, f1, g, weak);  // upd.f1 == upd.g
    size_t u0 = p.eqByReassoc(cur, comp(bOuter, comp(upd, f1)));
    size_t u1 = p.repl(bOuter, uc);
    Term next = comp(bOuter, comp(upd, g));
    auto [nn, u2] = p.assocNorm(next);
    proof = p.chain({proof, u0, u1, u2});
    cur = nn;
  }
}

// ---- pure normal forms and the syntactic pure oracle ----

// canonical pure form: right-associated id-free spine where any passage
// through the unit type collapses the whole suffix to final(A); a suffix from
// a unit source collapses further, to nothing, since id(1) == final(1)
inline std::pair<Term, size_t> normalizePure(Prover& p, const Term& t, const Signature& sig) {
  auto [c, i] = p.assocNorm(t);
  Typing ty = typecheck(c, sig);
  std::vector<Term> atoms = flatten(c);
  if (atoms.empty()) return {c, i};  // id(X) is canonical
  bool srcUnit = ty.source->tag == TypeTag::Unit;
  // cut k: prefix atoms[0..k), suffix atoms[k..); the type at the outermost
  // unit cut lets the whole suffix collapse
  for (size_t k = 0; k < atoms.size(); ++k) {
    Type at = k == 0 ? ty.target : typecheck(atoms[k - 1], sig).source;
    if (at->tag != TypeTag::Unit) continue;
    if (!srcUnit && k + 1 == atoms.size() && atoms[k]->tag == TermTag::Final) break;  // already canonical
    std::vector<Term> suf(atoms.begin() + k, atoms.end());
    Term s = rightAssoc(suf, ty.source);
    auto nest = [&](const Term& inner) {
      Term acc = inner;
      for (size_t r = k; r-- > 0;) acc = comp(atoms[r], acc);
      return acc;
    };
    Term rep = srcUnit ? id(unitType()) : final_(ty.source);
    size_t q = srcUnit ? p.trans(p.finalU(s), p.sym(p.finalU(id(unitType())))) : p.finalU(s);
    for (size_t r = k; r-- > 0;) q = p.repl(atoms[r], q);
    size_t g = p.eqByReassoc(c, nest(s));
    auto [nf, fix] = p.assocNorm(nest(rep));
    return {nf, p.chain({i, g, q, fix})};
  }
  return {c, i};
}

inline std::optional<size_t> provePureSyntactic(Prover& p, const Equation& e, const Signature& sig) {
  auto [n1, i1] = normalizePure(p, e.lhs, sig);
  auto [n2, i2] = normalizePure(p, e.rhs, sig);
  if (!equal(n1, n2)) return std::nullopt;
  size_t s = p.trans(i1, p.sym(i2));
  if (e.kind == EqKind::Weak) s = p.strongToWeak(s);
  return s;
}

inline bool pureTriviallyEqual(const Signature& sig, const Equation& e) {
  Prover scratch(Theory::St, sig);
  return provePureSyntactic(scratch, e, sig).has_value();
}

// ground rewriting with the signature's pure axioms (left to right), on top
// of the syntactic normal form; nullopt when the terms stay apart
inline std::optional<size_t> provePureWithAxioms(Prover& p, const Equation& e, const Signature& sig) {
  auto reduce = [&](Term t) -> std::pair<Term, size_t> {
    size_t proof = p.refl(t);
    for (int round = 0; round < 64; ++round) {
      auto [nf, i] = normalizePure(p, t, sig);
      proof = p.chain({proof, i});
      t = nf;
      bool changed = false;
      for (auto& ax : sig.axioms) {
        try {
          size_t a = p.axiom(ax.name);
          if (p.eqAt(a).kind == EqKind::Weak) a = p.weakToStrong(a);
          auto [t2, j] = p.rewriteInSpine(t, a);
          proof = p.chain({proof, j});
          t = t2;
          changed = true;
          break;
        } catch (const KernelError&) {
          // axiom lhs not present in the spine
        }
      }
      if (!changed) break;
    }
    return {t, proof};
  };
  auto [n1, i1] = reduce(e.lhs);
  auto [n2, i2] = reduce(e.rhs);
  if (!equal(n1, n2)) return std::nullopt;
  size_t s = p.trans(i1, p.sym(i2));
  if (e.kind == EqKind::Weak) s = p.strongToWeak(s);
  return s;
}

// ---- reduction to pure equations ----

using PureStep = std::function<size_t(const Equation&)>;

struct PureGoal {
  Equation eq;
  size_t proof;  // forward: step deriving eq from the hypothesis
};

inline Term inhabitantOf(const Signature& sig, const Type& t) {
  if (t->tag == TypeTag::Unit) return id(unitType());
  if (const Term* w = sig.findInhabitant(t)) return *w;
  throw MissingInhabitantError("no inhabitant declared for type " + show(t));
}

// c = v.(lkp.final(X)) applied to h : 1 -> X; proves c.h == v.lkp
inline size_t canonApplied(Prover& p, const CanonicalAccessor& c, const Term& h) {
  Term lkp = lookup(c.loc);
  size_t uu = unitEndoIsId(p, comp(final_(c.source), h));  // final(X).h == id(1)
  size_t q = p.repl(c.v, p.repl(lkp, uu));
  size_t start = p.eqByReassoc(comp(c.term(), h), comp(c.v, comp(lkp, comp(final_(c.source), h))));
  size_t fin = p.eqByReassoc(comp(c.v, comp(lkp, id(unitType()))), comp(c.v, lkp));
  return p.chain({start, q, fin});
}

// the two pure equations of the mixed accessor case, built uniformly so the
// forward and backward passes agree on the exact goal terms
inline Equation mixedEqA(const Term& a1, const Term& h, const Term& v2, const std::string& x) {
  return {EqKind::Strong, comp(a1, comp(h, final_(valType(x)))), v2};
}
inline Equation mixedEqB(const Term& a1, const Term& h, const Type& X) {
  return {EqKind::Strong, comp(a1, comp(h, final_(X))), a1};
}

// proves v1.(lkp.final(X)) == a1.(h.final(X)) where v1 = a1.(h.final(V))
inline size_t expandMixedV1(Prover& p, const Term& a1, const Term& h, const Type& X, const std::string& x) {
  Term v1 = comp(a1, comp(h, final_(valType(x))));
  Term lkp = lookup(x);
  size_t w1 = unitEndoIsId(p, comp(final_(valType(x)), lkp));  // final(V).lkp == id(1)
  size_t q1 = p.repl(comp(a1, h), p.subs(final_(X), w1));
  size_t r1 = p.eqByReassoc(comp(v1, comp(lkp, final_(X))),
                            comp(comp(a1, h), comp(comp(final_(valType(x)), lkp), final_(X))));
  size_t r2 = p.eqByReassoc(comp(comp(a1, h), comp(id(unitType()), final_(X))), comp(a1, comp(h, final_(X))));
  return p.chain({r1, q1, r2});
}

// forward: from eIdx proving an accessor equation, derive its pure goals
inline std::vector<PureGoal> accForward(Prover& p, size_t eIdx, const Signature& sig) {
  Equation e = p.eqAt(eIdx);
  if (e.kind == EqKind::Weak) {
    eIdx = p.weakToStrong(eIdx);
    e = p.eqAt(eIdx);
  }
  std::string x = theLocation(sig);
  int d1 = decorate(e.lhs, Theory::St), d2 = decorate(e.rhs, Theory::St);
  if (d1 == 0 && d2 == 0) return {{e, eIdx}};
  Typing ty = typecheck(e.lhs, sig);
  if (d1 > 0 && d2 > 0) {
    auto [c1, i1] = normalizeAccessorIn(p, e.lhs, sig);
    auto [c2, i2] = normalizeAccessorIn(p, e.rhs, sig);
    size_t t = p.chain({p.sym(i1), eIdx, i2});  // c1 == c2
    Term h = inhabitantOf(sig, ty.source);
    size_t s = p.subs(h, t);
    size_t q = p.chain({p.sym(canonApplied(p, c1, h)), s, canonApplied(p, c2, h)});
    size_t g = p.cancelLookup(x, c1.v, c2.v, q);
    return {{Equation{EqKind::Strong, c1.v, c2.v}, g}};
  }
  // mixed: orient so the pure side comes first
  bool swapped = d1 > 0;
  Term a1 = swapped ? e.rhs : e.lhs;
  Term a2 = swapped ? e.lhs : e.rhs;
  size_t oriented = swapped ? p.sym(eIdx) : eIdx;  // a1 == a2
  auto [c2, i2] = normalizeAccessorIn(p, a2, sig);
  Term h = inhabitantOf(sig, ty.source);
  Term v1 = comp(a1, comp(h, final_(valType(x))));
  // (A) v1 == v2
  size_t t1 = p.chain({oriented, i2});  // a1 == c2
  size_t s = p.subs(h, t1);
  size_t pw = p.padWithLookup(x, comp(a1, h));
  size_t e1 = p.eqByReassoc(comp(comp(a1, h), comp(final_(valType(x)), lookup(x))), comp(v1, lookup(x)));
  size_t q = p.chain({p.sym(p.trans(pw, e1)), s, canonApplied(p, c2, h)});
  size_t gA = p.cancelLookup(x, v1, c2.v, q);
  // (B) a1.(h.final(X)) == a1
  size_t sv = p.subs(comp(lookup(x), final_(ty.source)), p.sym(gA));  // c2's body == v1.(lkp.final(X))
  size_t pv = expandMixedV1(p, a1, h, ty.source, x);
  size_t gB = p.sym(p.chain({oriented, i2, sv, pv}));
  return {{mixedEqA(a1, h, c2.v, x), gA}, {mixedEqB(a1, h, ty.source), gB}};
}

// backward: rebuild the accessor equation from its pure goals
inline size_t accBackward(Prover& p, const Equation& e0, const Signature& sig, const PureStep& base) {
  Equation e{EqKind::Strong, e0.lhs, e0.rhs};
  std::string x = theLocation(sig);
  int d1 = decorate(e.lhs, Theory::St), d2 = decorate(e.rhs, Theory::St);
  size_t out;
  if (d1 == 0 && d2 == 0) {
    out = base(e);
  } else if (d1 > 0 && d2 > 0) {
    Typing ty = typecheck(e.lhs, sig);
    (void)ty;
    auto [c1, i1] = normalizeAccessorIn(p, e.lhs, sig);
    auto [c2, i2] = normalizeAccessorIn(p, e.rhs, sig);
    size_t gv = base({EqKind::Strong, c1.v, c2.v});
    size_t sv = p.subs(comp(lookup(x), final_(c1.source)), gv);  // c1 == c2
    out = p.chain({i1, sv, p.sym(i2)});
  } else {
    bool swapped = d1 > 0;
    Term a1 = swapped ? e.rhs : e.lhs;
    Term a2 = swapped ? e.lhs : e.rhs;
    Typing ty = typecheck(a1, sig);
    auto [c2, i2] = normalizeAccessorIn(p, a2, sig);
    Term h = inhabitantOf(sig, ty.source);
    size_t gA = base(mixedEqA(a1, h, c2.v, x));
    size_t gB = base(mixedEqB(a1, h, ty.source));
    size_t sv = p.subs(comp(lookup(x), final_(ty.source)), p.sym(gA));
    size_t pv = expandMixedV1(p, a1, h, ty.source, x);
    size_t t = p.chain({i2, sv, pv, gB});  // a2 == a1
    out = swapped ? t : p.sym(t);
  }
  if (e0.kind == EqKind::Weak) out = p.strongToWeak(out);
  return out;
}

// weak collapse of one side: returns (g, proof of f ~~ g) with g an accessor
inline std::pair<Term, size_t> asAccessorWeak(Prover& p, const Term& f, const Signature& sig) {
  if (decorate(f, Theory::St) <= 1) return {f, p.refl(f, EqKind::Weak)};
  std::string x = theLocation(sig);
  auto [cm, i] = normalizeModifierIn(p, f, sig);
  size_t cl = p.collapseLkpUpd(x, cm.u, cm.a);  // u.(lkp.(upd.a)) ~~ canonical(u.a)
  size_t res = p.chain({i, cl});
  return {p.eqAt(res).rhs, res};
}

// proof that final(Y) . f == upd . a for a modifier f, with a an accessor
inline std::pair<Term, size_t> statePart(Prover& p, const Term& f, const Signature& sig) {
  std::string x = theLocation(sig);
  Typing ty = typecheck(f, sig);
  Term lkp = lookup(x), upd = update(x);
  if (decorate(f, Theory::St) <= 1) {
    Term a = comp(lkp, final_(ty.source));
    size_t fu = p.finalU(comp(final_(ty.target), f));  // final(Y).f == final(A)
    size_t ul = p.updLkpIsId(x);
    size_t s = p.subs(final_(ty.source), ul);  // (upd.lkp).final(A) == id(1).final(A)
    size_t g1 = p.eqByReassoc(comp(id(unitType()), final_(ty.source)), final_(ty.source));
    size_t g2 = p.eqByReassoc(comp(comp(upd, lkp), final_(ty.source)), comp(upd, a));
    return {a, p.chain({fu, p.sym(g1), p.sym(s), g2})};
  }
  auto [cm, i] = normalizeModifierIn(p, f, sig);
  size_t rp = p.repl(final_(ty.target), i);
  size_t su = unitEndoIsId(p, comp(final_(ty.target), comp(cm.u, lkp)));
  size_t q = p.subs(comp(upd, cm.a), su);
  size_t g1 = p.eqByReassoc(comp(final_(ty.target), cm.term()),
                            comp(comp(final_(ty.target), comp(cm.u, lkp)), comp(upd, cm.a)));
  size_t g2 = p.eqByReassoc(comp(id(unitType()), comp(upd, cm.a)), comp(upd, cm.a));
  return {cm.a, p.chain({rp, g1, q, g2})};
}

// from t proving upd.a1 == upd.a2, derive a1 == a2 (accessors)
inline size_t cancelUpdate(Prover& p, const Term& a1, const Term& a2, size_t t, const Signature& sig) {
  std::string x = theLocation(sig);
  Term lkp = lookup(x), upd = update(x);
  size_t r = p.repl(lkp, t);  // lkp.(upd.a1) == lkp.(upd.a2)
  auto glueIn = [&](const Term& a) {
    return p.eqByReassoc(comp(lkp, comp(upd, a)), comp(id(valType(x)), comp(lkp, comp(upd, a))));
  };
  // collapseLkpUpd with u = id concludes id.(lkp.(upd.a)) ~~ canonical(a);
  // a1/a2 arrive canonical from statePart, so the rhs is a1/a2 itself
  size_t cl1 = p.collapseLkpUpd(x, id(valType(x)), a1);
  size_t cl2 = p.collapseLkpUpd(x, id(valType(x)), a2);
  size_t left = p.sym(cl1);  // a1 ~~ id.(lkp.(upd.a1))
  size_t q = p.chain({left, p.sym(glueIn(a1)), r, glueIn(a2), cl2});
  return p.weakToStrong(q);
}

inline std::vector<PureGoal> eqForward(Prover& p, size_t eIdx, const Signature& sig) {
  Equation e = p.eqAt(eIdx);
  int d1 = decorate(e.lhs, Theory::St), d2 = decorate(e.rhs, Theory::St);
  if (d1 <= 1 && d2 <= 1) return accForward(p, eIdx, sig);
  Typing ty = typecheck(e.lhs, sig);
  if (e.kind == EqKind::Weak) {
    auto [g1, p1] = asAccessorWeak(p, e.lhs, sig);
    auto [g2, p2] = asAccessorWeak(p, e.rhs, sig);
    (void)g1;
    (void)g2;
    size_t q = p.weakToStrong(p.chain({p.sym(p1), eIdx, p2}));  // g1 == g2
    return accForward(p, q, sig);
  }
  // strong: effect-rule split into a weak part and a state part
  size_t w = p.strongToWeak(eIdx);
  auto [g1, p1] = asAccessorWeak(p, e.lhs, sig);
  auto [g2, p2] = asAccessorWeak(p, e.rhs, sig);
  (void)g1;
  (void)g2;
  size_t qw = p.weakToStrong(p.chain({p.sym(p1), w, p2}));
  std::vector<PureGoal> goals = accForward(p, qw, sig);
  auto [a1, ps1] = statePart(p, e.lhs, sig);
  auto [a2, ps2] = statePart(p, e.rhs, sig);
  size_t sE = p.repl(final_(ty.target), eIdx);
  size_t t = p.chain({p.sym(ps1), sE, ps2});  // upd.a1 == upd.a2
  size_t st = cancelUpdate(p, a1, a2, t, sig);
  for (auto& g : accForward(p, st, sig)) goals.push_back(g);
  return goals;
}

inline size_t eqBackward(Prover& p, const Equation& e, const Signature& sig, const PureStep& base) {
  int d1 = decorate(e.lhs, Theory::St), d2 = decorate(e.rhs, Theory::St);
  if (d1 <= 1 && d2 <= 1) return accBackward(p, e, sig, base);
  Typing ty = typecheck(e.lhs, sig);
  auto [g1, p1] = asAccessorWeak(p, e.lhs, sig);
  auto [g2, p2] = asAccessorWeak(p, e.rhs, sig);
  size_t acc1 = accBackward(p, {EqKind::Strong, g1, g2}, sig, base);
  size_t weak = p.chain({p1, acc1, p.sym(p2)});  // lhs ~~ rhs
  if (e.kind == EqKind::Weak) return weak;
  auto [a1, ps1] = statePart(p, e.lhs, sig);
  auto [a2, ps2] = statePart(p, e.rhs, sig);
  size_t acc2 = accBackward(p, {EqKind::Strong, a1, a2}, sig, base);
  Term upd = update(theLocation(sig));
  size_t t = p.repl(upd, acc2);
  size_t sp = p.chain({ps1, t, p.sym(ps2)});  // final(Y).lhs == final(Y).rhs
  (void)ty;
  return p.effect(weak, sp);
}

inline void requireStEquation(const Equation& e, const Signature& sig) {
  requireSpineTerm(e.lhs);
  requireSpineTerm(e.rhs);
  theLocation(sig);
  Typing t1 = typecheck(e.lhs, sig), t2 = typecheck(e.rhs, sig);
  if (!equal(t1.source, t2.source) || !equal(t1.target, t2.target))
    throw TypeError("equation sides are not parallel");
}

}  // namespace detail

// ---- public API ----

struct AccessorNormalization {
  CanonicalAccessor form;
  Derivation cert;
  size_t concl;  // step proving input == form.term()
};

inline AccessorNormalization normalize_accessor(const Term& a, const Signature& sig) {
  Prover p(Theory::St, sig);
  auto [form, i] = detail::normalizeAccessorIn(p, a, sig);
  return {form, p.take(), i};
}

struct ModifierNormalization {
  CanonicalModifier form;
  Derivation cert;
  size_t concl;
};

inline ModifierNormalization normalize_modifier(const Term& f, const Signature& sig) {
  Prover p(Theory::St, sig);
  auto [form, i] = detail::normalizeModifierIn(p, f, sig);
  return {form, p.take(), i};
}

struct ReductionResult {
  std::vector<Equation> pureEquations;  // strong equations between pure terms
  Derivation forward;                   // step 0 assumes the input equation
  std::vector<size_t> forwardConcl;     // proofs of each pure equation
  Derivation backward;                  // assumes the pure equations
  size_t backwardConcl;                 // proof of the input equation
};

inline ReductionResult reduce_equation(const Equation& e, const Signature& sig) {
  detail::requireStEquation(e, sig);
  ReductionResult out;

  Prover pf(Theory::St, sig);
  size_t h = pf.hyp(e);
  std::vector<detail::PureGoal> goals = detail::eqForward(pf, h, sig);
  for (auto& g : goals) {
    if (detail::pureTriviallyEqual(sig, g.eq)) continue;
    bool dup = false;
    for (auto& seen : out.pureEquations) dup |= equal(seen, g.eq);
    if (dup) continue;
    out.pureEquations.push_back(g.eq);
    out.forwardConcl.push_back(g.proof);
  }
  out.forward = pf.take();

  Prover pb(Theory::St, sig);
  std::vector<std::pair<Equation, size_t>> installed;
  detail::PureStep base = [&](const Equation& goal) -> size_t {
    for (auto& [eq, idx] : installed)
      if (equal(eq, goal)) return idx;
    size_t idx;
    bool kept = false;
    for (auto& eq : out.pureEquations) kept |= equal(eq, goal);
    if (kept) idx = pb.hyp(goal);
    else {
      auto proved = detail::provePureSyntactic(pb, goal, sig);
      if (!proved) throw KernelError("dropped pure goal is not syntactically trivial");
      idx = *proved;
    }
    installed.push_back({goal, idx});
    return idx;
  };
  out.backwardConcl = detail::eqBackward(pb, e, sig, base);
  out.backward = pb.take();
  return out;
}

enum class OracleMode { Syntactic, Semantic };
enum class Verdict { Equivalent, NotEquivalent, Unknown };

struct DecideResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<Equation> pureEquations;
  std::optional<Derivation> cert;  // Equivalent: derivation ending in the input equation
  size_t certStep = 0;
  std::optional<Equation> failedPure;
  std::optional<Model> countermodel;
  std::string note;
};

inline DecideResult decide(const Equation& e, const Signature& sig, OracleMode mode = OracleMode::Syntactic,
                           long maxSize = 3) {
  detail::requireStEquation(e, sig);
  DecideResult out;

  Prover scratch(Theory::St, sig);
  size_t h = scratch.hyp(e);
  std::vector<detail::PureGoal> all = detail::eqForward(scratch, h, sig);
  std::vector<Equation> goals;
  for (auto& g : all) {
    if (detail::pureTriviallyEqual(sig, g.eq)) continue;
    bool dup = false;
    for (auto& seen : goals) dup |= equal(seen, g.eq);
    if (!dup) goals.push_back(g.eq);
  }
  out.pureEquations = goals;

  std::vector<Model> models;
  auto ensureModels = [&]() {
    if (!models.empty()) return;
    for (auto& m : enumerateModels(sig, maxSize, Model::State))
      if (satisfiesAxioms(m)) models.push_back(m);
  };

  bool unknown = false;
  for (auto& g : goals) {
    bool provable = false;
    {
      Prover t(Theory::St, sig);
      provable = detail::provePureWithAxioms(t, g, sig).has_value();
    }
    if (provable) continue;
    if (mode == OracleMode::Syntactic) {
      if (sig.axioms.empty()) {
        out.verdict = Verdict::NotEquivalent;
        out.failedPure = g;
      } else {
        unknown = true;
        continue;
      }
    } else {
      ensureModels();
      const Model* bad = nullptr;
      for (auto& m : models)
        if (!holds(g, m)) {
          bad = &m;
          break;
        }
      if (bad) {
        out.verdict = Verdict::NotEquivalent;
        out.failedPure = g;
        out.countermodel = *bad;
      } else {
        unknown = true;  // true in every model yet not syntactically provable
        out.note = "pure equation holds in all enumerated models but has no syntactic proof";
        continue;
      }
    }
    if (out.verdict == Verdict::NotEquivalent) {
      // attach a countermodel of the original equation when one exists
      ensureModels();
      if (!out.countermodel)
        for (auto& m : models)
          if (!holds(e, m)) {
            out.countermodel = m;
            break;
          }
      return out;
    }
  }
  if (unknown) {
    out.verdict = Verdict::Unknown;
    if (out.note.empty()) out.note = "pure oracle undecided under the declared axioms";
    return out;
  }

  Prover pb(Theory::St, sig);
  std::vector<std::pair<Equation, size_t>> installed;
  detail::PureStep base = [&](const Equation& goal) -> size_t {
    for (auto& [eq, idx] : installed)
      if (equal(eq, goal)) return idx;
    auto proved = detail::provePureWithAxioms(pb, goal, sig);
    size_t idx = proved ? *proved : pb.hyp(goal);
    installed.push_back({goal, idx});
    return idx;
  };
  out.certStep = detail::eqBackward(pb, e, sig, base);
  out.cert = pb.take();
  out.verdict = Verdict::Equivalent;
  return out;
}

// ---- sequential products ----

enum class SeqSide { Left, Right };

// A1 x A2 -> B1 x B2 built from one left and one right semi-pure pair;
// Left evaluates f1 first, Right evaluates f2 first.
inline Term seq_product(const Term& f1, const Term& f2, SeqSide side, const Signature& sig) {
  Typing t1 = typecheck(f1, sig), t2 = typecheck(f2, sig);
  Type A1 = t1.source, B1 = t1.target, A2 = t2.source, B2 = t2.target;
  if (side == SeqSide::Left) {
    Term first = rpair(comp(f1, proj1(A1, A2)), proj2(A1, A2));          // A1xA2 -> B1xA2
    Term second = lpair(proj1(B1, A2), comp(f2, proj2(B1, A2)));         // B1xA2 -> B1xB2
    return comp(second, first);
  }
  Term first = lpair(proj1(A1, A2), comp(f2, proj2(A1, A2)));            // A1xA2 -> A1xB2
  Term second = rpair(comp(f1, proj1(A1, B2)), proj2(A1, B2));           // A1xB2 -> B1xB2
  return comp(second, first);
}

}  // namespace decor

#endif
