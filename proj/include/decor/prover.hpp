// Certificate construction on top of the kernel. A Prover accumulates steps,
// validating each one through applyRule as it is added, so a finished
// derivation always replays through checkDerivation.
//
// The workhorses are assocNorm (proof that a term equals its right-associated,
// identity-free composition spine), eqByReassoc (two terms with the same
// spine are strongly equal) and rewriteInSpine (rewrite a contiguous spine
// segment using an already-derived equation, with the congruence steps spelled
// out). The derived rules at the bottom are the single-location lemmas used
// by the normalization and decision procedures.

#ifndef DECOR_PROVER_HPP
#define DECOR_PROVER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "kernel.hpp"

namespace decor {

// outermost factor first; identities are dropped
inline void flattenInto(const Term& t, std::vector<Term>& out) {
  if (t->tag == TermTag::Comp) {
    flattenInto(t->a, out);
    flattenInto(t->b, out);
  } else if (t->tag != TermTag::Id) {
    out.push_back(t);
  }
}

inline std::vector<Term> flatten(const Term& t) {
  std::vector<Term> out;
  flattenInto(t, out);
  return out;
}

// right-associated composite of the given factors; an empty list is id(A)
inline Term rightAssoc(const std::vector<Term>& atoms, const Type& emptyCase) {
  if (atoms.empty()) return id(emptyCase);
  Term acc = atoms.back();
  for (size_t i = atoms.size() - 1; i-- > 0;) acc = comp(atoms[i], acc);
  return acc;
}

class Prover {
 public:
  Prover(Theory th, const Signature& sig) : sig_(sig) { drv_.theory = th; }

  const Derivation& derivation() const { return drv_; }
  Derivation take() { return std::move(drv_); }
  Theory theory() const { return drv_.theory; }

  const Equation& eqAt(size_t i) const {
    if (i >= drv_.steps.size() || !std::holds_alternative<EqJudgment>(drv_.steps[i].concl))
      throw KernelError("step " + std::to_string(i) + " is not an equation");
    return std::get<EqJudgment>(drv_.steps[i].concl).eq;
  }

  size_t step(const std::string& rule, Bindings bind, std::vector<size_t> prem) {
    std::vector<Judgment> pj;
    for (size_t p : prem) {
      if (p >= drv_.steps.size()) throw KernelError("bad premise index");
      pj.push_back(drv_.steps[p].concl);
    }
    Judgment concl = applyRule(drv_.theory, sig_, rule, bind, pj);
    drv_.steps.push_back({rule, std::move(bind), std::move(prem), std::move(concl)});
    return drv_.steps.size() - 1;
  }

  size_t hyp(const Equation& e) {
    Judgment j = EqJudgment{e};
    validateJudgment(j, drv_.theory, sig_);
    drv_.steps.push_back({"hyp", {}, {}, std::move(j)});
    return drv_.steps.size() - 1;
  }

  // Appends another derivation's steps (same theory), remapping premise
  // indices; returns the offset added to its indices.
  size_t append(const Derivation& other) {
    if (other.theory != drv_.theory) throw KernelError("appending a derivation of a different theory");
    size_t off = drv_.steps.size();
    for (const Step& s : other.steps) {
      Step copy = s;
      for (size_t& p : copy.premises) p += off;
      drv_.steps.push_back(std::move(copy));
    }
    return off;
  }

  // one-liner wrappers
  size_t refl(const Term& f, EqKind k = EqKind::Strong) {
    Bindings b;
    b["f"] = BindingValue::ofTerm(f);
    if (k == EqKind::Weak) b["k"] = BindingValue::ofName("weak");
    return step("refl", std::move(b), {});
  }
  size_t sym(size_t i) { return step("sym", {}, {i}); }
  size_t trans(size_t i, size_t j) { return step("trans", {}, {i, j}); }
  size_t repl(const Term& g, size_t i) { return step("repl", {{"g", BindingValue::ofTerm(g)}}, {i}); }
  size_t subs(const Term& f, size_t i) { return step("subs", {{"f", BindingValue::ofTerm(f)}}, {i}); }
  size_t idSource(const Term& f) { return step("id-source", {{"f", BindingValue::ofTerm(f)}}, {}); }
  size_t idTarget(const Term& f) { return step("id-target", {{"f", BindingValue::ofTerm(f)}}, {}); }
  size_t assocStep(const Term& f, const Term& g, const Term& h) {
    return step("assoc",
                {{"f", BindingValue::ofTerm(f)}, {"g", BindingValue::ofTerm(g)}, {"h", BindingValue::ofTerm(h)}}, {});
  }
  size_t strongToWeak(size_t i) { return step("strong-to-weak", {}, {i}); }
  size_t weakToStrong(size_t i) { return step("weak-to-strong", {}, {i}); }
  size_t finalU(const Term& f) { return step("final-u", {{"f", BindingValue::ofTerm(f)}}, {}); }
  size_t axiom(const std::string& name) { return step("ax", {{"name", BindingValue::ofName(name)}}, {}); }
  size_t lookupdate(const std::string& x) { return step("lookupdate", {{"X", BindingValue::ofName(x)}}, {}); }
  size_t untagTag(const std::string& t) { return step("untag-tag", {{"T", BindingValue::ofName(t)}}, {}); }
  size_t localGlobal(const Term& f, const Term& g, std::vector<size_t> prem) {
    return step("local-global", {{"f", BindingValue::ofTerm(f)}, {"g", BindingValue::ofTerm(g)}}, std::move(prem));
  }
  size_t effect(size_t weakPrem, size_t strongPrem) { return step("effect", {}, {weakPrem, strongPrem}); }

  size_t asWeak(size_t i) { return eqAt(i).kind == EqKind::Weak ? i : strongToWeak(i); }

  // trans with automatic strong-to-weak adjustment
  size_t chain(size_t i, size_t j) {
    if (eqAt(i).kind == eqAt(j).kind) return trans(i, j);
    return trans(asWeak(i), asWeak(j));
  }
  size_t chain(std::vector<size_t> idx) {
    if (idx.empty()) throw KernelError("empty chain");
    size_t acc = idx[0];
    for (size_t k = 1; k < idx.size(); ++k) acc = chain(acc, idx[k]);
    return acc;
  }

  // proof of t == canonical(t) where canonical is the right-associated
  // identity-free spine (or id when every factor is an identity)
  std::pair<Term, size_t> assocNorm(const Term& t) {
    if (t->tag != TermTag::Comp) return {t, refl(t)};
    auto [g1, pg] = assocNorm(t->a);
    auto [f1, pf] = assocNorm(t->b);
    size_t p = trans(subs(t->b, pg), repl(g1, pf));  // t == g1 . f1
    auto [m, pm] = mergeComp(g1, f1);
    return {m, trans(p, pm)};
  }

  // proof of a == b for terms with identical spines
  size_t eqByReassoc(const Term& a, const Term& b) {
    auto [na, pa] = assocNorm(a);
    auto [nb, pb] = assocNorm(b);
    if (!equal(na, nb)) throw KernelError("terms do not share a composition spine");
    return trans(pa, sym(pb));
  }

  // Rewrites the first occurrence of eq's lhs spine inside `whole`; returns
  // the rewritten canonical spine and a proof of `whole == / ~~ result`.
  // Weak rewrites require every factor left of the segment to be pure.
  std::pair<Term, size_t> rewriteInSpine(const Term& whole, size_t eqIdx) {
    const Equation eq = eqAt(eqIdx);
    std::vector<Term> atoms = flatten(whole);
    std::vector<Term> seg = flatten(eq.lhs);
    if (seg.empty()) throw KernelError("cannot rewrite an identity segment");
    size_t at = atoms.size();
    for (size_t i = 0; i + seg.size() <= atoms.size(); ++i) {
      bool ok = true;
      for (size_t j = 0; j < seg.size() && ok; ++j) ok = equal(atoms[i + j], seg[j]);
      if (ok) {
        at = i;
        break;
      }
    }
    if (at == atoms.size()) throw KernelError("segment not found in spine");
    if (eq.kind == EqKind::Weak)
      for (size_t i = 0; i < at; ++i)
        if (decorate(atoms[i], drv_.theory) != 0)
          throw KernelError("cannot rewrite a weak equation under a non-pure prefix");

    std::vector<Term> suffix(atoms.begin() + at + seg.size(), atoms.end());
    Typing segTy = typecheck(eq.lhs, sig_);
    auto nest = [&](const Term& mid) {
      Term acc = suffix.empty() ? mid : comp(mid, rightAssoc(suffix, segTy.source));
      for (size_t i = at; i-- > 0;) acc = comp(atoms[i], acc);
      return acc;
    };
    Term u = nest(eq.lhs);
    Term u2 = nest(eq.rhs);
    size_t p1 = eqByReassoc(whole, u);
    size_t q = eqIdx;
    if (!suffix.empty()) q = subs(rightAssoc(suffix, segTy.source), q);
    for (size_t i = at; i-- > 0;) q = repl(atoms[i], q);  // now: u ==/~~ u2
    auto [result, p3] = assocNorm(u2);
    return {result, chain(chain(p1, q), p3)};
  }

  // ---- derived rules for a single location (value type V, location x) ----

  // premise: lkp . f ~~ lkp . g for f, g : A -> 1; concludes f == g
  size_t oneLocObservation(const Term& f, const Term& g, size_t prem) {
    if (sig_.locations.size() != 1) throw FragmentError("needs exactly one location");
    return localGlobal(f, g, {prem});
  }

  // premise: f ~~ g : A -> V[x]; concludes upd . f == upd . g
  size_t updCong(const std::string& x, const Term& f, const Term& g, size_t prem) {
    Term lkp = lookup(x), upd = update(x);
    size_t ax = lookupdate(x);
    size_t lf = chain({subs(f, ax), idTarget(f), prem, sym(idTarget(g)), sym(subs(g, ax))});
    // lf : (lkp . upd) . f ~~ (lkp . upd) . g; reshape for local-global
    size_t l = chain({eqByReassoc(comp(lkp, comp(upd, f)), comp(comp(lkp, upd), f)), lf,
                      eqByReassoc(comp(comp(lkp, upd), g), comp(lkp, comp(upd, g)))});
    return oneLocObservation(comp(upd, f), comp(upd, g), l);
  }

  // concludes upd . lkp == id(1)
  size_t updLkpIsId(const std::string& x) {
    Term lkp = lookup(x), upd = update(x);
    size_t ax = lookupdate(x);
    size_t s = chain({subs(lkp, ax), idTarget(lkp), sym(idSource(lkp))});
    // s : (lkp . upd) . lkp ~~ lkp . id(1)
    size_t l = chain({eqByReassoc(comp(lkp, comp(upd, lkp)), comp(comp(lkp, upd), lkp)), s});
    return oneLocObservation(comp(upd, lkp), id(unitType()), l);
  }

  // concludes u . (lkp . (upd . a)) ~~ u . a for pure u, accessor a
  size_t collapseLkpUpd(const std::string& x, const Term& u, const Term& a) {
    size_t r = subs(a, repl(u, lookupdate(x)));  // (u . (lkp . upd)) . a ~~ (u . id) . a
    Term lhs = comp(u, comp(lookup(x), comp(update(x), a)));
    auto [rn, pr] = assocNorm(comp(comp(u, id(valType(x))), a));
    (void)rn;
    return chain({eqByReassoc(lhs, comp(comp(u, comp(lookup(x), update(x))), a)), r, pr});
  }

  // concludes x0 == x0 . (final(V) . lkp) for pure x0 : 1 -> A
  size_t padWithLookup(const std::string& x, const Term& x0) {
    Term fl = comp(final_(valType(x)), lookup(x));
    size_t t = trans(finalU(fl), sym(finalU(id(unitType()))));  // final(V) . lkp == id(1)
    return sym(trans(repl(x0, t), idSource(x0)));
  }

  // premise: w . lkp == u . lkp for pure w, u : V -> A; concludes w == u
  size_t cancelLookup(const std::string& x, const Term& w, const Term& u, size_t prem) {
    Term lkp = lookup(x), upd = update(x);
    size_t s = subs(upd, prem);  // (w . lkp) . upd == (u . lkp) . upd
    size_t l = chain({eqByReassoc(comp(w, comp(lkp, upd)), comp(comp(w, lkp), upd)), s,
                      eqByReassoc(comp(comp(u, lkp), upd), comp(u, comp(lkp, upd)))});
    size_t ax = lookupdate(x);
    size_t left = chain({sym(idSource(w)), sym(repl(w, ax))});   // w ~~ w . (lkp . upd)
    size_t right = chain({repl(u, ax), idSource(u)});            // u . (lkp . upd) ~~ u
    return weakToStrong(chain({left, l, right}));
  }

  // premise: w . lkp == x0 for pure w : V -> A, x0 : 1 -> A;
  // concludes w == x0 . final(V)
  size_t constLookup(const std::string& x, const Term& w, const Term& x0, size_t prem) {
    size_t t = trans(prem, padWithLookup(x, x0));  // w . lkp == x0 . (final(V) . lkp)
    Term u = comp(x0, final_(valType(x)));
    size_t shaped = trans(t, eqByReassoc(comp(x0, comp(final_(valType(x)), lookup(x))), comp(u, lookup(x))));
    return cancelLookup(x, w, u, shaped);
  }

 private:
  // g and f canonical; proves g . f == merged canonical form
  std::pair<Term, size_t> mergeComp(const Term& g, const Term& f) {
    if (g->tag == TermTag::Id) return {f, idTarget(f)};
    if (f->tag == TermTag::Id) return {g, idSource(g)};
    if (g->tag == TermTag::Comp) {
      size_t pa = sym(assocStep(f, g->b, g->a));  // (ga . gb) . f == ga . (gb . f)
      auto [m, pm] = mergeComp(g->b, f);
      size_t pr = repl(g->a, pm);  // ga . (gb . f) == ga . m
      return {comp(g->a, m), trans(pa, pr)};
    }
    return {comp(g, f), refl(comp(g, f))};
  }

  const Signature& sig_;
  Derivation drv_;
};

}  // namespace decor

#endif
