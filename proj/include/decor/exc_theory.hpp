// Exceptions layer: programmer-level throw / try-catch with validation, the
// derivation-level duality transform, and the core-exceptions decision
// procedure obtained by dualizing an equation into the state theory,
// deciding it there, and transporting the certificate back.

#ifndef DECOR_EXC_THEORY_HPP
#define DECOR_EXC_THEORY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "duality.hpp"
#include "kernel.hpp"
#include "parse.hpp"
#include "state_theory.hpp"

namespace decor {

// ---- try / catch ----

// A handler specification: both the guarded body and the handler live in the
// programmer's language, so neither may be a catcher.
struct HandlerSpec {
  Term body;            // f : A -> B, decoration <= 1
  std::string exn;      // the single handled exception name
  Term handler;         // g : V[exn] -> B, decoration <= 1
};

inline TryCatchTerms try_catch(const HandlerSpec& h, const Signature& sig) {
  if (!sig.findException(h.exn)) throw TypeError("unknown exception name '" + h.exn + "'");
  Typing tf = typecheck(h.body, sig);
  Typing tg = typecheck(h.handler, sig);
  if (!equal(tg.source, valType(h.exn)))
    throw TypeError("handler must source V[" + h.exn + "], got " + show(tg.source));
  if (!equal(tg.target, tf.target))
    throw TypeError("handler target " + show(tg.target) + " differs from body target " + show(tf.target));
  if (decorate(h.body, Theory::Exc) > 1) throw DecorationError("try body must have decoration <= 1");
  if (decorate(h.handler, Theory::Exc) > 1) throw DecorationError("handler must have decoration <= 1");
  return tryCatch(h.body, h.exn, h.handler, sig);
}

// ---- derivation duality ----

namespace detail {

inline BindingValue dualBinding(const BindingValue& b) {
  switch (b.kind) {
    case BindingValue::TermV: return BindingValue::ofTerm(dualTerm(b.term));
    case BindingValue::TypeV: return BindingValue::ofType(dualType(b.type));
    case BindingValue::NameV: return b;
  }
  return b;
}

inline Judgment dualJudgment(const Judgment& j) {
  if (std::holds_alternative<TermJudgment>(j)) {
    const auto& t = std::get<TermJudgment>(j);
    return TermJudgment{dualTerm(t.term), dualType(t.target), dualType(t.source), t.dec};
  }
  return EqJudgment{dualEquation(std::get<EqJudgment>(j).eq)};
}

// Rule mirror: mostly a rename plus a binding-key permutation. The returned
// pairs map old binding keys to new ones; keys not listed keep their name.
struct RuleMirror {
  std::string name;
  std::vector<std::pair<std::string, std::string>> renames;
};

inline RuleMirror mirrorRule(const std::string& r) {
  if (r == "repl") return {"subs", {{"g", "f"}}};
  if (r == "subs") return {"repl", {{"f", "g"}}};
  if (r == "id-source") return {"id-target", {}};
  if (r == "id-target") return {"id-source", {}};
  if (r == "unit") return {"empty", {}};
  if (r == "empty") return {"unit", {}};
  if (r == "prod") return {"coprod", {}};
  if (r == "coprod") return {"prod", {}};
  if (r == "pair") return {"copair", {}};
  if (r == "copair") return {"pair", {}};
  if (r == "pair-eq") return {"copair-eq", {}};
  if (r == "copair-eq") return {"pair-eq", {}};
  if (r == "pair-u") return {"copair-u", {}};
  if (r == "copair-u") return {"pair-u", {}};
  if (r == "final") return {"initial", {{"A", "B"}}};
  if (r == "initial") return {"final", {{"B", "A"}}};
  if (r == "final-u") return {"initial-u", {{"f", "g"}}};
  if (r == "initial-u") return {"final-u", {{"g", "f"}}};
  if (r == "l-pair") return {"l-copair", {}};
  if (r == "l-copair") return {"l-pair", {}};
  if (r == "l-pair-eq") return {"l-copair-eq", {}};
  if (r == "l-copair-eq") return {"l-pair-eq", {}};
  if (r == "l-pair-u") return {"l-copair-u", {}};
  if (r == "l-copair-u") return {"l-pair-u", {}};
  if (r == "r-pair") return {"r-copair", {}};
  if (r == "r-copair") return {"r-pair", {}};
  if (r == "r-pair-eq") return {"r-copair-eq", {}};
  if (r == "r-copair-eq") return {"r-pair-eq", {}};
  if (r == "r-pair-u") return {"r-copair-u", {}};
  if (r == "r-copair-u") return {"r-pair-u", {}};
  if (r == "lookup") return {"tag", {{"X", "T"}}};
  if (r == "tag") return {"lookup", {{"T", "X"}}};
  if (r == "update") return {"untag", {{"X", "T"}}};
  if (r == "untag") return {"update", {{"T", "X"}}};
  if (r == "lookupdate") return {"untag-tag", {{"X", "T"}}};
  if (r == "untag-tag") return {"lookupdate", {{"T", "X"}}};
  if (r == "lookupdate-other") return {"untag-tag-other", {{"X", "T"}, {"Y", "R"}}};
  if (r == "untag-tag-other") return {"lookupdate-other", {{"T", "X"}, {"R", "Y"}}};
  if (r == "down" || r == "down-weak" || r == "down-intro" || r == "down-elim")
    throw FragmentError("rule '" + r + "' has no dual: derivation is outside the duality-closed fragment");
  // refl, sym, trans, id, comp, assoc, effect, local-global, up-1, up-2,
  // strong-to-weak, weak-to-strong, ax, hyp are self-dual by name.
  return {r, {}};
}

}  // namespace detail

// Transports a derivation across the duality: every step maps to its mirror
// rule with dualized bindings and judgment. Composition order reversal makes
// associativity the one non-local case: an assoc step with bindings (f, g, h)
// maps to an assoc step with (h°, g°, f°) followed by a sym step, so the
// transform may lengthen the derivation; remap (when given) receives, for
// each input step, the index of the output step carrying its dual conclusion.
inline Derivation dualDerivation(const Derivation& d, std::vector<size_t>* remap = nullptr) {
  Derivation out;
  out.theory = dualTheory(d.theory);
  std::vector<size_t> map(d.steps.size());
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    Judgment dj = detail::dualJudgment(s.concl);
    std::vector<size_t> prem;
    prem.reserve(s.premises.size());
    for (size_t p : s.premises) prem.push_back(map[p]);
    if (s.rule == "assoc") {
      const Equation& de = std::get<EqJudgment>(dj).eq;
      Bindings b;
      b.emplace("f", detail::dualBinding(s.bind.at("h")));
      b.emplace("g", detail::dualBinding(s.bind.at("g")));
      b.emplace("h", detail::dualBinding(s.bind.at("f")));
      out.steps.push_back({"assoc", std::move(b), {}, EqJudgment{{de.kind, de.rhs, de.lhs}}});
      out.steps.push_back({"sym", {}, {out.steps.size() - 1}, dj});
    } else {
      detail::RuleMirror m = detail::mirrorRule(s.rule);
      Bindings b;
      for (const auto& [key, val] : s.bind) {
        std::string nk = key;
        for (const auto& [from, to] : m.renames)
          if (key == from) nk = to;
        b.emplace(nk, detail::dualBinding(val));
      }
      out.steps.push_back({m.name, std::move(b), std::move(prem), dj});
    }
    map[i] = out.steps.size() - 1;
  }
  if (remap) *remap = std::move(map);
  return out;
}

// ---- core decision procedure ----

namespace detail {

inline void requireExcSpine(const Term& t) {
  switch (t->tag) {
    case TermTag::Comp:
      requireExcSpine(t->a);
      requireExcSpine(t->b);
      return;
    case TermTag::Id:
    case TermTag::Sym:
    case TermTag::Initial:
    case TermTag::Tag:
    case TermTag::Untag: return;
    default:
      throw FragmentError("term " + show(t) + " is outside the core exceptions fragment");
  }
}

inline void requireExcEquation(const Equation& e, const Signature& sig) {
  if (sig.exceptions.size() != 1 || !sig.locations.empty())
    throw FragmentError("core exceptions fragment needs exactly one exception name and no locations");
  requireExcSpine(e.lhs);
  requireExcSpine(e.rhs);
  Typing l = typecheck(e.lhs, sig);
  Typing r = typecheck(e.rhs, sig);
  if (!equal(l.source, r.source) || !equal(l.target, r.target))
    throw TypeError("equation sides have different types");
}

}  // namespace detail

struct ExcDecideResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<Equation> pureEquations;  // equivalent pure goals, on the exceptions side
  std::optional<Derivation> cert;       // Equivalent: exceptions-side derivation ending in the input
  size_t certStep = 0;
  std::optional<Equation> failedPure;
  // NotEquivalent: a state model of the dual signature refuting the dual
  // equation; dualSig keeps it alive and is what countermodel->sig points to.
  std::shared_ptr<const Signature> dualSig;
  std::optional<Model> countermodel;
  std::string note;
};

inline ExcDecideResult decide_exc_core(const Equation& e, const Signature& sig,
                                       OracleMode mode = OracleMode::Syntactic, long maxSize = 3) {
  detail::requireExcEquation(e, sig);
  auto dsig = std::make_shared<Signature>(dualSignature(sig));
  DecideResult inner = decide(dualEquation(e), *dsig, mode, maxSize);

  ExcDecideResult out;
  out.verdict = inner.verdict;
  out.dualSig = dsig;
  out.note = inner.note;
  for (const auto& pe : inner.pureEquations) out.pureEquations.push_back(dualEquation(pe));
  if (inner.failedPure) out.failedPure = dualEquation(*inner.failedPure);
  if (inner.cert) {
    std::vector<size_t> map;
    out.cert = dualDerivation(*inner.cert, &map);
    out.certStep = map[inner.certStep];
  }
  if (inner.countermodel) {
    out.countermodel = *inner.countermodel;
    out.countermodel->sig = dsig.get();
    if (!out.note.empty()) out.note += "; ";
    out.note += "countermodel refutes the dual state-side equation";
  }
  return out;
}

}  // namespace decor

#endif
