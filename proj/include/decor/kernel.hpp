// The proof kernel: judgments, derivation steps, the per-theory rule
// catalogue, rule application and derivation checking.
//
// A derivation is a flat list of steps checked strictly in order. Matching is
// plain structural equality; associativity and identity laws must be applied
// through their rules. Term-formation steps are validated intrinsically by
// the type checker and decoration inference; only equation steps reference
// earlier steps as premises.

#ifndef DECOR_KERNEL_HPP
#define DECOR_KERNEL_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "check.hpp"
#include "error.hpp"
#include "signature.hpp"

namespace decor {

struct TermJudgment {
  Term term;
  Type source, target;
  int dec;  // minimal decoration
};

struct EqJudgment {
  Equation eq;
};

using Judgment = std::variant<TermJudgment, EqJudgment>;

inline bool equal(const Judgment& a, const Judgment& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<TermJudgment>(a)) {
    auto& x = std::get<TermJudgment>(a);
    auto& y = std::get<TermJudgment>(b);
    return equal(x.term, y.term) && equal(x.source, y.source) && equal(x.target, y.target) && x.dec == y.dec;
  }
  return equal(std::get<EqJudgment>(a).eq, std::get<EqJudgment>(b).eq);
}

inline std::string show(const Judgment& j) {
  if (std::holds_alternative<TermJudgment>(j)) {
    auto& t = std::get<TermJudgment>(j);
    return show(t.term) + " : " + show(t.source) + " -> " + show(t.target) + " @ " + std::to_string(t.dec);
  }
  return show(std::get<EqJudgment>(j).eq);
}

struct BindingValue {
  enum Kind : uint8_t { TermV, TypeV, NameV };
  Kind kind;
  Term term;         // TermV
  Type type;         // TypeV
  std::string name;  // NameV

  static BindingValue ofTerm(Term t) { return {TermV, std::move(t), nullptr, ""}; }
  static BindingValue ofType(Type t) { return {TypeV, nullptr, std::move(t), ""}; }
  static BindingValue ofName(std::string n) { return {NameV, nullptr, nullptr, std::move(n)}; }
};

using Bindings = std::map<std::string, BindingValue>;

struct Step {
  std::string rule;
  Bindings bind;
  std::vector<size_t> premises;  // indices of earlier steps
  Judgment concl;
};

struct Derivation {
  Theory theory;
  std::vector<Step> steps;
};

// ---- rule catalogue ----

struct MetaVarDecl {
  std::string name;
  BindingValue::Kind kind;
  bool required = true;
};

struct RuleSchema {
  std::string name;
  std::vector<MetaVarDecl> metas;
  int premises;  // -1: one per location / exception name
  std::string note;
};

namespace detail {

inline void addCommonRules(std::vector<RuleSchema>& out, bool comonadSide) {
  using BV = BindingValue;
  auto P = comonadSide ? "components of decoration <= 1" : "pure components";
  auto Q = comonadSide ? "pure components" : "components of decoration <= 1";
  out.push_back({"refl", {{"f", BV::TermV}, {"k", BV::NameV, false}}, 0, "f == f (k = strong | weak)"});
  out.push_back({"sym", {}, 1, "flip an equation"});
  out.push_back({"trans", {}, 2, "chain two equations of the same kind"});
  out.push_back({"repl",
                 {{"g", BV::TermV}},
                 1,
                 comonadSide ? "g . f1 == g . f2; on weak equations g must be pure" : "g . f1 == g . f2"});
  out.push_back({"subs",
                 {{"f", BV::TermV}},
                 1,
                 comonadSide ? "g1 . f == g2 . f" : "g1 . f == g2 . f; on weak equations f must be pure"});
  out.push_back({"id", {{"A", BV::TypeV}}, 0, "id(A) : A -> A @ 0"});
  out.push_back({"comp", {{"g", BV::TermV}, {"f", BV::TermV}}, 0, "g . f formation"});
  out.push_back({"id-source", {{"f", BV::TermV}}, 0, "f . id(A) == f"});
  out.push_back({"id-target", {{"f", BV::TermV}}, 0, "id(B) . f == f"});
  out.push_back({"assoc", {{"f", BV::TermV}, {"g", BV::TermV}, {"h", BV::TermV}}, 0, "h . (g . f) == (h . g) . f"});
  out.push_back({"unit", {}, 0, "type formation of 1 (no judgment form)"});
  out.push_back({"prod", {{"A", BV::TypeV}, {"B", BV::TypeV}, {"i", BV::NameV}}, 0, "pr_i(A, B) formation"});
  out.push_back({"pair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, std::string("pair formation; ") + P});
  out.push_back({"pair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                 std::string("pr_i . pair(f1, f2) == f_i; ") + P});
  out.push_back({"pair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2,
                 std::string("uniqueness of pairs; ") + P});
  out.push_back({"final", {{"A", BV::TypeV}}, 0, "final(A) : A -> 1 @ 0"});
  out.push_back({"final-u",
                 {{"f", BV::TermV}},
                 0,
                 comonadSide ? "f == final(A) for f : A -> 1 of decoration <= 1" : "f == final(A) for pure f"});
  out.push_back({"empty", {}, 0, "type formation of 0 (no judgment form)"});
  out.push_back({"coprod", {{"A", BV::TypeV}, {"B", BV::TypeV}, {"i", BV::NameV}}, 0, "in_i(A, B) formation"});
  out.push_back({"copair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, std::string("copair formation; ") + Q});
  out.push_back({"copair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                 std::string("copair(f1, f2) . in_i == f_i; ") + Q});
  out.push_back({"copair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2,
                 std::string("uniqueness of copairs; ") + Q});
  out.push_back({"initial", {{"B", BV::TypeV}}, 0, "initial(B) : 0 -> B @ 0"});
  out.push_back({"initial-u",
                 {{"g", BV::TermV}},
                 0,
                 comonadSide ? "g == initial(B) for pure g" : "g == initial(B) for g : 0 -> B of decoration <= 1"});
  out.push_back({"up-1", {{"f", BV::TermV}}, 0, "use f at decoration 1"});
  out.push_back({"up-2", {{"f", BV::TermV}}, 0, "use f at decoration 2"});
  out.push_back({"strong-to-weak", {}, 1, "f == g entails f ~~ g"});
  out.push_back({"weak-to-strong", {}, 1, "f ~~ g entails f == g when both decorations <= 1"});
  out.push_back({"ax", {{"name", BV::NameV}}, 0, "pure axiom from the signature"});
  out.push_back({"hyp", {}, 0, "hypothesis: conclusion assumed, checked for well-formedness only"});
}

}  // namespace detail

inline const std::vector<RuleSchema>& ruleCatalogue(Theory th) {
  using BV = BindingValue;
  static const auto make = [](Theory t) {
    std::vector<RuleSchema> out;
    bool comonadSide = (t == Theory::Com || t == Theory::St);
    detail::addCommonRules(out, comonadSide);
    if (t == Theory::St) {
      out.push_back({"l-pair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, "lpair of an accessor and a modifier"});
      out.push_back({"l-pair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                     "pr1 . lpair ~~ f1 (i = 1), pr2 . lpair == f2 (i = 2)"});
      out.push_back({"l-pair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2, "uniqueness of lpair"});
      out.push_back({"r-pair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, "rpair of a modifier and an accessor"});
      out.push_back({"r-pair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                     "pr1 . rpair == f1 (i = 1), pr2 . rpair ~~ f2 (i = 2)"});
      out.push_back({"r-pair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2, "uniqueness of rpair"});
      out.push_back({"effect", {}, 2, "f ~~ g and final . f == final . g entail f == g"});
      out.push_back({"lookup", {{"X", BV::NameV}}, 0, "lkp[X] : 1 -> V[X] @ 1"});
      out.push_back({"update", {{"X", BV::NameV}}, 0, "upd[X] : V[X] -> 1 @ 2"});
      out.push_back({"lookupdate", {{"X", BV::NameV}}, 0, "lkp[X] . upd[X] ~~ id(V[X])"});
      out.push_back({"lookupdate-other", {{"X", BV::NameV}, {"Y", BV::NameV}}, 0,
                     "lkp[Y] . upd[X] ~~ lkp[Y] . final(V[X]) for X != Y"});
      out.push_back({"local-global", {{"f", BV::TermV}, {"g", BV::TermV}}, -1,
                     "one weak premise lkp[X] . f ~~ lkp[X] . g per location, in declaration order"});
    } else if (t == Theory::Exc) {
      out.push_back({"l-copair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, "lcopair of a propagator and a catcher"});
      out.push_back({"l-copair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                     "lcopair . in1 ~~ f1 (i = 1), lcopair . in2 == f2 (i = 2)"});
      out.push_back(
          {"l-copair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2, "uniqueness of lcopair"});
      out.push_back({"r-copair", {{"f1", BV::TermV}, {"f2", BV::TermV}}, 0, "rcopair of a catcher and a propagator"});
      out.push_back({"r-copair-eq", {{"f1", BV::TermV}, {"f2", BV::TermV}, {"i", BV::NameV}}, 0,
                     "rcopair . in1 == f1 (i = 1), rcopair . in2 ~~ f2 (i = 2)"});
      out.push_back(
          {"r-copair-u", {{"g", BV::TermV}, {"f1", BV::TermV}, {"f2", BV::TermV}}, 2, "uniqueness of rcopair"});
      out.push_back({"effect", {}, 2, "f ~~ g and f . initial == g . initial entail f == g"});
      out.push_back({"tag", {{"T", BV::NameV}}, 0, "tag[T] : V[T] -> 0 @ 1"});
      out.push_back({"untag", {{"T", BV::NameV}}, 0, "untag[T] : 0 -> V[T] @ 2"});
      out.push_back({"untag-tag", {{"T", BV::NameV}}, 0, "untag[T] . tag[T] ~~ id(V[T])"});
      out.push_back({"untag-tag-other", {{"T", BV::NameV}, {"R", BV::NameV}}, 0,
                     "untag[T] . tag[R] ~~ initial(V[T]) . tag[R] for T != R"});
      out.push_back({"local-global", {{"f", BV::TermV}, {"g", BV::TermV}}, -1,
                     "one weak premise f . tag[T] ~~ g . tag[T] per exception name, in declaration order"});
      out.push_back({"down", {{"f", BV::TermV}}, 0, "down(f) formation: decoration drops to <= 1"});
      out.push_back({"down-weak", {{"f", BV::TermV}}, 0, "f ~~ down(f)"});
      out.push_back({"down-intro", {}, 1, "f ~~ g entails down(f) == down(g)"});
      out.push_back({"down-elim", {}, 1, "down(f) == down(g) entails f ~~ g"});
    }
    return out;
  };
  static const std::vector<RuleSchema> com = make(Theory::Com);
  static const std::vector<RuleSchema> mon = make(Theory::Mon);
  static const std::vector<RuleSchema> st = make(Theory::St);
  static const std::vector<RuleSchema> exc = make(Theory::Exc);
  switch (th) {
    case Theory::Com: return com;
    case Theory::Mon: return mon;
    case Theory::St: return st;
    case Theory::Exc: return exc;
  }
  return com;
}

inline const RuleSchema* findRule(Theory th, const std::string& name) {
  for (auto& r : ruleCatalogue(th))
    if (r.name == name) return &r;
  return nullptr;
}

// ---- rule application ----

namespace detail {

struct RuleCtx {
  Theory th;
  const Signature& sig;
  const std::string& rule;
  const Bindings& bind;
  const std::vector<Judgment>& prem;

  [[noreturn]] void err(const std::string& msg) const { throw KernelError(rule + ": " + msg); }

  const BindingValue& get(const std::string& n) const {
    auto it = bind.find(n);
    if (it == bind.end()) err("missing binding '" + n + "'");
    return it->second;
  }
  bool has(const std::string& n) const { return bind.count(n) != 0; }
  Term term(const std::string& n) const {
    const BindingValue& v = get(n);
    if (v.kind != BindingValue::TermV) err("binding '" + n + "' must be a term");
    return v.term;
  }
  Type type(const std::string& n) const {
    const BindingValue& v = get(n);
    if (v.kind != BindingValue::TypeV) err("binding '" + n + "' must be a type");
    return v.type;
  }
  std::string name(const std::string& n) const {
    const BindingValue& v = get(n);
    if (v.kind != BindingValue::NameV) err("binding '" + n + "' must be a name");
    return v.name;
  }

  Typing ty(const Term& t) const { return typecheck(t, sig); }
  int dec(const Term& t) const { return decorate(t, th); }
  bool comonadSide() const { return th == Theory::Com || th == Theory::St; }

  const Equation& eqPrem(size_t i) const {
    if (i >= prem.size()) err("expected at least " + std::to_string(i + 1) + " premises");
    if (!std::holds_alternative<EqJudgment>(prem[i])) err("premise " + std::to_string(i + 1) + " must be an equation");
    return std::get<EqJudgment>(prem[i]).eq;
  }
  void wantPremise(size_t i, const Equation& expected) const {
    if (!equal(eqPrem(i), expected))
      err("premise " + std::to_string(i + 1) + " must be `" + show(expected) + "`, got `" + show(eqPrem(i)) + "`");
  }
  void wantPremises(size_t n) const {
    if (prem.size() != n) err("expects " + std::to_string(n) + " premises, got " + std::to_string(prem.size()));
  }
  void bound(const Term& t, int b, const std::string& who) const {
    if (dec(t) > b) err(who + " has decoration " + std::to_string(dec(t)) + ", bound is " + std::to_string(b));
  }

  Judgment termJ(const Term& t) const {
    Typing x = ty(t);
    return TermJudgment{t, x.source, x.target, dec(t)};
  }
  Judgment eqJ(EqKind k, const Term& l, const Term& r) const {
    Typing a = ty(l);
    Typing b = ty(r);
    if (!equal(a.source, b.source) || !equal(a.target, b.target)) err("conclusion sides are not parallel");
    return EqJudgment{{k, l, r}};
  }

  // decoration bound for the symmetric product rules / final-u
  int prodBound() const { return comonadSide() ? 1 : 0; }
  // decoration bound for the symmetric coproduct rules / initial-u
  int coprodBound() const {
    if (th == Theory::St) return 2;  // distributivity: copairs of modifiers
    return comonadSide() ? 0 : 1;
  }
};

inline Judgment applyRuleImpl(const RuleCtx& c) {
  const std::string& r = c.rule;

  // congruence
  if (r == "refl") {
    EqKind k = EqKind::Strong;
    if (c.has("k")) {
      std::string kn = c.name("k");
      if (kn == "weak") k = EqKind::Weak;
      else if (kn != "strong") c.err("k must be strong or weak");
    }
    Term f = c.term("f");
    return c.eqJ(k, f, f);
  }
  if (r == "sym") {
    c.wantPremises(1);
    const Equation& e = c.eqPrem(0);
    return c.eqJ(e.kind, e.rhs, e.lhs);
  }
  if (r == "trans") {
    c.wantPremises(2);
    const Equation& e1 = c.eqPrem(0);
    const Equation& e2 = c.eqPrem(1);
    if (e1.kind != e2.kind) c.err("premises have different equation kinds");
    if (!equal(e1.rhs, e2.lhs)) c.err("middle terms differ");
    return c.eqJ(e1.kind, e1.lhs, e2.rhs);
  }
  if (r == "repl") {
    c.wantPremises(1);
    const Equation& e = c.eqPrem(0);
    Term g = c.term("g");
    if (!equal(c.ty(g).source, c.ty(e.lhs).target)) c.err("g does not source the premise's target");
    if (e.kind == EqKind::Weak && c.comonadSide() && c.dec(g) != 0)
      c.err("on weak equations the replacing term must be pure");
    return c.eqJ(e.kind, comp(g, e.lhs), comp(g, e.rhs));
  }
  if (r == "subs") {
    c.wantPremises(1);
    const Equation& e = c.eqPrem(0);
    Term f = c.term("f");
    if (!equal(c.ty(f).target, c.ty(e.lhs).source)) c.err("f does not target the premise's source");
    if (e.kind == EqKind::Weak && !c.comonadSide() && c.dec(f) != 0)
      c.err("on weak equations the substituted term must be pure");
    return c.eqJ(e.kind, comp(e.lhs, f), comp(e.rhs, f));
  }

  // categorical
  if (r == "id") return c.termJ(id(c.type("A")));
  if (r == "comp") return c.termJ(comp(c.term("g"), c.term("f")));
  if (r == "id-source") {
    Term f = c.term("f");
    return c.eqJ(EqKind::Strong, comp(f, id(c.ty(f).source)), f);
  }
  if (r == "id-target") {
    Term f = c.term("f");
    return c.eqJ(EqKind::Strong, comp(id(c.ty(f).target), f), f);
  }
  if (r == "assoc") {
    Term f = c.term("f"), g = c.term("g"), h = c.term("h");
    return c.eqJ(EqKind::Strong, comp(h, comp(g, f)), comp(comp(h, g), f));
  }

  // products
  if (r == "prod") {
    std::string i = c.name("i");
    if (i == "1") return c.termJ(proj1(c.type("A"), c.type("B")));
    if (i == "2") return c.termJ(proj2(c.type("A"), c.type("B")));
    c.err("i must be 1 or 2");
  }
  if (r == "pair" || r == "pair-eq" || r == "pair-u") {
    Term f1 = c.term("f1"), f2 = c.term("f2");
    c.bound(f1, c.prodBound(), "f1");
    c.bound(f2, c.prodBound(), "f2");
    Term pr = pair(f1, f2);
    Typing pt = c.ty(pr);
    if (r == "pair") return c.termJ(pr);
    Term p1 = proj1(c.ty(f1).target, c.ty(f2).target);
    Term p2 = proj2(c.ty(f1).target, c.ty(f2).target);
    if (r == "pair-eq") {
      std::string i = c.name("i");
      if (i == "1") return c.eqJ(EqKind::Strong, comp(p1, pr), f1);
      if (i == "2") return c.eqJ(EqKind::Strong, comp(p2, pr), f2);
      c.err("i must be 1 or 2");
    }
    Term g = c.term("g");
    c.bound(g, c.prodBound(), "g");
    c.wantPremises(2);
    c.wantPremise(0, {EqKind::Strong, comp(p1, g), f1});
    c.wantPremise(1, {EqKind::Strong, comp(p2, g), f2});
    return c.eqJ(EqKind::Strong, g, pr);
  }
  if (r == "final") return c.termJ(final_(c.type("A")));
  if (r == "final-u") {
    Term f = c.term("f");
    Typing t = c.ty(f);
    if (!equal(t.target, unitType())) c.err("f must target 1");
    c.bound(f, c.prodBound(), "f");
    return c.eqJ(EqKind::Strong, f, final_(t.source));
  }

  // coproducts
  if (r == "coprod") {
    std::string i = c.name("i");
    if (i == "1") return c.termJ(in1(c.type("A"), c.type("B")));
    if (i == "2") return c.termJ(in2(c.type("A"), c.type("B")));
    c.err("i must be 1 or 2");
  }
  if (r == "copair" || r == "copair-eq" || r == "copair-u") {
    Term f1 = c.term("f1"), f2 = c.term("f2");
    c.bound(f1, c.coprodBound(), "f1");
    c.bound(f2, c.coprodBound(), "f2");
    Term cp = copair(f1, f2);
    if (r == "copair") return c.termJ(cp);
    Term i1 = in1(c.ty(f1).source, c.ty(f2).source);
    Term i2 = in2(c.ty(f1).source, c.ty(f2).source);
    if (r == "copair-eq") {
      std::string i = c.name("i");
      if (i == "1") return c.eqJ(EqKind::Strong, comp(cp, i1), f1);
      if (i == "2") return c.eqJ(EqKind::Strong, comp(cp, i2), f2);
      c.err("i must be 1 or 2");
    }
    Term g = c.term("g");
    c.bound(g, c.coprodBound(), "g");
    c.wantPremises(2);
    c.wantPremise(0, {EqKind::Strong, comp(g, i1), f1});
    c.wantPremise(1, {EqKind::Strong, comp(g, i2), f2});
    return c.eqJ(EqKind::Strong, g, cp);
  }
  if (r == "initial") return c.termJ(initial(c.type("B")));
  if (r == "initial-u") {
    Term g = c.term("g");
    Typing t = c.ty(g);
    if (!equal(t.source, emptyType())) c.err("g must source 0");
    c.bound(g, c.coprodBound() == 2 ? 0 : c.coprodBound(), "g");  // no modifier variant in L_st
    return c.eqJ(EqKind::Strong, g, initial(t.target));
  }

  // conversions
  if (r == "up-1" || r == "up-2") {
    Term f = c.term("f");
    Typing t = c.ty(f);
    int want = (r == "up-1") ? 1 : 2;
    if (c.dec(f) > want) c.err("decoration " + std::to_string(c.dec(f)) + " cannot be upcast to " + std::to_string(want));
    return TermJudgment{f, t.source, t.target, want};
  }
  if (r == "strong-to-weak") {
    c.wantPremises(1);
    const Equation& e = c.eqPrem(0);
    if (e.kind != EqKind::Strong) c.err("premise must be strong");
    return c.eqJ(EqKind::Weak, e.lhs, e.rhs);
  }
  if (r == "weak-to-strong") {
    c.wantPremises(1);
    const Equation& e = c.eqPrem(0);
    if (e.kind != EqKind::Weak) c.err("premise must be weak");
    if (c.dec(e.lhs) > 1 || c.dec(e.rhs) > 1) c.err("requires both decorations <= 1");
    return c.eqJ(EqKind::Strong, e.lhs, e.rhs);
  }

  // axioms and hypotheses
  if (r == "ax") {
    const AxiomDecl* a = c.sig.findAxiom(c.name("name"));
    if (!a) c.err("unknown axiom '" + c.name("name") + "'");
    return c.eqJ(a->eq.kind, a->eq.lhs, a->eq.rhs);
  }

  // state
  if (c.th == Theory::St) {
    if (r == "lookup") return c.termJ(lookup(c.name("X")));
    if (r == "update") return c.termJ(update(c.name("X")));
    if (r == "lookupdate") {
      std::string x = c.name("X");
      if (!c.sig.findLocation(x)) c.err("unknown location '" + x + "'");
      return c.eqJ(EqKind::Weak, comp(lookup(x), update(x)), id(valType(x)));
    }
    if (r == "lookupdate-other") {
      std::string x = c.name("X"), y = c.name("Y");
      if (!c.sig.findLocation(x)) c.err("unknown location '" + x + "'");
      if (!c.sig.findLocation(y)) c.err("unknown location '" + y + "'");
      if (x == y) c.err("locations must differ");
      return c.eqJ(EqKind::Weak, comp(lookup(y), update(x)), comp(lookup(y), final_(valType(x))));
    }
    if (r == "effect") {
      c.wantPremises(2);
      const Equation& w = c.eqPrem(0);
      if (w.kind != EqKind::Weak) c.err("first premise must be weak");
      Term fin = final_(c.ty(w.lhs).target);
      c.wantPremise(1, {EqKind::Strong, comp(fin, w.lhs), comp(fin, w.rhs)});
      return c.eqJ(EqKind::Strong, w.lhs, w.rhs);
    }
    if (r == "local-global") {
      Term f = c.term("f"), g = c.term("g");
      if (!equal(c.ty(f).target, unitType())) c.err("f must target 1");
      if (c.sig.locations.empty()) c.err("signature declares no locations");
      if (c.prem.size() != c.sig.locations.size())
        c.err("expects one premise per location (" + std::to_string(c.sig.locations.size()) + ")");
      for (size_t i = 0; i < c.sig.locations.size(); ++i) {
        Term l = lookup(c.sig.locations[i].name);
        c.wantPremise(i, {EqKind::Weak, comp(l, f), comp(l, g)});
      }
      return c.eqJ(EqKind::Strong, f, g);
    }
    if (r == "l-pair" || r == "l-pair-eq" || r == "l-pair-u" || r == "r-pair" || r == "r-pair-eq" || r == "r-pair-u") {
      bool left = r[0] == 'l';
      Term f1 = c.term("f1"), f2 = c.term("f2");
      c.bound(f1, left ? 1 : 2, "f1");
      c.bound(f2, left ? 2 : 1, "f2");
      Term pr = left ? lpair(f1, f2) : rpair(f1, f2);
      Term p1 = proj1(c.ty(f1).target, c.ty(f2).target);
      Term p2 = proj2(c.ty(f1).target, c.ty(f2).target);
      // the accessor component is projected weakly, the modifier one strongly
      EqKind k1 = left ? EqKind::Weak : EqKind::Strong;
      EqKind k2 = left ? EqKind::Strong : EqKind::Weak;
      if (r == "l-pair" || r == "r-pair") return c.termJ(pr);
      if (r == "l-pair-eq" || r == "r-pair-eq") {
        std::string i = c.name("i");
        if (i == "1") return c.eqJ(k1, comp(p1, pr), f1);
        if (i == "2") return c.eqJ(k2, comp(p2, pr), f2);
        c.err("i must be 1 or 2");
      }
      Term g = c.term("g");
      c.wantPremises(2);
      c.wantPremise(0, {k1, comp(p1, g), f1});
      c.wantPremise(1, {k2, comp(p2, g), f2});
      return c.eqJ(EqKind::Strong, g, pr);
    }
  }

  // exceptions
  if (c.th == Theory::Exc) {
    if (r == "tag") return c.termJ(tagTerm(c.name("T")));
    if (r == "untag") return c.termJ(untag(c.name("T")));
    if (r == "untag-tag") {
      std::string t = c.name("T");
      if (!c.sig.findException(t)) c.err("unknown exception name '" + t + "'");
      return c.eqJ(EqKind::Weak, comp(untag(t), tagTerm(t)), id(valType(t)));
    }
    if (r == "untag-tag-other") {
      std::string t = c.name("T"), s = c.name("R");
      if (!c.sig.findException(t)) c.err("unknown exception name '" + t + "'");
      if (!c.sig.findException(s)) c.err("unknown exception name '" + s + "'");
      if (t == s) c.err("exception names must differ");
      return c.eqJ(EqKind::Weak, comp(untag(t), tagTerm(s)), comp(initial(valType(t)), tagTerm(s)));
    }
    if (r == "effect") {
      c.wantPremises(2);
      const Equation& w = c.eqPrem(0);
      if (w.kind != EqKind::Weak) c.err("first premise must be weak");
      Term ini = initial(c.ty(w.lhs).source);
      c.wantPremise(1, {EqKind::Strong, comp(w.lhs, ini), comp(w.rhs, ini)});
      return c.eqJ(EqKind::Strong, w.lhs, w.rhs);
    }
    if (r == "local-global") {
      Term f = c.term("f"), g = c.term("g");
      if (!equal(c.ty(f).source, emptyType())) c.err("f must source 0");
      if (c.sig.exceptions.empty()) c.err("signature declares no exception names");
      if (c.prem.size() != c.sig.exceptions.size())
        c.err("expects one premise per exception name (" + std::to_string(c.sig.exceptions.size()) + ")");
      for (size_t i = 0; i < c.sig.exceptions.size(); ++i) {
        Term t = tagTerm(c.sig.exceptions[i].name);
        c.wantPremise(i, {EqKind::Weak, comp(f, t), comp(g, t)});
      }
      return c.eqJ(EqKind::Strong, f, g);
    }
    if (r == "l-copair" || r == "l-copair-eq" || r == "l-copair-u" || r == "r-copair" || r == "r-copair-eq" ||
        r == "r-copair-u") {
      bool left = r[0] == 'l';
      Term f1 = c.term("f1"), f2 = c.term("f2");
      c.bound(f1, left ? 1 : 2, "f1");
      c.bound(f2, left ? 2 : 1, "f2");
      Term cp = left ? lcopair(f1, f2) : rcopair(f1, f2);
      Term i1 = in1(c.ty(f1).source, c.ty(f2).source);
      Term i2 = in2(c.ty(f1).source, c.ty(f2).source);
      // the propagator component is recovered weakly, the catcher one strongly
      EqKind k1 = left ? EqKind::Weak : EqKind::Strong;
      EqKind k2 = left ? EqKind::Strong : EqKind::Weak;
      if (r == "l-copair" || r == "r-copair") return c.termJ(cp);
      if (r == "l-copair-eq" || r == "r-copair-eq") {
        std::string i = c.name("i");
        if (i == "1") return c.eqJ(k1, comp(cp, i1), f1);
        if (i == "2") return c.eqJ(k2, comp(cp, i2), f2);
        c.err("i must be 1 or 2");
      }
      Term g = c.term("g");
      c.wantPremises(2);
      c.wantPremise(0, {k1, comp(g, i1), f1});
      c.wantPremise(1, {k2, comp(g, i2), f2});
      return c.eqJ(EqKind::Strong, g, cp);
    }
    if (r == "down") return c.termJ(downcast(c.term("f")));
    if (r == "down-weak") {
      Term f = c.term("f");
      return c.eqJ(EqKind::Weak, f, downcast(f));
    }
    if (r == "down-intro") {
      c.wantPremises(1);
      const Equation& e = c.eqPrem(0);
      if (e.kind != EqKind::Weak) c.err("premise must be weak");
      return c.eqJ(EqKind::Strong, downcast(e.lhs), downcast(e.rhs));
    }
    if (r == "down-elim") {
      c.wantPremises(1);
      const Equation& e = c.eqPrem(0);
      if (e.kind != EqKind::Strong) c.err("premise must be strong");
      if (e.lhs->tag != TermTag::Downcast || e.rhs->tag != TermTag::Downcast)
        c.err("both sides must be downcasts");
      return c.eqJ(EqKind::Weak, e.lhs->a, e.rhs->a);
    }
  }

  if (r == "unit" || r == "empty") c.err("type-formation rule has no judgment form");
  c.err("unknown rule in " + show(c.th));
}

}  // namespace detail

inline Judgment applyRule(Theory th, const Signature& sig, const std::string& rule, const Bindings& bind,
                          const std::vector<Judgment>& premises) {
  if (!findRule(th, rule)) throw KernelError(rule + ": unknown rule in " + show(th));
  return detail::applyRuleImpl({th, sig, rule, bind, premises});
}

// Validates a judgment taken on faith (hyp steps): terms typecheck, equations
// are parallel, the claimed decoration is an upper bound for the real one.
inline void validateJudgment(const Judgment& j, Theory th, const Signature& sig) {
  if (std::holds_alternative<TermJudgment>(j)) {
    auto& t = std::get<TermJudgment>(j);
    Typing x = typecheck(t.term, sig);
    if (!equal(x.source, t.source) || !equal(x.target, t.target)) throw KernelError("stated typing is wrong");
    if (decorate(t.term, th) > t.dec) throw KernelError("stated decoration is below the term's decoration");
  } else {
    auto& e = std::get<EqJudgment>(j).eq;
    Typing a = typecheck(e.lhs, sig);
    Typing b = typecheck(e.rhs, sig);
    decorate(e.lhs, th);
    decorate(e.rhs, th);
    if (!equal(a.source, b.source) || !equal(a.target, b.target)) throw KernelError("equation sides are not parallel");
  }
}

struct CheckResult {
  bool ok;
  size_t failedStep;  // 0-based, valid when !ok
  std::string message;
};

inline CheckResult checkDerivation(const Derivation& d, const Signature& sig) {
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    try {
      std::vector<Judgment> prem;
      for (size_t p : s.premises) {
        if (p >= i) throw KernelError("premise index " + std::to_string(p) + " does not precede the step");
        prem.push_back(d.steps[p].concl);
      }
      if (s.rule == "hyp") {
        validateJudgment(s.concl, d.theory, sig);
        continue;
      }
      Judgment out = applyRule(d.theory, sig, s.rule, s.bind, prem);
      if (!equal(out, s.concl))
        throw KernelError("stated conclusion `" + show(s.concl) + "` differs from the rule's `" + show(out) + "`");
    } catch (const DecorError& e) {
      return {false, i, "step " + std::to_string(i) + ": " + e.what()};
    }
  }
  return {true, 0, ""};
}

}  // namespace decor

#endif
