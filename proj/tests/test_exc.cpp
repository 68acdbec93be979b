#include <catch2/catch_amalgamated.hpp>

#include "decor/exc_theory.hpp"
#include "decor/parse.hpp"
#include "decor/prover.hpp"

using namespace decor;

static const Signature& st() {
  static Signature s = parseSignature(
      "type V;\n"
      "location X : V;\n"
      "pure c : 1 -> V[X];\n"
      "pure p : V[X] -> V[X];\n"
      "inhabit V[X] = c;\n");
  return s;
}

static const Signature& ex() {
  static Signature s = parseSignature(
      "type V;\n"
      "exception T : V;\n"
      "pure c : V[T] -> 0;\n"
      "pure p : V[T] -> V[T];\n"
      "inhabit V[T] = c;\n");
  return s;
}

static void requireAccepted(const Derivation& d, const Signature& sig) {
  CheckResult r = checkDerivation(d, sig);
  CAPTURE(r.failedStep, r.message);
  REQUIRE(r.ok);
}

TEST_CASE("duality is an involution on types, terms, equations") {
  for (const char* s : {"V", "1", "0", "V[X]", "V * 1", "V + 0", "(V * V) + 1"}) {
    Type t = parseType(s);
    CHECK(equal(dualType(dualType(t)), t));
  }
  for (const char* s : {"lkp[X]", "upd[X]", "p . lkp[X]", "upd[X] . (p . lkp[X])", "final(V[X])",
                        "pair(p, p)", "lpair(lkp[X], upd[X] . c . final(1))"}) {
    Term t = parseTerm(s, st());
    CHECK(equal(dualTerm(dualTerm(t)), t));
  }
  Equation e = parseEquation("lkp[X] . upd[X] ~~ id(V[X])", st());
  CHECK(equal(dualEquation(dualEquation(e)), e));
  CHECK(equal(dualEquation(e), parseEquation("untag[X] . tag[X] ~~ id(V[X])", dualSignature(st()))));
  CHECK_THROWS_AS(dualTerm(downcast(untag("T"))), FragmentError);
}

TEST_CASE("dual signature swaps locations and exceptions, reverses symbols") {
  Signature d = dualSignature(st());
  CHECK(d.locations.empty());
  REQUIRE(d.exceptions.size() == 1);
  CHECK(d.exceptions[0].name == "X");
  const SymbolDecl* c = d.findSymbol("c");
  REQUIRE(c);
  CHECK(equal(c->source, valType("X")));
  CHECK(equal(c->target, emptyType()));
  Signature back = dualSignature(d);
  CHECK(back.locations.size() == 1);
  CHECK(equal(back.symbols[0].source, st().symbols[0].source));
}

TEST_CASE("dualized state derivations replay in the exceptions kernel") {
  Signature dst = dualSignature(st());
  {
    Prover p(Theory::St, st());
    p.updLkpIsId("X");
    Derivation d = p.take();
    requireAccepted(d, st());
    Derivation dd = dualDerivation(d);
    CHECK(dd.theory == Theory::Exc);
    requireAccepted(dd, dst);
  }
  {
    auto r = normalize_modifier(parseTerm("upd[X] . (lkp[X] . upd[X])", st()), st());
    requireAccepted(dualDerivation(r.cert), dst);
    auto r2 = normalize_accessor(parseTerm("p . lkp[X]", st()), st());
    requireAccepted(dualDerivation(r2.cert), dst);
  }
}

TEST_CASE("associativity dualizes to its mirror plus a flip") {
  Prover p(Theory::St, st());
  Term f = parseTerm("c", st()), g = parseTerm("p", st()), h = parseTerm("p", st());
  size_t a = p.assocStep(f, g, h);
  p.strongToWeak(p.sym(a));
  Derivation d = p.take();
  std::vector<size_t> map;
  Derivation dd = dualDerivation(d, &map);
  requireAccepted(dd, dualSignature(st()));
  CHECK(dd.steps.size() == d.steps.size() + 1);
  for (size_t i = 0; i < d.steps.size(); ++i)
    CHECK(equal(dd.steps[map[i]].concl, decor::detail::dualJudgment(d.steps[i].concl)));
}

TEST_CASE("derivations touching downcast have no dual") {
  Derivation d{Theory::Exc, {{"down", {{"f", BindingValue::ofTerm(untag("T"))}}, {},
                             TermJudgment{downcast(untag("T")), emptyType(), valType("T"), 1}}}};
  CHECK_THROWS_AS(dualDerivation(d), FragmentError);
}

TEST_CASE("decide_exc_core transports verdicts and certificates") {
  auto d1 = decide_exc_core(parseEquation("tag[T] . untag[T] == id(0)", ex()), ex());
  REQUIRE(d1.verdict == Verdict::Equivalent);
  REQUIRE(d1.cert);
  requireAccepted(*d1.cert, ex());
  CHECK(equal(std::get<EqJudgment>(d1.cert->steps[d1.certStep].concl).eq,
              parseEquation("tag[T] . untag[T] == id(0)", ex())));

  auto d2 = decide_exc_core(parseEquation("untag[T] . tag[T] ~~ id(V[T])", ex()), ex());
  REQUIRE(d2.verdict == Verdict::Equivalent);
  requireAccepted(*d2.cert, ex());

  auto d3 = decide_exc_core(parseEquation("untag[T] . tag[T] == id(V[T])", ex()), ex());
  REQUIRE(d3.verdict == Verdict::NotEquivalent);
  REQUIRE(d3.countermodel);
  CHECK(d3.countermodel->sig == d3.dualSig.get());
  CHECK_FALSE(holds(dualEquation(parseEquation("untag[T] . tag[T] == id(V[T])", ex())), *d3.countermodel));

  auto d4 = decide_exc_core(parseEquation("tag[T] == c", ex()), ex());
  CHECK(d4.verdict == Verdict::NotEquivalent);

  auto d5 = decide_exc_core(parseEquation("untag[T] . tag[T] == id(V[T])", ex()), ex(), OracleMode::Semantic);
  CHECK(d5.verdict == Verdict::NotEquivalent);

  CHECK_THROWS_AS(decide_exc_core({EqKind::Strong, downcast(untag("T")), downcast(untag("T"))}, ex()),
                  FragmentError);
}

TEST_CASE("try_catch validates its handler spec") {
  HandlerSpec h{throwTerm(valType("T"), "T"), "T", parseTerm("p", ex())};
  auto tc = try_catch(h, ex());
  CHECK(decorate(tc.publicTerm, Theory::Exc) == 1);
  CHECK(decorate(tc.tryModifier, Theory::Exc) == 2);
  CHECK(decorate(tc.catchTerm, Theory::Exc) == 2);
  CHECK_THROWS_AS(try_catch({untag("T"), "T", parseTerm("p", ex())}, ex()), DecorationError);
  CHECK_THROWS_AS(try_catch({parseTerm("p", ex()), "T", parseTerm("c", ex())}, ex()), TypeError);
  CHECK_THROWS_AS(try_catch({parseTerm("p", ex()), "Z", parseTerm("p", ex())}, ex()), TypeError);
}

TEST_CASE("throw is the initial map after tagging") {
  Term t = throwTerm(valType("T"), "T");
  CHECK(equal(t, comp(initial(valType("T")), tagTerm("T"))));
  CHECK(decorate(t, Theory::Exc) == 1);
  Typing ty = typecheck(throwTerm(emptyType(), "T"), ex());
  CHECK(equal(ty.target, emptyType()));
}
