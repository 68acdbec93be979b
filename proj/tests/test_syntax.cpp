#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "decor/parse.hpp"

using namespace decor;

static const Signature& stSig() {
  static Signature sig = parseSignature(
      "type V;\n"
      "location X : V;\n"
      "pure c : 1 -> V[X];\n"
      "pure p : V[X] -> V[X];\n"
      "inhabit V[X] = c;\n");
  return sig;
}

TEST_CASE("type show/parse round trip") {
  for (const char* s : {"V", "1", "0", "V[X]", "V * V", "V + 1", "(V * V) * 0", "V * (V + 1)"}) {
    Type t = parseType(s);
    CHECK(equal(parseType(show(t)), t));
  }
}

TEST_CASE("term show/parse round trip") {
  const Signature& sig = stSig();
  for (const char* s :
       {"lkp[X]", "upd[X]", "p . lkp[X]", "upd[X] . (p . lkp[X])", "pair(p, p)", "lpair(lkp[X], upd[X] . c . final(1))",
        "pr1(V[X], 1)", "in2(V[X], 0)", "final(V[X])", "initial(V[X])", "id(V[X] * V[X])",
        "copair(p, p) . in1(V[X], V[X])"}) {
    Term t = parseTerm(s, sig);
    CHECK(equal(parseTerm(show(t), sig), t));
  }
}

TEST_CASE("random spine terms round trip") {
  const Signature& sig = stSig();
  std::mt19937 rng(7);
  // atoms keyed by source type: extend a spine while types match
  struct A { const char* txt; char src, tgt; };
  std::vector<A> atoms = {{"c", 'u', 'v'}, {"lkp[X]", 'u', 'v'}, {"p", 'v', 'v'},
                          {"upd[X]", 'v', 'u'}, {"final(V[X])", 'v', 'u'}};
  for (int i = 0; i < 200; ++i) {
    char cur = (rng() & 1) ? 'u' : 'v';
    Term t = id(cur == 'u' ? unitType() : valType("X"));
    int len = 1 + int(rng() % 6);
    for (int k = 0; k < len; ++k) {
      std::vector<const A*> fit;
      for (auto& a : atoms)
        if (a.src == cur) fit.push_back(&a);
      const A* a = fit[rng() % fit.size()];
      t = comp(parseTerm(a->txt, sig), t);
      cur = a->tgt;
    }
    CAPTURE(show(t));
    CHECK(equal(parseTerm(show(t), sig), t));
  }
}

TEST_CASE("equation parse and kinds") {
  const Signature& sig = stSig();
  Equation e = parseEquation("lkp[X] . upd[X] ~~ id(V[X])", sig);
  CHECK(e.kind == EqKind::Weak);
  Equation s = parseEquation("upd[X] . lkp[X] == id(1)", sig);
  CHECK(s.kind == EqKind::Strong);
  CHECK(equal(parseEquation(show(e), sig), e));
  CHECK_THROWS_AS(parseEquation("lkp[X] == upd[X]", sig), TypeError);
}

TEST_CASE("signature show/parse round trip") {
  const Signature& sig = stSig();
  Signature back = parseSignature(showSignature(sig));
  CHECK(back.baseTypes == sig.baseTypes);
  REQUIRE(back.symbols.size() == sig.symbols.size());
  for (size_t i = 0; i < sig.symbols.size(); ++i) {
    CHECK(back.symbols[i].name == sig.symbols[i].name);
    CHECK(equal(back.symbols[i].source, sig.symbols[i].source));
  }
  REQUIRE(back.locations.size() == 1);
  REQUIRE(back.inhabitants.size() == 1);
  CHECK(equal(back.inhabitants[0].witness, sig.inhabitants[0].witness));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parseSignature("type V\ntype W;"), ParseError);
  CHECK_THROWS_AS(parseTerm("p . ", stSig()), ParseError);
  CHECK_THROWS_AS(parseTerm("q", stSig()), TypeError);  // unknown symbol, caught by typechecking
  CHECK_THROWS_AS(parseTerm("p . c . p", stSig()), TypeError);  // 1 -> V against p's source V
}

TEST_CASE("try/catch surface syntax") {
  Signature ex = parseSignature(
      "type V;\n"
      "exception T : V;\n"
      "pure c : V[T] -> 0;\n"
      "pure p : V[T] -> V[T];\n"
      "inhabit V[T] = c;\n");
  Term t = parseTerm("try(p) catch[T](p)", ex);
  CHECK(t->tag == TermTag::Downcast);
  Term thr = parseTerm("throw(V[T], T)", ex);
  CHECK(equal(thr, throwTerm(valType("T"), "T")));
}
