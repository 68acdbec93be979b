#include <catch2/catch_amalgamated.hpp>

#include "decor/parse.hpp"
#include "decor/semantics.hpp"

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

static const Signature& exSig() {
  static Signature sig = parseSignature(
      "type V;\n"
      "exception T : V;\n"
      "pure c : V[T] -> 0;\n"
      "pure p : V[T] -> V[T];\n"
      "inhabit V[T] = c;\n");
  return sig;
}

// |V| = 2, c = V0, p = swap
static Model stModel() { return Model{Model::State, &stSig(), {{"V", 2}}, {{"c", {0}}, {"p", {1, 0}}}}; }
static Model exModel() { return Model{Model::Exception, &exSig(), {{"V", 2}}, {{"c", {}}, {"p", {1, 0}}}}; }

TEST_CASE("state tables of the effect operations") {
  Model m = stModel();
  CHECK(m.stateSize() == 2);
  CHECK(m.card(valType("X")) == 2);
  // lkp: (*, s) -> (s, s); table index a*S+s, value b*S+s'
  CHECK(evalState(parseTerm("lkp[X]", stSig()), m) == std::vector<long>{0, 3});
  // upd: (v, s) -> (*, v)
  CHECK(evalState(parseTerm("upd[X]", stSig()), m) == std::vector<long>{0, 0, 1, 1});
  // p . lkp reads then swaps: (*, s) -> (1-s, s)
  CHECK(evalState(parseTerm("p . lkp[X]", stSig()), m) == std::vector<long>{2, 1});
}

TEST_CASE("pure evaluation matches the result component") {
  Model m = stModel();
  Term pc = parseTerm("p . c", stSig());
  CHECK(evalPure(pc, 0, m) == 1);
  auto t = evalState(pc, m);
  for (long s = 0; s < 2; ++s) {
    CHECK(t[s] / 2 == 1);
    CHECK(t[s] % 2 == s);  // a pure term leaves the state alone
  }
}

TEST_CASE("pairs read the incoming state; lpair keeps the second state") {
  Model m = stModel();
  // first component reads s, second writes 0
  auto t = evalState(parseTerm("lpair(lkp[X], upd[X] . (c . final(1)))", stSig()), m);
  CHECK(t == std::vector<long>{0, 2});  // (0,s) -> (s, 0)
}

TEST_CASE("weak vs strong satisfaction for state") {
  Model m = stModel();
  Equation weak = parseEquation("lkp[X] . upd[X] ~~ id(V[X])", stSig());
  CHECK(holds(weak, m));
  Equation strong = parseEquation("lkp[X] . upd[X] == id(V[X])", stSig());
  CHECK_FALSE(holds(strong, m));
}

TEST_CASE("model enumeration is exhaustive over pure tables and deterministic") {
  auto models = enumerateModels(stSig(), 3, Model::State);
  // sizes 1..3: |V| tables for c times |V|^|V| for p -> 1 + 8 + 81
  REQUIRE(models.size() == 90);
  auto again = enumerateModels(stSig(), 3, Model::State);
  REQUIRE(again.size() == 90);
  CHECK(again[37].tables == models[37].tables);
  CHECK(again[89].base == models[89].base);
}

TEST_CASE("model show/parse round trip") {
  Model m = stModel();
  Model back = parseModel(showModel(m), stSig());
  CHECK(back.kind == Model::State);
  CHECK(back.base == m.base);
  CHECK(back.tables == m.tables);
}

TEST_CASE("exception tables: tag boxes, untag opens, others propagate") {
  Model m = exModel();
  CHECK(m.excSize() == 2);
  // tag: ordinary v -> exception v; incoming exceptions pass through
  CHECK(evalExc(parseTerm("tag[T]", exSig()), m) == std::vector<long>{0, 1, 0, 1});
  // untag: 0 -> V[T], recovers the boxed value
  CHECK(evalExc(parseTerm("untag[T]", exSig()), m) == std::vector<long>{0, 1});
  Equation weak = parseEquation("untag[T] . tag[T] ~~ id(V[T])", exSig());
  CHECK(holds(weak, m));
}

TEST_CASE("try/catch evaluation and the weak-exception comparison") {
  Model m = exModel();
  Term thr = throwTerm(valType("T"), "T");
  TryCatchTerms tc = tryCatch(thr, "T", parseTerm("p", exSig()), exSig());
  // ordinary v: thrown then caught, handler p gives 1-v; incoming exceptions
  // propagate through the public (downcast) form only
  CHECK(evalExc(tc.publicTerm, m) == std::vector<long>{1, 0, 2, 3});
  CHECK(evalExc(tc.tryModifier, m) == std::vector<long>{1, 0, 1, 0});
  CHECK(holds({EqKind::Weak, tc.publicTerm, tc.tryModifier}, m));
  CHECK_FALSE(holds({EqKind::Strong, tc.publicTerm, tc.tryModifier}, m));
}

TEST_CASE("axiom filtering in model enumeration") {
  Signature sa = parseSignature(
      "type V;\n"
      "location X : V;\n"
      "pure c : 1 -> V[X];\n"
      "pure p : V[X] -> V[X];\n"
      "axiom pp : p . p == p;\n"
      "inhabit V[X] = c;\n");
  for (auto& m : enumerateModels(sa, 2, Model::State)) {
    if (!satisfiesAxioms(m)) continue;
    CHECK(holds(parseEquation("p . p == p", sa), m));
  }
}
