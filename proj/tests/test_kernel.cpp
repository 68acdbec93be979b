#include <catch2/catch_amalgamated.hpp>

#include "decor/kernel_io.hpp"
#include "decor/parse.hpp"
#include "decor/prover.hpp"

using namespace decor;

static const Signature& stSig() {
  static Signature sig = parseSignature(
      "type V;\n"
      "location X : V;\n"
      "pure c : 1 -> V[X];\n"
      "pure p : V[X] -> V[X];\n"
      "axiom pp : p . p == p;\n"
      "inhabit V[X] = c;\n");
  return sig;
}

TEST_CASE("rule catalogue per theory") {
  auto has = [](Theory th, const char* r) { return findRule(th, r) != nullptr; };
  CHECK(has(Theory::Com, "final-u"));
  CHECK(has(Theory::Mon, "initial-u"));
  CHECK(has(Theory::St, "lookup"));
  CHECK(has(Theory::St, "lookupdate-other"));
  CHECK_FALSE(has(Theory::St, "tag"));
  CHECK(has(Theory::Exc, "untag-tag"));
  CHECK(has(Theory::Exc, "down-elim"));
  CHECK_FALSE(has(Theory::Exc, "lookup"));
  CHECK_FALSE(has(Theory::Com, "effect"));
}

TEST_CASE("basic derivations accepted") {
  const Signature& sig = stSig();
  Prover p(Theory::St, sig);
  size_t ax = p.lookupdate("X");
  p.subs(lookup("X"), ax);
  p.axiom("pp");
  p.updLkpIsId("X");
  Derivation d = p.take();
  CheckResult r = checkDerivation(d, sig);
  CAPTURE(r.failedStep, r.message);
  CHECK(r.ok);
}

TEST_CASE("decoration side conditions rejected") {
  const Signature& sig = stSig();
  Equation ax{EqKind::Weak, comp(lookup("X"), update("X")), id(valType("X"))};
  Step axStep{"lookupdate", {{"X", BindingValue::ofName("X")}}, {}, EqJudgment{ax}};
  // weak-to-strong on a decoration-2 side must fail
  {
    Derivation d{Theory::St, {axStep}};
    d.steps.push_back({"weak-to-strong", {}, {0}, EqJudgment{{EqKind::Strong, ax.lhs, ax.rhs}}});
    CheckResult r = checkDerivation(d, sig);
    CHECK_FALSE(r.ok);
    CHECK(r.failedStep == 1);
  }
  // repl with a non-pure g on a weak equation (comonad side) must fail
  {
    Term g = update("X");
    Derivation d{Theory::St, {axStep}};
    d.steps.push_back({"repl", {{"g", BindingValue::ofTerm(g)}}, {0},
                       EqJudgment{{EqKind::Weak, comp(g, ax.lhs), comp(g, ax.rhs)}}});
    CHECK_FALSE(checkDerivation(d, sig).ok);
  }
  // conclusion mismatch is caught
  {
    Derivation d{Theory::St, {{"lookupdate", {{"X", BindingValue::ofName("X")}}, {},
                              EqJudgment{{EqKind::Strong, ax.lhs, ax.rhs}}}}};
    CHECK_FALSE(checkDerivation(d, sig).ok);
  }
}

TEST_CASE("unknown rule and bad premise index") {
  const Signature& sig = stSig();
  Derivation d{Theory::St, {{"no-such-rule", {}, {}, EqJudgment{{EqKind::Strong, id(unitType()), id(unitType())}}}}};
  CHECK_FALSE(checkDerivation(d, sig).ok);
  Derivation d2{Theory::St, {{"sym", {}, {5}, EqJudgment{{EqKind::Strong, id(unitType()), id(unitType())}}}}};
  CHECK_FALSE(checkDerivation(d2, sig).ok);
}

TEST_CASE("derivation print/parse round trip") {
  const Signature& sig = stSig();
  Prover p(Theory::St, sig);
  size_t h = p.hyp(parseEquation("p . lkp[X] ~~ lkp[X]", sig));
  p.updCong("X", comp(parseTerm("p", sig), lookup("X")), lookup("X"), h);
  Derivation d = p.take();
  REQUIRE(checkDerivation(d, sig).ok);
  Derivation back = parseDerivation(printDerivation(d), sig);
  REQUIRE(back.steps.size() == d.steps.size());
  CHECK(back.theory == d.theory);
  for (size_t i = 0; i < d.steps.size(); ++i) {
    CHECK(back.steps[i].rule == d.steps[i].rule);
    CHECK(equal(back.steps[i].concl, d.steps[i].concl));
    CHECK(back.steps[i].premises == d.steps[i].premises);
  }
  CHECK(checkDerivation(back, sig).ok);
}

TEST_CASE("empty derivation is vacuously accepted") {
  Derivation d{Theory::St, {}};
  CHECK(checkDerivation(d, stSig()).ok);
  Derivation back = parseDerivation(printDerivation(d), stSig());
  CHECK(back.steps.empty());
}

TEST_CASE("hypotheses are well-formedness checked") {
  const Signature& sig = stSig();
  Prover p(Theory::St, sig);
  p.hyp(parseEquation("p . lkp[X] == lkp[X]", sig));
  CHECK(checkDerivation(p.take(), sig).ok);
  // non-parallel hypothesis rejected
  Derivation d{Theory::St, {{"hyp", {}, {}, EqJudgment{{EqKind::Strong, lookup("X"), update("X")}}}}};
  CHECK_FALSE(checkDerivation(d, sig).ok);
}

TEST_CASE("downcast rules in the exceptions theory") {
  Signature ex = parseSignature(
      "type V;\n"
      "exception T : V;\n"
      "pure c : V[T] -> 0;\n"
      "inhabit V[T] = c;\n");
  Prover p(Theory::Exc, ex);
  Term u = untag("T");
  size_t w = p.step("down-weak", {{"f", BindingValue::ofTerm(u)}}, {});  // u ~~ down(u)
  size_t i = p.step("down-intro", {}, {w});
  p.step("down-elim", {}, {i});
  Derivation d = p.take();
  CheckResult r = checkDerivation(d, ex);
  CAPTURE(r.failedStep, r.message);
  CHECK(r.ok);
}
