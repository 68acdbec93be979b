// Reading and writing derivation (.drv) files.
//
// Format:
//   theory L_st;
//   0: lookupdate { X = X } |- lkp[X] . upd[X] ~~ id(V[X]);
//   1: weak-to-strong from [0] |- ...;
// The `{ ... }` bindings block and the `from [ ... ]` premise list may each be
// omitted when empty. Judgments are either `term : type -> type @ d` or an
// equation.

#ifndef DECOR_KERNEL_IO_HPP
#define DECOR_KERNEL_IO_HPP

#include <sstream>
#include <string>

#include "kernel.hpp"
#include "parse.hpp"

namespace decor {

namespace detail {

class DrvParser : public Parser {
 public:
  DrvParser(const std::string& src, const Signature& sig) : Parser(src, &sig) {}

  std::string parseRuleName() {
    std::string n = expectName();
    while (accept("-")) n += "-" + (cur().kind == Tok::Num ? std::to_string(expectNum()) : expectName());
    return n;
  }

  BindingValue parseBindingValue(BindingValue::Kind kind) {
    switch (kind) {
      case BindingValue::TermV: return BindingValue::ofTerm(parseTerm());
      case BindingValue::TypeV: return BindingValue::ofType(parseType());
      case BindingValue::NameV:
        if (cur().kind == Tok::Num) return BindingValue::ofName(std::to_string(expectNum()));
        return BindingValue::ofName(expectName());
    }
    fail("bad binding kind");
  }

  // used when the rule is unknown to the catalogue: guess the shape so the
  // kernel (not the parser) gets to reject the step
  BindingValue parseBindingValueAny() {
    size_t m = mark();
    try {
      return BindingValue::ofTerm(parseTerm());
    } catch (const DecorError&) {
      reset(m);
    }
    try {
      return BindingValue::ofType(parseType());
    } catch (const DecorError&) {
      reset(m);
    }
    return BindingValue::ofName(expectName());
  }

  Judgment parseJudgment() {
    Term t = parseTerm();
    if (accept(":")) {
      Type s = parseType();
      expect("->");
      Type tg = parseType();
      expect("@");
      long d = expectNum();
      if (d < 0 || d > 2) fail("decoration must be 0, 1 or 2");
      return TermJudgment{t, s, tg, static_cast<int>(d)};
    }
    EqKind k;
    if (accept("==")) k = EqKind::Strong;
    else if (accept("~~")) k = EqKind::Weak;
    else fail("expected ':', '==' or '~~'");
    return EqJudgment{{k, t, parseTerm()}};
  }
};

}  // namespace detail

inline Derivation parseDerivation(const std::string& text, const Signature& sig) {
  detail::DrvParser p(text, sig);
  p.expect("theory");
  std::string tn = p.expectName();
  if (tn != "L_st" && tn != "L_com" && tn != "L_mon" && tn != "L_exc") {
    // L_st etc. lex as a single name; also accept the CLI spellings
    if (tn == "st") tn = "L_st";
    else if (tn == "com") tn = "L_com";
    else if (tn == "mon") tn = "L_mon";
    else if (tn == "exc") tn = "L_exc";
    else p.fail("unknown theory '" + tn + "'");
  }
  Theory th = tn == "L_com" ? Theory::Com : tn == "L_mon" ? Theory::Mon : tn == "L_st" ? Theory::St : Theory::Exc;
  p.expect(";");

  Derivation d{th, {}};
  while (!p.atEnd()) {
    long n = p.expectNum();
    if (n != static_cast<long>(d.steps.size())) p.fail("steps must be numbered consecutively from 0");
    p.expect(":");
    Step s;
    s.rule = p.parseRuleName();
    const RuleSchema* schema = findRule(th, s.rule);
    if (p.accept("{")) {
      if (!p.peekIs("}")) {
        do {
          std::string var = p.expectName();
          p.expect("=");
          const MetaVarDecl* mv = nullptr;
          if (schema)
            for (auto& m : schema->metas)
              if (m.name == var) mv = &m;
          s.bind[var] = mv ? p.parseBindingValue(mv->kind) : p.parseBindingValueAny();
        } while (p.accept(","));
      }
      p.expect("}");
    }
    if (p.accept("from")) {
      p.expect("[");
      if (!p.peekIs("]")) {
        do {
          long i = p.expectNum();
          if (i < 0) p.fail("negative premise index");
          s.premises.push_back(static_cast<size_t>(i));
        } while (p.accept(","));
      }
      p.expect("]");
    }
    p.expect("|-");
    s.concl = p.parseJudgment();
    p.expect(";");
    d.steps.push_back(std::move(s));
  }
  return d;
}

inline std::string show(const BindingValue& v) {
  switch (v.kind) {
    case BindingValue::TermV: return show(v.term);
    case BindingValue::TypeV: return show(v.type);
    case BindingValue::NameV: return v.name;
  }
  return "";
}

inline std::string printDerivation(const Derivation& d) {
  std::ostringstream out;
  out << "theory " << show(d.theory) << ";\n";
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    out << i << ": " << s.rule;
    if (!s.bind.empty()) {
      out << " { ";
      bool first = true;
      for (auto& [k, v] : s.bind) {
        if (!first) out << ", ";
        first = false;
        out << k << " = " << show(v);
      }
      out << " }";
    }
    if (!s.premises.empty()) {
      out << " from [";
      for (size_t j = 0; j < s.premises.size(); ++j) out << (j ? ", " : "") << s.premises[j];
      out << "]";
    }
    out << " |- " << show(s.concl) << ";\n";
  }
  return out.str();
}

}  // namespace decor

#endif
