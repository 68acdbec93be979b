// Lexer and recursive-descent parsers for the surface syntax: types, terms,
// equations and signature files. Line comments start with "--".

#ifndef DECOR_PARSE_HPP
#define DECOR_PARSE_HPP

#include <cctype>
#include <cstring>
#include <string>
#include <vector>

#include "duality.hpp"
#include "error.hpp"

namespace decor {

enum class Tok : uint8_t { Name, Num, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto peek = [&](size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Name, src.substr(i, j - i), tl, tc});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Num, src.substr(i, j - i), tl, tc});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    // multi-char punctuation first
    static const char* two[] = {"->", "==", "~~", "|-"};
    bool matched = false;
    for (auto* p : two) {
      if (c == p[0] && peek(1) == p[1]) {
        out.push_back({Tok::Punct, p, tl, tc});
        i += 2;
        col += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::strchr("()[]{},;:*+=.|@<>-", c)) {
      out.push_back({Tok::Punct, std::string(1, c), tl, tc});
      ++i;
      ++col;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// Handler elaboration, three steps: an inner catcher dispatching on the
// recovered value, a guarded body, and a public downcast. The coproduct
// B ~ B+0 is taken via in1.
struct TryCatchTerms {
  Term catchTerm;   // 0 -> B, decoration 2
  Term tryModifier; // A -> B, decoration 2
  Term publicTerm;  // A -> B, decoration 1
};

inline TryCatchTerms tryCatch(const Term& f, const std::string& exn, const Term& g, const Signature& sig) {
  if (!sig.findException(exn)) throw TypeError("unknown exception name '" + exn + "'");
  Type B = typecheck(f, sig).target;
  Type VT = valType(exn);
  Type gt = typecheck(g, sig).source;
  if (!equal(gt, VT)) throw TypeError("handler must source V[" + exn + "], got " + show(gt));
  Term catchT = comp(copair(g, initial(B)), comp(in1(VT, emptyType()), untag(exn)));
  Term tryM = comp(lcopair(id(B), catchT), comp(in1(B, emptyType()), f));
  return {catchT, tryM, downcast(tryM)};
}

inline Term throwTerm(const Type& b, const std::string& exn) { return comp(initial(b), tagTerm(exn)); }

class Parser {
 public:
  explicit Parser(const std::string& src, const Signature* sig = nullptr) : toks_(lex(src)), sig_(sig) {}

  const Token& cur() const { return toks_[pos_]; }
  bool atEnd() const { return cur().kind == Tok::End; }
  bool peekIs(const std::string& s) const { return cur().text == s && cur().kind != Tok::End; }
  bool accept(const std::string& s) {
    if (peekIs(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!accept(s)) throw ParseError("expected '" + s + "', found '" + cur().text + "'", cur().line, cur().col);
  }
  std::string expectName() {
    if (cur().kind != Tok::Name) throw ParseError("expected a name, found '" + cur().text + "'", cur().line, cur().col);
    return toks_[pos_++].text;
  }
  long expectNum() {
    if (cur().kind != Tok::Num)
      throw ParseError("expected a number, found '" + cur().text + "'", cur().line, cur().col);
    return std::stol(toks_[pos_++].text);
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur().line, cur().col); }
  size_t mark() const { return pos_; }
  void reset(size_t m) { pos_ = m; }

  // ---- types ----

  Type parseType() {
    Type t = parseProd();
    while (accept("+")) t = coprodType(t, parseProd());
    return t;
  }

  // ---- terms ----

  Term parseTerm() {
    Term t = parsePrimaryTerm();
    while (accept(".")) t = comp(t, parsePrimaryTerm());
    return t;
  }

  Equation parseEquation() {
    Term l = parseTerm();
    EqKind k;
    if (accept("==")) {
      k = EqKind::Strong;
    } else if (accept("~~")) {
      k = EqKind::Weak;
    } else {
      fail("expected '==' or '~~'");
    }
    return {k, l, parseTerm()};
  }

 private:
  Type parseProd() {
    Type t = parseTypeAtom();
    while (accept("*")) t = prodType(t, parseTypeAtom());
    return t;
  }

  Type parseTypeAtom() {
    if (accept("(")) {
      Type t = parseType();
      expect(")");
      return t;
    }
    if (cur().kind == Tok::Num) {
      long n = expectNum();
      if (n == 1) return unitType();
      if (n == 0) return emptyType();
      fail("expected a type");
    }
    if (cur().kind == Tok::Name) {
      std::string n = expectName();
      if (n == "V" && accept("[")) {
        std::string loc = expectName();
        expect("]");
        return valType(loc);
      }
      return baseType(n);
    }
    fail("expected a type");
  }

  Term parseTwoTerms(Term (*mk)(Term, Term)) {
    expect("(");
    Term a = parseTerm();
    expect(",");
    Term b = parseTerm();
    expect(")");
    return mk(std::move(a), std::move(b));
  }
  Term parseTwoTypes(Term (*mk)(Type, Type)) {
    expect("(");
    Type a = parseType();
    expect(",");
    Type b = parseType();
    expect(")");
    return mk(std::move(a), std::move(b));
  }
  Term parseOneType(Term (*mk)(Type)) {
    expect("(");
    Type a = parseType();
    expect(")");
    return mk(std::move(a));
  }
  Term parseEffectOp(Term (*mk)(std::string)) {
    expect("[");
    std::string n = expectName();
    expect("]");
    return mk(std::move(n));
  }

  Term parsePrimaryTerm() {
    if (accept("(")) {
      Term t = parseTerm();
      expect(")");
      return t;
    }
    if (cur().kind != Tok::Name) fail("expected a term");
    std::string kw = cur().text;
    if (kw == "id") { ++pos_; return parseOneType(&id); }
    if (kw == "final") { ++pos_; return parseOneType(&final_); }
    if (kw == "initial") { ++pos_; return parseOneType(&initial); }
    if (kw == "pair") { ++pos_; return parseTwoTerms(&pair); }
    if (kw == "lpair") { ++pos_; return parseTwoTerms(&lpair); }
    if (kw == "rpair") { ++pos_; return parseTwoTerms(&rpair); }
    if (kw == "copair") { ++pos_; return parseTwoTerms(&copair); }
    if (kw == "lcopair") { ++pos_; return parseTwoTerms(&lcopair); }
    if (kw == "rcopair") { ++pos_; return parseTwoTerms(&rcopair); }
    if (kw == "pr1") { ++pos_; return parseTwoTypes(&proj1); }
    if (kw == "pr2") { ++pos_; return parseTwoTypes(&proj2); }
    if (kw == "in1") { ++pos_; return parseTwoTypes(&in1); }
    if (kw == "in2") { ++pos_; return parseTwoTypes(&in2); }
    if (kw == "lkp") { ++pos_; return parseEffectOp(&lookup); }
    if (kw == "upd") { ++pos_; return parseEffectOp(&update); }
    if (kw == "tag") { ++pos_; return parseEffectOp(&tagTerm); }
    if (kw == "untag") { ++pos_; return parseEffectOp(&untag); }
    if (kw == "down") {
      ++pos_;
      expect("(");
      Term f = parseTerm();
      expect(")");
      return downcast(std::move(f));
    }
    if (kw == "throw") {
      // throw(B, T)  =  initial(B) . tag[T]
      ++pos_;
      expect("(");
      Type b = parseType();
      expect(",");
      std::string exn = expectName();
      expect(")");
      return comp(initial(std::move(b)), tagTerm(std::move(exn)));
    }
    if (kw == "try") {
      ++pos_;
      if (!sig_) fail("try/catch needs a signature to elaborate");
      expect("(");
      Term f = parseTerm();
      expect(")");
      expect("catch");
      expect("[");
      std::string exn = expectName();
      expect("]");
      expect("(");
      Term g = parseTerm();
      expect(")");
      return tryCatch(f, exn, g, *sig_).publicTerm;
    }
    return sym(expectName());
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const Signature* sig_;

  friend Signature parseSignature(const std::string&);
};

namespace detail {

// Axiom and inhabitant bodies must be effect-free.
inline bool effectFree(const Term& t) {
  switch (t->tag) {
    case TermTag::Lookup:
    case TermTag::Update:
    case TermTag::Tag:
    case TermTag::Untag:
    case TermTag::Downcast:
    case TermTag::LPair:
    case TermTag::RPair:
    case TermTag::LCopair:
    case TermTag::RCopair: return false;
    case TermTag::Comp:
    case TermTag::Pair:
    case TermTag::Copair: return effectFree(t->a) && effectFree(t->b);
    default: return true;
  }
}

}  // namespace detail

// Declarations are `;`-terminated and must come before use. In a signature
// that declares exceptions, `inhabit` bodies describe the dualized (state)
// signature, so they are parsed in a second phase once all declarations are
// known.
inline Signature parseSignature(const std::string& text) {
  Parser p(text);
  Signature sig;
  std::vector<size_t> inhabitAt;
  auto freshName = [&](const std::string& n) {
    if (sig.knownName(n)) p.fail("duplicate name '" + n + "'");
    return n;
  };
  while (!p.atEnd()) {
    if (p.accept("type")) {
      sig.baseTypes.push_back(freshName(p.expectName()));
    } else if (p.accept("pure")) {
      std::string n = freshName(p.expectName());
      p.expect(":");
      Type s = p.parseType();
      p.expect("->");
      Type t = p.parseType();
      detail::checkTypeDeclared(s, sig, "");
      detail::checkTypeDeclared(t, sig, "");
      sig.symbols.push_back({n, s, t});
    } else if (p.accept("location")) {
      std::string n = freshName(p.expectName());
      p.expect(":");
      Type v = p.parseType();
      detail::checkTypeDeclared(v, sig, "");
      sig.locations.push_back({n, v});
    } else if (p.accept("exception")) {
      std::string n = freshName(p.expectName());
      p.expect(":");
      Type v = p.parseType();
      detail::checkTypeDeclared(v, sig, "");
      sig.exceptions.push_back({n, v});
    } else if (p.accept("axiom")) {
      std::string n = p.expectName();
      if (sig.findAxiom(n)) p.fail("duplicate axiom '" + n + "'");
      p.expect(":");
      Equation eq = p.parseEquation();
      if (!detail::effectFree(eq.lhs) || !detail::effectFree(eq.rhs)) p.fail("axiom '" + n + "' is not pure");
      Typing l = typecheck(eq.lhs, sig);
      Typing r = typecheck(eq.rhs, sig);
      if (!equal(l.source, r.source) || !equal(l.target, r.target))
        p.fail("axiom '" + n + "' equates non-parallel terms");
      sig.axioms.push_back({n, eq});
    } else if (p.accept("inhabit")) {
      inhabitAt.push_back(p.pos_);
      while (!p.atEnd() && !p.peekIs(";")) ++p.pos_;
    } else {
      p.fail("expected a declaration");
    }
    p.expect(";");
  }
  const Signature stSide = sig.exceptions.empty() ? sig : dualSignature(sig);
  for (size_t at : inhabitAt) {
    p.pos_ = at;
    Type ty = p.parseType();
    p.expect("=");
    Term w = p.parseTerm();
    detail::checkTypeDeclared(ty, stSide, "");
    if (!detail::effectFree(w)) p.fail("inhabitant witness is not pure");
    Typing wt = typecheck(w, stSide);
    if (!equal(wt.source, unitType()) || !equal(wt.target, ty))
      p.fail("inhabitant witness must have type 1 -> " + show(ty));
    if (sig.findInhabitant(ty)) p.fail("duplicate inhabitant for " + show(ty));
    sig.inhabitants.push_back({ty, w});
  }
  return sig;
}

inline Type parseType(const std::string& text) {
  Parser p(text);
  Type t = p.parseType();
  if (!p.atEnd()) p.fail("trailing input after type");
  return t;
}

inline Term parseTerm(const std::string& text, const Signature& sig) {
  Parser p(text, &sig);
  Term t = p.parseTerm();
  if (!p.atEnd()) p.fail("trailing input after term");
  typecheck(t, sig);
  return t;
}

inline Equation parseEquation(const std::string& text, const Signature& sig) {
  Parser p(text, &sig);
  Equation e = p.parseEquation();
  if (!p.atEnd()) p.fail("trailing input after equation");
  Typing l = typecheck(e.lhs, sig);
  Typing r = typecheck(e.rhs, sig);
  if (!equal(l.source, r.source) || !equal(l.target, r.target))
    throw TypeError("equation sides are not parallel: " + show(l.source) + " -> " + show(l.target) + " vs " +
                    show(r.source) + " -> " + show(r.target));
  return e;
}

// Declarations grouped by kind; the result re-parses to an equal signature.
inline std::string showSignature(const Signature& sig) {
  std::string out;
  for (auto& t : sig.baseTypes) out += "type " + t + ";\n";
  for (auto& l : sig.locations) out += "location " + l.name + " : " + show(l.valueType) + ";\n";
  for (auto& e : sig.exceptions) out += "exception " + e.name + " : " + show(e.valueType) + ";\n";
  for (auto& s : sig.symbols) out += "pure " + s.name + " : " + show(s.source) + " -> " + show(s.target) + ";\n";
  for (auto& a : sig.axioms) out += "axiom " + a.name + " : " + show(a.eq) + ";\n";
  for (auto& i : sig.inhabitants) out += "inhabit " + show(i.type) + " = " + show(i.witness) + ";\n";
  return out;
}

}  // namespace decor

#endif
