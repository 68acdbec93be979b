// Morphism AST. Every constructor carries enough type annotations that
// typechecking is syntax-directed (projections and injections store both
// component types).

#ifndef DECOR_TERM_HPP
#define DECOR_TERM_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "type.hpp"

namespace decor {

enum class TermTag : uint8_t {
  Id,        // id(t) : t -> t
  Comp,      // g . f (f applied first)
  Pair,      // pair(f1, f2)
  LPair,     // lpair(f1, f2)   (state: f1 accessor, f2 modifier)
  RPair,     // rpair(f1, f2)
  Proj1,     // pr1(t1, t2) : t1*t2 -> t1
  Proj2,     // pr2(t1, t2) : t1*t2 -> t2
  Final,     // final(t) : t -> 1
  Copair,    // copair(f1, f2)
  LCopair,   // lcopair(f1, f2) (exceptions: f1 propagator, f2 catcher)
  RCopair,   // rcopair(f1, f2)
  In1,       // in1(t1, t2) : t1 -> t1+t2
  In2,       // in2(t1, t2) : t2 -> t1+t2
  Initial,   // initial(t) : 0 -> t
  Sym,       // declared pure symbol
  Lookup,    // lkp[X] : 1 -> V[X]
  Update,    // upd[X] : V[X] -> 1
  Tag,       // tag[T] : V[T] -> 0
  Untag,     // untag[T] : 0 -> V[T]
  Downcast,  // down(f)
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermTag tag;
  std::string name;  // Sym / Lookup / Update / Tag / Untag
  Type t1, t2;       // type arguments
  Term a, b;         // children; Comp stores (a = g outer, b = f inner)
  size_t hash;
};

inline Term makeTerm(TermTag tag, std::string name, Type t1, Type t2, Term a, Term b) {
  size_t h = static_cast<size_t>(tag) * 0x85ebca6b;
  h = detail::hashCombine(h, std::hash<std::string>{}(name));
  if (t1) h = detail::hashCombine(h, t1->hash);
  if (t2) h = detail::hashCombine(h, t2->hash);
  if (a) h = detail::hashCombine(h, a->hash);
  if (b) h = detail::hashCombine(h, b->hash);
  return std::make_shared<TermNode>(
      TermNode{tag, std::move(name), std::move(t1), std::move(t2), std::move(a), std::move(b), h});
}

inline Term id(Type t) { return makeTerm(TermTag::Id, "", std::move(t), nullptr, nullptr, nullptr); }
inline Term comp(Term g, Term f) { return makeTerm(TermTag::Comp, "", nullptr, nullptr, std::move(g), std::move(f)); }
inline Term pair(Term f1, Term f2) { return makeTerm(TermTag::Pair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term lpair(Term f1, Term f2) { return makeTerm(TermTag::LPair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term rpair(Term f1, Term f2) { return makeTerm(TermTag::RPair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term proj1(Type t1, Type t2) { return makeTerm(TermTag::Proj1, "", std::move(t1), std::move(t2), nullptr, nullptr); }
inline Term proj2(Type t1, Type t2) { return makeTerm(TermTag::Proj2, "", std::move(t1), std::move(t2), nullptr, nullptr); }
inline Term final_(Type t) { return makeTerm(TermTag::Final, "", std::move(t), nullptr, nullptr, nullptr); }
inline Term copair(Term f1, Term f2) { return makeTerm(TermTag::Copair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term lcopair(Term f1, Term f2) { return makeTerm(TermTag::LCopair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term rcopair(Term f1, Term f2) { return makeTerm(TermTag::RCopair, "", nullptr, nullptr, std::move(f1), std::move(f2)); }
inline Term in1(Type t1, Type t2) { return makeTerm(TermTag::In1, "", std::move(t1), std::move(t2), nullptr, nullptr); }
inline Term in2(Type t1, Type t2) { return makeTerm(TermTag::In2, "", std::move(t1), std::move(t2), nullptr, nullptr); }
inline Term initial(Type t) { return makeTerm(TermTag::Initial, "", std::move(t), nullptr, nullptr, nullptr); }
inline Term sym(std::string name) { return makeTerm(TermTag::Sym, std::move(name), nullptr, nullptr, nullptr, nullptr); }
inline Term lookup(std::string loc) { return makeTerm(TermTag::Lookup, std::move(loc), nullptr, nullptr, nullptr, nullptr); }
inline Term update(std::string loc) { return makeTerm(TermTag::Update, std::move(loc), nullptr, nullptr, nullptr, nullptr); }
inline Term tagTerm(std::string exn) { return makeTerm(TermTag::Tag, std::move(exn), nullptr, nullptr, nullptr, nullptr); }
inline Term untag(std::string exn) { return makeTerm(TermTag::Untag, std::move(exn), nullptr, nullptr, nullptr, nullptr); }
inline Term downcast(Term f) { return makeTerm(TermTag::Downcast, "", nullptr, nullptr, std::move(f), nullptr); }

inline bool equal(const Term& x, const Term& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->tag != y->tag || x->name != y->name) return false;
  if ((x->t1 != nullptr) != (y->t1 != nullptr) || (x->t2 != nullptr) != (y->t2 != nullptr)) return false;
  if (x->t1 && !equal(x->t1, y->t1)) return false;
  if (x->t2 && !equal(x->t2, y->t2)) return false;
  if ((x->a != nullptr) != (y->a != nullptr) || (x->b != nullptr) != (y->b != nullptr)) return false;
  if (x->a && !equal(x->a, y->a)) return false;
  if (x->b && !equal(x->b, y->b)) return false;
  return true;
}

// Printer matching the surface grammar; parse(show(t)) == t structurally.
inline std::string show(const Term& t) {
  auto two = [](const char* k, const Term& x) { return std::string(k) + "(" + show(x->a) + ", " + show(x->b) + ")"; };
  auto twoT = [](const char* k, const Term& x) {
    return std::string(k) + "(" + show(x->t1) + ", " + show(x->t2) + ")";
  };
  switch (t->tag) {
    case TermTag::Id: return "id(" + show(t->t1) + ")";
    case TermTag::Comp: {
      // "." is left-associative in the parser, so parenthesize a Comp on the right.
      std::string g = show(t->a), f = show(t->b);
      if (t->b->tag == TermTag::Comp) f = "(" + f + ")";
      return g + " . " + f;
    }
    case TermTag::Pair: return two("pair", t);
    case TermTag::LPair: return two("lpair", t);
    case TermTag::RPair: return two("rpair", t);
    case TermTag::Proj1: return twoT("pr1", t);
    case TermTag::Proj2: return twoT("pr2", t);
    case TermTag::Final: return "final(" + show(t->t1) + ")";
    case TermTag::Copair: return two("copair", t);
    case TermTag::LCopair: return two("lcopair", t);
    case TermTag::RCopair: return two("rcopair", t);
    case TermTag::In1: return twoT("in1", t);
    case TermTag::In2: return twoT("in2", t);
    case TermTag::Initial: return "initial(" + show(t->t1) + ")";
    case TermTag::Sym: return t->name;
    case TermTag::Lookup: return "lkp[" + t->name + "]";
    case TermTag::Update: return "upd[" + t->name + "]";
    case TermTag::Tag: return "tag[" + t->name + "]";
    case TermTag::Untag: return "untag[" + t->name + "]";
    case TermTag::Downcast: return "down(" + show(t->a) + ")";
  }
  return "?";
}

}  // namespace decor

#endif
