#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "efftree/verdict.hpp"

namespace efftree {

template <class A>
class Test;

// Representational identity of a countable family. Two families with equal
// ids are the same family; dualizing toggles `dual` and mapping appends to
// `maps`, with adjacent copies of an involutive map cancelling.
struct FamilyId {
  std::string origin;
  bool dual = false;
  std::vector<std::string> maps;

  friend bool operator==(const FamilyId&, const FamilyId&) = default;
};

// Name of an atom map, for family identities.
struct MapTag {
  std::string name;
  bool involutive = false;
};

MapTag fresh_map_tag();

// ℕ-indexed family of tests. With a support s, every index >= s is the
// neutral tail of the surrounding connective (False under BigOr, True under
// BigAnd) and is never generated.
template <class A>
class Family {
 public:
  using Gen = std::function<Test<A>(std::uint64_t)>;

  Family(std::string origin, Gen gen,
         std::optional<std::uint64_t> support = std::nullopt)
      : gen_(std::move(gen)), support_(support) {
    id_.origin = std::move(origin);
  }

  Test<A> at(std::uint64_t i) const { return gen_(i); }
  const std::optional<std::uint64_t>& support() const { return support_; }
  const FamilyId& id() const { return id_; }

  Family dualized() const;

  template <class B, class F>
  Family<B> mapped(F f, const MapTag& tag) const;

  bool same_as(const Family& other) const {
    return id_ == other.id_ && support_ == other.support_;
  }

 private:
  template <class>
  friend class Family;
  Family() = default;

  Gen gen_;
  std::optional<std::uint64_t> support_;
  FamilyId id_;
};

// The test grammar: atoms, constants, binary and countable connectives.
// No negation; dual_test plays that role.
template <class A>
class Test {
 public:
  enum class Kind { Atom, True, False, And, Or, BigAnd, BigOr };

  Test() : Test(tt()) {}
  static Test atom(A a) {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::Atom;
    r->payload = std::move(a);
    return Test(std::move(r));
  }
  static Test tt() { return constant(Kind::True); }
  static Test ff() { return constant(Kind::False); }
  static Test conj(Test l, Test r) {
    return binary(Kind::And, std::move(l), std::move(r));
  }
  static Test disj(Test l, Test r) {
    return binary(Kind::Or, std::move(l), std::move(r));
  }
  static Test big_and(Family<A> f) { return big(Kind::BigAnd, std::move(f)); }
  static Test big_or(Family<A> f) { return big(Kind::BigOr, std::move(f)); }

  Kind kind() const { return rep_->kind; }
  const A& payload() const { return *rep_->payload; }
  const Test& lhs() const { return *rep_->lhs; }
  const Test& rhs() const { return *rep_->rhs; }
  const Family<A>& family() const { return *rep_->family; }

 private:
  struct Rep;

  explicit Test(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  static Test constant(Kind k) {
    auto r = std::make_shared<Rep>();
    r->kind = k;
    return Test(std::move(r));
  }
  static Test binary(Kind k, Test l, Test r) {
    auto rep = std::make_shared<Rep>();
    rep->kind = k;
    rep->lhs = std::move(l);
    rep->rhs = std::move(r);
    return Test(std::move(rep));
  }
  static Test big(Kind k, Family<A> f) {
    auto r = std::make_shared<Rep>();
    r->kind = k;
    r->family = std::move(f);
    return Test(std::move(r));
  }

  std::shared_ptr<const Rep> rep_;
};

template <class A>
struct Test<A>::Rep {
  Kind kind = Kind::True;
  std::optional<A> payload;
  std::optional<Test> lhs, rhs;
  std::optional<Family<A>> family;
};

// De Morgan dual: swaps ∧/∨, True/False, ⋀/⋁ and fixes atoms.
template <class A>
Test<A> dual_test(const Test<A>& t) {
  using K = typename Test<A>::Kind;
  switch (t.kind()) {
    case K::Atom:
      return t;
    case K::True:
      return Test<A>::ff();
    case K::False:
      return Test<A>::tt();
    case K::And:
      return Test<A>::disj(dual_test(t.lhs()), dual_test(t.rhs()));
    case K::Or:
      return Test<A>::conj(dual_test(t.lhs()), dual_test(t.rhs()));
    case K::BigAnd:
      return Test<A>::big_or(t.family().dualized());
    case K::BigOr:
      return Test<A>::big_and(t.family().dualized());
  }
  return t;
}

template <class A>
Family<A> Family<A>::dualized() const {
  Family out;
  out.gen_ = [g = gen_](std::uint64_t i) { return dual_test(g(i)); };
  out.support_ = support_;
  out.id_ = id_;
  out.id_.dual = !id_.dual;
  return out;
}

// Functor action: rewrites atoms, keeps connectives.
template <class B, class A, class F>
Test<B> map_test(const Test<A>& t, F f, const MapTag& tag = fresh_map_tag()) {
  using K = typename Test<A>::Kind;
  switch (t.kind()) {
    case K::Atom:
      return Test<B>::atom(f(t.payload()));
    case K::True:
      return Test<B>::tt();
    case K::False:
      return Test<B>::ff();
    case K::And:
      return Test<B>::conj(map_test<B>(t.lhs(), f, tag),
                           map_test<B>(t.rhs(), f, tag));
    case K::Or:
      return Test<B>::disj(map_test<B>(t.lhs(), f, tag),
                           map_test<B>(t.rhs(), f, tag));
    case K::BigAnd:
      return Test<B>::big_and(t.family().template mapped<B>(f, tag));
    case K::BigOr:
      return Test<B>::big_or(t.family().template mapped<B>(f, tag));
  }
  return Test<B>::tt();
}

template <class A>
template <class B, class F>
Family<B> Family<A>::mapped(F f, const MapTag& tag) const {
  Family<B> out;
  out.gen_ = [g = gen_, f, tag](std::uint64_t i) {
    return map_test<B>(g(i), f, tag);
  };
  out.support_ = support_;
  out.id_ = id_;
  if (tag.involutive && !out.id_.maps.empty() && out.id_.maps.back() == tag.name)
    out.id_.maps.pop_back();
  else
    out.id_.maps.push_back(tag.name);
  return out;
}

// Strong-Kleene evaluation. Countable connectives look at indices below
// min(support, index_bound); an unexplored unbounded tail can only make a
// disjunction Unknown (never Refuted) and a conjunction Unknown (never
// Proved). Short-circuits on the absorbing value.
template <class A, class Eval>
Verdict eval_test(const Test<A>& t, Eval&& atom_eval,
                  std::uint64_t index_bound) {
  using K = typename Test<A>::Kind;
  switch (t.kind()) {
    case K::Atom:
      return atom_eval(t.payload());
    case K::True:
      return Verdict::Proved;
    case K::False:
      return Verdict::Refuted;
    case K::And: {
      Verdict l = eval_test(t.lhs(), atom_eval, index_bound);
      if (l == Verdict::Refuted) return l;
      return verdict_and(l, eval_test(t.rhs(), atom_eval, index_bound));
    }
    case K::Or: {
      Verdict l = eval_test(t.lhs(), atom_eval, index_bound);
      if (l == Verdict::Proved) return l;
      return verdict_or(l, eval_test(t.rhs(), atom_eval, index_bound));
    }
    case K::BigOr:
    case K::BigAnd: {
      const bool is_or = t.kind() == K::BigOr;
      const Verdict absorbing = is_or ? Verdict::Proved : Verdict::Refuted;
      const auto& fam = t.family();
      const bool truncated = !fam.support() || *fam.support() > index_bound;
      const std::uint64_t limit =
          truncated ? index_bound : *fam.support();
      Verdict acc = is_or ? Verdict::Refuted : Verdict::Proved;
      for (std::uint64_t i = 0; i < limit; ++i) {
        Verdict v = eval_test(fam.at(i), atom_eval, index_bound);
        acc = is_or ? verdict_or(acc, v) : verdict_and(acc, v);
        if (acc == absorbing) return acc;
      }
      if (truncated) acc = is_or ? verdict_or(acc, Verdict::Unknown)
                                 : verdict_and(acc, Verdict::Unknown);
      return acc;
    }
  }
  return Verdict::Unknown;
}

// Syntactic equality; families compare by identity and support.
template <class A, class Eq>
bool test_eq(const Test<A>& a, const Test<A>& b, Eq&& atom_eq) {
  using K = typename Test<A>::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Atom:
      return atom_eq(a.payload(), b.payload());
    case K::True:
    case K::False:
      return true;
    case K::And:
    case K::Or:
      return test_eq(a.lhs(), b.lhs(), atom_eq) &&
             test_eq(a.rhs(), b.rhs(), atom_eq);
    case K::BigAnd:
    case K::BigOr:
      return a.family().same_as(b.family());
  }
  return false;
}

template <class A>
bool test_eq(const Test<A>& a, const Test<A>& b) {
  return test_eq(a, b, [](const A& x, const A& y) { return x == y; });
}

inline std::ostream& operator<<(std::ostream& os, const FamilyId& id) {
  std::string body = id.origin;
  for (const auto& m : id.maps) body = "(map " + m + " " + body + ")";
  if (id.dual) body = "(dual " + body + ")";
  return os << body;
}

// S-expression rendering; atoms through `print_atom(os, a)`. A family
// prints as its origin, so parsed families round-trip.
template <class A, class P>
void print_test(std::ostream& os, const Test<A>& t, P&& print_atom) {
  using K = typename Test<A>::Kind;
  switch (t.kind()) {
    case K::Atom:
      os << "(atom ";
      print_atom(os, t.payload());
      os << ')';
      return;
    case K::True:
      os << "true";
      return;
    case K::False:
      os << "false";
      return;
    case K::And:
    case K::Or:
      os << (t.kind() == K::And ? "(and " : "(or ");
      print_test(os, t.lhs(), print_atom);
      os << ' ';
      print_test(os, t.rhs(), print_atom);
      os << ')';
      return;
    case K::BigAnd:
    case K::BigOr:
      os << t.family().id();
      return;
  }
}

// Atoms in left-to-right order, expanding families up to `index_bound`.
template <class A>
void collect_atoms(const Test<A>& t, std::uint64_t index_bound,
                   std::vector<A>& out) {
  using K = typename Test<A>::Kind;
  switch (t.kind()) {
    case K::Atom:
      out.push_back(t.payload());
      return;
    case K::True:
    case K::False:
      return;
    case K::And:
    case K::Or:
      collect_atoms(t.lhs(), index_bound, out);
      collect_atoms(t.rhs(), index_bound, out);
      return;
    case K::BigAnd:
    case K::BigOr: {
      const auto& fam = t.family();
      std::uint64_t n = fam.support() ? std::min(*fam.support(), index_bound)
                                      : index_bound;
      for (std::uint64_t i = 0; i < n; ++i)
        collect_atoms(fam.at(i), index_bound, out);
      return;
    }
  }
}

}  // namespace efftree
