#include "efftree/logic.hpp"

#include <sstream>

#include "efftree/error.hpp"

namespace efftree {

// ---------------------------------------------------------------- types

Ty::Ty() = default;

Ty Ty::nat() { return Ty(); }

Ty Ty::arrow(Ty from, Ty to) {
  Ty t;
  t.kind_ = Kind::Arrow;
  t.left_ = std::make_shared<const Ty>(std::move(from));
  t.right_ = std::make_shared<const Ty>(std::move(to));
  return t;
}

Ty Ty::prod(Ty first, Ty second) {
  Ty t = arrow(std::move(first), std::move(second));
  t.kind_ = Kind::Prod;
  return t;
}

Ty Ty::u(Ty body) {
  Ty t;
  t.kind_ = Kind::U;
  t.left_ = std::make_shared<const Ty>(std::move(body));
  return t;
}

bool operator==(const Ty& a, const Ty& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Ty::Kind::N:
      return true;
    case Ty::Kind::U:
      return a.left() == b.left();
    case Ty::Kind::Arrow:
    case Ty::Kind::Prod:
      return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::N:
      return os << 'N';
    case Ty::Kind::Arrow:
      return os << "(-> " << t.left() << ' ' << t.right() << ')';
    case Ty::Kind::Prod:
      return os << "(* " << t.left() << ' ' << t.right() << ')';
    case Ty::Kind::U:
      return os << "(U " << t.left() << ')';
  }
  return os;
}

std::string to_string(const Ty& t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

const char* to_string(Sort s) { return s == Sort::Val ? "val" : "cpt"; }

Term Term::val(Ty ty, Value v, Env env) {
  Term t;
  t.sort = Sort::Val;
  t.ty = std::move(ty);
  t.value = std::move(v);
  t.env = std::move(env);
  return t;
}

Term Term::cpt(Ty ty, TreeExpr tree, Env env) {
  Term t;
  t.sort = Sort::Cpt;
  t.ty = std::move(ty);
  t.tree = std::move(tree);
  t.env = std::move(env);
  return t;
}

bool value_has_type(const Value& v, const Ty& ty) {
  switch (ty.kind()) {
    case Ty::Kind::N:
      return v.is(Value::Kind::Nat);
    case Ty::Kind::Arrow:
      return v.is(Value::Kind::Fun);
    case Ty::Kind::Prod:
      return v.is(Value::Kind::Pair) && value_has_type(v.first(), ty.left()) &&
             value_has_type(v.second(), ty.right());
    case Ty::Kind::U:
      return v.is(Value::Kind::Thunk);
  }
  return false;
}

// ---------------------------------------------------------------- formulas

struct Formula::Rep {
  Kind kind = Kind::Eq;
  std::uint64_t n = 0;
  Value arg;
  std::optional<Formula> body;
  std::optional<FormulaTest> tests;
  Obs obs;
};

std::shared_ptr<Formula::Rep> Formula::make_rep(Kind k) {
  auto r = std::make_shared<Rep>();
  r->kind = k;
  return r;
}

Formula Formula::eq(std::uint64_t n) {
  auto r = make_rep(Kind::Eq);
  r->n = n;
  return Formula(std::move(r));
}

Formula Formula::neq(std::uint64_t n) {
  auto r = make_rep(Kind::Neq);
  r->n = n;
  return Formula(std::move(r));
}

Formula Formula::maps_to(Value arg, Formula body) {
  auto r = make_rep(Kind::MapsTo);
  r->arg = std::move(arg);
  r->body = std::move(body);
  return Formula(std::move(r));
}

Formula Formula::fst(Formula body) {
  auto r = make_rep(Kind::Fst);
  r->body = std::move(body);
  return Formula(std::move(r));
}

Formula Formula::snd(Formula body) {
  auto r = make_rep(Kind::Snd);
  r->body = std::move(body);
  return Formula(std::move(r));
}

Formula Formula::thunk(Formula body) {
  auto r = make_rep(Kind::Thunk);
  r->body = std::move(body);
  return Formula(std::move(r));
}

Formula Formula::test(FormulaTest t) {
  auto r = make_rep(Kind::TestF);
  r->tests = std::move(t);
  return Formula(std::move(r));
}

Formula Formula::obs_alpha(Obs o, Formula body) {
  return obs(Side::Alpha, std::move(o), std::move(body));
}

Formula Formula::obs_beta(Obs o, Formula body) {
  return obs(Side::Beta, std::move(o), std::move(body));
}

Formula Formula::obs(Side side, Obs o, Formula body) {
  auto r = make_rep(side == Side::Alpha ? Kind::ObsA : Kind::ObsB);
  r->obs = std::move(o);
  r->body = std::move(body);
  return Formula(std::move(r));
}

Formula::Kind Formula::kind() const { return rep_->kind; }
std::uint64_t Formula::nat() const { return rep_->n; }
const Value& Formula::arg() const { return rep_->arg; }
const Formula& Formula::body() const { return *rep_->body; }
const FormulaTest& Formula::tests() const { return *rep_->tests; }
const Obs& Formula::obs() const { return rep_->obs; }

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      return os << "(eq " << f.nat() << ')';
    case K::Neq:
      return os << "(neq " << f.nat() << ')';
    case K::MapsTo:
      return os << "(app " << f.arg() << ' ' << f.body() << ')';
    case K::Fst:
      return os << "(fst " << f.body() << ')';
    case K::Snd:
      return os << "(snd " << f.body() << ')';
    case K::Thunk:
      return os << "(thunk " << f.body() << ')';
    case K::TestF:
      os << "(test ";
      print_test(os, f.tests(),
                 [](std::ostream& o, const Formula& a) { o << a; });
      return os << ')';
    case K::ObsA:
      return os << "(obs-alpha " << f.obs() << ' ' << f.body() << ')';
    case K::ObsB:
      return os << "(obs-beta " << f.obs() << ' ' << f.body() << ')';
  }
  return os;
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

bool formula_eq(const Formula& a, const Formula& b) {
  using K = Formula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Eq:
    case K::Neq:
      return a.nat() == b.nat();
    case K::MapsTo:
      return value_eq(a.arg(), b.arg()) && formula_eq(a.body(), b.body());
    case K::Fst:
    case K::Snd:
    case K::Thunk:
      return formula_eq(a.body(), b.body());
    case K::TestF:
      return test_eq(a.tests(), b.tests(), [](const Formula& x, const Formula& y) {
        return formula_eq(x, y);
      });
    case K::ObsA:
    case K::ObsB:
      return a.obs() == b.obs() && formula_eq(a.body(), b.body());
  }
  return false;
}

namespace {

[[noreturn]] void mismatch(const Formula& f, Sort sort, const Ty& ty) {
  std::ostringstream os;
  os << "formula " << f << " is not at (" << to_string(sort) << ", " << ty
     << ')';
  throw Error(ErrorKind::SortMismatch, os.str());
}

void check_test(const FormulaTest& t, Sort sort, const Ty& ty,
                const ObsSpec* spec) {
  using K = FormulaTest::Kind;
  switch (t.kind()) {
    case K::Atom:
      check_formula(t.payload(), sort, ty, spec);
      return;
    case K::True:
    case K::False:
      return;
    case K::And:
    case K::Or:
      check_test(t.lhs(), sort, ty, spec);
      check_test(t.rhs(), sort, ty, spec);
      return;
    case K::BigAnd:
    case K::BigOr: {
      // Families are checked on their explicit part only.
      const auto& fam = t.family();
      std::uint64_t n = fam.support() ? std::min<std::uint64_t>(*fam.support(), 4) : 4;
      for (std::uint64_t i = 0; i < n; ++i) check_test(fam.at(i), sort, ty, spec);
      return;
    }
  }
}

}  // namespace

void check_formula(const Formula& f, Sort sort, const Ty& ty,
                   const ObsSpec* spec) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
    case K::Neq:
      if (sort != Sort::Val || ty.kind() != Ty::Kind::N) mismatch(f, sort, ty);
      return;
    case K::MapsTo:
      if (sort != Sort::Val || ty.kind() != Ty::Kind::Arrow)
        mismatch(f, sort, ty);
      if (!value_has_type(f.arg(), ty.left())) mismatch(f, sort, ty);
      check_formula(f.body(), Sort::Cpt, ty.right(), spec);
      return;
    case K::Fst:
    case K::Snd:
      if (sort != Sort::Val || ty.kind() != Ty::Kind::Prod)
        mismatch(f, sort, ty);
      check_formula(f.body(), Sort::Val,
                    f.kind() == K::Fst ? ty.left() : ty.right(), spec);
      return;
    case K::Thunk:
      if (sort != Sort::Val || ty.kind() != Ty::Kind::U) mismatch(f, sort, ty);
      check_formula(f.body(), Sort::Cpt, ty.left(), spec);
      return;
    case K::TestF:
      check_test(f.tests(), sort, ty, spec);
      return;
    case K::ObsA:
    case K::ObsB:
      if (sort != Sort::Cpt) mismatch(f, sort, ty);
      if (spec && !spec->accepts(f.obs()))
        throw Error(ErrorKind::UnknownObservation,
                    "observation " + to_string(f.obs()) +
                        " is not valid for effect '" + spec->name + "'");
      check_formula(f.body(), Sort::Val, ty, spec);
      return;
  }
}

namespace {

void require(bool ok, const Formula& f, const Term& p) {
  if (!ok) mismatch(f, p.sort, p.ty);
}

}  // namespace

Verdict satisfies(const EffectKit& kit, const Term& p, const Formula& f,
                  const Budget& budget, const CheckOptions& opts) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
    case K::Neq: {
      require(p.sort == Sort::Val && p.ty.kind() == Ty::Kind::N, f, p);
      bool same = p.value.as_nat() == f.nat();
      return verdict_of(f.kind() == K::Eq ? same : !same);
    }
    case K::MapsTo: {
      require(p.sort == Sort::Val && p.ty.kind() == Ty::Kind::Arrow, f, p);
      const FunValue& fn = p.value.as_fun();
      bool admissible = false;
      for (const auto& a : fn.admissible)
        if (value_eq(a, f.arg())) admissible = true;
      if (!admissible) {
        std::ostringstream os;
        os << "argument " << f.arg() << " is not admissible for '" << fn.name
           << "'";
        throw Error(ErrorKind::InadmissibleArgument, os.str());
      }
      return satisfies(kit, Term::cpt(p.ty.right(), fn.apply(f.arg()), p.env),
                       f.body(), budget, opts);
    }
    case K::Fst:
    case K::Snd: {
      require(p.sort == Sort::Val && p.ty.kind() == Ty::Kind::Prod, f, p);
      bool first = f.kind() == K::Fst;
      return satisfies(kit,
                       Term::val(first ? p.ty.left() : p.ty.right(),
                                 first ? p.value.first() : p.value.second(),
                                 p.env),
                       f.body(), budget, opts);
    }
    case K::Thunk:
      require(p.sort == Sort::Val && p.ty.kind() == Ty::Kind::U, f, p);
      return satisfies(kit, Term::cpt(p.ty.left(), p.value.as_thunk(), p.env),
                       f.body(), budget, opts);
    case K::TestF:
      return eval_test(
          f.tests(),
          [&](const Formula& a) { return satisfies(kit, p, a, budget, opts); },
          budget.index_bound);
    case K::ObsA:
    case K::ObsB: {
      require(p.sort == Sort::Cpt, f, p);
      if (!kit.spec().accepts(f.obs()))
        throw Error(ErrorKind::UnknownObservation,
                    "observation " + to_string(f.obs()) +
                        " is not valid for effect '" + kit.name + "'");
      Pred pred = [&](const Value& v) {
        return satisfies(kit, Term::val(p.ty, v, p.env), f.body(), budget,
                         opts);
      };
      Side side = f.kind() == K::ObsA ? Side::Alpha : Side::Beta;
      return kit.pair.lift(side, f.obs(), pred, p.env, p.tree, budget, opts);
    }
  }
  return Verdict::Unknown;
}

Formula neg_formula(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      return Formula::neq(f.nat());
    case K::Neq:
      return Formula::eq(f.nat());
    case K::MapsTo:
      return Formula::maps_to(f.arg(), neg_formula(f.body()));
    case K::Fst:
      return Formula::fst(neg_formula(f.body()));
    case K::Snd:
      return Formula::snd(neg_formula(f.body()));
    case K::Thunk:
      return Formula::thunk(neg_formula(f.body()));
    case K::TestF: {
      static const MapTag neg_tag{"neg", true};
      return Formula::test(dual_test(map_test<Formula>(
          f.tests(), [](const Formula& a) { return neg_formula(a); }, neg_tag)));
    }
    case K::ObsA:
      return Formula::obs_beta(f.obs(), neg_formula(f.body()));
    case K::ObsB:
      return Formula::obs_alpha(f.obs(), neg_formula(f.body()));
  }
  return f;
}

Formula tower_formula(const DecompTest& t, const Formula& phi, Side side) {
  MapTag tag{std::string(side == Side::Alpha ? "tower-alpha:" : "tower-beta:") +
                 to_string(phi),
             false};
  return Formula::test(map_test<Formula>(
      t,
      [phi, side](const ObsPair& p) {
        return Formula::obs(side, p.first,
                            Formula::thunk(Formula::obs(side, p.second, phi)));
      },
      tag));
}

WeakApproxReport check_weak_approx(const EffectKit& kit, const Term& p,
                                   const Term& q,
                                   const std::vector<Formula>& formulas,
                                   const Budget& budget) {
  if (p.sort != q.sort || p.ty != q.ty)
    throw Error(ErrorKind::SortMismatch,
                "terms compared at different sorts or types");
  WeakApproxReport report;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const Formula& phi = formulas[i];
    check_formula(phi, p.sort, p.ty, &kit.spec());
    ++report.checked;
    Verdict vp = satisfies(kit, p, phi, budget);
    if (vp == Verdict::Refuted) continue;
    Verdict vq = satisfies(kit, q, neg_formula(phi), budget);
    if (vp == Verdict::Proved && vq == Verdict::Proved) {
      report.witness = i;
      return report;
    }
    if (vp == Verdict::Unknown || vq == Verdict::Unknown) ++report.unknowns;
  }
  return report;
}

}  // namespace efftree
