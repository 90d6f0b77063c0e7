#include "efftree/relator.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "efftree/error.hpp"

namespace efftree {

namespace {

using KeyPairs = std::set<std::pair<std::string, std::string>>;

// Compares heads layer by layer. A pair of named trees met again is taken
// as equal (a bisimulation up to the current path); anonymous trees are
// compared to a fixed depth.
bool same_tree_rec(const Env& ea, const TreeExpr& a, const Env& eb,
                   const TreeExpr& b, std::size_t depth, KeyPairs& assumed) {
  if (a.address() == b.address()) return true;
  if (a.identity() && b.identity() && *a.identity() == *b.identity()) return true;
  Head ha = force(ea, a), hb = force(eb, b);
  if (ha.is_leaf != hb.is_leaf) return false;
  if (ha.is_leaf) return value_eq(ha.value, hb.value);
  if (!(ha.op == hb.op)) return false;
  if (!ha.keys.empty() && !hb.keys.empty()) {
    if (!assumed.insert({ha.keys.back(), hb.keys.back()}).second) return true;
  } else if (depth == 0) {
    return true;
  }
  const auto* la = ha.children.list();
  const auto* lb = hb.children.list();
  if ((la == nullptr) != (lb == nullptr)) return false;
  if (la && la->size() != lb->size()) return false;
  std::uint64_t n = la ? la->size() : 4;
  for (std::uint64_t i = 0; i < n; ++i)
    if (!same_tree_rec(ea, ha.children.at(i), eb, hb.children.at(i),
                       depth == 0 ? 0 : depth - 1, assumed))
      return false;
  return true;
}

bool same_tree(const Env& ea, const TreeExpr& a, const Env& eb,
               const TreeExpr& b) {
  KeyPairs assumed;
  return same_tree_rec(ea, a, eb, b, 16, assumed);
}

}  // namespace

bool same_value(const Env& env, const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is(Value::Kind::Thunk))
    return same_tree(env, a.as_thunk(), env, b.as_thunk());
  if (a.is(Value::Kind::Pair))
    return same_value(env, a.first(), b.first()) &&
           same_value(env, a.second(), b.second());
  return value_eq(a, b);
}

FiniteCarrier::FiniteCarrier(std::vector<Value> elements, Env env)
    : elements_(std::move(elements)), env_(std::move(env)) {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (same_value(env_, elements_[i], elements_[j])) {
        std::ostringstream os;
        os << "carrier element " << elements_[i] << " occurs twice";
        throw Error(ErrorKind::SortMismatch, os.str());
      }
}

std::optional<std::size_t> FiniteCarrier::index_of(const Value& v) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (same_value(env_, elements_[i], v)) return i;
  return std::nullopt;
}

Relation Relation::identity(std::size_t n) {
  Relation r{n, {}};
  for (std::size_t i = 0; i < n; ++i) r.pairs.insert({i, i});
  return r;
}

Relation Relation::total(std::size_t n) {
  Relation r{n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.pairs.insert({i, j});
  return r;
}

void Relation::add(std::size_t a, std::size_t b) {
  if (a >= size || b >= size)
    throw Error(ErrorKind::IllTypedCandidate,
                "relation pair (" + std::to_string(a) + ", " +
                    std::to_string(b) + ") lies outside a carrier of size " +
                    std::to_string(size));
  pairs.insert({a, b});
}

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw Error(ErrorKind::CarrierTooLarge,
                "carrier of size " + std::to_string(n) +
                    " exceeds the predicate enumeration cap " +
                    std::to_string(cap));
}

}  // namespace

std::vector<std::uint64_t> r_correct_predicates(const FiniteCarrier& carrier,
                                                const Relation& r,
                                                std::size_t cap) {
  const std::size_t n = carrier.size();
  check_cap(n, cap);
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    bool closed = true;
    for (const auto& [a, b] : r.pairs)
      if ((s >> a & 1) && !(s >> b & 1)) {
        closed = false;
        break;
      }
    if (closed) out.push_back(s);
  }
  return out;
}

void print_subset(std::ostream& os, const FiniteCarrier& carrier,
                  std::uint64_t subset) {
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < carrier.size(); ++i)
    if (subset >> i & 1) {
      if (!first) os << ' ';
      os << carrier.elements()[i];
      first = false;
    }
  os << '}';
}

GammaResult gamma_check(const EffectKit& kit, const FiniteCarrier& carrier,
                        const Relation& r, const Env& env, const TreeExpr& t0,
                        const TreeExpr& t1, const std::vector<Obs>& sample,
                        const Budget& budget, std::size_t cap) {
  GammaResult result;
  for (std::uint64_t s : r_correct_predicates(carrier, r, cap)) {
    Pred member = [&carrier, s](const Value& v) {
      auto i = carrier.index_of(v);
      if (!i) {
        std::ostringstream os;
        os << "leaf " << v << " is not in the carrier";
        throw Error(ErrorKind::SortMismatch, os.str());
      }
      return verdict_of(s >> *i & 1);
    };
    for (const Obs& o : sample) {
      for (Side side : {Side::Alpha, Side::Beta}) {
        ++result.checks;
        Verdict lhs = kit.pair.lift(side, o, member, env, t0, budget);
        if (lhs == Verdict::Refuted) continue;
        Verdict rhs = kit.pair.lift(side, o, member, env, t1, budget);
        if (lhs == Verdict::Proved && rhs == Verdict::Refuted) {
          result.counterexample = GammaCounterexample{s, o, side};
          return result;
        }
        if (lhs == Verdict::Unknown || rhs == Verdict::Unknown)
          ++result.unknowns;
      }
    }
  }
  return result;
}

const TypedUniverse* SimulationProblem::find(Sort sort, const Ty& ty) const {
  for (const auto& u : universes)
    if (u.sort == sort && u.ty == ty) return &u;
  return nullptr;
}

namespace {

bool same_term(const Term& x, const Term& y) {
  if (x.sort != y.sort) return false;
  if (x.sort == Sort::Cpt) return same_tree(x.env, x.tree, y.env, y.tree);
  if (x.value.is(Value::Kind::Thunk) && y.value.is(Value::Kind::Thunk))
    return same_tree(x.env, x.value.as_thunk(), y.env, y.value.as_thunk());
  return value_eq(x.value, y.value);
}

class SimulationChecker {
 public:
  explicit SimulationChecker(const SimulationProblem& p) : p_(p) {}

  SimulationReport run() {
    for (const auto& u : p_.universes) {
      if (u.candidate.size != u.terms.size())
        ill_typed("candidate at " + where(u) + " has size " +
                  std::to_string(u.candidate.size) + " but the universe has " +
                  std::to_string(u.terms.size()) + " terms");
      for (const auto& t : u.terms)
        if (t.sort != u.sort || t.ty != u.ty)
          ill_typed("term of the wrong type in the universe at " + where(u));
    }
    for (std::size_t i = 0; i < p_.universes.size(); ++i) {
      const auto& u = p_.universes[i];
      for (const auto& [a, b] : u.candidate.pairs) {
        current_ = FailingPair{i, a, b};
        if (!check_pair(u, a, b)) return report_;
      }
    }
    return report_;
  }

 private:
  [[noreturn]] static void ill_typed(const std::string& msg) {
    throw Error(ErrorKind::IllTypedCandidate, msg);
  }

  static std::string where(const TypedUniverse& u) {
    return std::string("(") + to_string(u.sort) + ", " + to_string(u.ty) + ")";
  }

  const TypedUniverse& universe(Sort sort, const Ty& ty) const {
    const TypedUniverse* u = p_.find(sort, ty);
    if (!u)
      ill_typed(std::string("no universe at (") + to_string(sort) + ", " +
                to_string(ty) + ")");
    return *u;
  }

  std::size_t locate(const TypedUniverse& u, const Term& t) const {
    for (std::size_t i = 0; i < u.terms.size(); ++i)
      if (same_term(u.terms[i], t)) return i;
    ill_typed("a derived term is missing from the universe at " + where(u));
  }

  bool fail(const std::string& msg) {
    report_.pass = false;
    report_.violation = msg;
    report_.failing = current_;
    return false;
  }

  // Derived pair must be related in the universe of its type.
  bool require(const TypedUniverse& u, const Term& x, const Term& y,
               const std::string& bullet) {
    std::size_t i = locate(u, x), j = locate(u, y);
    if (u.candidate.contains(i, j)) return true;
    return fail(bullet + ": derived terms #" + std::to_string(i) + " and #" +
                std::to_string(j) + " at " + where(u) + " are not related");
  }

  bool check_pair(const TypedUniverse& u, std::size_t a, std::size_t b) {
    const Term& x = u.terms[a];
    const Term& y = u.terms[b];
    const std::string pair = "#" + std::to_string(a) + " and #" +
                             std::to_string(b) + " at " + where(u);
    if (u.sort == Sort::Cpt) {
      const TypedUniverse& vals = universe(Sort::Val, u.ty);
      std::vector<Value> elems;
      for (const auto& t : vals.terms) elems.push_back(t.value);
      Env env = x.env.merged(y.env);
      FiniteCarrier carrier(elems, env);
      GammaResult g = gamma_check(p_.kit, carrier, vals.candidate, env, x.tree,
                                  y.tree, p_.obs_sample, p_.budget);
      report_.unknowns += g.unknowns;
      if (g.holds()) return true;
      report_.gamma = g.counterexample;
      std::ostringstream os;
      os << "gamma: " << pair << " fail for S = ";
      print_subset(os, carrier, g.counterexample->subset);
      os << " at " << g.counterexample->obs << " ("
         << to_string(g.counterexample->side) << ')';
      return fail(os.str());
    }
    switch (u.ty.kind()) {
      case Ty::Kind::N:
        if (x.value.as_nat() == y.value.as_nat()) return true;
        return fail("nat: " + pair + " are different numbers");
      case Ty::Kind::Arrow: {
        const TypedUniverse& cod = universe(Sort::Cpt, u.ty.right());
        for (const auto& as : p_.arg_sets) {
          if (as.arrow != u.ty) continue;
          for (const auto& v : as.args) {
            Term fx = Term::cpt(u.ty.right(), x.value.as_fun().apply(v), x.env);
            Term fy = Term::cpt(u.ty.right(), y.value.as_fun().apply(v), y.env);
            std::ostringstream os;
            os << "application of " << pair << " to " << v;
            if (!require(cod, fx, fy, os.str())) return false;
          }
        }
        return true;
      }
      case Ty::Kind::Prod: {
        const TypedUniverse& l = universe(Sort::Val, u.ty.left());
        const TypedUniverse& r = universe(Sort::Val, u.ty.right());
        return require(l, Term::val(u.ty.left(), x.value.first(), x.env),
                       Term::val(u.ty.left(), y.value.first(), y.env),
                       "first projection of " + pair) &&
               require(r, Term::val(u.ty.right(), x.value.second(), x.env),
                       Term::val(u.ty.right(), y.value.second(), y.env),
                       "second projection of " + pair);
      }
      case Ty::Kind::U: {
        const TypedUniverse& c = universe(Sort::Cpt, u.ty.left());
        return require(c, Term::cpt(u.ty.left(), x.value.as_thunk(), x.env),
                       Term::cpt(u.ty.left(), y.value.as_thunk(), y.env),
                       "thunk bodies of " + pair);
      }
    }
    return true;
  }

  const SimulationProblem& p_;
  SimulationReport report_;
  FailingPair current_;
};

}  // namespace

SimulationReport simulation_check(const SimulationProblem& problem) {
  return SimulationChecker(problem).run();
}

Relation relation_union(const Relation& a, const Relation& b) {
  Relation out = a;
  out.size = std::max(a.size, b.size);
  out.pairs.insert(b.pairs.begin(), b.pairs.end());
  return out;
}

Relation relation_rt_closure(const Relation& r) {
  Relation out = relation_union(r, Relation::identity(r.size));
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::pair<std::size_t, std::size_t>> add;
    for (const auto& [a, b] : out.pairs)
      for (const auto& [c, d] : out.pairs)
        if (b == c && !out.contains(a, d)) add.push_back({a, d});
    for (const auto& p : add) grew |= out.pairs.insert(p).second;
  }
  return out;
}

namespace {

// Thunks at the leaves of a finite (or rational) outer layer.
void collect_thunks(const Env& env, const TreeExpr& t, std::uint64_t window,
                    std::vector<Value>& out, std::set<std::string>& seen,
                    std::size_t depth) {
  if (t.identity() && !seen.insert(*t.identity()).second) return;
  if (depth == 0) return;
  Head h = force(env, t);
  if (h.is_leaf) {
    for (const auto& v : out)
      if (same_value(env, v, h.value)) return;
    h.value.as_thunk();
    out.push_back(h.value);
    return;
  }
  if (const auto* list = h.children.list()) {
    for (const auto& c : *list) collect_thunks(env, c, window, out, seen, depth - 1);
  } else {
    for (std::uint64_t i = 0; i < window; ++i)
      collect_thunks(env, h.children.at(i), window, out, seen, depth - 1);
  }
}

}  // namespace

SequencingReport gamma_sequencing_check(const EffectKit& kit,
                                        const FiniteCarrier& carrier,
                                        const Relation& r, const Env& env,
                                        const TreeExpr& d0, const TreeExpr& d1,
                                        const std::vector<Obs>& sample,
                                        const Budget& budget) {
  SequencingReport report;
  std::vector<Value> inner;
  std::set<std::string> seen;
  collect_thunks(env, d0, budget.index_bound, inner, seen, budget.fuel);
  collect_thunks(env, d1, budget.index_bound, inner, seen, budget.fuel);
  FiniteCarrier inner_carrier(inner, env);
  report.inner_carrier = inner.size();
  check_cap(inner.size(), kDefaultCarrierCap);

  // Γ(R) on the inner trees, pairwise.
  Relation gr = Relation::empty(inner.size());
  for (std::size_t a = 0; a < inner.size(); ++a)
    for (std::size_t b = 0; b < inner.size(); ++b) {
      GammaResult g = gamma_check(kit, carrier, r, env, inner[a].as_thunk(),
                                  inner[b].as_thunk(), sample, budget);
      report.unknowns += g.unknowns;
      if (g.holds()) gr.add(a, b);
    }

  GammaResult hyp =
      gamma_check(kit, inner_carrier, gr, env, d0, d1, sample, budget);
  GammaResult concl =
      gamma_check(kit, carrier, r, env, mu(d0), mu(d1), sample, budget);
  report.unknowns += hyp.unknowns + concl.unknowns;
  report.hypothesis = hyp.holds();
  report.conclusion = concl.holds();
  return report;
}

}  // namespace efftree
