#include "efftree/syntax.hpp"

#include <sstream>

#include "efftree/error.hpp"

namespace efftree {

struct Program::Functions {
  struct Def {
    std::string param;
    std::vector<Sexp> admits;
    Sexp body;
  };
  std::map<std::string, Def> defs;
};

namespace {

using Scope = std::map<std::string, Value>;

void expect_arity(const Sexp& s, std::size_t n) {
  if (!s.list || s.items.size() != n + 1)
    parse_fail(s, "'" + s.head() + "' expects " + std::to_string(n) +
                      " argument" + (n == 1 ? "" : "s"));
}

const std::string& name_of(const Sexp& s, const char* what) {
  if (!s.is_atom() || s.is_number() || s.atom.empty())
    parse_fail(s, std::string("expected ") + what);
  return s.atom;
}

std::uint64_t number(const Sexp& s) {
  if (!s.is_number()) parse_fail(s, "expected a natural number");
  return std::stoull(s.atom);
}

// Tree and value elaboration. Binders are resolved lazily: a lookup node
// elaborates its body per demanded index.
class Elaborator {
 public:
  explicit Elaborator(const Program& p)
      : ctx_(std::make_shared<const Context>(Context{p.signature, p.functions})) {}

  std::uint64_t nat(const Sexp& s, const Scope& scope) const {
    if (s.is_number()) return number(s);
    if (s.is_form("+")) {
      if (s.items.size() < 2) parse_fail(s, "'+' expects arguments");
      std::uint64_t sum = 0;
      for (std::size_t i = 1; i < s.items.size(); ++i) sum += nat(s.items[i], scope);
      return sum;
    }
    if (s.is_atom()) {
      auto it = scope.find(s.atom);
      if (it != scope.end() && it->second.is(Value::Kind::Nat))
        return it->second.as_nat();
    }
    parse_fail(s, "expected a natural number expression");
  }

  Value value(const Sexp& s, const Scope& scope) const {
    if (s.is_atom()) {
      if (s.is_number()) return Value::nat(number(s));
      auto it = scope.find(s.atom);
      if (it != scope.end()) return it->second;
      if (s.atom == "unit") return Value::unit();
      if (s.atom == "proved") return Value::truth(Verdict::Proved);
      if (s.atom == "refuted") return Value::truth(Verdict::Refuted);
      if (s.atom == "unknown") return Value::truth(Verdict::Unknown);
      parse_fail(s, "unknown value '" + s.atom + "'");
    }
    const std::string& h = s.head();
    if (h == "+") return Value::nat(nat(s, scope));
    if (h == "pair") {
      expect_arity(s, 2);
      return Value::pair(value(s.items[1], scope), value(s.items[2], scope));
    }
    if (h == "thunk") {
      expect_arity(s, 1);
      return Value::thunk(tree(s.items[1], scope));
    }
    if (h == "fun") {
      expect_arity(s, 1);
      auto f = function(name_of(s.items[1], "a function name"));
      if (!f) parse_fail(s.items[1], "unknown function '" + s.items[1].atom + "'");
      return Value::fun(*f);
    }
    parse_fail(s, "expected a value");
  }

  TreeExpr tree(const Sexp& s, const Scope& scope) const {
    if (!s.list || s.items.empty() || !s.items[0].is_atom())
      parse_fail(s, "expected a tree");
    const std::string& h = s.head();
    if (h == "leaf") {
      expect_arity(s, 1);
      return TreeExpr::leaf(value(s.items[1], scope));
    }
    if (h == "ref") {
      expect_arity(s, 1);
      return TreeExpr::ref(name_of(s.items[1], "a definition name"));
    }
    if (h == "mu") {
      expect_arity(s, 1);
      return mu(tree(s.items[1], scope));
    }
    if (h == "seq") {
      expect_arity(s, 2);
      TreeExpr first = tree(s.items[1], scope);
      Value rest = Value::thunk(tree(s.items[2], scope));
      return mu(map_tree([rest](const Value&) { return rest; }, first));
    }
    if (h == "bind") {
      expect_arity(s, 3);
      const std::string var = name_of(s.items[1], "a variable");
      TreeExpr first = tree(s.items[2], scope);
      Sexp body = s.items[3];
      Elaborator self = *this;
      return mu(map_tree(
          [self, var, body, scope](const Value& v) {
            Scope inner = scope;
            inner[var] = v;
            return Value::thunk(self.tree(body, inner));
          },
          first));
    }
    if (h == "app") {
      expect_arity(s, 2);
      auto f = function(name_of(s.items[1], "a function name"));
      if (!f) parse_fail(s.items[1], "unknown function '" + s.items[1].atom + "'");
      return f->apply(value(s.items[2], scope));
    }
    const OpDecl* d = ctx_->signature.find(h);
    if (!d) parse_fail(s.items[0], "unknown operation '" + h + "'");
    std::size_t next = 1;
    Op op(h);
    if (d->parametric) {
      if (s.items.size() < 2) parse_fail(s, "'" + h + "' expects an argument");
      op.arg = nat(s.items[1], scope);
      next = 2;
    }
    if (d->arity.is_countable()) {
      if (s.items.size() != next + 2)
        parse_fail(s, "'" + h + "' expects a variable and a body");
      const std::string var = name_of(s.items[next], "a variable");
      Sexp body = s.items[next + 1];
      Elaborator self = *this;
      return TreeExpr::node(op, Children([self, var, body, scope](std::uint64_t i) {
                              Scope inner = scope;
                              inner[var] = Value::nat(i);
                              return self.tree(body, inner);
                            }));
    }
    const std::size_t given = s.items.size() - next;
    std::vector<TreeExpr> kids;
    if (given == 0 && d->parametric) {
      // (update k) continues with unit.
      for (std::uint64_t i = 0; i < d->arity.count; ++i)
        kids.push_back(TreeExpr::leaf(Value::unit()));
    } else {
      if (given != d->arity.count)
        parse_fail(s, "'" + h + "' expects " + std::to_string(d->arity.count) +
                          " subtree" + (d->arity.count == 1 ? "" : "s"));
      for (std::size_t i = next; i < s.items.size(); ++i)
        kids.push_back(tree(s.items[i], scope));
    }
    return TreeExpr::node(op, std::move(kids));
  }

  std::optional<FunValue> function(const std::string& name) const {
    if (!ctx_->functions) return std::nullopt;
    auto it = ctx_->functions->defs.find(name);
    if (it == ctx_->functions->defs.end()) return std::nullopt;
    const auto& d = it->second;
    FunValue f;
    f.name = name;
    for (const auto& a : d.admits) f.admissible.push_back(value(a, {}));
    Elaborator self = *this;
    f.apply = [self, d](const Value& v) {
      return self.tree(d.body, Scope{{d.param, v}});
    };
    return f;
  }

 private:
  struct Context {
    Signature signature;
    std::shared_ptr<Program::Functions> functions;
  };
  // Shared so that copies captured by lazy children stay cheap.
  std::shared_ptr<const Context> ctx_;
};

Sort parse_sort(const Sexp& s) {
  if (s.is_atom("val")) return Sort::Val;
  if (s.is_atom("cpt")) return Sort::Cpt;
  parse_fail(s, "expected 'val' or 'cpt'");
}

// Signature for the program: (sig NAME) wins over the fallback.
std::optional<std::string> find_effect(const std::vector<Sexp>& items,
                                       const std::optional<std::string>& fallback) {
  std::optional<std::string> effect;
  for (const auto& it : items)
    if (it.is_form("sig")) {
      expect_arity(it, 1);
      if (effect) parse_fail(it, "duplicate (sig ...)");
      effect = name_of(it.items[1], "an effect name");
      try {
        kit_by_name(*effect);
      } catch (const Error& e) {
        parse_fail(it.items[1], e.what());
      }
    }
  if (effect && fallback && *effect != *fallback)
    throw Error(ErrorKind::Usage, "program is written for effect '" + *effect +
                                      "' but '" + *fallback + "' was requested");
  return effect ? effect : fallback;
}

EffectKit kit_of(const Program& p) {
  if (!p.effect)
    throw Error(ErrorKind::Usage, "no effect given: add (sig NAME) or pass --effect");
  return kit_by_name(*p.effect);
}

bool shape_ok(const Env& env, const TreeExpr& t, const Ty& ty) {
  FiniteTree ft = truncate(env, t, 6);
  std::vector<const FiniteTree*> todo{&ft};
  while (!todo.empty()) {
    const FiniteTree* n = todo.back();
    todo.pop_back();
    if (n->kind == FiniteTree::Kind::Leaf && !value_has_type(n->value, ty))
      return false;
    for (const auto& c : n->children) todo.push_back(&c);
  }
  return true;
}

// Program items other than the ones the caller handles itself.
Program build_program(const std::vector<Sexp>& items,
                      const std::optional<std::string>& fallback,
                      const std::vector<std::string>& extra_items) {
  Program p;
  p.items = items;
  p.functions = std::make_shared<Program::Functions>();
  p.effect = find_effect(items, fallback);
  if (p.effect) p.signature = kit_by_name(*p.effect).signature;

  std::vector<const Sexp*> defs;
  const Sexp* main = nullptr;
  for (const auto& it : items) {
    const std::string& h = it.head();
    if (h == "sig") continue;
    if (h == "def") {
      expect_arity(it, 2);
      name_of(it.items[1], "a definition name");
      defs.push_back(&it);
    } else if (h == "deffun") {
      expect_arity(it, 4);
      const std::string& name = name_of(it.items[1], "a function name");
      if (p.functions->defs.count(name)) parse_fail(it, "duplicate function '" + name + "'");
      if (!it.items[3].is_form("admits")) parse_fail(it.items[3], "expected (admits V...)");
      Program::Functions::Def d;
      d.param = name_of(it.items[2], "a parameter name");
      d.admits.assign(it.items[3].items.begin() + 1, it.items[3].items.end());
      d.body = it.items[4];
      p.functions->defs.emplace(name, std::move(d));
    } else if (h == "main") {
      expect_arity(it, 3);
      if (main) parse_fail(it, "duplicate (main ...)");
      main = &it;
    } else {
      bool known = false;
      for (const auto& e : extra_items) known |= (h == e);
      if (!known) parse_fail(it, "unknown item '" + (h.empty() ? to_string(it) : h) + "'");
    }
  }

  Elaborator el(p);
  std::map<std::string, TreeExpr> bindings;
  for (const Sexp* d : defs) {
    const std::string& name = d->items[1].atom;
    if (bindings.count(name)) parse_fail(*d, "duplicate definition '" + name + "'");
    bindings.emplace(name, el.tree(d->items[2], {}));
  }
  p.env = Env::make(std::move(bindings), &p.signature);

  if (main) {
    Sort sort = parse_sort(main->items[1]);
    Ty ty = parse_type(main->items[2]);
    Elaborator with_env(p);
    if (sort == Sort::Val) {
      Value v = with_env.value(main->items[3], {});
      if (!value_has_type(v, ty))
        throw Error(ErrorKind::SortMismatch,
                    "main value does not have type " + to_string(ty));
      p.main = Term::val(ty, v, p.env);
    } else {
      TreeExpr t = with_env.tree(main->items[3], {});
      auto all = p.env.bindings();
      all.emplace(p.env.fresh_name("main"), t);
      Env::make(std::move(all), &p.signature);
      if (!shape_ok(p.env, t, ty))
        throw Error(ErrorKind::SortMismatch,
                    "main computation has a leaf outside type " + to_string(ty));
      p.main = Term::cpt(ty, t, p.env);
    }
  }
  return p;
}

}  // namespace

std::optional<FunValue> Program::function(const std::string& name) const {
  return Elaborator(*this).function(name);
}

Program parse_program(std::string_view text,
                      const std::optional<std::string>& fallback) {
  return build_program(read_sexps(text), fallback, {});
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& it : p.items) os << it << '\n';
  return os.str();
}

Ty parse_type(const Sexp& s) {
  if (s.is_atom("N")) return Ty::nat();
  const std::string& h = s.head();
  if (h == "->" || h == "*") {
    expect_arity(s, 2);
    Ty a = parse_type(s.items[1]), b = parse_type(s.items[2]);
    return h == "->" ? Ty::arrow(a, b) : Ty::prod(a, b);
  }
  if (h == "U") {
    expect_arity(s, 1);
    return Ty::u(parse_type(s.items[1]));
  }
  parse_fail(s, "expected a type: N, (-> A B), (* A B) or (U A)");
}

Ty parse_type(std::string_view text) { return parse_type(read_sexp(text)); }

Value parse_value(const Sexp& s, const Program& p) {
  return Elaborator(p).value(s, {});
}

TreeExpr parse_tree(const Sexp& s, const Program& p) {
  return Elaborator(p).tree(s, {});
}

namespace {

using NatScope = std::map<std::string, std::uint64_t>;

Obs obs_of(const Sexp& s, const NatScope& scope) {
  if (s.list) {
    std::vector<Obs> items;
    for (const auto& i : s.items) items.push_back(obs_of(i, scope));
    return Obs::list(std::move(items));
  }
  if (s.is_number()) return Obs::nat(number(s));
  auto it = scope.find(s.atom);
  if (it != scope.end()) return Obs::nat(it->second);
  return Obs::sym(s.atom);
}

// Replaces bound variables by their numbers, respecting shadowing by
// nested family binders.
Sexp substitute(const Sexp& s, const NatScope& scope) {
  if (s.is_atom()) {
    auto it = scope.find(s.atom);
    if (it == scope.end()) return s;
    Sexp out = s;
    out.atom = std::to_string(it->second);
    return out;
  }
  Sexp out = s;
  const bool binder = (s.is_form("exists") || s.is_form("forall")) &&
                      s.items.size() == 3 && s.items[1].list &&
                      s.items[1].items.size() == 3;
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (binder && i == 2) {
      NatScope inner = scope;
      inner.erase(s.items[1].items[0].atom);
      out.items[i] = substitute(s.items[i], inner);
    } else if (binder && i == 1) {
      Sexp b = s.items[1];
      b.items[1] = substitute(b.items[1], scope);
      b.items[2] = substitute(b.items[2], scope);
      out.items[i] = b;
    } else {
      out.items[i] = substitute(s.items[i], scope);
    }
  }
  return out;
}

class FormulaParser {
 public:
  explicit FormulaParser(const Program* p) : p_(p) {}

  Formula formula(const Sexp& s, const NatScope& scope) const {
    const std::string& h = s.head();
    if (h == "eq" || h == "neq") {
      expect_arity(s, 1);
      std::uint64_t n = nat(s.items[1], scope);
      return h == "eq" ? Formula::eq(n) : Formula::neq(n);
    }
    if (h == "app") {
      expect_arity(s, 2);
      return Formula::maps_to(value(s.items[1], scope), formula(s.items[2], scope));
    }
    if (h == "fst" || h == "snd" || h == "thunk" || h == "neg") {
      expect_arity(s, 1);
      Formula b = formula(s.items[1], scope);
      if (h == "fst") return Formula::fst(b);
      if (h == "snd") return Formula::snd(b);
      if (h == "thunk") return Formula::thunk(b);
      return neg_formula(b);
    }
    if (h == "test") {
      expect_arity(s, 1);
      return Formula::test(test(s.items[1], scope));
    }
    if (h == "obs-alpha" || h == "obs-beta") {
      expect_arity(s, 2);
      Obs o = obs_of(s.items[1], scope);
      Formula b = formula(s.items[2], scope);
      return h == "obs-alpha" ? Formula::obs_alpha(o, b) : Formula::obs_beta(o, b);
    }
    parse_fail(s, "expected a formula");
  }

  FormulaTest test(const Sexp& s, const NatScope& scope) const {
    if (s.is_atom("true")) return FormulaTest::tt();
    if (s.is_atom("false")) return FormulaTest::ff();
    const std::string& h = s.head();
    if (h == "atom") {
      expect_arity(s, 1);
      return FormulaTest::atom(formula(s.items[1], scope));
    }
    if (h == "and" || h == "or") {
      expect_arity(s, 2);
      FormulaTest l = test(s.items[1], scope), r = test(s.items[2], scope);
      return h == "and" ? FormulaTest::conj(l, r) : FormulaTest::disj(l, r);
    }
    if (h == "dual") {
      expect_arity(s, 1);
      return dual_test(test(s.items[1], scope));
    }
    if (h == "map") {
      expect_arity(s, 2);
      if (!s.items[1].is_atom("neg")) parse_fail(s.items[1], "only (map neg T) is supported");
      static const MapTag neg_tag{"neg", true};
      return map_test<Formula>(test(s.items[2], scope),
                               [](const Formula& f) { return neg_formula(f); },
                               neg_tag);
    }
    if (h == "exists" || h == "forall") {
      expect_arity(s, 2);
      const Sexp& b = s.items[1];
      if (!b.list || b.items.size() != 3) parse_fail(b, "expected (VAR LO HI)");
      const std::string var = name_of(b.items[0], "a variable");
      std::uint64_t lo = nat(b.items[1], scope), hi = nat(b.items[2], scope);
      if (hi < lo) parse_fail(b, "empty range");
      Sexp body = s.items[2];
      FormulaParser self = *this;
      Family<Formula> fam(
          to_string(substitute(s, scope)),
          [self, var, lo, body, scope](std::uint64_t i) {
            NatScope inner = scope;
            inner[var] = lo + i;
            return self.test(body, inner);
          },
          hi - lo);
      return h == "exists" ? FormulaTest::big_or(fam) : FormulaTest::big_and(fam);
    }
    parse_fail(s, "expected a test");
  }

 private:
  std::uint64_t nat(const Sexp& s, const NatScope& scope) const {
    if (s.is_atom()) {
      auto it = scope.find(s.atom);
      if (it != scope.end()) return it->second;
    }
    return number(s);
  }

  Value value(const Sexp& s, const NatScope& scope) const {
    Sexp closed = substitute(s, scope);
    if (p_) return parse_value(closed, *p_);
    if (closed.is_number()) return Value::nat(number(closed));
    parse_fail(s, "only numbers can be used as arguments here");
  }

  const Program* p_;
};

}  // namespace

Obs parse_obs(const Sexp& s) { return obs_of(s, {}); }
Obs parse_obs(std::string_view text) { return parse_obs(read_sexp(text)); }

Formula parse_formula(const Sexp& s, const Program* program) {
  return FormulaParser(program).formula(s, {});
}

Formula parse_formula(std::string_view text, Sort sort, const Ty& ty,
                      const ObsSpec* spec, const Program* program) {
  Formula f = parse_formula(read_sexp(text), program);
  check_formula(f, sort, ty, spec);
  return f;
}

namespace {

std::vector<Obs> observations(const std::vector<Sexp>& items, const EffectKit& kit) {
  for (const auto& it : items)
    if (it.is_form("observations")) {
      std::vector<Obs> out;
      for (std::size_t i = 1; i < it.items.size(); ++i) {
        Obs o = parse_obs(it.items[i]);
        if (!kit.spec().accepts(o))
          parse_fail(it.items[i], "observation " + to_string(o) +
                                      " is not valid for effect '" + kit.name + "'");
        out.push_back(o);
      }
      return out;
    }
  return kit.obs_sampler(0);
}

const Sexp& single(const std::vector<Sexp>& items, const char* head) {
  const Sexp* found = nullptr;
  for (const auto& it : items)
    if (it.is_form(head)) {
      if (found) parse_fail(it, std::string("duplicate (") + head + " ...)");
      found = &it;
    }
  if (!found)
    throw ParseError(1, 1, std::string("missing (") + head + " ...)");
  return *found;
}

}  // namespace

GammaProblem parse_gamma_problem(std::string_view text,
                                 const std::optional<std::string>& fallback) {
  auto items = read_sexps(text);
  Program p = build_program(
      items, fallback,
      {"carrier", "relation", "left", "right", "observations"});
  GammaProblem g{p, kit_of(p), {}, {}, {}, {}, {}};

  std::vector<Value> elems;
  const Sexp& c = single(items, "carrier");
  for (std::size_t i = 1; i < c.items.size(); ++i)
    elems.push_back(parse_value(c.items[i], p));
  try {
    g.carrier = FiniteCarrier(elems, p.env);
  } catch (const Error& e) {
    parse_fail(c, e.what());
  }

  g.relation = Relation::empty(g.carrier.size());
  for (const auto& it : items)
    if (it.is_form("relation"))
      for (std::size_t i = 1; i < it.items.size(); ++i) {
        const Sexp& pr = it.items[i];
        if (!pr.list || pr.items.size() != 2) parse_fail(pr, "expected (V V)");
        auto a = g.carrier.index_of(parse_value(pr.items[0], p));
        auto b = g.carrier.index_of(parse_value(pr.items[1], p));
        if (!a || !b) parse_fail(pr, "relation pair outside the carrier");
        g.relation.add(*a, *b);
      }

  const Sexp& l = single(items, "left");
  const Sexp& r = single(items, "right");
  expect_arity(l, 1);
  expect_arity(r, 1);
  g.left = parse_tree(l.items[1], p);
  g.right = parse_tree(r.items[1], p);
  g.sample = observations(items, g.kit);
  return g;
}

SimulationProblem parse_simulation_problem(
    std::string_view text, const std::optional<std::string>& fallback) {
  auto items = read_sexps(text);
  Program p = build_program(items, fallback, {"universe", "args", "observations"});
  SimulationProblem sp{kit_of(p), {}, {}, {}, {}};
  for (const auto& it : items) {
    if (it.is_form("universe")) {
      if (it.items.size() != 5 || !it.items[3].is_form("terms") ||
          !it.items[4].is_form("relate"))
        parse_fail(it, "expected (universe SORT TY (terms ...) (relate ...))");
      TypedUniverse u;
      u.sort = parse_sort(it.items[1]);
      u.ty = parse_type(it.items[2]);
      const Sexp& terms = it.items[3];
      for (std::size_t i = 1; i < terms.items.size(); ++i) {
        if (u.sort == Sort::Val)
          u.terms.push_back(Term::val(u.ty, parse_value(terms.items[i], p), p.env));
        else
          u.terms.push_back(Term::cpt(u.ty, parse_tree(terms.items[i], p), p.env));
      }
      const std::size_t n = u.terms.size();
      u.candidate = Relation::empty(n);
      const Sexp& rel = it.items[4];
      for (std::size_t i = 1; i < rel.items.size(); ++i) {
        const Sexp& pr = rel.items[i];
        if (pr.is_atom("identity")) {
          u.candidate = relation_union(u.candidate, Relation::identity(n));
        } else if (pr.is_atom("total")) {
          u.candidate = relation_union(u.candidate, Relation::total(n));
        } else {
          if (!pr.list || pr.items.size() != 2) parse_fail(pr, "expected (I J)");
          std::uint64_t a = number(pr.items[0]), b = number(pr.items[1]);
          if (a >= n || b >= n)
            throw Error(ErrorKind::IllTypedCandidate,
                        std::to_string(pr.line) + ":" + std::to_string(pr.col) +
                            ": index outside the term list");
          u.candidate.add(a, b);
        }
      }
      if (sp.find(u.sort, u.ty)) parse_fail(it, "duplicate universe");
      sp.universes.push_back(std::move(u));
    } else if (it.is_form("args")) {
      if (it.items.size() < 2) parse_fail(it, "expected (args TY V...)");
      ArgSet as;
      as.arrow = parse_type(it.items[1]);
      if (as.arrow.kind() != Ty::Kind::Arrow) parse_fail(it.items[1], "expected a function type");
      for (std::size_t i = 2; i < it.items.size(); ++i)
        as.args.push_back(parse_value(it.items[i], p));
      sp.arg_sets.push_back(std::move(as));
    }
  }
  sp.obs_sample = observations(items, sp.kit);
  return sp;
}

}  // namespace efftree
