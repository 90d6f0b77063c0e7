#include "efftree/effects.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "efftree/error.hpp"

namespace efftree {

void print_decomp_test(std::ostream& os, const DecompTest& t) {
  print_test(os, t, [](std::ostream& o, const ObsPair& p) {
    o << '(' << p.first << ' ' << p.second << ')';
  });
}

namespace obs {

Obs term() { return Obs::sym("term"); }
Obs tl(std::uint64_t n) { return Obs::list({Obs::sym("tl"), Obs::nat(n)}); }
Obs may() { return Obs::sym("may"); }
Obs must() { return Obs::sym("must"); }
Obs st(std::uint64_t initial, std::uint64_t final) {
  return Obs::list({Obs::sym("st"), Obs::nat(initial), Obs::nat(final)});
}

Obs in(bool right, const Bits& bits) {
  std::vector<Obs> items{Obs::sym("bits")};
  for (auto b : bits) items.push_back(Obs::sym(b ? "right" : "left"));
  return Obs::list({Obs::sym("in"), Obs::sym(right ? "right" : "left"),
                    Obs::list(std::move(items))});
}

bool is_in(const Obs& o) {
  if (!o.is_form("in", 2)) return false;
  const Obs& b = o.items()[1];
  const Obs& l = o.items()[2];
  if (!b.is_sym("left") && !b.is_sym("right")) return false;
  if (!l.is_list() || l.items().empty() || !l.items()[0].is_sym("bits"))
    return false;
  for (std::size_t i = 1; i < l.items().size(); ++i)
    if (!l.items()[i].is_sym("left") && !l.items()[i].is_sym("right"))
      return false;
  return true;
}

bool in_right(const Obs& o) { return o.items()[1].is_sym("right"); }

Bits in_bits(const Obs& o) {
  Bits out;
  const auto& items = o.items()[2].items();
  for (std::size_t i = 1; i < items.size(); ++i)
    out.push_back(items[i].is_sym("right") ? 1 : 0);
  return out;
}

}  // namespace obs

obs::Bits bitlist_at(std::uint64_t index) {
  // Lists of length n occupy indices [2^n - 1, 2^(n+1) - 1).
  std::uint64_t len = 0;
  while (index >= (std::uint64_t{1} << (len + 1)) - 1) ++len;
  std::uint64_t offset = index - ((std::uint64_t{1} << len) - 1);
  obs::Bits bits(len);
  for (std::uint64_t i = 0; i < len; ++i)
    bits[len - 1 - i] = static_cast<std::uint8_t>((offset >> i) & 1);
  return bits;
}

std::uint64_t bitlist_index(const obs::Bits& bits) {
  std::uint64_t offset = 0;
  for (auto b : bits) offset = (offset << 1) | b;
  return ((std::uint64_t{1} << bits.size()) - 1) + offset;
}

namespace {

[[noreturn]] void bad_obs(const std::string& kit, const Obs& o) {
  throw Error(ErrorKind::UnknownObservation,
              "observation " + to_string(o) + " is not valid for effect '" +
                  kit + "'");
}

[[noreturn]] void bad_op(const std::string& kit, const Op& k) {
  std::ostringstream os;
  os << "operation '" << k << "' is not part of effect '" << kit << "'";
  throw Error(ErrorKind::UnknownOp, os.str());
}

NodeTest node_atom(std::uint64_t child, Obs o) {
  return NodeTest::atom(NodeAtom{child, std::move(o)});
}

DecompTest pair_atom(Obs a, Obs b) {
  return DecompTest::atom({std::move(a), std::move(b)});
}

DecompScope no_scope(const Env&, const TreeExpr&, const Obs&, std::uint64_t) {
  return {};
}

bool is_tl(const Obs& o) { return o.is_form("tl", 1) && o.items()[1].is_nat(); }
bool is_st(const Obs& o) {
  return o.is_form("st", 2) && o.items()[1].is_nat() && o.items()[2].is_nat();
}

}  // namespace

EffectKit pure_unobservable_kit() {
  const std::string name = "pure";
  ObsSpec spec;
  spec.name = name;
  spec.accepts = [](const Obs& o) { return o.is_sym("term"); };
  spec.leaf_fn = [](const Obs&) { return true; };
  spec.node_fn = [name](const Op& k, const Obs& o) {
    if (k.name != "sk") bad_op(name, k);
    return node_atom(0, o);
  };
  EffectKit kit{name,
                Signature({{"sk", Arity::finite(1), false}}),
                complementing_pair(std::move(spec)),
                {},
                {},
                no_scope};
  kit.decomp = [](const Obs& o, const DecompScope&) { return pair_atom(o, o); };
  kit.obs_sampler = [](std::uint64_t) { return std::vector<Obs>{obs::term()}; };
  return kit;
}

EffectKit pure_timed_kit() {
  const std::string name = "timed";
  ObsSpec spec;
  spec.name = name;
  spec.accepts = is_tl;
  spec.leaf_fn = [](const Obs&) { return true; };
  spec.node_fn = [name](const Op& k, const Obs& o) {
    if (k.name != "sk") bad_op(name, k);
    if (!is_tl(o)) bad_obs(name, o);
    std::uint64_t n = o.items()[1].as_nat();
    if (n == 0) return NodeTest::ff();
    return node_atom(0, obs::tl(n - 1));
  };
  EffectKit kit{name,
                Signature({{"sk", Arity::finite(1), false}}),
                complementing_pair(std::move(spec)),
                {},
                {},
                no_scope};
  // ⋁m ⋁k (m + k <= n ? ⟨(m, k)⟩ : False), both families supported on [0, n].
  kit.decomp = [name](const Obs& o, const DecompScope&) {
    if (!is_tl(o)) bad_obs(name, o);
    const std::uint64_t n = o.items()[1].as_nat();
    const std::string origin = "timed.decomp(" + std::to_string(n) + ")";
    auto row = [n, origin](std::uint64_t m) {
      if (m > n) return DecompTest::ff();
      return DecompTest::big_or(Family<ObsPair>(
          origin + "." + std::to_string(m),
          [n, m](std::uint64_t k) {
            return m + k <= n ? pair_atom(obs::tl(m), obs::tl(k))
                              : DecompTest::ff();
          },
          n + 1));
    };
    return DecompTest::big_or(Family<ObsPair>(origin, row, n + 1));
  };
  kit.obs_sampler = [](std::uint64_t seed) {
    std::vector<Obs> out;
    const std::uint64_t top = 4 + seed % 3;
    for (std::uint64_t n = 0; n <= top; ++n) out.push_back(obs::tl(n));
    return out;
  };
  return kit;
}

EffectKit nondet_kit() {
  const std::string name = "nondet";
  ObsSpec spec;
  spec.name = name;
  spec.accepts = [](const Obs& o) { return o.is_sym("may") || o.is_sym("must"); };
  spec.leaf_fn = [](const Obs&) { return true; };
  spec.node_fn = [name](const Op& k, const Obs& o) {
    if (k.name != "or") bad_op(name, k);
    if (o.is_sym("may"))
      return NodeTest::disj(node_atom(kLeft, o), node_atom(kRight, o));
    if (o.is_sym("must"))
      return NodeTest::conj(node_atom(kLeft, o), node_atom(kRight, o));
    bad_obs(name, o);
  };
  EffectKit kit{name,
                Signature({{"or", Arity::finite(2), false}}),
                complementing_pair(std::move(spec)),
                {},
                {},
                no_scope};
  kit.decomp = [](const Obs& o, const DecompScope&) { return pair_atom(o, o); };
  kit.obs_sampler = [](std::uint64_t) {
    return std::vector<Obs>{obs::may(), obs::must()};
  };
  return kit;
}

namespace {

// Largest update argument reachable in the outer layer of a store tree
// from initial state n. Lookup children are explored at every state that
// can be current, so the result is exact on finite and rational trees.
// Empty when the walk would leave [0, index_bound).
std::optional<std::uint64_t> store_footprint(const Env& env, const TreeExpr& d,
                                             std::uint64_t n,
                                             std::uint64_t index_bound) {
  std::uint64_t top = n;
  for (;;) {
    std::uint64_t found = top;
    bool overflow = false;
    std::set<std::string> seen;
    std::set<const void*> seen_anon;
    std::vector<TreeExpr> todo{d};
    std::size_t steps = 0;
    while (!todo.empty()) {
      if (++steps > 100000) return std::nullopt;
      TreeExpr t = todo.back();
      todo.pop_back();
      if (t.identity()) {
        if (!seen.insert(*t.identity()).second) continue;
      } else if (!seen_anon.insert(t.address()).second) {
        continue;
      }
      Head h = force(env, t);
      if (h.is_leaf) continue;
      if (h.op.name == "update") {
        found = std::max(found, *h.op.arg);
        todo.push_back(h.children.at(0));
      } else {
        for (std::uint64_t i = 0; i <= top; ++i) todo.push_back(h.children.at(i));
      }
    }
    if (found >= index_bound) overflow = true;
    if (overflow) return std::nullopt;
    if (found == top) return top;
    top = found;
  }
}

}  // namespace

EffectKit store_kit() {
  const std::string name = "store";
  ObsSpec spec;
  spec.name = name;
  spec.accepts = is_st;
  spec.leaf_fn = [](const Obs& o) {
    return o.items()[1].as_nat() == o.items()[2].as_nat();
  };
  spec.node_fn = [name](const Op& k, const Obs& o) {
    if (!is_st(o)) bad_obs(name, o);
    const std::uint64_t n = o.items()[1].as_nat();
    const std::uint64_t m = o.items()[2].as_nat();
    if (k.name == "update" && k.arg) return node_atom(0, obs::st(*k.arg, m));
    if (k.name == "lookup" && !k.arg) return node_atom(n, o);
    bad_op(name, k);
  };
  EffectKit kit{name,
                Signature({{"lookup", Arity::countable(), false},
                           {"update", Arity::finite(1), true}}),
                complementing_pair(std::move(spec)),
                {},
                {},
                {}};
  // ⋁k ⟨((n, k), (k, m))⟩. The first phase can only end in the initial
  // state or an updated one, so a known footprint bounds the support.
  kit.decomp = [name](const Obs& o, const DecompScope& scope) {
    if (!is_st(o)) bad_obs(name, o);
    const std::uint64_t n = o.items()[1].as_nat();
    const std::uint64_t m = o.items()[2].as_nat();
    std::optional<std::uint64_t> support;
    std::string origin = "store.decomp(" + std::to_string(n) + "," +
                         std::to_string(m) + ")";
    if (scope.max_state) {
      support = std::max(n, *scope.max_state) + 1;
      origin += "/" + std::to_string(*support);
    }
    return DecompTest::big_or(Family<ObsPair>(
        origin,
        [n, m](std::uint64_t k) { return pair_atom(obs::st(n, k), obs::st(k, m)); },
        support));
  };
  kit.obs_sampler = [](std::uint64_t) {
    std::vector<Obs> out;
    for (std::uint64_t a = 0; a < 4; ++a)
      for (std::uint64_t b = 0; b < 4; ++b) out.push_back(obs::st(a, b));
    return out;
  };
  kit.scope_of = [](const Env& env, const TreeExpr& d, const Obs& o,
                    std::uint64_t index_bound) {
    DecompScope scope;
    if (is_st(o))
      scope.max_state =
          store_footprint(env, d, o.items()[1].as_nat(), index_bound);
    return scope;
  };
  return kit;
}

EffectKit input_kit() {
  const std::string name = "input";
  ObsSpec spec;
  spec.name = name;
  spec.accepts = obs::is_in;
  spec.leaf_fn = [](const Obs& o) {
    return !obs::in_right(o) && obs::in_bits(o).empty();
  };
  spec.node_fn = [name](const Op& k, const Obs& o) {
    if (k.name != "input") bad_op(name, k);
    if (!obs::is_in(o)) bad_obs(name, o);
    const bool right = obs::in_right(o);
    obs::Bits bits = obs::in_bits(o);
    if (bits.empty()) return right ? NodeTest::tt() : NodeTest::ff();
    const std::uint64_t head = bits.front();
    bits.erase(bits.begin());
    return node_atom(head, obs::in(right, bits));
  };
  EffectKit kit{name,
                Signature({{"input", Arity::finite(2), false}}),
                complementing_pair(std::move(spec)),
                {},
                {},
                no_scope};
  // Splits x ++ y = l enumerated directly by prefix length.
  kit.decomp = [name](const Obs& o, const DecompScope&) {
    if (!obs::is_in(o)) bad_obs(name, o);
    const bool right = obs::in_right(o);
    const obs::Bits l = obs::in_bits(o);
    auto split = [l, right](std::uint64_t i) {
      obs::Bits x(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i));
      obs::Bits y(l.begin() + static_cast<std::ptrdiff_t>(i), l.end());
      return pair_atom(obs::in(false, x), obs::in(right, y));
    };
    DecompTest splits = DecompTest::big_or(Family<ObsPair>(
        "input.decomp(" + to_string(o) + ")", split, l.size() + 1));
    if (!right) return splits;
    return DecompTest::disj(pair_atom(o, o), splits);
  };
  kit.obs_sampler = [](std::uint64_t) {
    std::vector<Obs> out;
    for (bool right : {false, true})
      for (std::uint64_t i = 0; i < 7; ++i)  // all lists of length <= 2
        out.push_back(obs::in(right, bitlist_at(i)));
    return out;
  };
  return kit;
}

EffectKit kit_by_name(const std::string& name) {
  if (name == "pure") return pure_unobservable_kit();
  if (name == "timed") return pure_timed_kit();
  if (name == "nondet") return nondet_kit();
  if (name == "store") return store_kit();
  if (name == "input") return input_kit();
  throw Error(ErrorKind::Usage, "unknown effect '" + name +
                                    "' (expected pure, timed, nondet, store "
                                    "or input)");
}

std::vector<std::string> kit_names() {
  return {"pure", "timed", "nondet", "store", "input"};
}

}  // namespace efftree
