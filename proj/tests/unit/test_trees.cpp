#include <gtest/gtest.h>

#include "efftree/effects.hpp"
#include "efftree/error.hpp"
#include "efftree/lifting.hpp"
#include "efftree/tree.hpp"
#include "generators.hpp"

using namespace efftree;

namespace {

const Signature kPure({{"sk", Arity::finite(1), false}});
const Signature kNondet({{"or", Arity::finite(2), false}});

TreeExpr leaf(std::uint64_t n) { return TreeExpr::leaf(Value::nat(n)); }
TreeExpr sk(TreeExpr t) { return TreeExpr::node(Op("sk"), std::vector<TreeExpr>{std::move(t)}); }
TreeExpr choice(TreeExpr l, TreeExpr r) {
  return TreeExpr::node(Op("or"), std::vector<TreeExpr>{std::move(l), std::move(r)});
}

FiniteTree fleaf(std::uint64_t n) {
  FiniteTree t;
  t.kind = FiniteTree::Kind::Leaf;
  t.value = Value::nat(n);
  return t;
}

FiniteTree fnode(const std::string& op, std::vector<FiniteTree> kids) {
  FiniteTree t;
  t.kind = FiniteTree::Kind::Node;
  t.op = Op(op);
  t.children = std::move(kids);
  return t;
}

Value plus_one(const Value& v) { return Value::nat(v.as_nat() + 1); }

}  // namespace

TEST(Force, LeafIsItsOwnHead) {
  Head h = force(Env(), leaf(5));
  ASSERT_TRUE(h.is_leaf);
  EXPECT_EQ(h.value.as_nat(), 5u);
}

TEST(Force, UnfoldsDivergeOnce) {
  Env env = Env::make({{"d", sk(TreeExpr::ref("d"))}});
  Head h = force(env, TreeExpr::ref("d"));
  ASSERT_FALSE(h.is_leaf);
  EXPECT_EQ(h.op, Op("sk"));
  TreeExpr c = h.children.at(0);
  ASSERT_EQ(c.kind(), TreeExpr::Kind::Ref);
  EXPECT_EQ(c.name(), "d");
}

TEST(Force, CollapsesRefChains) {
  Env env = Env::make({{"a", TreeExpr::ref("b")}, {"b", leaf(0)}});
  Head h = force(env, TreeExpr::ref("a"));
  ASSERT_TRUE(h.is_leaf);
  EXPECT_EQ(h.value.as_nat(), 0u);
}

TEST(Force, UnboundRef) {
  try {
    force(Env(), TreeExpr::ref("nowhere"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundRef);
  }
}

TEST(Env, RejectsUnboundRefsAtConstruction) {
  try {
    Env::make({{"a", sk(TreeExpr::ref("b"))}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundRef);
  }
}

TEST(Env, RejectsUnguardedCycles) {
  try {
    Env::make({{"a", TreeExpr::ref("b")}, {"b", TreeExpr::ref("a")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnguardedCycle);
  }
  try {
    Env::make({{"a", TreeExpr::ref("a")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnguardedCycle);
  }
}

TEST(Env, RejectsUndeclaredOperations) {
  try {
    Env::make({{"a", TreeExpr::node(Op("jump"), std::vector<TreeExpr>{leaf(0)})}}, &kPure);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownOp);
  }
}

TEST(MapTree, AppliesToLeaves) {
  EXPECT_EQ(truncate(Env(), map_tree(plus_one, leaf(4)), 4), fleaf(5));
  TreeExpr t = map_tree(plus_one, choice(leaf(1), leaf(2)));
  EXPECT_EQ(truncate(Env(), t, 4), fnode("or", {fleaf(2), fleaf(3)}));
}

TEST(MapTree, IdentityLawOnDiverge) {
  Definition d = mk_diverge(kPure, Op("sk"));
  TreeExpr m = map_tree([](const Value& v) { return v; }, d.root);
  for (std::size_t depth = 0; depth < 6; ++depth)
    EXPECT_EQ(truncate(d.env, m, depth), truncate(d.env, d.root, depth));
}

TEST(Eta, IsLeaf) {
  EXPECT_EQ(truncate(Env(), eta(Value::nat(3)), 0), fleaf(3));
  EXPECT_EQ(truncate(Env(), mu(eta(Value::thunk(leaf(3)))), 2), fleaf(3));
  EXPECT_EQ(truncate(Env(), map_tree(plus_one, eta(Value::nat(3))), 2),
            truncate(Env(), eta(Value::nat(4)), 2));
}

TEST(Mu, GraftsAtLeaves) {
  EXPECT_EQ(truncate(Env(), mu(TreeExpr::leaf(Value::thunk(leaf(5)))), 3), fleaf(5));
  TreeExpr d = sk(TreeExpr::leaf(Value::thunk(leaf(3))));
  EXPECT_EQ(truncate(Env(), mu(d), 3), fnode("sk", {fleaf(3)}));
}

TEST(Mu, GraftsDivergingSubtree) {
  Definition omega = mk_diverge(kNondet, Op("or"), Env(), "omega");
  TreeExpr d = choice(TreeExpr::leaf(Value::thunk(omega.root)),
                      TreeExpr::leaf(Value::thunk(leaf(0))));
  TreeExpr expected = choice(omega.root, leaf(0));
  for (std::size_t depth = 0; depth <= 3; ++depth)
    EXPECT_EQ(truncate(omega.env, mu(d), depth),
              truncate(omega.env, expected, depth));
}

TEST(Mu, NonThunkLeaf) {
  try {
    force(Env(), mu(leaf(1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonThunkLeaf);
  }
}

TEST(Truncate, Diverge) {
  Definition d = mk_diverge(kPure, Op("sk"));
  EXPECT_EQ(truncate(d.env, d.root, 0), FiniteTree::cut());
  EXPECT_EQ(truncate(d.env, d.root, 2),
            fnode("sk", {fnode("sk", {FiniteTree::cut()})}));
  EXPECT_EQ(truncate(d.env, d.root, 3),
            fnode("sk", {fnode("sk", {fnode("sk", {FiniteTree::cut()})})}));
  EXPECT_EQ(truncate(Env(), leaf(7), 99), fleaf(7));
}

TEST(Truncate, IsStableAcrossDepths) {
  auto kit = store_kit();
  gen::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto t = gen::rational_tree(kit, rng);
    for (std::size_t d = 0; d < 5; ++d)
      EXPECT_TRUE(is_prefix(truncate(t.env, t.root, d), truncate(t.env, t.root, d + 1)));
  }
}

TEST(MkDiverge, NondetOmegaHasBothChildrenCyclic) {
  Definition o = mk_diverge(kNondet, Op("or"), Env(), "omega");
  Head h = force(o.env, o.root);
  ASSERT_FALSE(h.is_leaf);
  for (std::uint64_t i = 0; i < 2; ++i) {
    TreeExpr c = h.children.at(i);
    ASSERT_EQ(c.kind(), TreeExpr::Kind::Ref);
    EXPECT_EQ(c.name(), o.root.name());
  }
}

TEST(MkDiverge, UnknownOp) {
  try {
    mk_diverge(kPure, Op("or"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownOp);
  }
}

TEST(MkDiverge, AlphaTerminationRefutedByCycleRuleOnly) {
  auto kit = pure_unobservable_kit();
  Definition d = mk_diverge(kit.signature, Op("sk"));
  Pred any = [](const Value&) { return Verdict::Proved; };
  CheckOptions fuel_only;
  fuel_only.cycle_rule = false;
  // With no fuel the root obligation cannot even be opened.
  EXPECT_EQ(kit.pair.alpha(obs::term(), any, d.env, d.root, Budget{0, 32}),
            Verdict::Unknown);
  for (std::uint64_t k : {1u, 2u, 5u, 64u}) {
    EXPECT_EQ(kit.pair.alpha(obs::term(), any, d.env, d.root, Budget{k, 32}),
              Verdict::Refuted);
    EXPECT_EQ(kit.pair.alpha(obs::term(), any, d.env, d.root, Budget{k, 32}, fuel_only),
              Verdict::Unknown);
  }
}

TEST(MonadLaws, HoldUpToTruncation) {
  auto kit = nondet_kit();
  gen::Rng rng(11);
  auto as_thunk = [](const Value& v) { return Value::thunk(eta(v)); };
  for (int i = 0; i < 100; ++i) {
    auto t = gen::rational_tree(kit, rng);
    for (std::size_t d = 0; d <= 5; ++d) {
      auto base = truncate(t.env, t.root, d);
      EXPECT_EQ(truncate(t.env, mu(eta(Value::thunk(t.root))), d), base);
      EXPECT_EQ(truncate(t.env, mu(map_tree(as_thunk, t.root)), d), base);
    }
  }
}

TEST(MonadLaws, Associativity) {
  auto kit = nondet_kit();
  Rng rng(12);
  TreeGenOptions opts;
  opts.depth = 2;
  auto nat = [](Rng& r) { return Value::nat(r.below(3)); };
  auto thunk_of = [&](Rng& r) {
    return Value::thunk(gen_finite_tree(kit.signature, r, opts, nat));
  };
  auto thunk2 = [&](Rng& r) {
    return Value::thunk(gen_finite_tree(kit.signature, r, opts, thunk_of));
  };
  auto mu_thunk = [](const Value& v) { return Value::thunk(mu(v.as_thunk())); };
  for (int i = 0; i < 100; ++i) {
    TreeExpr ddd = gen_finite_tree(kit.signature, rng, opts, thunk2);
    for (std::size_t d = 0; d <= 5; ++d)
      EXPECT_EQ(truncate(Env(), mu(mu(ddd)), d),
                truncate(Env(), mu(map_tree(mu_thunk, ddd)), d));
  }
}

TEST(FunctorLaws, Composition) {
  auto kit = store_kit();
  gen::Rng rng(13);
  auto f = [](const Value& v) { return Value::nat(v.as_nat() * 2); };
  for (int i = 0; i < 100; ++i) {
    auto t = gen::rational_tree(kit, rng);
    TreeExpr lhs = map_tree(f, map_tree(plus_one, t.root));
    TreeExpr rhs = map_tree([&](const Value& v) { return f(plus_one(v)); }, t.root);
    for (std::size_t d = 0; d <= 5; ++d)
      EXPECT_EQ(truncate(t.env, lhs, d), truncate(t.env, rhs, d));
  }
}
