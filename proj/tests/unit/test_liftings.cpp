#include <gtest/gtest.h>

#include "efftree/effects.hpp"
#include "efftree/error.hpp"
#include "efftree/lifting.hpp"
#include "efftree/random.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace efftree;

namespace {

TreeExpr leaf(std::uint64_t n) { return TreeExpr::leaf(Value::nat(n)); }
TreeExpr node(Op op, std::vector<TreeExpr> kids) {
  return TreeExpr::node(std::move(op), std::move(kids));
}

const Pred kAny = [](const Value&) { return Verdict::Proved; };
const Budget kBudget{64, 32};

Pred equals(std::uint64_t n) {
  return [n](const Value& v) { return verdict_of(v.as_nat() == n); };
}

// lookup(λn. update(n+1); Leaf n)
TreeExpr store_inc() {
  return TreeExpr::node(Op("lookup"), Children([](std::uint64_t n) {
                          return node(Op("update", n + 1), {leaf(n)});
                        }));
}

}  // namespace

TEST(CheckAlpha, TimedTermination) {
  auto kit = pure_timed_kit();
  TreeExpr t = node(Op("sk"), {node(Op("sk"), {leaf(7)})});
  EXPECT_EQ(kit.pair.alpha(obs::tl(2), kAny, Env(), t, kBudget), Verdict::Proved);
  EXPECT_EQ(kit.pair.alpha(obs::tl(1), kAny, Env(), t, kBudget), Verdict::Refuted);
}

TEST(CheckAlpha, StoreInitialAndFinal) {
  auto kit = store_kit();
  EXPECT_EQ(kit.pair.alpha(obs::st(0, 1), equals(0), Env(), store_inc(), kBudget),
            Verdict::Proved);
  EXPECT_EQ(kit.pair.alpha(obs::st(0, 2), equals(0), Env(), store_inc(), kBudget),
            Verdict::Refuted);
}

TEST(CheckAlpha, NondetMayAndMust) {
  auto kit = nondet_kit();
  Definition omega = mk_diverge(kit.signature, Op("or"), Env(), "omega");
  TreeExpr t = node(Op("or"), {leaf(1), omega.root});
  EXPECT_EQ(kit.pair.alpha(obs::may(), equals(1), omega.env, t, kBudget), Verdict::Proved);
  EXPECT_EQ(kit.pair.alpha(obs::must(), equals(1), omega.env, t, kBudget), Verdict::Refuted);
}

TEST(CheckAlpha, FuelExhaustionIsUnknown) {
  auto kit = pure_timed_kit();
  TreeExpr t = node(Op("sk"), {node(Op("sk"), {leaf(7)})});
  EXPECT_EQ(kit.pair.alpha(obs::tl(2), kAny, Env(), t, Budget{1, 32}), Verdict::Unknown);
  EXPECT_EQ(kit.pair.alpha(obs::tl(2), kAny, Env(), t, Budget{2, 32}), Verdict::Proved);
}

TEST(CheckAlpha, UnknownOpInTree) {
  auto kit = nondet_kit();
  try {
    kit.pair.alpha(obs::may(), kAny, Env(), node(Op("sk"), {leaf(0)}), kBudget);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownOp);
  }
}

TEST(CheckAlpha, TraceReportsObligations) {
  auto kit = pure_timed_kit();
  std::vector<std::string> lines;
  CheckOptions opts;
  opts.trace = [&](const std::string& s) { lines.push_back(s); };
  TreeExpr t = node(Op("sk"), {leaf(7)});
  kit.pair.alpha(obs::tl(1), kAny, Env(), t, kBudget, opts);
  EXPECT_FALSE(lines.empty());
}

TEST(CheckBeta, DivergeIsPartiallyCorrect) {
  auto kit = pure_unobservable_kit();
  Definition d = mk_diverge(kit.signature, Op("sk"));
  EXPECT_EQ(kit.pair.beta(obs::term(), kAny, d.env, d.root, kBudget), Verdict::Proved);
  Pred none = [](const Value&) { return Verdict::Refuted; };
  EXPECT_EQ(kit.pair.beta(obs::term(), none, d.env, d.root, kBudget), Verdict::Proved);
}

TEST(CheckBeta, StoreRunEndingElsewhereHoldsVacuously) {
  auto kit = store_kit();
  TreeExpr t = node(Op("update", 1), {leaf(0)});
  Pred none = [](const Value&) { return Verdict::Refuted; };
  EXPECT_EQ(kit.pair.beta(obs::st(0, 2), none, Env(), t, kBudget), Verdict::Proved);
  EXPECT_EQ(kit.pair.beta(obs::st(0, 1), none, Env(), t, kBudget), Verdict::Refuted);
}

TEST(CheckBeta, TimedTakesAtLeastNPlusOneSkips) {
  auto kit = pure_timed_kit();
  TreeExpr t = node(Op("sk"), {node(Op("sk"), {leaf(7)})});
  Pred none = [](const Value&) { return Verdict::Refuted; };
  EXPECT_EQ(kit.pair.beta(obs::tl(1), none, Env(), t, kBudget), Verdict::Proved);
  EXPECT_EQ(kit.pair.beta(obs::tl(2), none, Env(), t, kBudget), Verdict::Refuted);
}

TEST(CheckBeta, WithoutCycleRuleOnlyFuel) {
  auto kit = pure_unobservable_kit();
  Definition d = mk_diverge(kit.signature, Op("sk"));
  CheckOptions opts;
  opts.cycle_rule = false;
  EXPECT_EQ(kit.pair.beta(obs::term(), kAny, d.env, d.root, kBudget, opts),
            Verdict::Unknown);
}

TEST(ComplementingPair, NondetMustDualIsDisjunction) {
  auto kit = nondet_kit();
  NodeTest b = kit.pair.beta_node(Op("or"), obs::must());
  EXPECT_TRUE(test_eq(b, NodeTest::disj(NodeTest::atom({kLeft, obs::must()}),
                                       NodeTest::atom({kRight, obs::must()}))));
  NodeTest a = kit.pair.alpha_node(Op("or"), obs::must());
  EXPECT_TRUE(test_eq(a, NodeTest::conj(NodeTest::atom({kLeft, obs::must()}),
                                       NodeTest::atom({kRight, obs::must()}))));
}

TEST(ComplementingPair, StoreNodeTestsAreSelfDual) {
  auto kit = store_kit();
  for (const Op& op : {Op("lookup"), Op("update", 3)}) {
    auto o = obs::st(2, 9);
    EXPECT_TRUE(test_eq(kit.pair.alpha_node(op, o), kit.pair.beta_node(op, o)));
  }
}

TEST(ComplementingPair, TimedZeroDualIsTrue) {
  auto kit = pure_timed_kit();
  EXPECT_EQ(kit.pair.beta_node(Op("sk"), obs::tl(0)).kind(), NodeTest::Kind::True);
  EXPECT_EQ(kit.pair.alpha_node(Op("sk"), obs::tl(0)).kind(), NodeTest::Kind::False);
}

TEST(ComplementingPair, BetaNodeIsDualOfAlphaNode) {
  for (const auto& name : kit_names()) {
    auto kit = kit_by_name(name);
    for (const auto& o : kit.obs_sampler(0))
      for (const auto& d : kit.signature.ops()) {
        Op op = d.parametric ? Op(d.name, 2) : Op(d.name);
        EXPECT_TRUE(test_eq(kit.pair.beta_node(op, o),
                            dual_test(kit.pair.alpha_node(op, o))))
            << name << " " << o;
      }
  }
}

class PerKit : public ::testing::TestWithParam<std::string> {};

INSTANTIATE_TEST_SUITE_P(Kits, PerKit, ::testing::ValuesIn(kit_names()));

TEST_P(PerKit, Disjointness) {
  auto kit = kit_by_name(GetParam());
  auto sample = kit.obs_sampler(1);
  gen::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto t = gen::rational_tree(kit, rng);
    auto [p, q] = gen::disjoint_tables(rng, 4);
    const Obs& o = rng.pick(sample);
    Verdict a = kit.pair.alpha(o, gen::table_pred(p), t.env, t.root, Budget{24, 8});
    Verdict b = kit.pair.beta(o, gen::table_pred(q), t.env, t.root, Budget{24, 8});
    EXPECT_FALSE(a == Verdict::Proved && b == Verdict::Proved) << o;
  }
}

TEST_P(PerKit, FuelMonotonicity) {
  auto kit = kit_by_name(GetParam());
  auto sample = kit.obs_sampler(2);
  gen::Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    auto t = gen::rational_tree(kit, rng);
    auto pred = gen::table_pred(gen::verdict_table(rng, 4));
    const Obs& o = rng.pick(sample);
    std::uint64_t f = rng.below(6);
    for (Side s : {Side::Alpha, Side::Beta}) {
      Verdict lo = kit.pair.lift(s, o, pred, t.env, t.root, Budget{f, 4});
      Verdict hi = kit.pair.lift(s, o, pred, t.env, t.root, Budget{f + 16, 8});
      EXPECT_FALSE(contradicts(lo, hi));
      if (is_definite(lo)) EXPECT_EQ(lo, hi);
    }
  }
}

TEST_P(PerKit, ExactOnFiniteTrees) {
  auto kit = kit_by_name(GetParam());
  auto sample = kit.obs_sampler(3);
  Rng rng(23);
  TreeGenOptions opts;
  opts.depth = 4;
  for (int i = 0; i < 200; ++i) {
    TreeExpr t = gen_finite_tree(kit.signature, rng, opts,
                                 [](Rng& r) { return Value::nat(r.below(3)); });
    FiniteTree ft = truncate(Env(), t, 64, 4);
    std::uint64_t mask = rng.below(8);
    auto bit = [mask](const Value& v) { return ((mask >> v.as_nat()) & 1) != 0; };
    Pred pred = [bit](const Value& v) { return verdict_of(bit(v)); };
    const Obs& o = rng.pick(sample);
    Budget budget{oracle::height(ft), 8};
    Verdict a = kit.pair.alpha(o, pred, Env(), t, budget);
    Verdict b = kit.pair.beta(o, pred, Env(), t, budget);
    EXPECT_EQ(a, verdict_of(oracle::alpha(kit.name, o, bit, ft))) << o << " " << ft;
    EXPECT_EQ(b, verdict_of(oracle::beta(kit.name, o, bit, ft))) << o << " " << ft;
  }
}

TEST(Regression, PureAlphaImpliesBeta) {
  for (const auto& name : {"pure", "timed"}) {
    auto kit = kit_by_name(name);
    auto sample = kit.obs_sampler(4);
    gen::Rng rng(24);
    for (int i = 0; i < 200; ++i) {
      auto t = gen::rational_tree(kit, rng);
      auto pred = gen::table_pred(gen::verdict_table(rng, 4));
      const Obs& o = rng.pick(sample);
      if (kit.pair.alpha(o, pred, t.env, t.root, kBudget) == Verdict::Proved) {
        EXPECT_EQ(kit.pair.beta(o, pred, t.env, t.root, kBudget), Verdict::Proved);
      }
    }
  }
}

TEST(Regression, NondetMayMustImplications) {
  auto kit = nondet_kit();
  gen::Rng rng(25);
  for (int i = 0; i < 300; ++i) {
    auto t = gen::rational_tree(kit, rng);
    auto pred = gen::table_pred(gen::verdict_table(rng, 4));
    if (kit.pair.alpha(obs::may(), pred, t.env, t.root, kBudget) == Verdict::Proved) {
      EXPECT_EQ(kit.pair.beta(obs::must(), pred, t.env, t.root, kBudget), Verdict::Proved);
    }
    if (kit.pair.alpha(obs::must(), pred, t.env, t.root, kBudget) == Verdict::Proved) {
      EXPECT_EQ(kit.pair.beta(obs::may(), pred, t.env, t.root, kBudget), Verdict::Proved);
    }
  }
}

TEST(Regression, InputRightIgnoresPredicate) {
  auto kit = input_kit();
  gen::Rng rng(26);
  Pred yes = [](const Value&) { return Verdict::Proved; };
  Pred no = [](const Value&) { return Verdict::Refuted; };
  for (int i = 0; i < 300; ++i) {
    auto t = gen::rational_tree(kit, rng);
    obs::Bits bits = bitlist_at(rng.below(7));
    Obs o = obs::in(true, bits);
    for (Side s : {Side::Alpha, Side::Beta})
      EXPECT_EQ(kit.pair.lift(s, o, yes, t.env, t.root, kBudget),
                kit.pair.lift(s, o, no, t.env, t.root, kBudget));
  }
}

TEST(TruthPred, ReadsTruthLeaves) {
  EXPECT_EQ(truth_pred(Value::truth(Verdict::Proved)), Verdict::Proved);
  EXPECT_EQ(truth_pred(Value::truth(Verdict::Unknown)), Verdict::Unknown);
}
