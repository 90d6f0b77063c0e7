#include <benchmark/benchmark.h>

#include "efftree/decompose.hpp"
#include "efftree/effects.hpp"
#include "efftree/logic.hpp"
#include "efftree/random.hpp"
#include "efftree/relator.hpp"

using namespace efftree;

namespace {

const Budget kBudget{64, 32};

// sk^n(Leaf 0)
TreeExpr skip_chain(std::uint64_t n) {
  TreeExpr t = TreeExpr::leaf(Value::nat(0));
  for (std::uint64_t i = 0; i < n; ++i) t = TreeExpr::node(Op("sk"), std::vector<TreeExpr>{t});
  return t;
}

// Complete binary choice tree of the given height.
TreeExpr choice_tree(std::uint64_t h) {
  if (h == 0) return TreeExpr::leaf(Value::nat(0));
  TreeExpr c = choice_tree(h - 1);
  return TreeExpr::node(Op("or"), std::vector<TreeExpr>{c, c});
}

void BM_AlphaTimedChain(benchmark::State& state) {
  auto kit = pure_timed_kit();
  auto n = static_cast<std::uint64_t>(state.range(0));
  TreeExpr t = skip_chain(n);
  Pred any = [](const Value&) { return Verdict::Proved; };
  for (auto _ : state)
    benchmark::DoNotOptimize(kit.pair.alpha(obs::tl(n), any, Env(), t, Budget{n + 1, 32}));
}
BENCHMARK(BM_AlphaTimedChain)->RangeMultiplier(4)->Range(16, 1024);

void BM_AlphaMustChoiceTree(benchmark::State& state) {
  auto kit = nondet_kit();
  TreeExpr t = choice_tree(static_cast<std::uint64_t>(state.range(0)));
  Pred any = [](const Value&) { return Verdict::Proved; };
  for (auto _ : state) benchmark::DoNotOptimize(kit.pair.alpha(obs::must(), any, Env(), t, kBudget));
}
BENCHMARK(BM_AlphaMustChoiceTree)->DenseRange(4, 12, 4);

void BM_BetaOmegaCycle(benchmark::State& state) {
  auto kit = nondet_kit();
  Definition omega = mk_diverge(kit.signature, Op("or"), Env(), "omega");
  Pred none = [](const Value&) { return Verdict::Refuted; };
  for (auto _ : state)
    benchmark::DoNotOptimize(kit.pair.beta(obs::must(), none, omega.env, omega.root, kBudget));
}
BENCHMARK(BM_BetaOmegaCycle);

void BM_CaseStudySatisfies(benchmark::State& state) {
  auto kit = nondet_kit();
  Definition omega = mk_diverge(kit.signature, Op("or"), Env(), "omega");
  TreeExpr p = TreeExpr::node(
      Op("or"), std::vector<TreeExpr>{TreeExpr::leaf(Value::thunk(omega.root)),
                                      TreeExpr::leaf(Value::thunk(TreeExpr::leaf(Value::nat(0))))});
  Term term = Term::cpt(Ty::u(Ty::nat()), p, omega.env);
  Formula phi = Formula::obs_alpha(
      obs::may(), Formula::thunk(Formula::obs_beta(obs::may(), Formula::test(FormulaTest::ff()))));
  for (auto _ : state) benchmark::DoNotOptimize(satisfies(kit, term, phi, kBudget));
}
BENCHMARK(BM_CaseStudySatisfies);

void BM_DecompositionSuite(benchmark::State& state) {
  auto names = kit_names();
  auto kit = kit_by_name(names[static_cast<std::size_t>(state.range(0))]);
  state.SetLabel(kit.name);
  for (auto _ : state)
    benchmark::DoNotOptimize(strong_decomposability_suite(kit, 50, 4, 42, kBudget).ok());
}
BENCHMARK(BM_DecompositionSuite)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_GammaCheck(benchmark::State& state) {
  auto kit = nondet_kit();
  auto n = static_cast<std::uint64_t>(state.range(0));
  std::vector<Value> xs;
  for (std::uint64_t i = 0; i < n; ++i) xs.push_back(Value::nat(i));
  FiniteCarrier carrier(xs);
  Rng rng(7);
  TreeGenOptions opts;
  opts.depth = 4;
  auto leaf = [n](Rng& r) { return Value::nat(r.below(n)); };
  TreeExpr t0 = gen_finite_tree(kit.signature, rng, opts, leaf);
  for (auto _ : state)
    benchmark::DoNotOptimize(gamma_check(kit, carrier, Relation::identity(n), Env(), t0, t0,
                                         {obs::may(), obs::must()}, kBudget)
                                 .checks);
  state.counters["subsets"] = static_cast<double>(r_correct_predicates(carrier, Relation::identity(n)).size());
}
BENCHMARK(BM_GammaCheck)->DenseRange(2, 10, 4);

void BM_Truncate(benchmark::State& state) {
  auto kit = store_kit();
  Rng rng(3);
  TreeGenOptions opts;
  opts.depth = 5;
  TreeExpr t = gen_finite_tree(kit.signature, rng, opts, [](Rng& r) { return Value::nat(r.below(4)); });
  auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(truncate(Env(), mu(map_tree([](const Value& v) {
                                                           return Value::thunk(eta(v));
                                                         }, t)),
                                                         depth));
}
BENCHMARK(BM_Truncate)->DenseRange(1, 5, 2);

}  // namespace
BENCHMARK_MAIN();
