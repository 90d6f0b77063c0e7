#include "efftree/decompose.hpp"

#include <sstream>

#include "efftree/random.hpp"

namespace efftree {

std::ostream& operator<<(std::ostream& os, const RefineCounterexample& c) {
  os << to_string(c.side) << " at " << c.o0;
  if (c.o1) os << ' ' << *c.o1;
  return os << ": " << c.lhs << " then " << c.rhs;
}

namespace {

// Records one implication lhs ⇒ rhs.
bool record(RefineReport& r, Verdict lhs, Verdict rhs, Side side,
            const Obs& o0, const std::optional<Obs>& o1) {
  ++r.checks;
  if (lhs == Verdict::Proved && rhs == Verdict::Refuted) {
    r.counterexample = RefineCounterexample{o0, o1, side, lhs, rhs};
    return false;
  }
  if (lhs == Verdict::Unknown || (lhs == Verdict::Proved && rhs == Verdict::Unknown))
    ++r.unknowns;
  return true;
}

}  // namespace

RefineReport tree_refines(const ComplementingPair& pair, const Env& env,
                          const TreeExpr& t0, const TreeExpr& t1,
                          const std::vector<Obs>& sample,
                          const Budget& budget) {
  RefineReport r;
  for (const Obs& o : sample) {
    for (Side side : {Side::Alpha, Side::Beta}) {
      Verdict lhs = pair.lift(side, o, truth_pred, env, t0, budget);
      if (lhs == Verdict::Refuted) {
        ++r.checks;
        continue;
      }
      Verdict rhs = pair.lift(side, o, truth_pred, env, t1, budget);
      if (!record(r, lhs, rhs, side, o, std::nullopt)) return r;
    }
  }
  return r;
}

Verdict tower(const ComplementingPair& pair, Side side, const Obs& o0,
              const Obs& o1, const Env& env, const TreeExpr& d,
              const Budget& budget) {
  Pred inner = [&](const Value& v) {
    return pair.lift(side, o1, truth_pred, env, v.as_thunk(), budget);
  };
  return pair.lift(side, o0, inner, env, d, budget);
}

RefineReport dtree_refines(const ComplementingPair& pair, const Env& env,
                           const TreeExpr& d0, const TreeExpr& d1,
                           const std::vector<Obs>& sample,
                           const Budget& budget) {
  RefineReport r;
  for (const Obs& o0 : sample) {
    for (const Obs& o1 : sample) {
      for (Side side : {Side::Alpha, Side::Beta}) {
        Verdict lhs = tower(pair, side, o0, o1, env, d0, budget);
        if (lhs == Verdict::Refuted) {
          ++r.checks;
          continue;
        }
        Verdict rhs = tower(pair, side, o0, o1, env, d1, budget);
        if (!record(r, lhs, rhs, side, o0, o1)) return r;
      }
    }
  }
  return r;
}

Comparison check_decomposition(const EffectKit& kit, Side side, const Obs& o,
                               const DoubleTree& d, const Budget& budget) {
  Comparison c;
  c.lhs = kit.pair.lift(side, o, truth_pred, d.env, mu(d.root), budget);
  DecompScope scope = kit.scope_of(d.env, d.root, o, budget.index_bound);
  DecompTest t = side == Side::Alpha ? kit.decomp(o, scope)
                                     : kit.decomp_beta(o, scope);
  c.rhs = eval_test(
      t,
      [&](const ObsPair& p) {
        return tower(kit.pair, side, p.first, p.second, d.env, d.root, budget);
      },
      budget.index_bound);
  if (!is_definite(c.lhs) || !is_definite(c.rhs))
    c.outcome = Comparison::Outcome::Inconclusive;
  else
    c.outcome = c.lhs == c.rhs ? Comparison::Outcome::Agree
                               : Comparison::Outcome::Disagree;
  return c;
}

Comparison check_alpha_decomposition(const EffectKit& kit, const Obs& o,
                                     const DoubleTree& d,
                                     const Budget& budget) {
  return check_decomposition(kit, Side::Alpha, o, d, budget);
}

Comparison check_beta_decomposition(const EffectKit& kit, const Obs& o,
                                    const DoubleTree& d, const Budget& budget) {
  return check_decomposition(kit, Side::Beta, o, d, budget);
}

namespace {

Verdict raise(Verdict v, Rng& rng) {
  if (v == Verdict::Proved || !rng.chance(1, 3)) return v;
  return Verdict::Proved;
}

std::pair<DoubleTree, DoubleTree> gen_pair(const EffectKit& kit,
                                           std::size_t depth,
                                           const std::vector<Verdict>& verdicts,
                                           std::uint64_t seed, bool raising) {
  Rng rng(seed);
  TreeGenOptions opts;
  opts.depth = depth;
  auto inner_leaf = [&](Rng& r) {
    Verdict v = r.pick(verdicts);
    Verdict w = raising ? raise(v, r) : v;
    return std::make_pair(Value::truth(v), Value::truth(w));
  };
  auto outer_leaf = [&](Rng& r) {
    auto [a, b] = gen_finite_tree_pair(kit.signature, r, opts, inner_leaf);
    return std::make_pair(Value::thunk(std::move(a)), Value::thunk(std::move(b)));
  };
  auto [d0, d1] = gen_finite_tree_pair(kit.signature, rng, opts, outer_leaf);
  return {DoubleTree{Env(), std::move(d0)}, DoubleTree{Env(), std::move(d1)}};
}

}  // namespace

DoubleTree gen_double_tree(const EffectKit& kit, std::size_t depth,
                           const std::vector<Verdict>& leaf_verdicts,
                           std::uint64_t seed) {
  return gen_pair(kit, depth, leaf_verdicts, seed, false).first;
}

std::pair<DoubleTree, DoubleTree> gen_raised_double_tree_pair(
    const EffectKit& kit, std::size_t depth,
    const std::vector<Verdict>& leaf_verdicts, std::uint64_t seed) {
  return gen_pair(kit, depth, leaf_verdicts, seed, true);
}

SuiteReport strong_decomposability_suite(const EffectKit& kit,
                                         std::size_t samples, std::size_t depth,
                                         std::uint64_t seed,
                                         const Budget& budget,
                                         std::size_t lemma_pairs) {
  SuiteReport report;
  Rng rng(seed);
  const std::vector<Obs> sample = kit.obs_sampler(seed);
  const std::vector<Verdict> verdicts{Verdict::Proved, Verdict::Refuted};
  auto fail = [&](const std::string& s) {
    if (report.failures.size() < 8) report.failures.push_back(s);
  };

  for (std::size_t i = 0; i < samples; ++i) {
    DoubleTree d = gen_double_tree(kit, depth, verdicts, rng.next());
    ++report.samples;
    bool clean = true;
    for (const Obs& o : sample) {
      for (Side side : {Side::Alpha, Side::Beta}) {
        Comparison c = check_decomposition(kit, side, o, d, budget);
        ++report.comparisons;
        if (c.outcome == Comparison::Outcome::Agree) continue;
        clean = false;
        std::ostringstream os;
        os << "sample " << i << ' ' << to_string(side) << " at " << o << ": "
           << c.lhs << " vs " << c.rhs << " on " << d.root;
        if (c.outcome == Comparison::Outcome::Disagree) {
          ++report.disagreements;
          fail("disagree " + os.str());
        } else {
          ++report.unknowns;
          fail("unknown " + os.str());
        }
      }
    }
    if (clean) ++report.passed;
  }

  // Independently drawn pairs rarely refine each other, so half the pairs
  // come from raising leaves and half from filtering small random pairs.
  for (std::size_t i = 0; i < lemma_pairs; ++i) {
    std::optional<std::pair<DoubleTree, DoubleTree>> chosen;
    if (i % 2 == 1) {
      for (int attempt = 0; attempt < 40 && !chosen; ++attempt) {
        std::size_t small = std::min<std::size_t>(depth, 2);
        DoubleTree a = gen_double_tree(kit, small, verdicts, rng.next());
        DoubleTree b = gen_double_tree(kit, small, verdicts, rng.next());
        RefineReport r = dtree_refines(kit.pair, a.env, a.root, b.root, sample, budget);
        if (r.holds() && r.unknowns == 0) chosen.emplace(a, b);
      }
    }
    if (!chosen)
      chosen = gen_raised_double_tree_pair(kit, depth, verdicts, rng.next());
    const auto& [d0, d1] = *chosen;
    RefineReport hyp = dtree_refines(kit.pair, d0.env, d0.root, d1.root, sample, budget);
    if (!hyp.holds() || hyp.unknowns > 0) {
      ++report.lemma_unknowns;
      continue;
    }
    ++report.lemma_pairs;
    RefineReport concl = tree_refines(kit.pair, d0.env, mu(d0.root),
                                      mu(d1.root), sample, budget);
    if (!concl.holds()) {
      ++report.lemma_violations;
      std::ostringstream os;
      os << "lemma pair " << i << ": " << *concl.counterexample;
      fail(os.str());
    } else if (concl.unknowns > 0) {
      ++report.lemma_unknowns;
    }
  }
  return report;
}

}  // namespace efftree
