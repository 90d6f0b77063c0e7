#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efftree/effects.hpp"
#include "efftree/lifting.hpp"
#include "efftree/tree.hpp"

namespace efftree {

// A tree whose leaves are thunks of verdict-leaved trees.
struct DoubleTree {
  Env env;
  TreeExpr root;
};

struct RefineCounterexample {
  Obs o0;
  std::optional<Obs> o1;  // set for tower refinement
  Side side = Side::Alpha;
  Verdict lhs = Verdict::Proved;
  Verdict rhs = Verdict::Refuted;
};

std::ostream& operator<<(std::ostream& os, const RefineCounterexample& c);

// Refinement on the observations of a sample. A counterexample is sound;
// "holds" only speaks for the sample.
struct RefineReport {
  std::optional<RefineCounterexample> counterexample;
  std::size_t checks = 0;
  std::size_t unknowns = 0;

  bool holds() const { return !counterexample; }
};

// t0 ⊑ t1 on verdict-leaved trees: α o t0 ⇒ α o t1 and β o t0 ⇒ β o t1.
RefineReport tree_refines(const ComplementingPair& pair, const Env& env,
                          const TreeExpr& t0, const TreeExpr& t1,
                          const std::vector<Obs>& sample, const Budget& budget);

// Observational tower: α o0 (α o1 ·) d, or the β version.
Verdict tower(const ComplementingPair& pair, Side side, const Obs& o0,
              const Obs& o1, const Env& env, const TreeExpr& d,
              const Budget& budget);

// d0 ⊑ d1 on double trees: tower implications over all pairs of the sample.
RefineReport dtree_refines(const ComplementingPair& pair, const Env& env,
                           const TreeExpr& d0, const TreeExpr& d1,
                           const std::vector<Obs>& sample,
                           const Budget& budget);

struct Comparison {
  enum class Outcome { Agree, Disagree, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  Verdict lhs = Verdict::Unknown;  // lifting of μd
  Verdict rhs = Verdict::Unknown;  // decomposition test over towers
};

// Compares the lifting of μd at o with the kit's decomposition at o.
Comparison check_decomposition(const EffectKit& kit, Side side, const Obs& o,
                               const DoubleTree& d, const Budget& budget);
Comparison check_alpha_decomposition(const EffectKit& kit, const Obs& o,
                                     const DoubleTree& d, const Budget& budget);
Comparison check_beta_decomposition(const EffectKit& kit, const Obs& o,
                                    const DoubleTree& d, const Budget& budget);

// Random finite double tree; both layers have height <= depth and inner
// leaves carry verdicts drawn from leaf_verdicts.
DoubleTree gen_double_tree(const EffectKit& kit, std::size_t depth,
                           const std::vector<Verdict>& leaf_verdicts,
                           std::uint64_t seed);

// d0 and d1 share their structure; some inner leaves of d1 are raised to
// Proved, so d0 ⊑ d1.
std::pair<DoubleTree, DoubleTree> gen_raised_double_tree_pair(
    const EffectKit& kit, std::size_t depth,
    const std::vector<Verdict>& leaf_verdicts, std::uint64_t seed);

struct SuiteReport {
  std::size_t samples = 0;     // double trees checked
  std::size_t passed = 0;      // trees with no disagreement and no unknown
  std::size_t comparisons = 0;
  std::size_t disagreements = 0;
  std::size_t unknowns = 0;
  std::size_t lemma_pairs = 0;       // pairs with d0 ⊑ d1 established
  std::size_t lemma_violations = 0;  // ... for which μd0 ⊑ μd1 failed
  std::size_t lemma_unknowns = 0;
  std::vector<std::string> failures;  // first few, human readable

  bool ok() const {
    return disagreements == 0 && unknowns == 0 && lemma_violations == 0;
  }
};

// Randomized check of both decompositions on `samples` double trees at every
// sampled observation, plus `lemma_pairs` spot checks that μ preserves
// tower refinement.
SuiteReport strong_decomposability_suite(const EffectKit& kit,
                                         std::size_t samples, std::size_t depth,
                                         std::uint64_t seed,
                                         const Budget& budget,
                                         std::size_t lemma_pairs = 0);

}  // namespace efftree
