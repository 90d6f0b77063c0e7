#pragma once

#include <cstdint>
#include <vector>

#include "efftree/effects.hpp"
#include "efftree/logic.hpp"
#include "efftree/random.hpp"
#include "efftree/test.hpp"
#include "efftree/tree.hpp"

namespace gen {

using efftree::Rng;

struct RationalTree {
  efftree::Env env;
  efftree::TreeExpr root;
};

struct RationalOptions {
  std::size_t defs = 3;
  std::size_t depth = 3;
  std::uint64_t ref_percent = 30;  // chance of a leaf position being a Ref
  std::uint64_t leaf_values = 4;   // Nat leaves drawn from [0, leaf_values)
  bool allow_refs = true;
};

// Random tree over the kit's signature with Nat leaves and, when allowed,
// Refs into a small set of guarded definitions.
RationalTree rational_tree(const efftree::EffectKit& kit, Rng& rng,
                           const RationalOptions& opts = {});

// Random leaf payload generator for trees of thunks: each leaf is a thunk of
// a small finite Nat-leaved tree.
RationalTree thunk_tree(const efftree::EffectKit& kit, Rng& rng,
                        std::size_t depth);

using ITest = efftree::Test<int>;

// Random test over atoms [0, atoms), with families (supported or not).
ITest int_test(Rng& rng, std::size_t depth, int atoms = 6);

// Random verdict-valued predicate on Nat values in [0, n).
std::vector<efftree::Verdict> verdict_table(Rng& rng, std::size_t n);
// Two tables never both Proved at the same index.
std::pair<std::vector<efftree::Verdict>, std::vector<efftree::Verdict>>
disjoint_tables(Rng& rng, std::size_t n);

efftree::Pred table_pred(std::vector<efftree::Verdict> table);

// Random formula at (sort, ty) for ty in {N, U N, N * N, U (U N)} using
// observations from `obs`.
efftree::Formula formula(Rng& rng, efftree::Sort sort, const efftree::Ty& ty,
                         const std::vector<efftree::Obs>& obs,
                         std::size_t depth);

}  // namespace gen
