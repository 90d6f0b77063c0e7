#include "efftree/random.hpp"

namespace efftree {

namespace {

using TreePair = std::pair<TreeExpr, TreeExpr>;
using PairLeaf = std::function<std::pair<Value, Value>(Rng&)>;

TreePair leaf_pair(Rng& rng, const PairLeaf& leaf) {
  auto [a, b] = leaf(rng);
  return {TreeExpr::leaf(std::move(a)), TreeExpr::leaf(std::move(b))};
}

TreePair gen(const Signature& sig, Rng& rng, const TreeGenOptions& opts,
             const PairLeaf& leaf, std::size_t depth) {
  if (depth == 0 || sig.ops().empty() || rng.chance(opts.leaf_percent, 100))
    return leaf_pair(rng, leaf);
  const OpDecl& d = rng.pick(sig.ops());
  Op op = d.parametric ? Op(d.name, rng.below(opts.param_bound)) : Op(d.name);
  const std::uint64_t n = d.arity.is_countable() ? opts.window : d.arity.count;
  std::vector<TreeExpr> first, second;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [a, b] = gen(sig, rng, opts, leaf, depth - 1);
    first.push_back(std::move(a));
    second.push_back(std::move(b));
  }
  if (!d.arity.is_countable())
    return {TreeExpr::node(op, std::move(first)),
            TreeExpr::node(op, std::move(second))};
  auto [tail0, tail1] = leaf_pair(rng, leaf);
  auto rule = [](std::vector<TreeExpr> kids, TreeExpr tail) {
    return Children([kids = std::move(kids), tail](std::uint64_t i) {
      return i < kids.size() ? kids[i] : tail;
    });
  };
  return {TreeExpr::node(op, rule(std::move(first), tail0)),
          TreeExpr::node(op, rule(std::move(second), tail1))};
}

}  // namespace

TreeExpr gen_finite_tree(const Signature& sig, Rng& rng,
                         const TreeGenOptions& opts,
                         const std::function<Value(Rng&)>& leaf) {
  return gen(sig, rng, opts,
             [&](Rng& r) {
               Value v = leaf(r);
               return std::make_pair(v, v);
             },
             opts.depth)
      .first;
}

std::pair<TreeExpr, TreeExpr> gen_finite_tree_pair(
    const Signature& sig, Rng& rng, const TreeGenOptions& opts,
    const std::function<std::pair<Value, Value>(Rng&)>& leaf) {
  return gen(sig, rng, opts, leaf, opts.depth);
}

}  // namespace efftree
