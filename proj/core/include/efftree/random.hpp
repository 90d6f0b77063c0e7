#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "efftree/signature.hpp"
#include "efftree/tree.hpp"

namespace efftree {

// Seeded generator with platform-independent bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct TreeGenOptions {
  std::size_t depth = 3;
  // Chance (out of 100) of stopping at a leaf above the depth limit.
  std::uint64_t leaf_percent = 35;
  // Arguments of parametric operations are drawn from [0, param_bound).
  std::uint64_t param_bound = 4;
  // Countable children populated explicitly; later indices share one
  // default leaf.
  std::uint64_t window = 4;
};

// Random finite tree over `sig` with payloads from `leaf`.
TreeExpr gen_finite_tree(const Signature& sig, Rng& rng,
                         const TreeGenOptions& opts,
                         const std::function<Value(Rng&)>& leaf);

// Two trees with the same node structure whose leaves come pairwise from
// `leaf`.
std::pair<TreeExpr, TreeExpr> gen_finite_tree_pair(
    const Signature& sig, Rng& rng, const TreeGenOptions& opts,
    const std::function<std::pair<Value, Value>(Rng&)>& leaf);

}  // namespace efftree
