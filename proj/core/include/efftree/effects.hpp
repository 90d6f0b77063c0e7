#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efftree/lifting.hpp"
#include "efftree/obs.hpp"
#include "efftree/signature.hpp"
#include "efftree/test.hpp"

namespace efftree {

using ObsPair = std::pair<Obs, Obs>;
using DecompTest = Test<ObsPair>;

void print_decomp_test(std::ostream& os, const DecompTest& t);

// Per-instance information a decomposition may need. The store effect uses
// the largest state the first phase of a double tree can end in.
struct DecompScope {
  std::optional<std::uint64_t> max_state;
};

// Everything needed to reason about one effect.
struct EffectKit {
  std::string name;
  Signature signature;
  ComplementingPair pair;
  // α-decomposition of sequencing; its dual is the β-decomposition.
  std::function<DecompTest(const Obs&, const DecompScope&)> decomp;
  // Finite observation sample closed under the atoms of `decomp`.
  std::function<std::vector<Obs>(std::uint64_t seed)> obs_sampler;
  // Scope of the outer layer of a double tree, for `decomp`. Returns an
  // empty scope when it cannot be determined within `index_bound`.
  std::function<DecompScope(const Env&, const TreeExpr&, const Obs&,
                            std::uint64_t index_bound)>
      scope_of;

  const ObsSpec& spec() const { return pair.spec(); }
  DecompTest decomp_beta(const Obs& o, const DecompScope& scope = {}) const {
    return dual_test(decomp(o, scope));
  }
};

EffectKit pure_unobservable_kit();
EffectKit pure_timed_kit();
EffectKit nondet_kit();
EffectKit store_kit();
EffectKit input_kit();

// `pure`, `timed`, `nondet`, `store`, `input`; Error(Usage) otherwise.
EffectKit kit_by_name(const std::string& name);
std::vector<std::string> kit_names();

// Observation tokens of the built-in kits.
namespace obs {

using Bits = std::vector<std::uint8_t>;  // 0 = left, 1 = right

Obs term();
Obs tl(std::uint64_t n);
Obs may();
Obs must();
Obs st(std::uint64_t initial, std::uint64_t final);
Obs in(bool right, const Bits& bits);

bool is_in(const Obs& o);
bool in_right(const Obs& o);
Bits in_bits(const Obs& o);

}  // namespace obs

// Canonical enumeration of 2*: by length, then lexicographically with
// left < right. 0 ↦ ⟨⟩, 1 ↦ ⟨left⟩, 2 ↦ ⟨right⟩, 3 ↦ ⟨left,left⟩, …
obs::Bits bitlist_at(std::uint64_t index);
std::uint64_t bitlist_index(const obs::Bits& bits);

// Child indices of the binary operations.
inline constexpr std::uint64_t kLeft = 0;
inline constexpr std::uint64_t kRight = 1;

}  // namespace efftree
