#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "efftree/effects.hpp"
#include "efftree/lifting.hpp"
#include "efftree/logic.hpp"
#include "efftree/tree.hpp"

namespace efftree {

// Same value: value_eq, except that thunks are equal when they share a
// node or definition or agree on a deep truncation.
bool same_value(const Env& env, const Value& a, const Value& b);

// Finite set of values, compared with same_value.
class FiniteCarrier {
 public:
  FiniteCarrier() = default;
  // Throws Error(SortMismatch) on duplicates.
  explicit FiniteCarrier(std::vector<Value> elements, Env env = Env());

  const std::vector<Value>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::optional<std::size_t> index_of(const Value& v) const;

 private:
  std::vector<Value> elements_;
  Env env_;
};

// Relation on the indices of a carrier of the given size.
struct Relation {
  std::size_t size = 0;
  std::set<std::pair<std::size_t, std::size_t>> pairs;

  static Relation empty(std::size_t n) { return Relation{n, {}}; }
  static Relation identity(std::size_t n);
  static Relation total(std::size_t n);
  bool contains(std::size_t a, std::size_t b) const {
    return pairs.count({a, b}) > 0;
  }
  void add(std::size_t a, std::size_t b);  // Error(IllTypedCandidate) if out of range
};

inline constexpr std::size_t kDefaultCarrierCap = 12;

// Every subset S (bit i = element i) with a ∈ S ∧ (a, b) ∈ R ⇒ b ∈ S, in
// increasing bitmask order.
std::vector<std::uint64_t> r_correct_predicates(
    const FiniteCarrier& carrier, const Relation& r,
    std::size_t cap = kDefaultCarrierCap);

struct GammaCounterexample {
  std::uint64_t subset = 0;
  Obs obs;
  Side side = Side::Alpha;
};

struct GammaResult {
  std::optional<GammaCounterexample> counterexample;
  std::size_t checks = 0;
  std::size_t unknowns = 0;

  bool holds() const { return !counterexample; }
};

void print_subset(std::ostream& os, const FiniteCarrier& carrier,
                  std::uint64_t subset);

// Γ(R) t0 t1 on the sample: for each R-correct S and o, the α- and
// β-liftings of S transfer from t0 to t1. Leaves must lie in the carrier.
GammaResult gamma_check(const EffectKit& kit, const FiniteCarrier& carrier,
                        const Relation& r, const Env& env, const TreeExpr& t0,
                        const TreeExpr& t1, const std::vector<Obs>& sample,
                        const Budget& budget,
                        std::size_t cap = kDefaultCarrierCap);

// Terms of one (sort, type) together with the candidate relation on them.
struct TypedUniverse {
  Sort sort = Sort::Val;
  Ty ty;
  std::vector<Term> terms;
  Relation candidate;
};

struct ArgSet {
  Ty arrow;  // the function type whose applications are checked
  std::vector<Value> args;
};

struct SimulationProblem {
  EffectKit kit;
  std::vector<TypedUniverse> universes;
  std::vector<ArgSet> arg_sets;
  std::vector<Obs> obs_sample;
  Budget budget;

  const TypedUniverse* find(Sort sort, const Ty& ty) const;
};

// Related pair whose closure condition failed: universe index and term
// indices within it.
struct FailingPair {
  std::size_t universe = 0;
  std::size_t left = 0;
  std::size_t right = 0;
};

struct SimulationReport {
  bool pass = true;
  std::string violation;  // first failing bullet, human readable
  std::optional<FailingPair> failing;
  std::optional<GammaCounterexample> gamma;  // when the cpt bullet failed
  std::size_t unknowns = 0;
};

// Checks the five closure conditions of an applicative Γ-simulation for
// every related pair. Derived terms (applications, projections, thunk
// bodies) must occur in the universe of their type.
SimulationReport simulation_check(const SimulationProblem& problem);

Relation relation_union(const Relation& a, const Relation& b);
Relation relation_rt_closure(const Relation& r);

struct SequencingReport {
  bool hypothesis = false;  // Γ(Γ(R)) d0 d1 on the sample
  bool conclusion = false;  // Γ(R) (μ d0) (μ d1) on the sample
  std::size_t unknowns = 0;
  std::size_t inner_carrier = 0;

  bool violated() const { return hypothesis && !conclusion; }
};

// Leaves of d0 and d1 are thunks over carrier-valued trees.
SequencingReport gamma_sequencing_check(const EffectKit& kit,
                                        const FiniteCarrier& carrier,
                                        const Relation& r, const Env& env,
                                        const TreeExpr& d0, const TreeExpr& d1,
                                        const std::vector<Obs>& sample,
                                        const Budget& budget);

}  // namespace efftree
