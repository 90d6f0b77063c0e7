#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "efftree/effects.hpp"
#include "efftree/lifting.hpp"
#include "efftree/obs.hpp"
#include "efftree/test.hpp"
#include "efftree/tree.hpp"

namespace efftree {

// Syntactic types: N, σ ⇒ ρ, σ ⊗ ρ, U σ.
class Ty {
 public:
  enum class Kind { N, Arrow, Prod, U };

  Ty();  // N
  static Ty nat();
  static Ty arrow(Ty from, Ty to);
  static Ty prod(Ty first, Ty second);
  static Ty u(Ty body);

  Kind kind() const { return kind_; }
  const Ty& left() const { return *left_; }   // Arrow domain, Prod first, U body
  const Ty& right() const { return *right_; }  // Arrow codomain, Prod second

  friend bool operator==(const Ty& a, const Ty& b);
  friend bool operator!=(const Ty& a, const Ty& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::N;
  std::shared_ptr<const Ty> left_, right_;
};

std::ostream& operator<<(std::ostream& os, const Ty& t);
std::string to_string(const Ty& t);

enum class Sort { Val, Cpt };
const char* to_string(Sort s);

// A value term (a Value) or a computation term (a tree of values).
struct Term {
  Sort sort = Sort::Val;
  Ty ty;
  Value value;    // Val
  TreeExpr tree;  // Cpt
  Env env;

  static Term val(Ty ty, Value v, Env env = Env());
  static Term cpt(Ty ty, TreeExpr t, Env env = Env());
};

// Does v have the shape of a value of type ty? Thunk and Fun bodies are
// not inspected.
bool value_has_type(const Value& v, const Ty& ty);

class Formula;
using FormulaTest = Test<Formula>;

// The behavioural logic.
class Formula {
 public:
  enum class Kind { Eq, Neq, MapsTo, Fst, Snd, Thunk, TestF, ObsA, ObsB };

  static Formula eq(std::uint64_t n);
  static Formula neq(std::uint64_t n);
  static Formula maps_to(Value arg, Formula body);
  static Formula fst(Formula body);
  static Formula snd(Formula body);
  static Formula thunk(Formula body);
  static Formula test(FormulaTest t);
  static Formula obs_alpha(Obs o, Formula body);
  static Formula obs_beta(Obs o, Formula body);
  static Formula obs(Side side, Obs o, Formula body);

  Kind kind() const;
  std::uint64_t nat() const;        // Eq, Neq
  const Value& arg() const;         // MapsTo
  const Formula& body() const;      // MapsTo, Fst, Snd, Thunk, ObsA, ObsB
  const FormulaTest& tests() const; // TestF
  const Obs& obs() const;           // ObsA, ObsB

 private:
  struct Rep;
  static std::shared_ptr<Rep> make_rep(Kind k);
  explicit Formula(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);
std::string to_string(const Formula& f);

bool formula_eq(const Formula& a, const Formula& b);

// Checks that f is a formula at (sort, ty); observation tokens are checked
// against `spec` when given. Throws SortMismatch / UnknownObservation.
void check_formula(const Formula& f, Sort sort, const Ty& ty,
                   const ObsSpec* spec = nullptr);

Verdict satisfies(const EffectKit& kit, const Term& p, const Formula& f,
                  const Budget& budget, const CheckOptions& opts = {});

// Syntactic negation. Involutive up to formula_eq.
Formula neg_formula(const Formula& f);

// t_α[φ] / t_β[φ]: each atom (o₁, o₂) becomes obs o₁ (thunk (obs o₂ φ)).
Formula tower_formula(const DecompTest& t, const Formula& phi, Side side);

struct WeakApproxReport {
  // First φ with P ⊨ φ and Q ⊨ ¬φ, if any.
  std::optional<std::size_t> witness;
  std::size_t checked = 0;
  std::size_t unknowns = 0;
};

// Searches the given formulas for a behavioural difference between p and q.
// Finding none is evidence, not a proof of approximation.
WeakApproxReport check_weak_approx(const EffectKit& kit, const Term& p,
                                   const Term& q,
                                   const std::vector<Formula>& formulas,
                                   const Budget& budget);

}  // namespace efftree
