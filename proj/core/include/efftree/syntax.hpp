#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efftree/effects.hpp"
#include "efftree/logic.hpp"
#include "efftree/relator.hpp"
#include "efftree/sexpr.hpp"
#include "efftree/tree.hpp"

namespace efftree {

// A parsed `.efl` program:
//
//   (sig store)                                  ; effect of the program
//   (def loop (update 1 (ref loop)))             ; named, possibly cyclic tree
//   (deffun inc x (admits 0 1) (leaf (+ x 1)))   ; function value `(fun inc)`
//   (main cpt N (lookup n (seq (update (+ n 1)) (leaf n))))
//
// Trees: (leaf V) (ref NAME) (OP T...) (update E [T]) (lookup VAR T)
//        (seq T T) (bind VAR T T) (app FUN V) (mu T)
// Values: NAT VAR (+ E E) unit proved refuted unknown (pair V V)
//         (thunk T) (fun NAME)
// Types: N (-> A B) (* A B) (U A)
struct Program {
  std::optional<std::string> effect;
  Signature signature;
  Env env;
  std::optional<Term> main;
  std::vector<Sexp> items;

  struct Functions;
  std::shared_ptr<Functions> functions;

  std::optional<FunValue> function(const std::string& name) const;
};

// `fallback` supplies the signature when the text has no (sig ...) item.
Program parse_program(std::string_view text,
                      const std::optional<std::string>& fallback = std::nullopt);
std::string print_program(const Program& p);

Ty parse_type(const Sexp& s);
Ty parse_type(std::string_view text);

// Values and trees in the context of a program (for refs and functions).
Value parse_value(const Sexp& s, const Program& p);
TreeExpr parse_tree(const Sexp& s, const Program& p);

Obs parse_obs(const Sexp& s);
Obs parse_obs(std::string_view text);

// Formulas:
//   (eq N) (neq N) (app V F) (fst F) (snd F) (thunk F) (test T)
//   (obs-alpha O F) (obs-beta O F) (neg F)
// Tests:
//   true false (atom F) (and T T) (or T T) (dual T) (map neg T)
//   (exists (VAR LO HI) T) (forall (VAR LO HI) T)
// VAR may appear wherever a number can inside observations and formulas.
Formula parse_formula(std::string_view text, Sort sort, const Ty& ty,
                      const ObsSpec* spec = nullptr,
                      const Program* program = nullptr);
Formula parse_formula(const Sexp& s, const Program* program = nullptr);

// Problem for the `gamma` command:
//   (sig nondet) (def ...)...
//   (carrier V...) (relation (V V)...) (left T) (right T)
//   (observations O...)   ; optional, defaults to the effect's sample
struct GammaProblem {
  Program program;
  EffectKit kit;
  FiniteCarrier carrier;
  Relation relation;
  TreeExpr left, right;
  std::vector<Obs> sample;
};

GammaProblem parse_gamma_problem(
    std::string_view text,
    const std::optional<std::string>& fallback = std::nullopt);

// Problem for the `simulate` command:
//   (sig nondet) (def ...)...
//   (universe SORT TY (terms X...) (relate (I J)... | identity | total))
//   (args TY V...)        ; arguments for the function type TY
//   (observations O...)   ; optional
SimulationProblem parse_simulation_problem(
    std::string_view text,
    const std::optional<std::string>& fallback = std::nullopt);

}  // namespace efftree
