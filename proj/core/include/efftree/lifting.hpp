#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "efftree/obs.hpp"
#include "efftree/test.hpp"
#include "efftree/tree.hpp"
#include "efftree/verdict.hpp"

namespace efftree {

// Atom of a node test: continue in child `child` under observation `obs`.
struct NodeAtom {
  std::uint64_t child = 0;
  Obs obs;

  friend bool operator==(const NodeAtom&, const NodeAtom&) = default;
};

using NodeTest = Test<NodeAtom>;

std::ostream& operator<<(std::ostream& os, const NodeAtom& a);
void print_node_test(std::ostream& os, const NodeTest& t);

// Observation specification: which tokens exist, which are satisfied by
// immediate termination (leaf_fn) and what a node demands of its
// continuations (node_fn).
struct ObsSpec {
  std::string name;
  std::function<bool(const Obs&)> accepts;
  std::function<bool(const Obs&)> leaf_fn;
  std::function<NodeTest(const Op&, const Obs&)> node_fn;
};

// Termination device replacing sizes: `fuel` bounds the depth of node
// obligations, `index_bound` the window of countable connectives.
struct Budget {
  std::uint64_t fuel = 64;
  std::uint64_t index_bound = 32;
};

enum class Side { Alpha, Beta };

const char* to_string(Side s);

struct CheckOptions {
  // Close revisited (definition, observation) obligations as a fixpoint.
  // Without it cyclic trees only ever get fuel-bounded answers.
  bool cycle_rule = true;
  // Receives one line per resolved node obligation.
  std::function<void(const std::string&)> trace;
};

using Pred = std::function<Verdict(const Value&)>;

// Inductive lifting: least fixpoint, a Proved verdict is a finite proof.
Verdict check_alpha(const ObsSpec& spec, const Obs& o, const Pred& pred,
                    const Env& env, const TreeExpr& t, const Budget& budget,
                    const CheckOptions& opts = {});

// Coinductive lifting over the node tests exactly as given in `spec`:
// greatest fixpoint, leaves with leaf_fn(o) = false hold vacuously.
Verdict check_beta(const ObsSpec& spec, const Obs& o, const Pred& pred,
                   const Env& env, const TreeExpr& t, const Budget& budget,
                   const CheckOptions& opts = {});

// α from a spec and β from the same spec with every node test dualized.
class ComplementingPair {
 public:
  explicit ComplementingPair(ObsSpec spec);

  const ObsSpec& spec() const { return spec_; }
  const ObsSpec& beta_spec() const { return beta_spec_; }

  NodeTest alpha_node(const Op& k, const Obs& o) const {
    return spec_.node_fn(k, o);
  }
  NodeTest beta_node(const Op& k, const Obs& o) const {
    return beta_spec_.node_fn(k, o);
  }

  Verdict alpha(const Obs& o, const Pred& pred, const Env& env,
                const TreeExpr& t, const Budget& budget,
                const CheckOptions& opts = {}) const {
    return check_alpha(spec_, o, pred, env, t, budget, opts);
  }
  Verdict beta(const Obs& o, const Pred& pred, const Env& env,
               const TreeExpr& t, const Budget& budget,
               const CheckOptions& opts = {}) const {
    return check_beta(beta_spec_, o, pred, env, t, budget, opts);
  }
  Verdict lift(Side side, const Obs& o, const Pred& pred, const Env& env,
               const TreeExpr& t, const Budget& budget,
               const CheckOptions& opts = {}) const {
    return side == Side::Alpha ? alpha(o, pred, env, t, budget, opts)
                               : beta(o, pred, env, t, budget, opts);
  }

 private:
  ObsSpec spec_;
  ObsSpec beta_spec_;
};

ComplementingPair complementing_pair(ObsSpec spec);

// Predicate reading the verdict stored in a Truth leaf.
Verdict truth_pred(const Value& v);

}  // namespace efftree
