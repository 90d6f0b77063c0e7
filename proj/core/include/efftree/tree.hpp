#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "efftree/signature.hpp"
#include "efftree/verdict.hpp"

namespace efftree {

class TreeExpr;
class Value;

// A function value. Formulas may only apply it to the declared admissible
// arguments.
struct FunValue {
  std::string name;
  std::vector<Value> admissible;
  std::function<TreeExpr(const Value&)> apply;
};

// Leaf payloads and value terms.
//
// Truth carries a verdict and stands in for a proposition at the leaves of
// the trees fed to the lifting checkers directly (double trees, refinement).
class Value {
 public:
  enum class Kind { Nat, Unit, Pair, Thunk, Fun, Truth };

  Value();  // Unit
  static Value nat(std::uint64_t n);
  static Value unit();
  static Value pair(Value first, Value second);
  static Value thunk(TreeExpr body);
  static Value fun(FunValue f);
  static Value truth(Verdict v);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  // Accessors throw Error(SortMismatch) on the wrong kind.
  std::uint64_t as_nat() const;
  const Value& first() const;
  const Value& second() const;
  const TreeExpr& as_thunk() const;
  const FunValue& as_fun() const;
  Verdict as_truth() const;

  const void* identity() const { return rep_.get(); }

 private:
  struct Rep;
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Structural equality. Thunks compare by node identity or definition name,
// functions by declared name.
bool value_eq(const Value& a, const Value& b);
std::ostream& operator<<(std::ostream& os, const Value& v);

// Children of a node: an explicit list (finite arity), or an index rule
// that is only ever called on demanded indices.
class Children {
 public:
  using Rule = std::function<TreeExpr(std::uint64_t)>;

  Children();
  explicit Children(std::vector<TreeExpr> list);
  explicit Children(Rule rule);

  TreeExpr at(std::uint64_t index) const;
  bool is_rule() const { return !list_; }
  const std::vector<TreeExpr>* list() const { return list_.get(); }

  // Children with f applied to each (lazily for rules).
  Children transform(const std::function<TreeExpr(const TreeExpr&)>& f) const;

 private:
  std::shared_ptr<const std::vector<TreeExpr>> list_;
  Rule rule_;
};

// A named value-to-value map. A non-empty tag gives the mapped tree an
// identity, which lets the checkers close cycles through it.
struct ValueMap {
  std::string tag;
  std::function<Value(const Value&)> fn;
};

// Expression denoting a possibly infinite tree. Ref points into an Env;
// Mu and Map are the lazy monad multiplication and functor action.
class TreeExpr {
 public:
  enum class Kind { Leaf, Node, Ref, Mu, Map };

  TreeExpr();  // Leaf(unit)
  static TreeExpr leaf(Value v);
  static TreeExpr node(Op op, Children children);
  static TreeExpr node(Op op, std::vector<TreeExpr> children);
  static TreeExpr ref(std::string name);

  Kind kind() const;
  const Value& payload() const;      // Leaf
  const Op& op() const;              // Node
  const Children& children() const;  // Node
  const std::string& name() const;   // Ref
  const TreeExpr& inner() const;     // Mu, Map
  const ValueMap& mapping() const;   // Map

  // Stable name of the denoted tree, when it has one: definition names and
  // Mu/tagged-Map wrappers around named trees.
  const std::optional<std::string>& identity() const;
  const void* address() const { return rep_.get(); }

 private:
  friend TreeExpr make_mu(TreeExpr);
  friend TreeExpr make_map(ValueMap, TreeExpr);
  struct Rep;
  explicit TreeExpr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const TreeExpr& t);

// Named definitions making up rational trees.
class Env {
 public:
  Env();
  // Checks closure (every reachable Ref is bound) and guardedness (every
  // Ref cycle crosses a node). When sig is given, also checks node ops.
  static Env make(std::map<std::string, TreeExpr> bindings,
                  const Signature* sig = nullptr);

  const TreeExpr* find(const std::string& name) const;
  const TreeExpr& lookup(const std::string& name) const;  // UnboundRef
  const std::map<std::string, TreeExpr>& bindings() const { return *defs_; }
  bool empty() const { return defs_->empty(); }

  // Union of two environments; a name bound differently in both is an
  // error.
  Env merged(const Env& other) const;
  std::string fresh_name(std::string_view stem) const;

 private:
  std::shared_ptr<const std::map<std::string, TreeExpr>> defs_;
};

// Resolved root of a tree.
struct Head {
  bool is_leaf = true;
  Value value;
  Op op;
  Children children;
  // Identities of every expression on the resolution chain; all of them
  // denote this same tree.
  std::vector<std::string> keys;
};

Head force(const Env& env, const TreeExpr& t);

TreeExpr eta(Value v);
TreeExpr map_tree(ValueMap f, const TreeExpr& t);
TreeExpr map_tree(std::function<Value(const Value&)> f, const TreeExpr& t);
// Leaves of d must be thunks; grafting is lazy. Non-thunk leaves raise
// NonThunkLeaf when reached.
TreeExpr mu(const TreeExpr& d);

// Fully forced prefix of a tree.
struct FiniteTree {
  enum class Kind { Cut, Leaf, Node };
  Kind kind = Kind::Cut;
  Value value;
  Op op;
  std::vector<FiniteTree> children;

  static FiniteTree cut() { return {}; }
};

bool operator==(const FiniteTree& a, const FiniteTree& b);
std::ostream& operator<<(std::ostream& os, const FiniteTree& t);

// Forces `depth` node layers; countable children are explored at indices
// below `window`. Leaves below the cut are kept if reached within depth.
FiniteTree truncate(const Env& env, const TreeExpr& t, std::size_t depth,
                    std::uint64_t window = 4);
// truncate(a) is a prefix of truncate(b): b refines every Cut of a.
bool is_prefix(const FiniteTree& a, const FiniteTree& b);

struct Definition {
  Env env;
  TreeExpr root;
};

// d = node op (all children = d), bound under a fresh name.
Definition mk_diverge(const Signature& sig, const Op& op,
                      const Env& base = Env(), std::string_view stem = "diverge");

}  // namespace efftree
