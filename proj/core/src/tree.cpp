#include "efftree/tree.hpp"

#include <set>
#include <sstream>
#include <variant>

#include "efftree/error.hpp"

namespace efftree {

// ---------------------------------------------------------------- Value

struct Value::Rep {
  Kind kind;
  std::variant<std::monostate, std::uint64_t, std::pair<Value, Value>,
               TreeExpr, FunValue, Verdict>
      data;
};

Value::Value() : rep_(nullptr) {}

Value Value::nat(std::uint64_t n) {
  return Value(std::make_shared<const Rep>(Rep{Kind::Nat, n}));
}
Value Value::unit() { return Value(); }
Value Value::pair(Value first, Value second) {
  return Value(std::make_shared<const Rep>(
      Rep{Kind::Pair, std::make_pair(std::move(first), std::move(second))}));
}
Value Value::thunk(TreeExpr body) {
  return Value(std::make_shared<const Rep>(Rep{Kind::Thunk, std::move(body)}));
}
Value Value::fun(FunValue f) {
  return Value(std::make_shared<const Rep>(Rep{Kind::Fun, std::move(f)}));
}
Value Value::truth(Verdict v) {
  return Value(std::make_shared<const Rep>(Rep{Kind::Truth, v}));
}

Value::Kind Value::kind() const { return rep_ ? rep_->kind : Kind::Unit; }

namespace {
[[noreturn]] void wrong_kind(const char* wanted, const Value& v) {
  std::ostringstream os;
  os << "expected " << wanted << " value, got " << v;
  throw Error(ErrorKind::SortMismatch, os.str());
}
}  // namespace

std::uint64_t Value::as_nat() const {
  if (kind() != Kind::Nat) wrong_kind("natural", *this);
  return std::get<std::uint64_t>(rep_->data);
}
const Value& Value::first() const {
  if (kind() != Kind::Pair) wrong_kind("pair", *this);
  return std::get<std::pair<Value, Value>>(rep_->data).first;
}
const Value& Value::second() const {
  if (kind() != Kind::Pair) wrong_kind("pair", *this);
  return std::get<std::pair<Value, Value>>(rep_->data).second;
}
const TreeExpr& Value::as_thunk() const {
  if (kind() != Kind::Thunk) wrong_kind("thunk", *this);
  return std::get<TreeExpr>(rep_->data);
}
const FunValue& Value::as_fun() const {
  if (kind() != Kind::Fun) wrong_kind("function", *this);
  return std::get<FunValue>(rep_->data);
}
Verdict Value::as_truth() const {
  if (kind() != Kind::Truth) wrong_kind("truth", *this);
  return std::get<Verdict>(rep_->data);
}

bool value_eq(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Nat:
      return a.as_nat() == b.as_nat();
    case Value::Kind::Truth:
      return a.as_truth() == b.as_truth();
    case Value::Kind::Pair:
      return value_eq(a.first(), b.first()) && value_eq(a.second(), b.second());
    case Value::Kind::Fun:
      return a.as_fun().name == b.as_fun().name;
    case Value::Kind::Thunk: {
      const TreeExpr& x = a.as_thunk();
      const TreeExpr& y = b.as_thunk();
      if (x.address() == y.address()) return true;
      return x.identity() && y.identity() && *x.identity() == *y.identity();
    }
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit:
      return os << "unit";
    case Value::Kind::Nat:
      return os << v.as_nat();
    case Value::Kind::Truth:
      switch (v.as_truth()) {
        case Verdict::Proved: return os << "proved";
        case Verdict::Refuted: return os << "refuted";
        case Verdict::Unknown: return os << "unknown";
      }
      return os;
    case Value::Kind::Pair:
      return os << "(pair " << v.first() << ' ' << v.second() << ')';
    case Value::Kind::Fun:
      return os << "(fun " << v.as_fun().name << ')';
    case Value::Kind::Thunk:
      return os << "(thunk " << v.as_thunk() << ')';
  }
  return os;
}

// ---------------------------------------------------------------- Children

Children::Children()
    : list_(std::make_shared<const std::vector<TreeExpr>>()) {}
Children::Children(std::vector<TreeExpr> list)
    : list_(std::make_shared<const std::vector<TreeExpr>>(std::move(list))) {}
Children::Children(Rule rule) : rule_(std::move(rule)) {}

TreeExpr Children::at(std::uint64_t index) const {
  if (list_) {
    if (index >= list_->size())
      throw Error(ErrorKind::UnknownOp,
                  "child index " + std::to_string(index) + " out of range");
    return (*list_)[index];
  }
  return rule_(index);
}

Children Children::transform(
    const std::function<TreeExpr(const TreeExpr&)>& f) const {
  if (list_) {
    std::vector<TreeExpr> out;
    out.reserve(list_->size());
    for (const auto& c : *list_) out.push_back(f(c));
    return Children(std::move(out));
  }
  return Children([rule = rule_, f](std::uint64_t i) { return f(rule(i)); });
}

// ---------------------------------------------------------------- TreeExpr

struct TreeExpr::Rep {
  Kind kind = Kind::Leaf;
  Value payload;
  Op op;
  Children children;
  std::string name;
  std::optional<TreeExpr> inner;
  ValueMap mapping;
  std::optional<std::string> identity;
};

TreeExpr::TreeExpr() : TreeExpr(leaf(Value::unit())) {}

TreeExpr TreeExpr::leaf(Value v) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Leaf;
  r->payload = std::move(v);
  return TreeExpr(std::move(r));
}

TreeExpr TreeExpr::node(Op op, Children children) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Node;
  r->op = std::move(op);
  r->children = std::move(children);
  return TreeExpr(std::move(r));
}

TreeExpr TreeExpr::node(Op op, std::vector<TreeExpr> children) {
  return node(std::move(op), Children(std::move(children)));
}

TreeExpr TreeExpr::ref(std::string name) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Ref;
  r->identity = name;
  r->name = std::move(name);
  return TreeExpr(std::move(r));
}

TreeExpr make_mu(TreeExpr inner) {
  auto r = std::make_shared<TreeExpr::Rep>();
  r->kind = TreeExpr::Kind::Mu;
  if (inner.identity()) r->identity = "mu(" + *inner.identity() + ")";
  r->inner = std::move(inner);
  return TreeExpr(std::move(r));
}

TreeExpr make_map(ValueMap f, TreeExpr inner) {
  auto r = std::make_shared<TreeExpr::Rep>();
  r->kind = TreeExpr::Kind::Map;
  if (!f.tag.empty() && inner.identity())
    r->identity = "map[" + f.tag + "](" + *inner.identity() + ")";
  r->mapping = std::move(f);
  r->inner = std::move(inner);
  return TreeExpr(std::move(r));
}

TreeExpr::Kind TreeExpr::kind() const { return rep_->kind; }
const Value& TreeExpr::payload() const { return rep_->payload; }
const Op& TreeExpr::op() const { return rep_->op; }
const Children& TreeExpr::children() const { return rep_->children; }
const std::string& TreeExpr::name() const { return rep_->name; }
const TreeExpr& TreeExpr::inner() const { return *rep_->inner; }
const ValueMap& TreeExpr::mapping() const { return rep_->mapping; }
const std::optional<std::string>& TreeExpr::identity() const {
  return rep_->identity;
}

std::ostream& operator<<(std::ostream& os, const TreeExpr& t) {
  switch (t.kind()) {
    case TreeExpr::Kind::Leaf:
      return os << "(leaf " << t.payload() << ')';
    case TreeExpr::Kind::Ref:
      return os << "(ref " << t.name() << ')';
    case TreeExpr::Kind::Mu:
      return os << "(mu " << t.inner() << ')';
    case TreeExpr::Kind::Map:
      return os << "(map " << (t.mapping().tag.empty() ? "_" : t.mapping().tag)
                << ' ' << t.inner() << ')';
    case TreeExpr::Kind::Node: {
      os << '(' << t.op();
      if (const auto* list = t.children().list()) {
        for (const auto& c : *list) os << ' ' << c;
      } else {
        os << " <rule>";
      }
      return os << ')';
    }
  }
  return os;
}

// ---------------------------------------------------------------- Env

Env::Env()
    : defs_(std::make_shared<const std::map<std::string, TreeExpr>>()) {}

const TreeExpr* Env::find(const std::string& name) const {
  auto it = defs_->find(name);
  return it == defs_->end() ? nullptr : &it->second;
}

const TreeExpr& Env::lookup(const std::string& name) const {
  if (const TreeExpr* t = find(name)) return *t;
  throw Error(ErrorKind::UnboundRef, "unbound reference '" + name + "'");
}

namespace {

// Syntactic walk over the explicit part of an expression (rule children
// and function bodies are opaque).
void walk(const TreeExpr& t, std::set<const void*>& seen,
          const std::function<void(const TreeExpr&)>& visit) {
  if (!seen.insert(t.address()).second) return;
  visit(t);
  switch (t.kind()) {
    case TreeExpr::Kind::Leaf: {
      const Value* v = &t.payload();
      // Thunks may hide inside pairs.
      std::vector<const Value*> todo{v};
      while (!todo.empty()) {
        const Value* cur = todo.back();
        todo.pop_back();
        if (cur->is(Value::Kind::Thunk)) walk(cur->as_thunk(), seen, visit);
        if (cur->is(Value::Kind::Pair)) {
          todo.push_back(&cur->first());
          todo.push_back(&cur->second());
        }
      }
      break;
    }
    case TreeExpr::Kind::Node:
      if (const auto* list = t.children().list())
        for (const auto& c : *list) walk(c, seen, visit);
      break;
    case TreeExpr::Kind::Mu:
    case TreeExpr::Kind::Map:
      walk(t.inner(), seen, visit);
      break;
    case TreeExpr::Kind::Ref:
      break;
  }
}

}  // namespace

Env Env::make(std::map<std::string, TreeExpr> bindings, const Signature* sig) {
  Env env;
  env.defs_ = std::make_shared<const std::map<std::string, TreeExpr>>(
      std::move(bindings));
  std::set<const void*> seen;
  for (const auto& [name, body] : *env.defs_) {
    walk(body, seen, [&](const TreeExpr& t) {
      if (t.kind() == TreeExpr::Kind::Ref) env.lookup(t.name());
      if (t.kind() == TreeExpr::Kind::Node && sig) {
        Arity a = sig->arity(t.op());
        const auto* list = t.children().list();
        if (a.is_countable() ? list != nullptr
                             : (!list || list->size() != a.count)) {
          std::ostringstream os;
          os << "node '" << t.op() << "' has the wrong number of children";
          throw Error(ErrorKind::UnknownOp, os.str());
        }
      }
    });
  }
  // Forcing every definition once rejects Ref cycles without a node.
  for (const auto& [name, body] : *env.defs_) force(env, body);
  return env;
}

Env Env::merged(const Env& other) const {
  std::map<std::string, TreeExpr> all = *defs_;
  for (const auto& [name, body] : *other.defs_) {
    auto [it, inserted] = all.emplace(name, body);
    if (!inserted && it->second.address() != body.address())
      throw Error(ErrorKind::UnboundRef,
                  "definition '" + name + "' bound twice");
  }
  Env env;
  env.defs_ =
      std::make_shared<const std::map<std::string, TreeExpr>>(std::move(all));
  return env;
}

std::string Env::fresh_name(std::string_view stem) const {
  std::string name(stem);
  for (int i = 1; defs_->count(name); ++i)
    name = std::string(stem) + "#" + std::to_string(i);
  return name;
}

// ---------------------------------------------------------------- force

namespace {

Head force_impl(const Env& env, TreeExpr cur, std::set<std::string>& active) {
  Head head;
  for (;;) {
    if (const auto& key = cur.identity()) {
      if (!active.insert(*key).second)
        throw Error(ErrorKind::UnguardedCycle,
                    "unguarded cycle through '" + *key + "'");
      head.keys.push_back(*key);
    }
    switch (cur.kind()) {
      case TreeExpr::Kind::Leaf:
        head.is_leaf = true;
        head.value = cur.payload();
        return head;
      case TreeExpr::Kind::Node:
        head.is_leaf = false;
        head.op = cur.op();
        head.children = cur.children();
        return head;
      case TreeExpr::Kind::Ref:
        cur = env.lookup(cur.name());
        break;
      case TreeExpr::Kind::Mu: {
        Head in = force_impl(env, cur.inner(), active);
        if (in.is_leaf) {
          if (!in.value.is(Value::Kind::Thunk)) {
            std::ostringstream os;
            os << "mu reached a non-thunk leaf " << in.value;
            throw Error(ErrorKind::NonThunkLeaf, os.str());
          }
          cur = in.value.as_thunk();
          break;
        }
        head.is_leaf = false;
        head.op = in.op;
        head.children =
            in.children.transform([](const TreeExpr& c) { return make_mu(c); });
        return head;
      }
      case TreeExpr::Kind::Map: {
        Head in = force_impl(env, cur.inner(), active);
        const ValueMap& f = cur.mapping();
        if (in.is_leaf) {
          head.is_leaf = true;
          head.value = f.fn(in.value);
          return head;
        }
        head.is_leaf = false;
        head.op = in.op;
        head.children = in.children.transform(
            [f](const TreeExpr& c) { return make_map(f, c); });
        return head;
      }
    }
  }
}

}  // namespace

Head force(const Env& env, const TreeExpr& t) {
  std::set<std::string> active;
  return force_impl(env, t, active);
}

// ---------------------------------------------------------------- monad

TreeExpr eta(Value v) { return TreeExpr::leaf(std::move(v)); }

TreeExpr map_tree(ValueMap f, const TreeExpr& t) {
  switch (t.kind()) {
    case TreeExpr::Kind::Leaf:
      return TreeExpr::leaf(f.fn(t.payload()));
    case TreeExpr::Kind::Node:
      return TreeExpr::node(t.op(), t.children().transform([f](const TreeExpr& c) {
        return make_map(f, c);
      }));
    default:
      return make_map(std::move(f), t);
  }
}

TreeExpr map_tree(std::function<Value(const Value&)> f, const TreeExpr& t) {
  return map_tree(ValueMap{"", std::move(f)}, t);
}

TreeExpr mu(const TreeExpr& d) {
  switch (d.kind()) {
    case TreeExpr::Kind::Leaf:
      if (!d.payload().is(Value::Kind::Thunk)) {
        std::ostringstream os;
        os << "mu reached a non-thunk leaf " << d.payload();
        throw Error(ErrorKind::NonThunkLeaf, os.str());
      }
      return d.payload().as_thunk();
    case TreeExpr::Kind::Node:
      return TreeExpr::node(d.op(), d.children().transform(
                                        [](const TreeExpr& c) { return make_mu(c); }));
    default:
      return make_mu(d);
  }
}

// ---------------------------------------------------------------- truncate

bool operator==(const FiniteTree& a, const FiniteTree& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FiniteTree::Kind::Cut:
      return true;
    case FiniteTree::Kind::Leaf:
      return value_eq(a.value, b.value);
    case FiniteTree::Kind::Node:
      return a.op == b.op && a.children == b.children;
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const FiniteTree& t) {
  switch (t.kind) {
    case FiniteTree::Kind::Cut:
      return os << "cut";
    case FiniteTree::Kind::Leaf:
      return os << "(leaf " << t.value << ')';
    case FiniteTree::Kind::Node:
      os << '(' << t.op;
      for (const auto& c : t.children) os << ' ' << c;
      return os << ')';
  }
  return os;
}

FiniteTree truncate(const Env& env, const TreeExpr& t, std::size_t depth,
                    std::uint64_t window) {
  Head h = force(env, t);
  FiniteTree out;
  if (h.is_leaf) {
    out.kind = FiniteTree::Kind::Leaf;
    out.value = h.value;
    return out;
  }
  if (depth == 0) return FiniteTree::cut();
  out.kind = FiniteTree::Kind::Node;
  out.op = h.op;
  std::uint64_t n = h.children.list() ? h.children.list()->size() : window;
  for (std::uint64_t i = 0; i < n; ++i)
    out.children.push_back(truncate(env, h.children.at(i), depth - 1, window));
  return out;
}

bool is_prefix(const FiniteTree& a, const FiniteTree& b) {
  if (a.kind == FiniteTree::Kind::Cut) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == FiniteTree::Kind::Leaf) return value_eq(a.value, b.value);
  if (!(a.op == b.op) || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!is_prefix(a.children[i], b.children[i])) return false;
  return true;
}

// ---------------------------------------------------------------- diverge

Definition mk_diverge(const Signature& sig, const Op& op, const Env& base,
                      std::string_view stem) {
  Arity arity = sig.arity(op);
  std::string name = base.fresh_name(stem);
  TreeExpr self = TreeExpr::ref(name);
  TreeExpr body;
  if (arity.is_countable()) {
    body = TreeExpr::node(op, Children([self](std::uint64_t) { return self; }));
  } else {
    body = TreeExpr::node(op, std::vector<TreeExpr>(arity.count, self));
  }
  std::map<std::string, TreeExpr> defs = base.bindings();
  defs.emplace(name, body);
  return {Env::make(std::move(defs), &sig), self};
}

}  // namespace efftree
