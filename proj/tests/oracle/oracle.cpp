#include "oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace oracle {

using efftree::FiniteTree;
using efftree::Obs;
using efftree::Value;

namespace {

const FiniteTree& child(const FiniteTree& t, std::size_t i) {
  if (i >= t.children.size() || t.children[i].kind == FiniteTree::Kind::Cut)
    throw std::logic_error("oracle reached an unexplored subtree");
  return t.children[i];
}

void check_not_cut(const FiniteTree& t) {
  if (t.kind == FiniteTree::Kind::Cut)
    throw std::logic_error("oracle reached an unexplored subtree");
}

std::uint64_t nat_at(const Obs& o, std::size_t i) { return o.items()[i].as_nat(); }

// Bits of an input observation, 0 = left.
std::vector<int> bits_of(const Obs& o) {
  std::vector<int> out;
  const auto& items = o.items()[2].items();
  for (std::size_t i = 1; i < items.size(); ++i)
    out.push_back(items[i].is_sym("right") ? 1 : 0);
  return out;
}

Obs make_in(bool right, const std::vector<int>& bits) {
  std::vector<Obs> items{Obs::sym("bits")};
  for (int b : bits) items.push_back(Obs::sym(b ? "right" : "left"));
  return Obs::list({Obs::sym("in"), Obs::sym(right ? "right" : "left"),
                    Obs::list(items)});
}

// With `partial` set this is the partial-correctness reading: runs that
// end in a state the observation does not describe, and nondeterministic
// choices, are treated dually.
bool eval(const std::string& effect, const Obs& o, const BoolPred& p,
          const FiniteTree& t, bool partial) {
  check_not_cut(t);
  const bool leaf = t.kind == FiniteTree::Kind::Leaf;

  if (effect == "pure") {
    if (leaf) return p(t.value);
    return eval(effect, o, p, child(t, 0), partial);
  }

  if (effect == "timed") {
    std::uint64_t n = nat_at(o, 1);
    if (leaf) return p(t.value);
    // Total: finish within n skips. Partial: fail only by finishing badly
    // within n skips.
    if (n == 0) return partial;
    return eval(effect, Obs::list({Obs::sym("tl"), Obs::nat(n - 1)}), p,
                child(t, 0), partial);
  }

  if (effect == "nondet") {
    if (leaf) return p(t.value);
    bool l = eval(effect, o, p, child(t, 0), partial);
    bool r = eval(effect, o, p, child(t, 1), partial);
    bool may = o.is_sym("may");
    // may: some run; must: every run. The partial reading swaps them.
    return (may != partial) ? (l || r) : (l && r);
  }

  if (effect == "store") {
    std::uint64_t n = nat_at(o, 1), m = nat_at(o, 2);
    if (leaf) return n == m ? p(t.value) : partial;
    auto st = [](std::uint64_t a, std::uint64_t b) {
      return Obs::list({Obs::sym("st"), Obs::nat(a), Obs::nat(b)});
    };
    if (t.op.name == "update") return eval(effect, st(*t.op.arg, m), p, child(t, 0), partial);
    return eval(effect, o, p, child(t, n), partial);
  }

  if (effect == "input") {
    bool right = o.items()[1].is_sym("right");
    std::vector<int> bits = bits_of(o);
    if (leaf) return (!right && bits.empty()) ? p(t.value) : partial;
    if (bits.empty()) return partial ? !right : right;
    int head = bits.front();
    bits.erase(bits.begin());
    return eval(effect, make_in(right, bits), p, child(t, head), partial);
  }

  throw std::logic_error("oracle: unknown effect " + effect);
}

}  // namespace

bool alpha(const std::string& effect, const Obs& o, const BoolPred& p,
           const FiniteTree& t) {
  return eval(effect, o, p, t, false);
}

bool beta(const std::string& effect, const Obs& o, const BoolPred& p,
          const FiniteTree& t) {
  return eval(effect, o, p, t, true);
}

std::size_t height(const FiniteTree& t) {
  std::size_t h = 0;
  for (const auto& c : t.children) h = std::max(h, height(c) + 1);
  return h;
}

}  // namespace oracle
