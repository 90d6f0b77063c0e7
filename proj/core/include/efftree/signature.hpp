#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace efftree {

// Branching of an operation: a fixed finite count, or one child per natural.
struct Arity {
  enum class Kind { Finite, Countable };

  Kind kind = Kind::Finite;
  std::uint64_t count = 1;  // meaningful for Finite only

  static Arity finite(std::uint64_t n) { return {Kind::Finite, n}; }
  static Arity countable() { return {Kind::Countable, 0}; }

  bool is_countable() const { return kind == Kind::Countable; }
  bool admits(std::uint64_t index) const {
    return is_countable() || index < count;
  }
  friend bool operator==(const Arity&, const Arity&) = default;
};

// An operation occurrence in a tree. Parametric operations such as
// `update k` carry their natural-number argument.
struct Op {
  std::string name;
  std::optional<std::uint64_t> arg;

  Op() = default;
  explicit Op(std::string n) : name(std::move(n)) {}
  Op(std::string n, std::uint64_t a) : name(std::move(n)), arg(a) {}

  friend bool operator==(const Op&, const Op&) = default;
};

std::ostream& operator<<(std::ostream& os, const Op& op);

struct OpDecl {
  std::string name;
  Arity arity;
  bool parametric = false;  // takes a natural argument, e.g. update k
};

// The operation symbols of an effect together with their arities.
class Signature {
 public:
  Signature() = default;
  // Throws Error(UnknownOp) on duplicate names or a zero finite arity.
  explicit Signature(std::vector<OpDecl> ops);

  const std::vector<OpDecl>& ops() const { return ops_; }
  const OpDecl* find(const std::string& name) const;
  // Throws Error(UnknownOp) for undeclared names or a missing/unexpected
  // parameter.
  const OpDecl& decl(const Op& op) const;
  Arity arity(const Op& op) const { return decl(op).arity; }

 private:
  std::vector<OpDecl> ops_;
};

}  // namespace efftree
