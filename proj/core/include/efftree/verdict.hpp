#pragma once

#include <algorithm>
#include <ostream>
#include <string_view>

namespace efftree {

// Three-valued outcome of a check. Proved and Refuted are sound; Unknown
// means the budget ran out before the question was settled.
//
// The enumerator order is the truth order used by the connectives:
// Refuted < Unknown < Proved.
enum class Verdict { Refuted = 0, Unknown = 1, Proved = 2 };

constexpr Verdict verdict_and(Verdict a, Verdict b) { return std::min(a, b); }
constexpr Verdict verdict_or(Verdict a, Verdict b) { return std::max(a, b); }
constexpr Verdict verdict_of(bool b) {
  return b ? Verdict::Proved : Verdict::Refuted;
}
constexpr bool is_definite(Verdict v) { return v != Verdict::Unknown; }

// Proved vs Refuted is a contradiction; anything involving Unknown is not.
constexpr bool contradicts(Verdict a, Verdict b) {
  return (a == Verdict::Proved && b == Verdict::Refuted) ||
         (a == Verdict::Refuted && b == Verdict::Proved);
}

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved:
      return "PROVED";
    case Verdict::Refuted:
      return "REFUTED";
    case Verdict::Unknown:
      break;
  }
  return "UNKNOWN";
}

inline std::ostream& operator<<(std::ostream& os, Verdict v) {
  return os << to_string(v);
}

}  // namespace efftree
