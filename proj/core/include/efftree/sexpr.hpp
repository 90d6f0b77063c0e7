#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace efftree {

// S-expression with source positions. `;` starts a line comment.
struct Sexp {
  bool list = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 1;
  int col = 1;

  bool is_atom() const { return !list; }
  bool is_atom(std::string_view s) const { return !list && atom == s; }
  bool is_number() const;
  // (head ...) with head an atom.
  bool is_form(std::string_view head) const {
    return list && !items.empty() && items[0].is_atom(head);
  }
  const std::string& head() const;  // "" unless is a non-empty list
};

std::vector<Sexp> read_sexps(std::string_view text);
Sexp read_sexp(std::string_view text);  // exactly one datum

std::ostream& operator<<(std::ostream& os, const Sexp& s);
std::string to_string(const Sexp& s);

[[noreturn]] void parse_fail(const Sexp& at, const std::string& what);

}  // namespace efftree
