#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace efftree {

// An observation token. Tokens are small s-expression data (naturals,
// symbols, lists) so that new effects can pick their own shapes:
// `term`, `(tl 3)`, `may`, `(st 0 1)`, `(in left (bits left right))`.
class Obs {
 public:
  Obs() : data_(std::string("term")) {}
  static Obs nat(std::uint64_t n) { return Obs(n); }
  static Obs sym(std::string s) { return Obs(std::move(s)); }
  static Obs list(std::vector<Obs> items) { return Obs(std::move(items)); }

  bool is_nat() const { return data_.index() == 0; }
  bool is_sym() const { return data_.index() == 1; }
  bool is_list() const { return data_.index() == 2; }
  std::uint64_t as_nat() const { return std::get<0>(data_); }
  const std::string& as_sym() const { return std::get<1>(data_); }
  const std::vector<Obs>& items() const { return std::get<2>(data_); }

  bool is_sym(const std::string& s) const { return is_sym() && as_sym() == s; }
  // (head args...) with the given head symbol and argument count.
  bool is_form(const std::string& head, std::size_t nargs) const {
    return is_list() && items().size() == nargs + 1 && items()[0].is_sym(head);
  }

  friend bool operator==(const Obs& a, const Obs& b) { return a.data_ == b.data_; }
  friend bool operator!=(const Obs& a, const Obs& b) { return !(a == b); }
  friend bool operator<(const Obs& a, const Obs& b) { return a.data_ < b.data_; }

 private:
  template <class T>
  explicit Obs(T v) : data_(std::move(v)) {}

  std::variant<std::uint64_t, std::string, std::vector<Obs>> data_;
};

std::ostream& operator<<(std::ostream& os, const Obs& o);
std::string to_string(const Obs& o);

}  // namespace efftree
