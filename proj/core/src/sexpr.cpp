#include "efftree/sexpr.hpp"

#include <cctype>
#include <sstream>

#include "efftree/error.hpp"

namespace efftree {

bool Sexp::is_number() const {
  if (list || atom.empty() || atom.size() > 19) return false;
  for (char c : atom)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

const std::string& Sexp::head() const {
  static const std::string none;
  return list && !items.empty() && items[0].is_atom() ? items[0].atom : none;
}

void parse_fail(const Sexp& at, const std::string& what) {
  throw ParseError(at.line, at.col, what);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Sexp> all() {
    std::vector<Sexp> out;
    for (skip(); pos_ < text_.size(); skip()) out.push_back(datum());
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Sexp datum() {
    Sexp s;
    s.line = line_;
    s.col = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError(line_, col_, "unexpected ')'");
    if (c == '(') {
      s.list = true;
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size())
          throw ParseError(s.line, s.col, "unclosed '('");
        if (text_[pos_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(datum());
      }
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      s.atom += c;
      advance();
    }
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Sexp> read_sexps(std::string_view text) { return Reader(text).all(); }

Sexp read_sexp(std::string_view text) {
  auto all = read_sexps(text);
  if (all.size() != 1) {
    if (all.empty()) throw ParseError(1, 1, "empty input");
    parse_fail(all[1], "expected a single expression");
  }
  return all[0];
}

std::ostream& operator<<(std::ostream& os, const Sexp& s) {
  if (!s.list) return os << s.atom;
  os << '(';
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) os << ' ';
    os << s.items[i];
  }
  return os << ')';
}

std::string to_string(const Sexp& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace efftree
