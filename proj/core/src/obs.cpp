#include "efftree/obs.hpp"

#include <sstream>

namespace efftree {

std::ostream& operator<<(std::ostream& os, const Obs& o) {
  if (o.is_nat()) return os << o.as_nat();
  if (o.is_sym()) return os << o.as_sym();
  os << '(';
  bool first = true;
  for (const auto& item : o.items()) {
    if (!first) os << ' ';
    first = false;
    os << item;
  }
  return os << ')';
}

std::string to_string(const Obs& o) {
  std::ostringstream os;
  os << o;
  return os.str();
}

}  // namespace efftree
