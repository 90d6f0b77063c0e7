#include "efftree/signature.hpp"

#include <set>

#include "efftree/error.hpp"

namespace efftree {

std::ostream& operator<<(std::ostream& os, const Op& op) {
  os << op.name;
  if (op.arg) os << ' ' << *op.arg;
  return os;
}

Signature::Signature(std::vector<OpDecl> ops) : ops_(std::move(ops)) {
  std::set<std::string> seen;
  for (const auto& d : ops_) {
    if (!seen.insert(d.name).second)
      throw Error(ErrorKind::UnknownOp, "duplicate operation '" + d.name + "'");
    if (!d.arity.is_countable() && d.arity.count == 0)
      throw Error(ErrorKind::UnknownOp,
                  "operation '" + d.name + "' has zero arity");
  }
}

const OpDecl* Signature::find(const std::string& name) const {
  for (const auto& d : ops_)
    if (d.name == name) return &d;
  return nullptr;
}

const OpDecl& Signature::decl(const Op& op) const {
  const OpDecl* d = find(op.name);
  if (!d) throw Error(ErrorKind::UnknownOp, "unknown operation '" + op.name + "'");
  if (d->parametric != op.arg.has_value())
    throw Error(ErrorKind::UnknownOp,
                "operation '" + op.name + "' " +
                    (d->parametric ? "needs" : "takes no") + " argument");
  return *d;
}

}  // namespace efftree
