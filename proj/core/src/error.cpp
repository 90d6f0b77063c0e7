#include "efftree/error.hpp"

namespace efftree {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnboundRef: return "UnboundRef";
    case ErrorKind::UnknownOp: return "UnknownOp";
    case ErrorKind::UnguardedCycle: return "UnguardedCycle";
    case ErrorKind::NonThunkLeaf: return "NonThunkLeaf";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::InadmissibleArgument: return "InadmissibleArgument";
    case ErrorKind::UnknownObservation: return "UnknownObservation";
    case ErrorKind::CarrierTooLarge: return "CarrierTooLarge";
    case ErrorKind::IllTypedCandidate: return "IllTypedCandidate";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Error";
}

}  // namespace efftree
