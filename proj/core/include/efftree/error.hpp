#pragma once

#include <stdexcept>
#include <string>

namespace efftree {

enum class ErrorKind {
  UnboundRef,
  UnknownOp,
  UnguardedCycle,
  NonThunkLeaf,
  SortMismatch,
  InadmissibleArgument,
  UnknownObservation,
  CarrierTooLarge,
  IllTypedCandidate,
  ParseError,
  Usage,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. The kind is stable; the message is
// for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& what)
      : Error(ErrorKind::ParseError, std::to_string(line) + ":" +
                                         std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace efftree
