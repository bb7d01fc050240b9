#pragma once

#include <stdexcept>
#include <string>

namespace msk {

enum class ErrorKind {
  DivisionByZero,
  UnknownCoordinate,
  PoleAtPoint,
  SyntaxError,
  ChartMismatch,
  DegreeUnderflow,
  DegreeMismatch,
  Degenerate,
  NotHamiltonian,
  NotInD,
  ProjectionNotInjective,
  PointNotOnLeafSpan,
  MissingUnitComplement,
  MissingRightExtension,
  ComplementNotInKernel,
  NonConstantFrame,
  BadDegree,
  BadParameters,
  JacobiFails,
  PairingNotInvariant,
  UnknownCatalogName,
  UnknownName,
  ScenarioError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the engine carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures remember the byte offset into the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace msk
