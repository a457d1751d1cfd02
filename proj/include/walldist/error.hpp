#pragma once

#include <stdexcept>
#include <string>

namespace walldist {

/// Failure categories raised by the kit. The C API maps each one onto a
/// distinct status code (see walldist.h).
enum class ErrorKind {
  InvalidArgument,
  DimensionTooSmall,
  DegenerateMapping,
  SingularMetric,
  LineTooShort,
  ZeroPivot,
  NegativeRadicand,
  Divergence,
  UnknownCase,
  CflViolation,
  InvalidPolygon,
  InvalidExponent,
  BodyOutsideDomain,
  TooFewIterations,
  DimensionMismatch,
  ConfigParse,
  CaseMismatch,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace walldist
