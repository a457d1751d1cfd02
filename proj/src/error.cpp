#include <cmath>

#include "walldist/error.hpp"
#include "walldist/field.hpp"

namespace walldist {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionTooSmall: return "dimension too small";
    case ErrorKind::DegenerateMapping: return "degenerate mapping";
    case ErrorKind::SingularMetric: return "singular metric";
    case ErrorKind::LineTooShort: return "line too short";
    case ErrorKind::ZeroPivot: return "zero pivot";
    case ErrorKind::NegativeRadicand: return "negative radicand";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::UnknownCase: return "unknown case";
    case ErrorKind::CflViolation: return "cfl violation";
    case ErrorKind::InvalidPolygon: return "invalid polygon";
    case ErrorKind::InvalidExponent: return "invalid exponent";
    case ErrorKind::BodyOutsideDomain: return "body outside domain";
    case ErrorKind::TooFewIterations: return "too few iterations";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::ConfigParse: return "config parse error";
    case ErrorKind::CaseMismatch: return "case mismatch";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

bool ScalarField::all_finite() const noexcept {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace walldist
