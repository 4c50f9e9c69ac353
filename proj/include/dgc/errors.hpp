#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>

namespace dgc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DGC_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

DGC_DEFINE_ERROR(DimensionMismatch)
DGC_DEFINE_ERROR(CompositionNonzero)
DGC_DEFINE_ERROR(TruncationExceeded)
DGC_DEFINE_ERROR(TruncationTooSmall)
DGC_DEFINE_ERROR(MixedAlgebra)
DGC_DEFINE_ERROR(MissingCorner)
DGC_DEFINE_ERROR(InvalidDefinition)
DGC_DEFINE_ERROR(DifferentialNotSquareZero)
DGC_DEFINE_ERROR(NotActionMonotone)
DGC_DEFINE_ERROR(NotACycle)
DGC_DEFINE_ERROR(NotTopDegree)
DGC_DEFINE_ERROR(ChainMapViolation)
DGC_DEFINE_ERROR(EndpointMismatch)
DGC_DEFINE_ERROR(ActionsMissing)
DGC_DEFINE_ERROR(ActionNotDescending)
DGC_DEFINE_ERROR(SpectralSequenceMismatch)

#undef DGC_DEFINE_ERROR

/// Malformed algebraic expression; `position` is a 0-based character offset.
class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace dgc
