#pragma once

#include <stdexcept>
#include <string>

namespace otray {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OTRAY_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// manifold kernels
OTRAY_DEFINE_ERROR(AntipodalError);
OTRAY_DEFINE_ERROR(DegenerateGradientError);
OTRAY_DEFINE_ERROR(InvalidPointError);

// measures and the dual solver
OTRAY_DEFINE_ERROR(UnbalancedError);
OTRAY_DEFINE_ERROR(InfeasibleError);
OTRAY_DEFINE_ERROR(InvalidMeasureError);

// rays, sheaves and cylinders
OTRAY_DEFINE_ERROR(AmbiguousDirectionError);
OTRAY_DEFINE_ERROR(NotInTransportSetError);
OTRAY_DEFINE_ERROR(EmptyPartitionError);
OTRAY_DEFINE_ERROR(InsufficientRayLengthError);
OTRAY_DEFINE_ERROR(OutOfWindowError);

// densities
OTRAY_DEFINE_ERROR(SingularFrameError);
OTRAY_DEFINE_ERROR(DomainError);
OTRAY_DEFINE_ERROR(WindowOrderError);

// quadrature and disintegration
OTRAY_DEFINE_ERROR(FieldMismatchError);
OTRAY_DEFINE_ERROR(OverlapError);

// divergence
OTRAY_DEFINE_ERROR(NotOnEdgeError);
OTRAY_DEFINE_ERROR(EdgeIntersectsCylinderError);

// harness
OTRAY_DEFINE_ERROR(ParseError);
OTRAY_DEFINE_ERROR(ValidationError);
OTRAY_DEFINE_ERROR(UnknownCheckError);
OTRAY_DEFINE_ERROR(IoError);

#undef OTRAY_DEFINE_ERROR

}  // namespace otray
