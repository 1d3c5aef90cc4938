#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPECTRAL_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// tensor I/O
SPECTRAL_DEFINE_ERROR(FormatError);
SPECTRAL_DEFINE_ERROR(UnsupportedLayout);
SPECTRAL_DEFINE_ERROR(DataError);
SPECTRAL_DEFINE_ERROR(IoError);
SPECTRAL_DEFINE_ERROR(ManifestError);
SPECTRAL_DEFINE_ERROR(VersionError);

// numerics
SPECTRAL_DEFINE_ERROR(ShapeError);
SPECTRAL_DEFINE_ERROR(RangeError);
SPECTRAL_DEFINE_ERROR(EmptyEnsembleError);
SPECTRAL_DEFINE_ERROR(InsufficientDataError);
SPECTRAL_DEFINE_ERROR(DegenerateInputError);
SPECTRAL_DEFINE_ERROR(SingularKernelError);
SPECTRAL_DEFINE_ERROR(NonPositiveEpsilonError);

#undef SPECTRAL_DEFINE_ERROR

}  // namespace spectral
