#pragma once

#include <stdexcept>
#include <string>

namespace cedrf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CEDRF_DEFINE_ERROR(Name)                 \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    }

CEDRF_DEFINE_ERROR(DimensionMismatch);
CEDRF_DEFINE_ERROR(InvalidMatrix);
CEDRF_DEFINE_ERROR(NotSymmetric);
CEDRF_DEFINE_ERROR(NoConvergence);
CEDRF_DEFINE_ERROR(NotPositiveDefinite);
CEDRF_DEFINE_ERROR(InvalidModel);
CEDRF_DEFINE_ERROR(EmptySpectrum);
CEDRF_DEFINE_ERROR(ConditionViolated);
CEDRF_DEFINE_ERROR(NonPositiveInput);
CEDRF_DEFINE_ERROR(InvalidGrid);
CEDRF_DEFINE_ERROR(InvalidSampleCount);
CEDRF_DEFINE_ERROR(InvalidArgument);
CEDRF_DEFINE_ERROR(FileNotFound);
CEDRF_DEFINE_ERROR(ParseError);
CEDRF_DEFINE_ERROR(IoError);

#undef CEDRF_DEFINE_ERROR

}  // namespace cedrf
