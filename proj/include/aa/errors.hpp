#pragma once

#include <stdexcept>
#include <string>

namespace aa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define AA_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

AA_DEFINE_ERROR(InvalidPoint);
AA_DEFINE_ERROR(NonHorizontalTangent);
AA_DEFINE_ERROR(NonHorizontalCurve);
AA_DEFINE_ERROR(InvalidDensity);
AA_DEFINE_ERROR(DegenerateDerivative);
AA_DEFINE_ERROR(NotQuasiconformalAtPoint);
AA_DEFINE_ERROR(ZeroVelocity);
AA_DEFINE_ERROR(InvalidParameters);
AA_DEFINE_ERROR(PerturbationLeavesDomain);
AA_DEFINE_ERROR(FoliationInvalid);
AA_DEFINE_ERROR(MSPViolated);
AA_DEFINE_ERROR(DistortionNotFiberConstant);
AA_DEFINE_ERROR(InvalidProblem);

#undef AA_DEFINE_ERROR

}  // namespace aa
