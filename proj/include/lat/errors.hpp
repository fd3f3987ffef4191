#pragma once

#include <stdexcept>
#include <string>

namespace lat {

// Error categories map onto CLI exit codes: validation errors exit 2,
// numeric guard trips exit 3.
enum class ErrorKind { Validation, NumericGuard };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define LAT_DEFINE_ERROR(Name, Kind)                         \
    struct Name : Error {                                    \
        explicit Name(const std::string& what)               \
            : Error(ErrorKind::Kind, #Name ": " + what) {}   \
    }

LAT_DEFINE_ERROR(NotMonic, Validation);
LAT_DEFINE_ERROR(DegreeTooSmall, Validation);
LAT_DEFINE_ERROR(NotTotallyReal, Validation);
LAT_DEFINE_ERROR(FieldMismatch, Validation);
LAT_DEFINE_ERROR(RankDeficient, Validation);
LAT_DEFINE_ERROR(SingularBasis, Validation);
LAT_DEFINE_ERROR(ZeroCoordinate, Validation);
LAT_DEFINE_ERROR(SingularUnitBasis, Validation);
LAT_DEFINE_ERROR(ZeroNorm, Validation);
LAT_DEFINE_ERROR(NonAdmissible, Validation);
LAT_DEFINE_ERROR(EmptyWindow, Validation);
LAT_DEFINE_ERROR(BadPrefix, Validation);
LAT_DEFINE_ERROR(BadInput, Validation);

LAT_DEFINE_ERROR(PrecisionExhausted, NumericGuard);
LAT_DEFINE_ERROR(VolumeLimitExceeded, NumericGuard);
LAT_DEFINE_ERROR(CutoffTooLarge, NumericGuard);
LAT_DEFINE_ERROR(TooLargeForExact, NumericGuard);

#undef LAT_DEFINE_ERROR

} // namespace lat
