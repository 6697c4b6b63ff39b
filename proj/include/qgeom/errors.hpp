#ifndef QGEOM_ERRORS_HPP
#define QGEOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qgeom {

// Base error; `code()` is the stable machine-readable identifier that the
// runner records in manifests.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define QGEOM_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                         \
    public:                                                             \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}    \
    }

QGEOM_DEFINE_ERROR(NotHermitian);
QGEOM_DEFINE_ERROR(NumericalFailure);
QGEOM_DEFINE_ERROR(DimensionMismatch);
QGEOM_DEFINE_ERROR(DegenerateGroundState);
QGEOM_DEFINE_ERROR(InvalidParameter);
QGEOM_DEFINE_ERROR(UnknownParameter);
QGEOM_DEFINE_ERROR(ForbiddenOperator);
QGEOM_DEFINE_ERROR(DimensionTooLarge);
QGEOM_DEFINE_ERROR(ZeroOverlap);
QGEOM_DEFINE_ERROR(StepTooLarge);
QGEOM_DEFINE_ERROR(NotNormalized);
QGEOM_DEFINE_ERROR(UndefinedUnderPBC);
QGEOM_DEFINE_ERROR(BasisNotConverged);
QGEOM_DEFINE_ERROR(FitFailure);
QGEOM_DEFINE_ERROR(ConfigParseError);
QGEOM_DEFINE_ERROR(UnknownTask);

#undef QGEOM_DEFINE_ERROR

} // namespace qgeom

#endif
