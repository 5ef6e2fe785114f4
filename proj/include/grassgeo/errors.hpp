#pragma once

#include <stdexcept>
#include <string>

namespace grassgeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GRASSGEO_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    }

GRASSGEO_DEFINE_ERROR(RankDeficient);
GRASSGEO_DEFINE_ERROR(NoConvergence);
GRASSGEO_DEFINE_ERROR(DimensionMismatch);
GRASSGEO_DEFINE_ERROR(InvalidDimension);
GRASSGEO_DEFINE_ERROR(MixedDimensions);
GRASSGEO_DEFINE_ERROR(DuplicateVertex);
GRASSGEO_DEFINE_ERROR(Unreachable);
GRASSGEO_DEFINE_ERROR(NotCompatible);
GRASSGEO_DEFINE_ERROR(InsufficientAmbient);
GRASSGEO_DEFINE_ERROR(DegenerateDirection);
GRASSGEO_DEFINE_ERROR(NotUnitary);
GRASSGEO_DEFINE_ERROR(InvalidDescriptor);
GRASSGEO_DEFINE_ERROR(SingularOperator);
GRASSGEO_DEFINE_ERROR(NotOrthogonalityPreserving);
GRASSGEO_DEFINE_ERROR(OracleDimensionError);
GRASSGEO_DEFINE_ERROR(OracleDomainError);
GRASSGEO_DEFINE_ERROR(IntersectionNotALine);
GRASSGEO_DEFINE_ERROR(StarImageNotInStar);
GRASSGEO_DEFINE_ERROR(RetryExhausted);

#undef GRASSGEO_DEFINE_ERROR

/// Raised when operator reconstruction aborts; `stage` names the pipeline
/// step that failed: "line-extraction", "normalization", "endo-decision"
/// or "validation".
class ReconstructionFailed : public Error {
public:
    ReconstructionFailed(std::string stage, const std::string& what)
        : Error("reconstruction failed at stage '" + stage + "': " + what),
          stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace grassgeo
