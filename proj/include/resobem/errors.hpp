#ifndef RESOBEM_ERRORS_HPP
#define RESOBEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resobem {

/// Base class for all numerical / configuration failures raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonRegularCurve : Error {
    using Error::Error;
};
struct SelfIntersectingCurve : Error {
    using Error::Error;
};
struct OverlapError : Error {
    using Error::Error;
};
struct BoundaryTooClose : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct CoincidentPoints : Error {
    using Error::Error;
};
struct NearSingularSystem : Error {
    using Error::Error;
};
struct ContourThroughPole : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct CountMismatch : Error {
    using Error::Error;
};
struct DegenerateContrast : Error {
    using Error::Error;
};
struct IllConditioned : Error {
    using Error::Error;
};
struct SingularGram : Error {
    using Error::Error;
};
struct AscentMismatch : Error {
    using Error::Error;
};
struct TooCloseToBoundary : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace resobem

#endif
