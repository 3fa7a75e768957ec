#pragma once

#include <stdexcept>
#include <string>

namespace idflow {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct TraceNotOne : Error { using Error::Error; };
struct NegativeEigenvalue : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct UnsupportedDerivative : Error { using Error::Error; };
struct EvaluationFailed : Error { using Error::Error; };
struct NegativeDeterminant : Error { using Error::Error; };
struct SingularMetric : Error { using Error::Error; };
struct GridTooShort : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct PoleOnGrid : Error { using Error::Error; };
struct Pole : Error { using Error::Error; };
struct OutsideBall : Error { using Error::Error; };
struct PureBoundary : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace idflow
