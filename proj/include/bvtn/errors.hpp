#pragma once

#include <stdexcept>
#include <string>

namespace bvtn {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// node validation
struct EmptyNodes : Error {
    EmptyNodes() : Error("node set is empty") {}
};
struct NonMonotonic : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};

// factorization / algebra
struct DegreeExceedsRows : Error {
    using Error::Error;
};
struct UnderflowDetected : Error {
    using Error::Error;
};
struct NotSquare : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct ZeroPivot : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};

// iterative kernels
struct NoConvergence : Error {
    using Error::Error;
};
struct PrecisionExhausted : Error {
    using Error::Error;
};

} // namespace bvtn
