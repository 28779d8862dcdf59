#pragma once

#include <stdexcept>
#include <string>

namespace ftc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPrime : Error { using Error::Error; };
struct ZeroInverse : Error { using Error::Error; };
struct NotHomogeneous : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct EmptyGenerators : Error { using Error::Error; };
struct ExponentOverflow : Error { using Error::Error; };
struct NotCofinite : Error { using Error::Error; };
struct DenominatorZero : Error { using Error::Error; };
struct PDividesDenominator : Error { using Error::Error; };
struct HypothesisFailed : Error { using Error::Error; };
struct UnbalancedDegrees : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Fatal consistency failures: a certified result contradicts an oracle
// (or a published identity fails to hold). Most likely an implementation
// bug; callers abort loudly and the CLI maps these to exit code 3.
struct ConsistencyFailure : Error { using Error::Error; };
struct SingularSystem : ConsistencyFailure { using ConsistencyFailure::ConsistencyFailure; };
struct ZeroDeterminant : ConsistencyFailure { using ConsistencyFailure::ConsistencyFailure; };

}  // namespace ftc
