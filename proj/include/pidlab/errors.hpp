#ifndef PIDLAB_ERRORS_HPP
#define PIDLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pidlab {

// Base class for every domain error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input validation on distributions.
struct NegativeProbability : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct DuplicateCell : Error { using Error::Error; };
struct CellCapExceeded : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct NameCollision : Error { using Error::Error; };
struct ZeroMassCondition : Error { using Error::Error; };
struct EmptySampleSet : Error { using Error::Error; };
struct OutOfRangeValue : Error { using Error::Error; };

// Measure-level contract violations.
struct OverlappingSets : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct WrongArity : Error { using Error::Error; };
struct KOutOfRange : Error { using Error::Error; };

// Fixture / simulation / analysis inputs.
struct MissingSeed : Error { using Error::Error; };
struct TooManySites : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct EmptyHistogram : Error { using Error::Error; };
struct DegenerateSeries : Error { using Error::Error; };
struct UnknownColumn : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Raised when a quantity that is nonnegative by theory comes out more
// negative than floating-point noise can explain, or when two algebraic
// routes to the same value disagree.
struct InternalConsistency : Error { using Error::Error; };

}  // namespace pidlab

#endif  // PIDLAB_ERRORS_HPP
