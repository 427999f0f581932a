#pragma once

#include <stdexcept>
#include <string>

namespace llt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompatibleLattice : Error { using Error::Error; };
struct MassBudgetExceeded : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };
struct InvalidModulus : Error { using Error::Error; };
struct ThetaOutOfRange : Error { using Error::Error; };
struct DegenerateTheta : Error { using Error::Error; };
struct InvalidBlock : Error { using Error::Error; };
struct IndexOrder : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct RangeExceeded : Error { using Error::Error; };
struct InvalidExponent : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct DivergenceViolated : Error { using Error::Error; };
struct NotIID : Error { using Error::Error; };
struct NotSimulable : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace llt
