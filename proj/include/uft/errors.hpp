#pragma once

#include <stdexcept>
#include <string>

namespace uft {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ZeroNormFeature : Error { using Error::Error; };
struct UnbalancedInput : Error { using Error::Error; };
struct NonFiniteDual : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NegativePlanEntry : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct Diverged : Error { using Error::Error; };
struct UnsupportedScale : Error { using Error::Error; };
struct TooFewChannels : Error { using Error::Error; };
struct NotSquare : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct EmptyRow : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace uft
