#pragma once

// Standard-normal density and tail functions.
//
// Everything goes through std::erfc, which keeps full relative precision in
// the upper tail (no 1 - Phi cancellation) and underflows gracefully to 0
// somewhere past z ~ 38.

#include <cmath>
#include <numbers>

namespace twoseq::normal {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684759;

inline double pdf(double z) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

/// Survival function 1 - Phi(z).
inline double sf(double z) noexcept {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

inline double cdf(double z) noexcept {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace twoseq::normal
