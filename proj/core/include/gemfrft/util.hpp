#ifndef GEMFRFT_UTIL_HPP
#define GEMFRFT_UTIL_HPP

#include <cmath>
#include <numbers>

namespace gemfrft {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wrap an angle to (-pi, pi].
inline double wrap_pi(double x) {
    double w = std::remainder(x, two_pi);
    if (w <= -pi) w += two_pi;
    return w;
}

} // namespace gemfrft

#endif
