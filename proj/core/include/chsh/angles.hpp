#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace chsh {

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap an angle into [-pi, pi). The upper endpoint maps down: wrap(pi) == -pi.
inline double wrap_angle(double x) {
    double w = x - kTwoPi * std::floor((x + kPi) / kTwoPi);
    if (w >= kPi) w -= kTwoPi;
    if (w < -kPi) w += kTwoPi;
    return w;
}

// Parse an angle given either as decimal radians ("0.7853982", "-1e-3") or as
// a pi token ("pi", "-pi/4", "3pi/4", "0.5pi"). An optional "/q" divisor is
// accepted in both forms. Throws std::invalid_argument on malformed input.
double parse_angle(std::string_view token);

}  // namespace chsh
