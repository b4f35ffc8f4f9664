#pragma once

#include <numbers>

namespace afc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular frequency helpers. All model code works in rad/s.
constexpr double hz(double f) { return kTwoPi * f; }
constexpr double khz(double f) { return kTwoPi * 1e3 * f; }
constexpr double mhz(double f) { return kTwoPi * 1e6 * f; }
constexpr double to_hz(double omega) { return omega / kTwoPi; }

constexpr double us(double t) { return t * 1e-6; }
constexpr double um(double x) { return x * 1e-6; }
constexpr double mm(double x) { return x * 1e-3; }
constexpr double nm(double x) { return x * 1e-9; }
constexpr double deg(double a) { return a * std::numbers::pi / 180.0; }

}  // namespace afc
