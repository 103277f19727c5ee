#pragma once

#include <numbers>

namespace edgebraid::units {

// Energy unit t0 = 2 pi x 4 MHz (angular). Dimensionless times are t0 * t.
inline constexpr double kT0Hz = 4.0e6;
inline constexpr double kT0 = 2.0 * std::numbers::pi * kT0Hz;  // rad/s

inline constexpr double seconds_to_t0(double s) { return s * kT0; }
inline constexpr double us_to_t0(double us) { return us * 1e-6 * kT0; }
inline constexpr double ns_to_t0(double ns) { return ns * 1e-9 * kT0; }
inline constexpr double t0_to_us(double x) { return x / kT0 * 1e6; }

inline constexpr double mhz_to_rad(double mhz) { return 2.0 * std::numbers::pi * mhz * 1e6; }
inline constexpr double ghz_to_rad(double ghz) { return 2.0 * std::numbers::pi * ghz * 1e9; }
inline constexpr double khz_to_rad(double khz) { return 2.0 * std::numbers::pi * khz * 1e3; }
inline constexpr double rad_to_mhz(double w) { return w / (2.0 * std::numbers::pi) / 1e6; }
inline constexpr double rad_to_hz(double w) { return w / (2.0 * std::numbers::pi); }

}  // namespace edgebraid::units
