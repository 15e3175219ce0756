// Unit conventions used throughout:
//   time            : microseconds (us)
//   angular freqs   : rad/us (Rabi frequencies, detunings, spectral grids)
//   decay rates     : 1/us
// Configured values carry explicit units in their names (kHz, MHz, us, W/cm^2).
// A configured frequency nu in kHz maps to the angular rate Omega = 2*pi*nu;
// a configured decay rate in kHz is an inverse lifetime, 1 kHz = 1e-3/us.

#pragma once

#include <numbers>

namespace slowlight::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Ordinary frequency -> angular frequency in rad/us.
inline constexpr double angular_from_kHz(double nu_kHz) {
  return two_pi * nu_kHz * 1e-3;
}
inline constexpr double angular_from_MHz(double nu_MHz) {
  return two_pi * nu_MHz;
}
inline constexpr double kHz_from_angular(double omega) {
  return omega / two_pi * 1e3;
}

// Decay rates: kHz -> 1/us (no 2*pi; these are inverse lifetimes).
inline constexpr double rate_from_kHz(double rate_kHz) { return rate_kHz * 1e-3; }
inline constexpr double kHz_from_rate(double rate) { return rate * 1e3; }

}  // namespace slowlight::units
