#pragma once

#include <numbers>

namespace nlpc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHcEvMeters = 1.2398419843320026e-6;  // h*c in eV*m

/// Vacuum wavelength (m) to angular frequency (rad/s).
inline constexpr double omega_from_wavelength(double lambda) {
  return 2.0 * kPi * kSpeedOfLight / lambda;
}

inline constexpr double wavelength_from_omega(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega;
}

// Normalized units: frequency in multiples of pi*c/period, wavevector in
// multiples of pi/period.
inline constexpr double omega_to_norm(double omega, double period) {
  return omega * period / (kPi * kSpeedOfLight);
}
inline constexpr double omega_from_norm(double omega_norm, double period) {
  return omega_norm * kPi * kSpeedOfLight / period;
}
inline constexpr double k_to_norm(double k, double period) { return k * period / kPi; }
inline constexpr double k_from_norm(double k_norm, double period) {
  return k_norm * kPi / period;
}

}  // namespace nlpc
