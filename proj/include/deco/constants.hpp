#pragma once

namespace deco::cgs {

// CODATA 2018 values in CGS units. The evolution engine works in natural
// units (hbar = 1); only laboratory-unit estimators use these explicitly.
inline constexpr double hbar = 1.054571817e-27;      // erg s
inline constexpr double k_boltzmann = 1.380649e-16;  // erg / K
inline constexpr double c_light = 2.99792458e10;     // cm / s
inline constexpr double standard_gravity = 980.665;  // cm / s^2

inline constexpr double zeta3 = 1.2020569031595943;  // Riemann zeta(3)
inline constexpr double pi = 3.14159265358979323846;

} // namespace deco::cgs
