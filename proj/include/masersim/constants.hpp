// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_CONSTANTS_HPP
#define MASERSIM_CONSTANTS_HPP

namespace masersim::constants {

// CODATA 2018 values, SI.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double planck_h = 6.62607015e-34;    // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double mu0 = 1.25663706212e-6;       // N/A^2
inline constexpr double c_light = 2.99792458e8;       // m/s
inline constexpr double pi = 3.14159265358979323846;

// Electron gyromagnetic ratio / 2pi in MHz/mT.
// The rounded value is what X-band EPR practice quotes; the CODATA-precision
// alternative is g_e mu_B / h.
inline constexpr double gamma_e_mhz_per_mt_rounded = 28.0;
inline constexpr double gamma_e_mhz_per_mt_codata = 28.0249514242;

// Gyromagnetic ratio in SI angular units, rad/(s T), from MHz/mT.
inline constexpr double gamma_e_si(double gamma_mhz_per_mt) {
  return 2.0 * pi * gamma_mhz_per_mt * 1e9;
}

}  // namespace masersim::constants

#endif
