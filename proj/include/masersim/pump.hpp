// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_PUMP_HPP
#define MASERSIM_PUMP_HPP

#include <vector>

#include "masersim/errors.hpp"

namespace masersim {

struct PumpPulse {
  double fluence_mj_per_cm2 = 23.87;
  double duration_ns = 7.0;
  double wavelength_nm = 590.0;
  double illuminated_area_cm2 = 0.06;

  void validate() const;
};

struct OpticalMedium {
  double absorption_per_mm = 0.32;              // small-signal absorption coefficient
  double ground_state_density_per_m3 = 3.242349e24;  // from 1000 ppm doping
  double isc_triplet_yield = 0.2101352;         // effective yield per absorbed photon (calibrated)
  double thickness_mm = 1.0;
  double crystal_volume_mm3 = 6.0;

  void validate() const;
};

// Triplet density in the T_0 and T_-1 sublevels versus light penetration
// depth, immediately after the pump pulse.
struct DepthProfile {
  std::vector<double> depth_mm;
  std::vector<double> triplet_density_per_m3;
  double n_total = 0.0;   // trapezoidal integral over depth x illuminated area
};

// Saturable Beer-Lambert propagation with ground-state depletion over the
// pulse: each molecule absorbs with probability 1 - exp(-sigma F(z)), and the
// photon fluence obeys dF/dz = -n_g (1 - exp(-sigma F)), which integrates in
// closed form. sublevel_fraction restricts the yield to T_0 + T_-1.
// 200 uniform depth cells, trapezoidal quadrature.
DepthProfile depth_profile(const PumpPulse& pulse, const OpticalMedium& medium,
                           double sublevel_fraction = 0.88, int n_cells = 200);

// Delta N = polarization x N_total.
double inverted_spins(double n_total, double polarization);

// Two-level polarization (p_upper - p_lower) / (p_upper + p_lower).
double two_level_polarization(double p_upper, double p_lower);

struct LinewidthCalibration {
  double ratio = 0.0;                // R = cavity linewidth / spin linewidth
  double delta_n_prime = 0.0;        // R * delta N
  bool ratio_above_unity = false;    // calibration meaningless when R > 1
};

// Calibrate the inverted spin count by the linewidth ratio R = dw_c / dw_s.
LinewidthCalibration linewidth_calibration(double delta_n, double cavity_linewidth_mhz,
                                           double spin_linewidth_mhz);

// Delta n = Delta N' / V_crystal, in 1/m^3.
double inverted_density(double delta_n_prime, double crystal_volume_mm3);

}  // namespace masersim

#endif
