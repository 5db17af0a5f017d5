// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/pump.hpp"

#include <cmath>

#include "masersim/constants.hpp"

namespace masersim {

void PumpPulse::validate() const {
  if (!(fluence_mj_per_cm2 >= 0))
    throw ValidationError("pump: fluence must be >= 0");
  if (!(duration_ns > 0) || !(wavelength_nm > 0) || !(illuminated_area_cm2 > 0))
    throw ValidationError("pump: duration, wavelength and area must be positive");
}

void OpticalMedium::validate() const {
  if (!(absorption_per_mm > 0) || !(ground_state_density_per_m3 > 0) ||
      !(thickness_mm > 0) || !(crystal_volume_mm3 > 0))
    throw ValidationError("medium: optical parameters must be positive");
  if (!(isc_triplet_yield > 0 && isc_triplet_yield <= 1))
    throw ValidationError("medium: triplet yield must lie in (0, 1]");
}

DepthProfile depth_profile(const PumpPulse& pulse, const OpticalMedium& medium,
                           double sublevel_fraction, int n_cells) {
  pulse.validate();
  medium.validate();
  if (n_cells < 2) throw ValidationError("depth_profile: need at least 2 cells");

  const double alpha = medium.absorption_per_mm * 1e3;        // 1/m
  const double n_g = medium.ground_state_density_per_m3;      // 1/m^3
  const double sigma = alpha / n_g;                           // m^2
  const double photon_j =
      constants::planck_h * constants::c_light / (pulse.wavelength_nm * 1e-9);
  const double f0 = pulse.fluence_mj_per_cm2 * 10.0 / photon_j;  // photons/m^2
  const double area_m2 = pulse.illuminated_area_cm2 * 1e-4;
  const double thickness_m = medium.thickness_mm * 1e-3;

  DepthProfile out;
  out.depth_mm.resize(n_cells + 1);
  out.triplet_density_per_m3.resize(n_cells + 1);

  // dF/dz = -n_g (1 - exp(-sigma F)) has the closed form
  // exp(sigma F(z)) = 1 + (exp(sigma F0) - 1) exp(-alpha z).
  const double expm1_s0 = std::expm1(sigma * f0);
  for (int i = 0; i <= n_cells; ++i) {
    const double z = thickness_m * i / n_cells;
    const double fz = std::log1p(expm1_s0 * std::exp(-alpha * z)) / sigma;
    const double excited_fraction = -std::expm1(-sigma * fz);
    out.depth_mm[i] = z * 1e3;
    out.triplet_density_per_m3[i] =
        sublevel_fraction * medium.isc_triplet_yield * n_g * excited_fraction;
  }

  double integral = 0.0;  // trapezoid over depth
  const double dz = thickness_m / n_cells;
  for (int i = 0; i < n_cells; ++i)
    integral += 0.5 * dz *
                (out.triplet_density_per_m3[i] + out.triplet_density_per_m3[i + 1]);
  out.n_total = integral * area_m2;
  return out;
}

double two_level_polarization(double p_upper, double p_lower) {
  if (!(p_upper + p_lower > 0))
    throw ValidationError("polarization: population sum must be positive");
  return (p_upper - p_lower) / (p_upper + p_lower);
}

double inverted_spins(double n_total, double polarization) {
  if (polarization < -1.0 || polarization > 1.0)
    throw ValidationError("inverted_spins: polarization must lie in [-1, 1]");
  return polarization * n_total;
}

LinewidthCalibration linewidth_calibration(double delta_n, double cavity_linewidth_mhz,
                                           double spin_linewidth_mhz) {
  if (!(cavity_linewidth_mhz > 0) || !(spin_linewidth_mhz > 0))
    throw ValidationError("linewidth_calibration: linewidths must be positive");
  LinewidthCalibration out;
  out.ratio = cavity_linewidth_mhz / spin_linewidth_mhz;
  out.delta_n_prime = out.ratio * delta_n;
  out.ratio_above_unity = out.ratio > 1.0;
  return out;
}

double inverted_density(double delta_n_prime, double crystal_volume_mm3) {
  if (!(crystal_volume_mm3 > 0))
    throw ValidationError("inverted_density: volume must be positive");
  return delta_n_prime / (crystal_volume_mm3 * 1e-9);  // mm^3 -> m^3
}

}  // namespace masersim
