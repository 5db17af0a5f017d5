// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/metrics.hpp"

#include <cmath>

namespace masersim {

void ResonatorParams::validate() const {
  if (!(f_c_ghz > 0)) throw ValidationError("resonator: frequency must be positive");
  if (!(q0 > 0) || !(qe > 0) || !(q_loaded > 0))
    throw ValidationError("resonator: quality factors must be positive");
  if (std::abs(1.0 / q_loaded - 1.0 / q0 - 1.0 / qe) > 1e-9)
    throw ValidationError("resonator: 1/QL must equal 1/Q0 + 1/Qe");
  if (!(coupling_k > 0)) throw ValidationError("resonator: coupling k must be positive");
  if (!(v_mode_cm3 > 0)) throw ValidationError("resonator: mode volume must be positive");
}

void GainMedium::validate() const {
  if (!(delta_n_per_m3 > 0))
    throw ValidationError("medium: inverted density must be positive");
  if (!(sigma_sq > 0 && sigma_sq <= 1))
    throw ValidationError("medium: sigma^2 must lie in (0, 1]");
  if (!(eta > 0 && eta <= 1)) throw ValidationError("medium: eta must lie in (0, 1]");
  if (!(t2_us > 0)) throw ValidationError("medium: T2 must be positive");
  if (!(v_crystal_mm3 > 0)) throw ValidationError("medium: volume must be positive");
}

std::string to_string(MaserRegime regime) {
  switch (regime) {
    case MaserRegime::subthreshold: return "subthreshold";
    case MaserRegime::amplifier: return "amplifier";
    case MaserRegime::oscillator: return "oscillator";
  }
  return "unknown";
}

double magnetic_q(const GainMedium& medium, double gamma_e_mhz_per_mt) {
  medium.validate();
  if (!(gamma_e_mhz_per_mt > 0))
    throw ValidationError("magnetic_q: gamma_e must be positive");
  const double gamma_si = constants::gamma_e_si(gamma_e_mhz_per_mt);
  return 1.0 / (gamma_si * gamma_si * constants::mu0 * constants::hbar *
                medium.delta_n_per_m3 * medium.sigma_sq * medium.eta *
                medium.t2_us * 1e-6);
}

MaserRegime classify_regime(double qm, double q0, double qe) {
  if (!(qm > 0) || !(q0 > 0) || !(qe > 0))
    throw ValidationError("classify_regime: quality factors must be positive");
  const double km = 1.0 / qm;
  if (km <= 1.0 / q0) return MaserRegime::subthreshold;
  if (km < 1.0 / q0 + 1.0 / qe) return MaserRegime::amplifier;
  return MaserRegime::oscillator;
}

double calculated_gain_db(double qm, double q0, double qe) {
  const double num = 1.0 / qe - 1.0 / q0 + 1.0 / qm;
  const double den = 1.0 / qe + 1.0 / q0 - 1.0 / qm;
  if (!(den > 0))
    throw AtOrAboveOscillation("calculated_gain: at or above the oscillation boundary");
  const double ratio = num / den;
  return 10.0 * std::log10(ratio * ratio);
}

double calculated_bandwidth_mhz(double qm, double q0, double qe, double f0_ghz) {
  const double inv = 1.0 / q0 + 1.0 / qe - 1.0 / qm;
  if (!(inv > 0))
    throw AtOrAboveOscillation("calculated_bandwidth: at or above the oscillation boundary");
  return f0_ghz * 1e3 * inv;
}

double spin_temperature_k(double p_upper, double p_lower, double f_s_ghz) {
  if (!(p_upper + p_lower > 0))
    throw ValidationError("spin_temperature: population sum must be positive");
  if (p_upper == p_lower)
    throw InfiniteTemperature("spin_temperature: equal populations");
  const double r = (p_lower - p_upper) / (p_lower + p_upper);
  const double omega_s = 2.0 * constants::pi * f_s_ghz * 1e9;
  return constants::hbar * omega_s / (2.0 * constants::k_boltzmann * std::atanh(r));
}

NoiseResult noise_temperature(double t_spin_k, double qm, double q0, double t_bath_k) {
  if (!(qm > 0) || !(q0 > 0))
    throw ValidationError("noise_temperature: quality factors must be positive");
  NoiseResult out;
  out.t_noise_k = std::abs(t_spin_k) + (qm / q0) * t_bath_k;
  out.noise_figure_db = 10.0 * std::log10(1.0 + out.t_noise_k / 290.0);
  return out;
}

double rise_time_us(double q_loaded, double f_c_ghz) {
  if (!(q_loaded > 0) || !(f_c_ghz > 0))
    throw ValidationError("rise_time: inputs must be positive");
  return 2.0 * q_loaded / (2.0 * constants::pi * f_c_ghz * 1e9) * 1e6;
}

ConversionFactorFit conversion_factor(const std::vector<double>& omega1_rad_per_s,
                                      const std::vector<double>& power_w,
                                      double gamma_e_mhz_per_mt) {
  if (omega1_rad_per_s.size() != power_w.size() || omega1_rad_per_s.empty())
    throw ValidationError("conversion_factor: need equally sized nonempty lists");
  for (double p : power_w)
    if (!(p > 0)) throw ValidationError("conversion_factor: powers must be positive");

  // Omega1 = sqrt(2) gamma_e |B1| for the S = 1 system.
  const double gamma_per_mt = 2.0 * constants::pi * gamma_e_mhz_per_mt * 1e6;
  const std::size_t n = power_w.size();

  if (n == 1) {
    const double b1 = omega1_rad_per_s[0] / (std::sqrt(2.0) * gamma_per_mt);
    return ConversionFactorFit{b1 / std::sqrt(power_w[0]), 0.0};
  }

  bool all_equal = true;
  for (double p : power_w)
    if (p != power_w[0]) all_equal = false;
  if (all_equal)
    throw DegenerateFit("conversion_factor: all powers equal");

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::sqrt(power_w[i]);
    const double y = omega1_rad_per_s[i] / (std::sqrt(2.0) * gamma_per_mt);
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::sqrt(power_w[i]);
    const double y = omega1_rad_per_s[i] / (std::sqrt(2.0) * gamma_per_mt);
    rss += (y - slope * x) * (y - slope * x);
  }
  const double se = std::sqrt(rss / (static_cast<double>(n) - 1.0) / sxx);
  return ConversionFactorFit{slope, se};
}

double filling_factor(double v_crystal_mm3, double v_mode_cm3) {
  if (!(v_crystal_mm3 > 0) || !(v_mode_cm3 > 0))
    throw ValidationError("filling_factor: volumes must be positive");
  return (v_crystal_mm3 * 1e-3) / v_mode_cm3;
}

double coupling_from_mode_volume(double v_mode_cm3, double f_c_ghz,
                                 double gamma_e_mhz_per_mt) {
  if (!(v_mode_cm3 > 0) || !(f_c_ghz > 0) || !(gamma_e_mhz_per_mt > 0))
    throw ValidationError("coupling_from_mode_volume: inputs must be positive");
  const double omega_c = 2.0 * constants::pi * f_c_ghz * 1e9;
  const double v_m3 = v_mode_cm3 * 1e-6;
  return constants::gamma_e_si(gamma_e_mhz_per_mt) *
         std::sqrt(constants::mu0 * constants::hbar * omega_c / (2.0 * v_m3));
}

}  // namespace masersim
