// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_METRICS_HPP
#define MASERSIM_METRICS_HPP

#include <string>
#include <vector>

#include "masersim/constants.hpp"
#include "masersim/errors.hpp"

namespace masersim {

struct ResonatorParams {
  double f_c_ghz = 9.4056;
  double q0 = 2.2e4;          // unloaded
  double qe = 2.2e4;          // external
  double q_loaded = 1.1e4;    // 1/QL = 1/Q0 + 1/Qe for the passive resonator
  double coupling_k = 1.0;
  double conversion_factor_lambda = 0.70;   // mT/sqrt(W)
  double v_mode_cm3 = 0.22;

  void validate() const;
};

struct GainMedium {
  double delta_n_per_m3 = 3.3e20;   // inverted spin density
  double sigma_sq = 0.5;            // normalized transition matrix element
  double eta = 0.027;               // filling factor
  double t2_us = 4.24;
  double v_crystal_mm3 = 6.0;
  double p_upper = 0.76;            // maser transition populations
  double p_lower = 0.12;

  void validate() const;
};

enum class MaserRegime { subthreshold, amplifier, oscillator };

std::string to_string(MaserRegime regime);

// Qm = 1 / (gamma_e^2 mu0 hbar delta_n sigma^2 eta T2), dimensionless.
double magnetic_q(const GainMedium& medium, double gamma_e_mhz_per_mt);

// Subthreshold when 1/Qm <= 1/Q0; amplifier while 1/Qm < 1/Q0 + 1/Qe;
// oscillator at or beyond that boundary.
MaserRegime classify_regime(double qm, double q0, double qe);

// G = 10 lg[((Qe^-1 - Q0^-1 + Qm^-1)/(Qe^-1 + Q0^-1 - Qm^-1))^2].
// Throws AtOrAboveOscillation when the denominator is not positive.
double calculated_gain_db(double qm, double q0, double qe);

// BW = omega0 (Q0^-1 + Qe^-1 - Qm^-1) / 2pi, in MHz.
double calculated_bandwidth_mhz(double qm, double q0, double qe, double f0_ghz);

// Spin temperature from tanh(hbar w_s / 2 kB T_s) = (P_low - P_up)/(P_low + P_up);
// negative under inversion. Throws InfiniteTemperature for equal populations.
double spin_temperature_k(double p_upper, double p_lower, double f_s_ghz);

struct NoiseResult {
  double t_noise_k = 0.0;
  double noise_figure_db = 0.0;   // referenced to 290 K
};

// T_a ~= |T_s| + (Qm/Q0) T_bath.
NoiseResult noise_temperature(double t_spin_k, double qm, double q0, double t_bath_k);

// tau_R = 2 QL / omega_c, in us.
double rise_time_us(double q_loaded, double f_c_ghz);

struct ConversionFactorFit {
  double lambda_mt_per_sqrt_w = 0.0;
  double std_error = 0.0;
};

// Lambda = |B1|/sqrt(P) from Rabi data: through-origin fit of
// B1 = Omega1/(sqrt(2) gamma_e) against sqrt(P). omega1 in rad/s, power in W.
ConversionFactorFit conversion_factor(const std::vector<double>& omega1_rad_per_s,
                                      const std::vector<double>& power_w,
                                      double gamma_e_mhz_per_mt);

// eta = V_crystal / V_mode.
double filling_factor(double v_crystal_mm3, double v_mode_cm3);

// Single-spin coupling estimate g = gamma_e sqrt(mu0 hbar omega_c / (2 V_mode)),
// rad/s.
double coupling_from_mode_volume(double v_mode_cm3, double f_c_ghz,
                                 double gamma_e_mhz_per_mt);

}  // namespace masersim

#endif
