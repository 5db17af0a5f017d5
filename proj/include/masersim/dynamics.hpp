// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_DYNAMICS_HPP
#define MASERSIM_DYNAMICS_HPP

#include <complex>
#include <vector>

#include "masersim/constants.hpp"
#include "masersim/errors.hpp"
#include "masersim/ode.hpp"

namespace masersim {

// Semiclassical driven Maxwell-Bloch model of the spin-resonator system, in
// the frame rotating at the drive frequency omega_d:
//   <a'>  = -iV - (kappa_c + i(omega_c - omega_d)) <a>  - i g <S_->
//   <S_->'= -(kappa_s + i(omega_s - omega_d)) <S_-> + 2ig <a><S_z>
//   <S_z>'= ig(<a*><S_-> - <a><S_+>) - gamma <S_z>
// All rates and frequencies in SI (rad/s, 1/s); times reported in us.
struct MaxwellBlochParams {
  double omega_s = 2.0 * constants::pi * 9.4056e9;   // rad/s
  double omega_c = 2.0 * constants::pi * 9.4056e9;
  double omega_d = 2.0 * constants::pi * 9.4056e9;
  double g = 0.69;             // single spin-photon coupling, rad/s
  double kappa_c = 0.0;        // cavity loss rate, 1/s
  double kappa_s = 0.0;        // spin decoherence rate 2/T2, 1/s
  double gamma = 4.5e4;        // spin depolarization rate, 1/s
  double drive_v = 0.0;        // drive strength, 1/s (photon-amplitude units)
  double n0 = 2.0e12;          // initial collective inversion
  double coupling_k = 1.0;     // output coupling coefficient (1 = critical)

  void validate() const;
};

struct SystemState {
  std::complex<double> a{0.0, 0.0};        // cavity field amplitude
  std::complex<double> s_minus{0.0, 0.0};  // collective coherence
  double s_z = 0.0;                        // collective inversion
};

struct Trajectory {
  std::vector<double> t_us;
  std::vector<SystemState> states;
  std::vector<double> photon_number;   // |<a>|^2
  std::vector<double> output_power_w;
};

// V = sqrt(P_in kappa_c / (hbar omega_c)), 1/s.
double drive_strength(double p_in_w, double kappa_c, double omega_c);

// n = P_out (1+k) / (hbar omega_c kappa_c k) and its inverse.
double output_power_w(double photon_number, double kappa_c, double omega_c,
                      double coupling_k);
double photon_number_from_power(double p_out_w, double kappa_c, double omega_c,
                                double coupling_k);

// Integrate the equations of motion from `initial` over t_span_us, reporting
// on a uniform grid of n_report points via dense output. The collective
// variables are rescaled by n0 internally (exactly) to keep magnitudes O(1).
Trajectory integrate(const MaxwellBlochParams& params, double t_span_us,
                     const SystemState& initial, const OdeOptions& opt = {},
                     int n_report = 2000);

struct GainTrace {
  std::vector<double> t_us;
  std::vector<double> gain_db;        // 10 log10(P_out/P_in)
  double peak_gain_db = 0.0;
  double peak_time_us = 0.0;
  double plateau_gain_db = 0.0;       // median gain within 1 dB of the peak
  double duration_us = 0.0;           // total time with gain above threshold
};

GainTrace amplifier_gain_trace(const Trajectory& traj, double p_in_w,
                               double threshold_db = 1.0);

// Amplifier transient: a(0) = 0, S_-(0) = 0, S_z(0) = n0, CW drive on.
Trajectory amplifier_run(const MaxwellBlochParams& params, double t_span_us,
                         const OdeOptions& opt = {}, int n_report = 2000);

// Free-running oscillator: drive off, S_z(0) = n0, seeded coherence. The
// semiclassical equations cannot leave <S_-> = 0 unaided, so the default
// seed is sqrt(n0).
// seed_coherence <= 0 selects the default.
Trajectory oscillator_burst(const MaxwellBlochParams& params, double t_span_us,
                            double seed_coherence = 0.0, const OdeOptions& opt = {},
                            int n_report = 2000);

// Linear-stability threshold of the masing instability:
// N_threshold = kappa_c kappa_s / (2 g^2).
double threshold_inversion(const MaxwellBlochParams& params);

struct BurstDetection {
  bool burst = false;
  double peak_photon_number = 0.0;
  double reference_photon_number = 0.0;  // quasi-static seed response (g sqrt(n0)/kappa_c)^2
  double peak_delay_us = 0.0;
  double peak_power_w = 0.0;
};

BurstDetection detect_burst(const Trajectory& traj, const MaxwellBlochParams& params,
                            double factor = 10.0);

// Locate the burst onset by bisection on n0 (gamma is honored as given in
// params; pass gamma = 0 to probe the pure masing instability). Returns the
// bisected onset inversion.
double burst_onset_bisection(MaxwellBlochParams params, double n_lo, double n_hi,
                             double rel_tol = 0.01);

// Damped Rabi nutation forward model: A exp(-Gamma t) cos(Omega1 t + phi) + c
// evaluated on t_grid (us). omega1 in rad/us, gamma_damp in 1/us.
std::vector<double> rabi_transient(double omega1_rad_per_us, double gamma_damp_per_us,
                                   const std::vector<double>& t_grid_us,
                                   double amplitude = 1.0, double phase = 0.0,
                                   double offset = 0.0);

}  // namespace masersim

#endif
