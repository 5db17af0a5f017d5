// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace masersim {

namespace {
constexpr double kUs = 1e-6;  // seconds per microsecond
}

void MaxwellBlochParams::validate() const {
  if (kappa_c < 0 || kappa_s < 0 || gamma < 0)
    throw ValidationError("dynamics: loss rates must be >= 0");
  if (g < 0) throw ValidationError("dynamics: coupling g must be >= 0");
  if (!(coupling_k > 0)) throw ValidationError("dynamics: coupling_k must be positive");
  if (!std::isfinite(n0)) throw ValidationError("dynamics: n0 must be finite");
}

double drive_strength(double p_in_w, double kappa_c, double omega_c) {
  if (p_in_w < 0 || kappa_c <= 0 || omega_c <= 0)
    throw ValidationError("drive_strength: inputs must be positive");
  return std::sqrt(p_in_w * kappa_c / (constants::hbar * omega_c));
}

double output_power_w(double photon_number, double kappa_c, double omega_c,
                      double coupling_k) {
  if (!(coupling_k > 0)) throw ValidationError("output_power: k must be positive");
  return photon_number * constants::hbar * omega_c * kappa_c * coupling_k /
         (1.0 + coupling_k);
}

double photon_number_from_power(double p_out_w, double kappa_c, double omega_c,
                                double coupling_k) {
  if (!(coupling_k > 0)) throw ValidationError("photon_number: k must be positive");
  return p_out_w * (1.0 + coupling_k) / (constants::hbar * omega_c * kappa_c * coupling_k);
}

Trajectory integrate(const MaxwellBlochParams& params, double t_span_us,
                     const SystemState& initial, const OdeOptions& opt, int n_report) {
  params.validate();
  if (!(t_span_us > 0)) throw ValidationError("integrate: t_span must be positive");
  if (n_report < 2) throw ValidationError("integrate: n_report must be >= 2");
  if (!(opt.rtol <= 1e-6))
    throw ValidationError("integrate: relative tolerance must be <= 1e-6");

  // Per-microsecond rates; collective variables scaled by n0.
  const double scale = std::max(std::abs(params.n0), 1.0);
  const double kc = params.kappa_c * kUs;
  const double ks = params.kappa_s * kUs;
  const double gm = params.gamma * kUs;
  const double g = params.g * kUs;
  const double g_coll = g * scale;
  const double v = params.drive_v * kUs;
  const double det_c = (params.omega_c - params.omega_d) * kUs;
  const double det_s = (params.omega_s - params.omega_d) * kUs;

  auto rhs = [&](double /*t*/, const std::array<double, 5>& y,
                 std::array<double, 5>& dy) {
    const std::complex<double> a{y[0], y[1]};
    const std::complex<double> m{y[2], y[3]};
    const double w = y[4];
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> ad = -i * v - (kc + i * det_c) * a - i * g_coll * m;
    const std::complex<double> md = -(ks + i * det_s) * m + 2.0 * i * g * a * w;
    dy[0] = ad.real();
    dy[1] = ad.imag();
    dy[2] = md.real();
    dy[3] = md.imag();
    dy[4] = -2.0 * g * std::imag(std::conj(a) * m) - gm * w;
  };

  std::vector<double> grid(n_report);
  for (int i = 0; i < n_report; ++i)
    grid[i] = t_span_us * i / (n_report - 1);

  Trajectory traj;
  traj.t_us.reserve(n_report);
  traj.states.reserve(n_report);
  traj.photon_number.reserve(n_report);
  traj.output_power_w.reserve(n_report);

  std::array<double, 5> y0{initial.a.real(), initial.a.imag(),
                           initial.s_minus.real() / scale,
                           initial.s_minus.imag() / scale, initial.s_z / scale};
  integrate_dopri5<5>(rhs, y0, 0.0, t_span_us, grid, opt,
                      [&](double t, const std::array<double, 5>& y) {
                        SystemState st;
                        st.a = {y[0], y[1]};
                        st.s_minus = std::complex<double>{y[2], y[3]} * scale;
                        st.s_z = y[4] * scale;
                        const double n = std::norm(st.a);
                        traj.t_us.push_back(t);
                        traj.states.push_back(st);
                        traj.photon_number.push_back(n);
                        traj.output_power_w.push_back(output_power_w(
                            n, params.kappa_c, params.omega_c, params.coupling_k));
                      });
  return traj;
}

GainTrace amplifier_gain_trace(const Trajectory& traj, double p_in_w,
                               double threshold_db) {
  if (!(p_in_w > 0)) throw ValidationError("gain_trace: input power must be positive");
  GainTrace out;
  out.t_us = traj.t_us;
  out.gain_db.resize(traj.t_us.size());
  for (std::size_t i = 0; i < traj.t_us.size(); ++i) {
    const double ratio = traj.output_power_w[i] / p_in_w;
    out.gain_db[i] = ratio > 0 ? 10.0 * std::log10(ratio) : -300.0;
    if (out.gain_db[i] > out.peak_gain_db || i == 0) {
      out.peak_gain_db = out.gain_db[i];
      out.peak_time_us = traj.t_us[i];
    }
  }

  // Time above threshold, with linear interpolation of the crossings.
  double duration = 0.0;
  for (std::size_t i = 1; i < out.t_us.size(); ++i) {
    const double g0 = out.gain_db[i - 1] - threshold_db;
    const double g1 = out.gain_db[i] - threshold_db;
    const double dt = out.t_us[i] - out.t_us[i - 1];
    if (g0 >= 0 && g1 >= 0) {
      duration += dt;
    } else if (g0 > 0 || g1 > 0) {
      const double frac = std::abs(g0 > 0 ? g0 : g1) / std::abs(g1 - g0);
      duration += dt * frac;
    }
  }
  out.duration_us = duration;

  std::vector<double> near_peak;
  for (std::size_t i = 0; i < out.gain_db.size(); ++i)
    if (out.gain_db[i] >= out.peak_gain_db - 1.0) near_peak.push_back(out.gain_db[i]);
  if (!near_peak.empty()) {
    std::sort(near_peak.begin(), near_peak.end());
    out.plateau_gain_db = near_peak[near_peak.size() / 2];
  }
  return out;
}

Trajectory amplifier_run(const MaxwellBlochParams& params, double t_span_us,
                         const OdeOptions& opt, int n_report) {
  SystemState init;
  init.s_z = params.n0;
  return integrate(params, t_span_us, init, opt, n_report);
}

Trajectory oscillator_burst(const MaxwellBlochParams& params, double t_span_us,
                            double seed_coherence, const OdeOptions& opt,
                            int n_report) {
  MaxwellBlochParams p = params;
  p.drive_v = 0.0;
  SystemState init;
  init.s_z = p.n0;
  const double seed =
      seed_coherence > 0 ? seed_coherence : std::sqrt(std::max(p.n0, 0.0));
  if (!(seed > 0))
    throw ValidationError("oscillator_burst: needs a positive coherence seed");
  init.s_minus = {seed, 0.0};
  return integrate(p, t_span_us, init, opt, n_report);
}

double threshold_inversion(const MaxwellBlochParams& params) {
  if (!(params.g > 0)) throw ValidationError("threshold_inversion: g must be positive");
  return params.kappa_c * params.kappa_s / (2.0 * params.g * params.g);
}

BurstDetection detect_burst(const Trajectory& traj, const MaxwellBlochParams& params,
                            double factor) {
  BurstDetection out;
  const double seed = std::sqrt(std::max(params.n0, 0.0));
  out.reference_photon_number =
      params.kappa_c > 0 ? std::pow(params.g * seed / params.kappa_c, 2) : 0.0;
  for (std::size_t i = 0; i < traj.t_us.size(); ++i) {
    if (traj.photon_number[i] > out.peak_photon_number) {
      out.peak_photon_number = traj.photon_number[i];
      out.peak_delay_us = traj.t_us[i];
      out.peak_power_w = traj.output_power_w[i];
    }
  }
  out.burst = out.peak_photon_number >= factor * std::max(out.reference_photon_number,
                                                          1e-300);
  return out;
}

double burst_onset_bisection(MaxwellBlochParams params, double n_lo, double n_hi,
                             double rel_tol) {
  if (!(n_lo > 0 && n_hi > n_lo))
    throw ValidationError("burst_onset_bisection: need 0 < n_lo < n_hi");

  // Window long enough that growth a few percent above threshold is visible.
  const double kc = params.kappa_c * kUs;
  const double ks = params.kappa_s * kUs;
  const double lam_probe = 0.02 * kc * ks / (kc + ks);  // 1/us at +2% inversion
  const double t_span = std::clamp(14.0 / lam_probe, 50.0, 4.0e5);

  auto bursts = [&](double n0) {
    params.n0 = n0;
    Trajectory traj = oscillator_burst(params, t_span, 0.0, OdeOptions{1e-8, 1e-14});
    return detect_burst(traj, params, 10.0).burst;
  };

  bool lo_burst = bursts(n_lo);
  bool hi_burst = bursts(n_hi);
  if (lo_burst || !hi_burst)
    throw NumericalError("burst_onset_bisection: bracket does not straddle the onset");

  while ((n_hi - n_lo) / n_hi > rel_tol) {
    const double mid = 0.5 * (n_lo + n_hi);
    if (bursts(mid))
      n_hi = mid;
    else
      n_lo = mid;
  }
  return 0.5 * (n_lo + n_hi);
}

std::vector<double> rabi_transient(double omega1_rad_per_us, double gamma_damp_per_us,
                                   const std::vector<double>& t_grid_us,
                                   double amplitude, double phase, double offset) {
  if (omega1_rad_per_us < 0)
    throw ValidationError("rabi_transient: Omega1 must be >= 0");
  std::vector<double> y(t_grid_us.size());
  for (std::size_t i = 0; i < t_grid_us.size(); ++i) {
    const double t = t_grid_us[i];
    y[i] = amplitude * std::exp(-gamma_damp_per_us * t) *
               std::cos(omega1_rad_per_us * t + phase) +
           offset;
  }
  return y;
}

}  // namespace masersim
