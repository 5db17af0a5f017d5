// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_TREPR_HPP
#define MASERSIM_TREPR_HPP

#include <map>
#include <string>
#include <vector>

#include "masersim/geometry.hpp"
#include "masersim/spin.hpp"

namespace masersim {

enum class Lineshape { gaussian, lorentzian };

struct SpectrumConfig {
  double mw_frequency_ghz = 9.4056;
  double field_min_mt = 250.0;
  double field_max_mt = 420.0;
  int n_points = 1701;
  double linewidth_fwhm_mhz = 64.73;
  Lineshape lineshape = Lineshape::gaussian;

  void validate() const;
};

struct SpectralLine {
  int site_id = 1;
  int lower_index = 0;
  int upper_index = 0;
  double resonance_field_mt = 0.0;
  double signed_amplitude = 0.0;   // negative = emissive
  double width_mt = 0.0;           // FWHM converted via the local df/dB slope
};

struct Spectrum {
  std::vector<double> field_mt;
  std::vector<double> amplitude;
  std::vector<SpectralLine> lines;
};

struct ResonanceField {
  int lower_index = 0;
  int upper_index = 0;
  double field_mt = 0.0;
};

// Fields B* in [field_min, field_max] where a transition frequency matches
// the spectrometer frequency within 1 kHz. Sign changes are bracketed on a
// <= 0.1 mT grid and refined by bisection; multiple crossings of one branch
// are all reported. Empty when nothing is resonant in range.
std::vector<ResonanceField> resonance_fields(const SpinSystem& system,
                                             const Vec3& molecular_field_direction,
                                             double mw_frequency_ghz,
                                             double field_min_mt, double field_max_mt);

// Field-swept trEPR spectrum at one goniometer angle: both sites, all
// resonant transitions, signed area-normalized line profiles. Amplitudes are
// relative (a.u.); emissive lines are negative.
Spectrum simulate_spectrum(const SpectrumConfig& config, const SpinSystem& system,
                           const WedgeMount& mount, const LabOrientation& orientation,
                           double wedge_actual_deg = -1.0);

// One spectrum per goniometer angle, keyed by theta in degrees.
std::map<double, Spectrum> rotation_pattern(const SpectrumConfig& config,
                                            const SpinSystem& system,
                                            const WedgeMount& mount,
                                            const std::vector<double>& theta_deg_list,
                                            double wedge_actual_deg = -1.0);

// Lines grouped by resonance field: lines closer than tol_mt merge into one
// resolvable feature. Near-zero amplitudes (relative threshold) are dropped.
std::vector<std::vector<SpectralLine>> resolvable_clusters(const Spectrum& spectrum,
                                                           double tol_mt = 3.0,
                                                           double amplitude_rel_cut = 1e-9);

}  // namespace masersim

#endif
