// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/trepr.hpp"

#include <algorithm>
#include <cmath>

#include "masersim/constants.hpp"

namespace masersim {

namespace {

constexpr double kGridStepMt = 0.1;
constexpr double kFreqTolMhz = 1e-3;  // 1 kHz

double transition_freq(const SpinSystem& system, const Vec3& direction, double b_mt,
                       int lower, int upper) {
  EnergyLevels lv = levels_at(system, direction * b_mt);
  return lv.eigenvalues_mhz[upper] - lv.eigenvalues_mhz[lower];
}

// Area-normalized profiles, FWHM w.
double gaussian_profile(double x, double w) {
  const double s = w / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return std::exp(-0.5 * (x / s) * (x / s)) / (s * std::sqrt(2.0 * constants::pi));
}
double lorentzian_profile(double x, double w) {
  const double hw = w / 2.0;
  return hw / (constants::pi * (x * x + hw * hw));
}

}  // namespace

void SpectrumConfig::validate() const {
  if (!(field_max_mt > field_min_mt) || field_min_mt < 0)
    throw ValidationError("spectrum: need field_max > field_min >= 0");
  if (n_points < 2) throw ValidationError("spectrum: n_points must be >= 2");
  if (!(linewidth_fwhm_mhz > 0))
    throw ValidationError("spectrum: linewidth must be positive");
  if (!(mw_frequency_ghz > 0))
    throw ValidationError("spectrum: spectrometer frequency must be positive");
}

std::vector<ResonanceField> resonance_fields(const SpinSystem& system,
                                             const Vec3& molecular_field_direction,
                                             double mw_frequency_ghz,
                                             double field_min_mt, double field_max_mt) {
  if (!(mw_frequency_ghz > 0))
    throw ValidationError("resonance_fields: frequency must be positive");
  if (std::abs(molecular_field_direction.norm() - 1.0) > 1e-9)
    throw ValidationError("resonance_fields: direction must be unit length");

  const double f_mw = mw_frequency_ghz * 1e3;  // MHz
  const int n = std::max(2, static_cast<int>(
                                std::ceil((field_max_mt - field_min_mt) / kGridStepMt)) +
                                1);
  const double db = (field_max_mt - field_min_mt) / (n - 1);

  std::vector<ResonanceField> found;
  for (auto [lo, up] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    double prev = transition_freq(system, molecular_field_direction, field_min_mt, lo, up) -
                  f_mw;
    for (int i = 1; i < n; ++i) {
      const double b = field_min_mt + i * db;
      const double cur =
          transition_freq(system, molecular_field_direction, b, lo, up) - f_mw;
      if (prev == 0.0 || prev * cur < 0.0) {
        double a = b - db, bb = b, fa = prev;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (a + bb);
          const double fm =
              transition_freq(system, molecular_field_direction, mid, lo, up) - f_mw;
          if (std::abs(fm) <= kFreqTolMhz * 0.5) {
            a = bb = mid;
            break;
          }
          if (fa * fm <= 0.0) {
            bb = mid;
          } else {
            a = mid;
            fa = fm;
          }
        }
        found.push_back(ResonanceField{lo, up, 0.5 * (a + bb)});
      }
      prev = cur;
    }
  }
  std::sort(found.begin(), found.end(),
            [](const ResonanceField& l, const ResonanceField& r) {
              return l.field_mt < r.field_mt;
            });
  return found;
}

Spectrum simulate_spectrum(const SpectrumConfig& config, const SpinSystem& system,
                           const WedgeMount& mount, const LabOrientation& orientation,
                           double wedge_actual_deg) {
  config.validate();
  system.validate();

  Spectrum spec;
  spec.field_mt.resize(config.n_points);
  spec.amplitude.assign(config.n_points, 0.0);
  const double db =
      (config.field_max_mt - config.field_min_mt) / (config.n_points - 1);
  for (int i = 0; i < config.n_points; ++i)
    spec.field_mt[i] = config.field_min_mt + i * db;

  auto [site1, site2] = site_frames(mount, wedge_actual_deg);
  for (const SiteFrame& frame : {site1, site2}) {
    LabOrientation unit_orientation{orientation.theta_deg, 1.0};
    const Vec3 direction = field_in_molecular_frame(unit_orientation, frame);
    const Vec3 b1 = b1_direction_molecular(orientation, frame);

    for (const ResonanceField& rf :
         resonance_fields(system, direction, config.mw_frequency_ghz,
                          config.field_min_mt, config.field_max_mt)) {
      EnergyLevels lv = levels_at(system, direction * rf.field_mt);
      const auto pops = high_field_populations(system, lv);
      const TransitionSet set = transitions(lv, pops, b1);
      const Transition* tr = nullptr;
      for (const Transition& t : set)
        if (t.lower_index == rf.lower_index && t.upper_index == rf.upper_index) tr = &t;
      if (!tr) continue;

      // Frequency FWHM -> field FWHM through the local slope df/dB.
      const double h = 0.01;
      const double slope =
          (transition_freq(system, direction, rf.field_mt + h, rf.lower_index,
                           rf.upper_index) -
           transition_freq(system, direction, rf.field_mt - h, rf.lower_index,
                           rf.upper_index)) /
          (2.0 * h);
      if (std::abs(slope) < 1e-9) continue;
      const double width_mt = config.linewidth_fwhm_mhz / std::abs(slope);

      SpectralLine line;
      line.site_id = frame.site_id;
      line.lower_index = rf.lower_index;
      line.upper_index = rf.upper_index;
      line.resonance_field_mt = rf.field_mt;
      line.signed_amplitude = tr->population_difference * tr->matrix_element_sq;
      line.width_mt = width_mt;
      spec.lines.push_back(line);

      for (int i = 0; i < config.n_points; ++i) {
        const double x = spec.field_mt[i] - rf.field_mt;
        const double profile = config.lineshape == Lineshape::gaussian
                                   ? gaussian_profile(x, width_mt)
                                   : lorentzian_profile(x, width_mt);
        spec.amplitude[i] += line.signed_amplitude * profile;
      }
    }
  }
  std::sort(spec.lines.begin(), spec.lines.end(),
            [](const SpectralLine& a, const SpectralLine& b) {
              return a.resonance_field_mt < b.resonance_field_mt;
            });
  return spec;
}

std::map<double, Spectrum> rotation_pattern(const SpectrumConfig& config,
                                            const SpinSystem& system,
                                            const WedgeMount& mount,
                                            const std::vector<double>& theta_deg_list,
                                            double wedge_actual_deg) {
  if (theta_deg_list.empty())
    throw ValidationError("rotation_pattern: theta list must not be empty");
  std::map<double, Spectrum> pattern;
  for (double theta : theta_deg_list) {
    LabOrientation orientation{theta, 1.0};
    pattern[theta] =
        simulate_spectrum(config, system, mount, orientation, wedge_actual_deg);
  }
  return pattern;
}

std::vector<std::vector<SpectralLine>> resolvable_clusters(const Spectrum& spectrum,
                                                           double tol_mt,
                                                           double amplitude_rel_cut) {
  double max_amp = 0.0;
  for (const SpectralLine& l : spectrum.lines)
    max_amp = std::max(max_amp, std::abs(l.signed_amplitude));

  std::vector<SpectralLine> lines;
  for (const SpectralLine& l : spectrum.lines)
    if (std::abs(l.signed_amplitude) > amplitude_rel_cut * max_amp) lines.push_back(l);
  std::sort(lines.begin(), lines.end(), [](const SpectralLine& a, const SpectralLine& b) {
    return a.resonance_field_mt < b.resonance_field_mt;
  });

  std::vector<std::vector<SpectralLine>> clusters;
  for (const SpectralLine& l : lines) {
    if (clusters.empty() ||
        l.resonance_field_mt - clusters.back().back().resonance_field_mt > tol_mt) {
      clusters.push_back({l});
    } else {
      clusters.back().push_back(l);
    }
  }
  return clusters;
}

}  // namespace masersim
