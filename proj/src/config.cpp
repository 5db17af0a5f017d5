// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace masersim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

const char* kPaperPreset = R"cfg(# masersim paper preset: pentacene-doped p-terphenyl in a sapphire TE01d
# resonator, operated as an X-band maser at room temperature.

# -- triplet spin system ------------------------------------------------
spin.d_mhz = 1395.57                 # zero-field splitting D
spin.e_mhz = -53.35                  # zero-field splitting E (sign carried)
spin.gamma_e_mhz_per_mt = 28.0       # electron gyromagnetic ratio / 2pi
spin.populations = 0.76 0.16 0.08    # ISC sublevel populations p_X p_Y p_Z

# -- crystal mounting and goniometer ------------------------------------
# Direction cosines of the molecular Z1 axis against the crystal a, b, c'
# axes; the wedge angles follow as alpha = 90 - angle(c',Z1) = 15.1 and
# beta = atan2 of the a/b cosines = 124. Explicit geometry.alpha_deg /
# geometry.beta_deg keys override the derivation.
geometry.angle_a_z1_deg = 143.2
geometry.angle_b_z1_deg = 57.3
geometry.angle_cp_z1_deg = 74.9
geometry.flip_b_axis = false         # 180-degree b-axis mounting ambiguity
geometry.wedge_actual_deg = -1       # measured wedge angle; -1 = use design
                                     # (the fabricated holder measured 16.0)
geometry.site_angle_deg = 60.0       # Y1-Y2 angle between the two doping sites
field.b0_mt = 307.0                  # static field at the maser transition
field.theta_deg = 0.0                # goniometer angle, 0 = B0 // X

# -- trEPR spectrum synthesis -------------------------------------------
spectrum.mw_frequency_ghz = 9.4056
spectrum.field_min_mt = 250.0
spectrum.field_max_mt = 420.0
spectrum.n_points = 1701
spectrum.linewidth_fwhm_mhz = 64.73  # measured spin resonance linewidth
spectrum.lineshape = gaussian

# -- microwave resonator -------------------------------------------------
resonator.f_c_ghz = 9.4056
resonator.f_osc_ghz = 9.4043139      # oscillator run frequency
resonator.q0 = 22000                 # unloaded quality factor
resonator.qe = 22000                 # external (critical coupling)
resonator.q_loaded = 11000           # passive loaded Q, 1/QL = 1/Q0 + 1/Qe
resonator.coupling_k = 1.0
resonator.lambda_mt_per_sqrt_w = 0.70    # power-to-field conversion factor
resonator.lambda_low_field = 0.41        # apparent low-field value
resonator.v_mode_cm3 = 0.22
resonator.qm = 13000                 # magnetic quality factor of the inverted
                                     # ensemble, used by the closed-form metrics
resonator.bandwidth_mhz = 0.85       # passive resonator bandwidth

# -- optical pumping ------------------------------------------------------
pump.fluence_mj_cm2 = 23.87          # amplifier-run pump intensity
pump.duration_ns = 7.0
pump.wavelength_nm = 590.0
pump.illuminated_area_cm2 = 0.06     # 2 x 3 mm crystal face
pump.fluence_oscillator_mj_cm2 = 16.54
medium.absorption_per_mm = 0.32      # effective small-signal absorption
medium.ground_state_density_per_m3 = 3.242349e24   # 1000 ppm doping
medium.isc_triplet_yield = 0.2101352 # effective yield per absorbed photon;
                                     # calibrated so the default pump settings
                                     # reproduce the operating-point total yield
medium.thickness_mm = 1.0
medium.crystal_volume_mm3 = 6.0

# -- Maxwell-Bloch dynamics ----------------------------------------------
dynamics.g = 0.69                    # single spin-photon coupling
dynamics.g_is_angular = true         # interpret g in rad/s (false: Hz)
dynamics.gamma_per_s = 4.5e4         # spin depolarization rate
dynamics.t2_us = 4.24                # decoherence time at the maser transition
dynamics.t2_high_field_us = 8.5      # decoherence time at the high-field line
dynamics.n0 = 2.0e12                 # calibrated inverted spin number dN'
dynamics.p_in_dbm = -46.0            # microwave input power
dynamics.q_loaded = 11000            # loaded Q for the dynamics (may be boosted)
dynamics.q_loaded_boosted = 5.0e5    # feedback-boosted loaded Q
dynamics.t_span_us = 120.0
dynamics.seed_coherence = -1         # oscillator seed; -1 = sqrt(n0)
dynamics.rtol = 1e-8
dynamics.n_report = 2000

# -- closed-form device metrics -------------------------------------------
metrics.sigma_sq = 0.5               # normalized transition matrix element
metrics.delta_n_per_m3 = 3.3e20      # inverted spin density dn = dN'/V_crystal
metrics.t_bath_k = 290.0
metrics.p_upper = 0.76               # maser transition populations (T0 upper,
metrics.p_lower = 0.12               #  T-1 lower)
metrics.spin_linewidth_mhz = 64.73
metrics.n_total = 2.1e14             # total T0+T-1 yield at the amplifier pump
)cfg";

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(origin + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError(origin + ":" + std::to_string(lineno) +
                            ": empty key or value");
    cfg.set(key, value);
  }
  return cfg;
}

const std::string& Config::paper_preset_text() {
  static const std::string text = kPaperPreset;
  return text;
}

Config Config::paper_preset() { return parse(paper_preset_text(), "<paper preset>"); }

void Config::merge(const Config& overlay) {
  for (const auto& [k, v] : overlay.entries_) set(k, v);
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = index_.find(key);
  if (it == index_.end()) {
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
  } else {
    entries_[it->second].second = value;
  }
}

bool Config::has(const std::string& key) const { return index_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw ValidationError("config: missing key '" + key + "'");
  return entries_[it->second].second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "' is not a number: " + s);
  }
}

long Config::get_long(const std::string& key) const {
  const double v = get_double(key);
  if (std::abs(v - std::llround(v)) > 1e-9)
    throw ValidationError("config: key '" + key + "' is not an integer");
  return static_cast<long>(std::llround(v));
}

bool Config::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("config: key '" + key + "' is not a boolean: " + s);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream is(get_string(key));
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof())
    throw ValidationError("config: key '" + key + "' is not a number list");
  return out;
}

SpinSystem spin_from_config(const Config& cfg) {
  SpinSystem sys;
  sys.d_mhz = cfg.get_double("spin.d_mhz");
  sys.e_mhz = cfg.get_double("spin.e_mhz");
  sys.gamma_e_mhz_per_mt = cfg.get_double("spin.gamma_e_mhz_per_mt");
  const auto pops = cfg.get_doubles("spin.populations");
  if (pops.size() != 3)
    throw ValidationError("config: spin.populations needs exactly 3 values");
  sys.zero_field_populations = {pops[0], pops[1], pops[2]};
  sys.validate();
  return sys;
}

WedgeMount mount_from_config(const Config& cfg) {
  if (cfg.has("geometry.alpha_deg") || cfg.has("geometry.beta_deg")) {
    WedgeMount mount;
    mount.alpha_deg = cfg.get_double("geometry.alpha_deg");
    mount.beta_deg = cfg.get_double("geometry.beta_deg");
    mount.validate();
    return mount;
  }
  const bool flip =
      cfg.has("geometry.flip_b_axis") && cfg.get_bool("geometry.flip_b_axis");
  return wedge_from_crystallography(cfg.get_double("geometry.angle_a_z1_deg"),
                                    cfg.get_double("geometry.angle_b_z1_deg"),
                                    cfg.get_double("geometry.angle_cp_z1_deg"), flip);
}

double wedge_actual_from_config(const Config& cfg) {
  if (!cfg.has("geometry.wedge_actual_deg")) return -1.0;
  return cfg.get_double("geometry.wedge_actual_deg");
}

LabOrientation orientation_from_config(const Config& cfg) {
  LabOrientation o;
  o.b0_mag_mt = cfg.get_double("field.b0_mt");
  o.theta_deg = cfg.get_double("field.theta_deg");
  o.validate();
  return o;
}

SpectrumConfig spectrum_from_config(const Config& cfg) {
  SpectrumConfig sc;
  sc.mw_frequency_ghz = cfg.get_double("spectrum.mw_frequency_ghz");
  sc.field_min_mt = cfg.get_double("spectrum.field_min_mt");
  sc.field_max_mt = cfg.get_double("spectrum.field_max_mt");
  sc.n_points = static_cast<int>(cfg.get_long("spectrum.n_points"));
  sc.linewidth_fwhm_mhz = cfg.get_double("spectrum.linewidth_fwhm_mhz");
  const std::string shape = cfg.get_string("spectrum.lineshape");
  if (shape == "gaussian")
    sc.lineshape = Lineshape::gaussian;
  else if (shape == "lorentzian")
    sc.lineshape = Lineshape::lorentzian;
  else
    throw ValidationError("config: spectrum.lineshape must be gaussian or lorentzian");
  sc.validate();
  return sc;
}

ResonatorParams resonator_from_config(const Config& cfg) {
  ResonatorParams rp;
  rp.f_c_ghz = cfg.get_double("resonator.f_c_ghz");
  rp.q0 = cfg.get_double("resonator.q0");
  rp.qe = cfg.get_double("resonator.qe");
  rp.q_loaded = cfg.get_double("resonator.q_loaded");
  rp.coupling_k = cfg.get_double("resonator.coupling_k");
  rp.conversion_factor_lambda = cfg.get_double("resonator.lambda_mt_per_sqrt_w");
  rp.v_mode_cm3 = cfg.get_double("resonator.v_mode_cm3");
  rp.validate();
  return rp;
}

GainMedium medium_from_config(const Config& cfg) {
  GainMedium gm;
  gm.delta_n_per_m3 = cfg.get_double("metrics.delta_n_per_m3");
  gm.sigma_sq = cfg.get_double("metrics.sigma_sq");
  gm.v_crystal_mm3 = cfg.get_double("medium.crystal_volume_mm3");
  gm.eta = filling_factor(gm.v_crystal_mm3, cfg.get_double("resonator.v_mode_cm3"));
  gm.t2_us = cfg.get_double("dynamics.t2_us");
  gm.p_upper = cfg.get_double("metrics.p_upper");
  gm.p_lower = cfg.get_double("metrics.p_lower");
  gm.validate();
  return gm;
}

PumpPulse pump_from_config(const Config& cfg) {
  PumpPulse p;
  p.fluence_mj_per_cm2 = cfg.get_double("pump.fluence_mj_cm2");
  p.duration_ns = cfg.get_double("pump.duration_ns");
  p.wavelength_nm = cfg.get_double("pump.wavelength_nm");
  p.illuminated_area_cm2 = cfg.get_double("pump.illuminated_area_cm2");
  p.validate();
  return p;
}

OpticalMedium optical_medium_from_config(const Config& cfg) {
  OpticalMedium m;
  m.absorption_per_mm = cfg.get_double("medium.absorption_per_mm");
  m.ground_state_density_per_m3 = cfg.get_double("medium.ground_state_density_per_m3");
  m.isc_triplet_yield = cfg.get_double("medium.isc_triplet_yield");
  m.thickness_mm = cfg.get_double("medium.thickness_mm");
  m.crystal_volume_mm3 = cfg.get_double("medium.crystal_volume_mm3");
  m.validate();
  return m;
}

MaxwellBlochParams maxwell_bloch_from_config(const Config& cfg,
                                             double q_loaded_override) {
  MaxwellBlochParams p;
  const double f_c = cfg.get_double("resonator.f_c_ghz");
  p.omega_c = 2.0 * constants::pi * f_c * 1e9;
  p.omega_s = p.omega_c;
  p.omega_d = p.omega_c;
  const double q_loaded =
      q_loaded_override > 0 ? q_loaded_override : cfg.get_double("dynamics.q_loaded");
  if (!(q_loaded > 0))
    throw ValidationError("config: dynamics.q_loaded must be positive");
  p.kappa_c = p.omega_c / q_loaded;
  p.kappa_s = 2.0 / (cfg.get_double("dynamics.t2_us") * 1e-6);
  p.gamma = cfg.get_double("dynamics.gamma_per_s");
  p.g = cfg.get_double("dynamics.g");
  if (!cfg.get_bool("dynamics.g_is_angular")) p.g *= 2.0 * constants::pi;
  p.n0 = cfg.get_double("dynamics.n0");
  p.coupling_k = cfg.get_double("resonator.coupling_k");
  const double p_in_dbm = cfg.get_double("dynamics.p_in_dbm");
  const double p_in_w = 1e-3 * std::pow(10.0, p_in_dbm / 10.0);
  p.drive_v = drive_strength(p_in_w, p.kappa_c, p.omega_c);
  p.validate();
  return p;
}

}  // namespace masersim
