// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "masersim/config.hpp"
#include "masersim/csv.hpp"
#include "masersim/dynamics.hpp"
#include "masersim/fitting.hpp"
#include "masersim/metrics.hpp"
#include "masersim/pump.hpp"
#include "masersim/spin.hpp"
#include "masersim/trepr.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace masersim;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset = "paper";
  std::string out_dir;
  std::string format = "csv";
  long seed = 0;
};

Config load_config(const CommonArgs& args) {
  Config cfg = Config::paper_preset();
  if (!args.config_path.empty()) {
    std::ifstream is(args.config_path);
    if (!is) throw ValidationError("cannot open config file " + args.config_path);
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    cfg.merge(Config::parse(text, args.config_path));
  }
  return cfg;
}

json provenance(const Config& cfg, const std::string& command, const CommonArgs& args) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = args.seed;
  j["format"] = args.format;
  json c;
  for (const auto& [k, v] : cfg.entries()) c[k] = v;
  j["config"] = c;
  return j;
}

void ensure_out_dir(const CommonArgs& args) {
  if (args.out_dir.empty()) throw ValidationError("--out DIR is required");
  fs::create_directories(args.out_dir);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open output file " + path);
  os << j.dump(2) << '\n';
}

std::string theta_tag(double theta) {
  std::string s = format_double(theta);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

std::vector<double> parse_theta_spec(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        !(step > 0))
      throw ValidationError("bad --theta spec, expected start:step:stop");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
  } else {
    std::string item;
    std::istringstream ss(spec);
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      out.push_back(std::stod(item));
    }
  }
  return out;
}

void add_override(CLI::App* cmd, Config& overrides, const std::string& flag,
                  const std::string& key, const std::string& help) {
  auto setter = [&overrides, key](const std::string& v) { overrides.set(key, v); };
  cmd->add_option_function<std::string>(flag, setter, help);
}

int run_levels(const CommonArgs& args, const Config& cfg) {
  const SpinSystem system = spin_from_config(cfg);
  const WedgeMount mount = mount_from_config(cfg);
  const LabOrientation orientation = orientation_from_config(cfg);
  const double wedge_actual = wedge_actual_from_config(cfg);
  ensure_out_dir(args);

  auto [s1, s2] = site_frames(mount, wedge_actual,
                              cfg.get_double("geometry.site_angle_deg"));
  CsvTable levels_table{{"site", "level_index", "energy_mhz", "population"}, {}};
  CsvTable trans_table{{"site", "lower", "upper", "frequency_mhz", "matrix_element_sq",
                        "population_difference"},
                       {}};
  json jlevels = json::array();
  json jtrans = json::array();
  for (const SiteFrame& frame : {s1, s2}) {
    const Vec3 field = field_in_molecular_frame(orientation, frame);
    const EnergyLevels lv = levels_at(system, field);
    const auto pops = high_field_populations(system, lv);
    const Vec3 b1 = b1_direction_molecular(orientation, frame);
    for (int k = 0; k < 3; ++k) {
      levels_table.rows.push_back({double(frame.site_id), double(k),
                                   lv.eigenvalues_mhz[k], pops[k]});
      jlevels.push_back({{"site", frame.site_id},
                         {"level_index", k},
                         {"energy_mhz", lv.eigenvalues_mhz[k]},
                         {"population", pops[k]}});
    }
    for (const Transition& tr : transitions(lv, pops, b1)) {
      trans_table.rows.push_back({double(frame.site_id), double(tr.lower_index),
                                  double(tr.upper_index), tr.frequency_mhz,
                                  tr.matrix_element_sq, tr.population_difference});
      jtrans.push_back({{"site", frame.site_id},
                        {"lower", tr.lower_index},
                        {"upper", tr.upper_index},
                        {"frequency_mhz", tr.frequency_mhz},
                        {"matrix_element_sq", tr.matrix_element_sq},
                        {"population_difference", tr.population_difference}});
    }
  }

  json j = provenance(cfg, "levels", args);
  j["levels"] = jlevels;
  j["transitions"] = jtrans;
  write_json((fs::path(args.out_dir) / "levels.json").string(), j);
  if (args.format == "csv") {
    write_csv((fs::path(args.out_dir) / "levels.csv").string(), levels_table);
    write_csv((fs::path(args.out_dir) / "transitions.csv").string(), trans_table);
  }
  return 0;
}

int run_rotation_pattern(const CommonArgs& args, const Config& cfg,
                         const std::string& theta_spec) {
  const SpinSystem system = spin_from_config(cfg);
  const WedgeMount mount = mount_from_config(cfg);
  const SpectrumConfig sc = spectrum_from_config(cfg);
  const double wedge_actual = wedge_actual_from_config(cfg);
  const std::vector<double> thetas = parse_theta_spec(theta_spec);
  if (thetas.empty()) throw ValidationError("rotation-pattern: empty theta list");
  ensure_out_dir(args);

  const auto pattern = rotation_pattern(sc, system, mount, thetas, wedge_actual);

  json manifest = provenance(cfg, "rotation-pattern", args);
  json entries = json::array();
  for (const auto& [theta, spectrum] : pattern) {
    json lines = json::array();
    for (const SpectralLine& l : spectrum.lines) {
      lines.push_back({{"site", l.site_id},
                       {"lower", l.lower_index},
                       {"upper", l.upper_index},
                       {"field_mt", l.resonance_field_mt},
                       {"amplitude", l.signed_amplitude},
                       {"width_mt", l.width_mt}});
    }
    json entry;
    entry["theta_deg"] = theta;
    entry["lines"] = lines;
    if (args.format == "csv") {
      const std::string name = "spectrum_theta_" + theta_tag(theta) + ".csv";
      CsvTable table{{"field_mT", "amplitude"}, {}};
      for (std::size_t i = 0; i < spectrum.field_mt.size(); ++i)
        table.rows.push_back({spectrum.field_mt[i], spectrum.amplitude[i]});
      write_csv((fs::path(args.out_dir) / name).string(), table);
      entry["file"] = name;
    } else {
      entry["field_mt"] = spectrum.field_mt;
      entry["amplitude"] = spectrum.amplitude;
    }
    entries.push_back(entry);
  }
  manifest["spectra"] = entries;
  write_json((fs::path(args.out_dir) / "manifest.json").string(), manifest);
  return 0;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  CsvTable table{{"t_us", "re_a", "im_a", "re_sminus", "im_sminus", "sz", "photons",
                  "p_out_W"},
                 {}};
  for (std::size_t i = 0; i < traj.t_us.size(); ++i) {
    const SystemState& st = traj.states[i];
    table.rows.push_back({traj.t_us[i], st.a.real(), st.a.imag(), st.s_minus.real(),
                          st.s_minus.imag(), st.s_z, traj.photon_number[i],
                          traj.output_power_w[i]});
  }
  write_csv(path, table);
}

int run_amplify(const CommonArgs& args, const Config& cfg, double threshold_db) {
  const MaxwellBlochParams params = maxwell_bloch_from_config(cfg);
  const double t_span = cfg.get_double("dynamics.t_span_us");
  const double p_in_w =
      1e-3 * std::pow(10.0, cfg.get_double("dynamics.p_in_dbm") / 10.0);
  ensure_out_dir(args);

  OdeOptions opt;
  opt.rtol = cfg.get_double("dynamics.rtol");
  const int n_report = static_cast<int>(cfg.get_long("dynamics.n_report"));
  const Trajectory traj = amplifier_run(params, t_span, opt, n_report);
  const GainTrace trace = amplifier_gain_trace(traj, p_in_w, threshold_db);

  json j = provenance(cfg, "amplify", args);
  j["p_in_w"] = p_in_w;
  j["drive_v_per_s"] = params.drive_v;
  j["kappa_c_per_s"] = params.kappa_c;
  j["kappa_s_per_s"] = params.kappa_s;
  j["peak_gain_db"] = trace.peak_gain_db;
  j["peak_time_us"] = trace.peak_time_us;
  j["plateau_gain_db"] = trace.plateau_gain_db;
  j["threshold_db"] = threshold_db;
  j["duration_above_threshold_us"] = trace.duration_us;
  // on-resonance output of the unpumped cavity, for re-referencing the gain
  j["passive_baseline_db"] =
      10.0 * std::log10(params.coupling_k / (1.0 + params.coupling_k));
  j["n0_threshold"] = threshold_inversion(params);
  write_json((fs::path(args.out_dir) / "summary.json").string(), j);
  if (args.format == "csv")
    write_trajectory_csv((fs::path(args.out_dir) / "trajectory.csv").string(), traj);
  return 0;
}

int run_oscillate(const CommonArgs& args, const Config& cfg) {
  const double q_loaded = cfg.get_double("dynamics.q_loaded_boosted");
  MaxwellBlochParams params = maxwell_bloch_from_config(cfg, q_loaded);
  const double f_osc = cfg.get_double("resonator.f_osc_ghz");
  params.omega_c = 2.0 * constants::pi * f_osc * 1e9;
  params.omega_s = params.omega_c;
  params.omega_d = params.omega_c;
  params.kappa_c = params.omega_c / q_loaded;
  params.drive_v = 0.0;
  const double t_span = cfg.get_double("dynamics.t_span_us");
  double seed = cfg.get_double("dynamics.seed_coherence");
  ensure_out_dir(args);

  OdeOptions opt;
  opt.rtol = cfg.get_double("dynamics.rtol");
  opt.atol = 1e-14;
  const int n_report = static_cast<int>(cfg.get_long("dynamics.n_report"));
  const Trajectory traj = oscillator_burst(params, t_span, seed, opt, n_report);
  const BurstDetection det = detect_burst(traj, params);

  json j = provenance(cfg, "oscillate", args);
  j["q_loaded"] = q_loaded;
  j["f_osc_ghz"] = f_osc;
  j["n0"] = params.n0;
  j["seed_coherence"] = seed > 0 ? seed : std::sqrt(std::max(params.n0, 0.0));
  j["burst"] = det.burst;
  j["peak_power_w"] = det.peak_power_w;
  j["peak_photon_number"] = det.peak_photon_number;
  j["reference_photon_number"] = det.reference_photon_number;
  j["peak_delay_us"] = det.peak_delay_us;
  j["rise_time_us"] = rise_time_us(q_loaded, f_osc);
  j["n0_threshold"] = threshold_inversion(params);
  {
    // Same threshold if g had been quoted in cyclic units.
    MaxwellBlochParams alt = params;
    alt.g = cfg.get_bool("dynamics.g_is_angular")
                ? params.g * 2.0 * constants::pi
                : params.g / (2.0 * constants::pi);
    j["n0_threshold_alternate_g_reading"] = threshold_inversion(alt);
  }
  write_json((fs::path(args.out_dir) / "summary.json").string(), j);
  if (args.format == "csv")
    write_trajectory_csv((fs::path(args.out_dir) / "trajectory.csv").string(), traj);
  return 0;
}

int run_metrics(const CommonArgs& args, const Config& cfg) {
  const SpinSystem system = spin_from_config(cfg);
  const ResonatorParams res = resonator_from_config(cfg);
  const GainMedium medium = medium_from_config(cfg);
  const double qm_config = cfg.get_double("resonator.qm");
  const double t_bath = cfg.get_double("metrics.t_bath_k");
  ensure_out_dir(args);

  const double qm_from_medium = magnetic_q(medium, system.gamma_e_mhz_per_mt);
  const MaserRegime regime = classify_regime(qm_config, res.q0, res.qe);
  const double t_spin = spin_temperature_k(medium.p_upper, medium.p_lower, res.f_c_ghz);
  const NoiseResult noise = noise_temperature(t_spin, qm_config, res.q0, t_bath);

  json j = provenance(cfg, "metrics", args);
  j["qm"] = qm_config;
  j["qm_source"] = "resonator.qm (config)";
  j["qm_from_medium"] = qm_from_medium;
  j["regime"] = to_string(regime);
  if (regime == MaserRegime::amplifier) {
    j["gain_db"] = calculated_gain_db(qm_config, res.q0, res.qe);
    j["bandwidth_mhz"] = calculated_bandwidth_mhz(qm_config, res.q0, res.qe, res.f_c_ghz);
  } else {
    j["gain_db"] = nullptr;
    j["bandwidth_mhz"] = nullptr;
  }
  j["t_spin_k"] = t_spin;
  j["t_bath_k"] = t_bath;
  j["t_noise_k"] = noise.t_noise_k;
  j["noise_figure_db"] = noise.noise_figure_db;
  j["rise_time_native_us"] = rise_time_us(res.q_loaded, res.f_c_ghz);
  j["rise_time_boosted_us"] = rise_time_us(cfg.get_double("dynamics.q_loaded_boosted"),
                                           cfg.get_double("resonator.f_osc_ghz"));
  j["filling_factor"] = medium.eta;
  j["g_estimate_rad_per_s"] =
      coupling_from_mode_volume(res.v_mode_cm3, res.f_c_ghz, system.gamma_e_mhz_per_mt);
  {
    const MaxwellBlochParams mb = maxwell_bloch_from_config(cfg);
    j["mb_n0"] = mb.n0;
    j["mb_n0_threshold"] = threshold_inversion(mb);
    j["mb_above_threshold"] = mb.n0 >= threshold_inversion(mb);
    MaxwellBlochParams alt = mb;
    alt.g = cfg.get_bool("dynamics.g_is_angular") ? mb.g * 2.0 * constants::pi
                                                  : mb.g / (2.0 * constants::pi);
    j["mb_n0_threshold_alternate_g_reading"] = threshold_inversion(alt);
    j["mb_above_threshold_alternate_g_reading"] = mb.n0 >= threshold_inversion(alt);
  }
  write_json((fs::path(args.out_dir) / "metrics.json").string(), j);
  return 0;
}

int run_pump_profile(const CommonArgs& args, const Config& cfg) {
  const PumpPulse pulse = pump_from_config(cfg);
  const OpticalMedium medium = optical_medium_from_config(cfg);
  const double p_upper = cfg.get_double("metrics.p_upper");
  const double p_lower = cfg.get_double("metrics.p_lower");
  ensure_out_dir(args);

  const DepthProfile profile = depth_profile(pulse, medium, p_upper + p_lower);
  const double polarization = two_level_polarization(p_upper, p_lower);
  const double delta_n = inverted_spins(profile.n_total, polarization);
  const LinewidthCalibration cal =
      linewidth_calibration(delta_n, cfg.get_double("resonator.bandwidth_mhz"),
                            cfg.get_double("metrics.spin_linewidth_mhz"));
  const double density = inverted_density(cal.delta_n_prime, medium.crystal_volume_mm3);

  json j = provenance(cfg, "pump-profile", args);
  j["n_total"] = profile.n_total;
  j["polarization"] = polarization;
  j["delta_n_inverted"] = delta_n;
  j["linewidth_ratio_r"] = cal.ratio;
  j["ratio_above_unity"] = cal.ratio_above_unity;
  j["delta_n_prime"] = cal.delta_n_prime;
  j["delta_n_density_per_m3"] = density;
  j["note"] = "absorption/yield defaults are effective calibrated values; "
              "absolute pump-model outputs are calibration-conditional";
  write_json((fs::path(args.out_dir) / "pump.json").string(), j);
  if (cal.ratio_above_unity)
    std::cerr << "warning: linewidth ratio R > 1; calibration meaningless\n";
  if (args.format == "csv") {
    CsvTable table{{"depth_mm", "triplet_density_per_m3"}, {}};
    for (std::size_t i = 0; i < profile.depth_mm.size(); ++i)
      table.rows.push_back({profile.depth_mm[i], profile.triplet_density_per_m3[i]});
    write_csv((fs::path(args.out_dir) / "pump_profile.csv").string(), table);
  }
  return 0;
}

int run_fit(const CommonArgs& args, const Config& cfg, const std::string& model,
            const std::string& data_path) {
  auto [x, y] = read_xy_csv(data_path);
  ensure_out_dir(args);

  FitResult result;
  if (model == "line")
    result = fit_line(x, y);
  else if (model == "damped-oscillation")
    result = fit_damped_oscillation(x, y);
  else if (model == "lorentzian")
    result = fit_lorentzian(x, y);
  else if (model == "double-lorentzian")
    result = fit_double_lorentzian(x, y);
  else if (model == "piecewise-linear")
    result = fit_piecewise_linear(x, y);
  else
    throw ValidationError("unknown fit model: " + model);

  json j = provenance(cfg, "fit", args);
  j["model"] = model;
  j["data"] = data_path;
  json params = json::object();
  json errors = json::object();
  for (std::size_t i = 0; i < result.parameter_names.size(); ++i) {
    params[result.parameter_names[i]] = result.parameters[i];
    errors[result.parameter_names[i]] = result.std_errors[i];
  }
  j["parameters"] = params;
  j["std_errors"] = errors;
  j["rss"] = result.rss;
  j["converged"] = result.converged;
  j["degenerate_covariance"] = result.degenerate_covariance;
  j["iterations"] = result.iterations;
  write_json((fs::path(args.out_dir) / "fit.json").string(), j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"masersim: simulation and analysis toolkit for room-temperature "
               "pentacene masers"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs args;
  Config overrides;
  app.add_option("--config", args.config_path, "configuration file (overlays the preset)");
  app.add_option("--preset", args.preset, "named preset (paper)")
      ->check(CLI::IsMember({"paper"}));
  app.add_option("--out", args.out_dir, "output directory");
  app.add_option("--seed", args.seed, "seed recorded in output provenance");
  app.add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* levels = app.add_subcommand("levels", "triplet energy levels and transitions");
  add_override(levels, overrides, "--b0", "field.b0_mt", "static field, mT");
  add_override(levels, overrides, "--theta", "field.theta_deg", "goniometer angle, deg");

  auto* rot = app.add_subcommand("rotation-pattern", "angular trEPR spectra");
  std::string theta_spec = "0:10:180";
  rot->add_option("--theta", theta_spec, "angles: start:step:stop or comma list");
  add_override(rot, overrides, "--linewidth", "spectrum.linewidth_fwhm_mhz",
               "line FWHM, MHz");
  add_override(rot, overrides, "--lineshape", "spectrum.lineshape",
               "gaussian or lorentzian");

  auto* amplify = app.add_subcommand("amplify", "driven Maxwell-Bloch amplifier run");
  double threshold_db = 1.0;
  amplify->add_option("--threshold-db", threshold_db, "amplification duration threshold");
  add_override(amplify, overrides, "--p-in-dbm", "dynamics.p_in_dbm", "input power, dBm");
  add_override(amplify, overrides, "--t-span-us", "dynamics.t_span_us", "time span, us");
  add_override(amplify, overrides, "--q-loaded", "dynamics.q_loaded", "loaded Q");
  add_override(amplify, overrides, "--n0", "dynamics.n0", "initial inversion");

  auto* oscillate = app.add_subcommand("oscillate", "free-running maser burst");
  add_override(oscillate, overrides, "--n0", "dynamics.n0", "initial inversion");
  add_override(oscillate, overrides, "--q-loaded", "dynamics.q_loaded_boosted",
               "boosted loaded Q");
  add_override(oscillate, overrides, "--t-span-us", "dynamics.t_span_us", "time span, us");
  add_override(oscillate, overrides, "--seed-coherence", "dynamics.seed_coherence",
               "initial |S-|; -1 = sqrt(n0)");

  auto* metrics = app.add_subcommand("metrics", "closed-form maser metrics report");
  add_override(metrics, overrides, "--t-bath", "metrics.t_bath_k", "bath temperature, K");

  auto* pump = app.add_subcommand("pump-profile", "optical pump depth profile");
  add_override(pump, overrides, "--fluence", "pump.fluence_mj_cm2", "fluence, mJ/cm^2");

  auto* fit = app.add_subcommand("fit", "least-squares estimators on two-column CSV");
  std::string fit_model, fit_data;
  fit->add_option("--model", fit_model,
                  "line | damped-oscillation | lorentzian | double-lorentzian | "
                  "piecewise-linear")
      ->required();
  fit->add_option("--data", fit_data, "two-column CSV file")->required();

  auto* preset = app.add_subcommand("preset", "print the paper preset to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (preset->parsed()) {
      std::cout << Config::paper_preset_text();
      return 0;
    }
    Config cfg = load_config(args);
    cfg.merge(overrides);

    if (levels->parsed()) return run_levels(args, cfg);
    if (rot->parsed()) return run_rotation_pattern(args, cfg, theta_spec);
    if (amplify->parsed()) return run_amplify(args, cfg, threshold_db);
    if (oscillate->parsed()) return run_oscillate(args, cfg);
    if (metrics->parsed()) return run_metrics(args, cfg);
    if (pump->parsed()) return run_pump_profile(args, cfg);
    if (fit->parsed()) return run_fit(args, cfg, fit_model, fit_data);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
