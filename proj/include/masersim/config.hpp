// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_CONFIG_HPP
#define MASERSIM_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "masersim/dynamics.hpp"
#include "masersim/errors.hpp"
#include "masersim/geometry.hpp"
#include "masersim/metrics.hpp"
#include "masersim/pump.hpp"
#include "masersim/spin.hpp"
#include "masersim/trepr.hpp"

namespace masersim {

inline constexpr const char* kToolName = "masersim";
inline constexpr const char* kToolVersion = "1.0.0";

// Flat dotted-key configuration. Values keep their original text for
// provenance; typed access validates on read.
class Config {
 public:
  // Parses `key = value` lines; '#' starts a comment; blank lines ignored.
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config paper_preset();
  static const std::string& paper_preset_text();

  // Later assignments win (used to overlay a user file onto the preset).
  void merge(const Config& overlay);

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  // Key/value pairs in first-assignment order (stable for provenance output).
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

// Typed views over the config blocks. Each builder validates the block and
// throws ValidationError with an explanatory message.
SpinSystem spin_from_config(const Config& cfg);
WedgeMount mount_from_config(const Config& cfg);
LabOrientation orientation_from_config(const Config& cfg);
SpectrumConfig spectrum_from_config(const Config& cfg);
ResonatorParams resonator_from_config(const Config& cfg);
GainMedium medium_from_config(const Config& cfg);
PumpPulse pump_from_config(const Config& cfg);
OpticalMedium optical_medium_from_config(const Config& cfg);

// Maxwell-Bloch parameters for the amplifier/oscillator commands.
// q_loaded_override <= 0 keeps dynamics.q_loaded from the config.
MaxwellBlochParams maxwell_bloch_from_config(const Config& cfg,
                                             double q_loaded_override = 0.0);

double wedge_actual_from_config(const Config& cfg);  // -1 when not overridden

}  // namespace masersim

#endif
