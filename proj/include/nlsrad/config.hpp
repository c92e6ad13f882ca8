#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlsrad/evolve.hpp"
#include "nlsrad/grid.hpp"

namespace nlsrad {

struct RunConfig {
  std::string command;
  EquationParams params;
  std::size_t n = 4096;
  double r_max = 32.0;
  EvolutionConfig evolution;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  // Initial datum / family: "cQ" (amplitude times the ground state) or
  // "gaussian" (amplitude * exp(-(r / width)^2)).
  std::string family = "cQ";
  double amplitude = 0.9;
  double width = 1.0;
  std::vector<double> amplitudes;  // sweep
  std::vector<double> widths;      // sweep, Gaussian family
  bool simulate = false;
  int workers = 1;
  std::vector<double> snapshot_times;
  bool allow_free_limit = false;   // gamma = 0 admitted
  bool oracle = false;             // ground-state: run the shooting cross-check
  double oracle_lo = 1.0;
  double oracle_hi = 10.0;
};

// One `key = value` assignment together with where it came from, used in
// error messages ("line 3", "flag --omega").
struct Setting {
  std::string value;
  std::string origin;
};

using SettingMap = std::map<std::string, Setting>;

// Parses line-oriented `key = value` text. Blank lines and lines starting
// with '#' are ignored. Throws kConfig on malformed lines and unknown keys,
// citing the line number.
SettingMap parse_settings(const std::string& text);
SettingMap read_settings_file(const std::string& path);

const std::vector<std::string>& known_keys();

// Applies settings to cfg in key order and validates the result. Later maps
// override earlier ones, so pass file settings before flag settings.
RunConfig parse_config(const std::string& command, const std::vector<SettingMap>& layers);

// Echo of every effective setting, suitable for a manifest.
std::map<std::string, std::string> describe(const RunConfig& cfg);

}  // namespace nlsrad
