#pragma once

// Flat "key = value" run configuration.
//
// One setting per line, '#' starts a comment, unknown and repeated keys are
// errors. Values use the units in the key name (power_per_direction_w,
// waist_um, ...) and are converted to SI on load.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "h1s2s/dopri5.hpp"
#include "h1s2s/ensemble.hpp"
#include "h1s2s/experiments.hpp"
#include "h1s2s/model.hpp"

namespace h1s2s {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string key = {});

  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct Configuration {
  RunConfig run;
  BeamlineGeometry geometry;
  ScenarioSwitches scenario;
  AtomicCoefficients coefficients;
  PhysicalConstants constants;
  IntegratorSettings integrator;
  unsigned threads = 0;  // 0: machine parallelism

  std::vector<double> powers = default_scan_powers();  // W
  double rect_intensity = 4e6;   // W/m^2
  double rect_duration = 1e-3;   // s
  int frozen_scans = 10;
  int frozen_points = 100;
  std::pair<double, double> frozen_power_range{0.05, 0.55};      // W
  std::pair<double, double> frozen_radius_range{283e-6, 0.65e-3};  // m
  bool record_atoms = false;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  [[nodiscard]] SimulationModel model() const;
  [[nodiscard]] StudySettings study() const;
};

/// Parses and validates a configuration; missing keys keep their defaults.
[[nodiscard]] Configuration parse_config(std::istream& in);
[[nodiscard]] Configuration parse_config_text(std::string_view text);
[[nodiscard]] Configuration parse_config_file(const std::filesystem::path& path);

/// Applies one "key=value" override (from the command line) and revalidates.
void apply_override(Configuration& config, std::string_view assignment);

/// Every key with its current value. Lossless for any configuration that was
/// parsed from text: parse_config_text(echo_config(c)) == c.
[[nodiscard]] std::string echo_config(const Configuration& config);

/// Names of all recognized keys in echo order.
[[nodiscard]] std::vector<std::string> config_keys();

/// FNV-1a over the echoed configuration without `threads`, combined with the
/// scenario tag and noise level.
[[nodiscard]] std::uint64_t config_fingerprint(const Configuration& config,
                                               const ScenarioSwitches& scenario);

[[nodiscard]] bool operator==(const Configuration& a, const Configuration& b);

}  // namespace h1s2s
