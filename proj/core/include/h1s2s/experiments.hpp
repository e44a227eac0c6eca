#pragma once

// Power scans, the scenario matrix, the Doppler-exponent and frozen-nozzle
// studies, and the linewidth budget.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "h1s2s/ensemble.hpp"
#include "h1s2s/fitting.hpp"
#include "h1s2s/model.hpp"

namespace h1s2s {

/// Shared inputs of every study.
struct StudySettings {
  RunConfig config;
  SimulationModel model;
  unsigned threads = 0;
  std::uint64_t config_fingerprint = 0;
  std::pair<double, double> slope_window{0.1, 0.5};  // W, inclusive
};

[[nodiscard]] std::vector<double> default_scan_powers();

struct PowerScanResult {
  ScenarioSwitches scenario;
  std::uint64_t seed = 0;
  std::vector<double> powers;   // W
  std::vector<double> centers;  // Hz, NaN where the fit failed
  std::vector<double> widths;   // Hz, NaN where the fit failed
  std::vector<LorentzianFit> fits;
  std::vector<std::string> failures;  // empty string for a good fit
  std::vector<Spectrum> spectra;

  TrendFit center_linear;
  TrendFit width_linear;
  TrendFit center_quadratic;  // full range
  TrendFit width_quadratic;   // full range

  double k_shift = 0.0;  // Hz/mW
  double k_broad = 0.0;  // Hz/mW
  double center_intercept = 0.0;
  double width_intercept = 0.0;
};

/// Simulates and fits one line per power on a single shared ensemble.
/// Needs at least 4 powers with 3 inside the slope window.
[[nodiscard]] PowerScanResult power_scan(std::span<const double> powers,
                                         const StudySettings& settings,
                                         const ScenarioSwitches& scenario, std::uint64_t seed);

/// Same as power_scan on a caller-provided ensemble.
[[nodiscard]] PowerScanResult power_scan(std::span<const double> powers,
                                         const StudySettings& settings,
                                         const ScenarioSwitches& scenario,
                                         const Ensemble& ensemble);

/// The four (ionization, light shift) combinations in the order
/// (on, on), (off, on), (on, off), (off, off), all on one ensemble.
[[nodiscard]] std::array<ScenarioSwitches, 4> scenario_combinations(double noise_fraction = 0.0);
[[nodiscard]] std::array<PowerScanResult, 4> scenario_matrix(std::span<const double> powers,
                                                             const StudySettings& settings,
                                                             std::uint64_t seed);

struct DopplerStudyResult {
  double delay = 0.0;      // s
  double mean_v3 = 0.0;    // Hz
  double mean_v4 = 0.0;    // Hz
  double acceptance_v3 = 0.0;
  double acceptance_v4 = 0.0;
};

/// Detection-weighted mean second-order Doppler shift for v^3 and v^4 seeding
/// at the configured delay, from config.atoms_per_line gated atoms each.
[[nodiscard]] DopplerStudyResult doppler_exponent_study(const StudySettings& settings,
                                                        std::uint64_t seed);

struct FrozenNozzleScan {
  std::vector<double> powers;
  std::vector<double> radii;    // m
  std::vector<double> centers;  // Hz
  TrendFit center_linear;
  double intercept = 0.0;  // Hz
  double k_shift = 0.0;    // Hz/mW
};

struct FrozenNozzleResult {
  std::vector<FrozenNozzleScan> scans;
  std::vector<double> intercepts;
  double intercept_mean = 0.0;
  double intercept_stddev = 0.0;
};

struct FrozenNozzleOptions {
  int scans = 10;
  int points = 100;
  std::pair<double, double> power_range{0.05, 0.55};  // W
  /// Range of the random entry radius; equal ends give a fixed radius.
  std::pair<double, double> radius_range{283e-6, 0.65e-3};  // m
  /// Use the unrestricted nozzle instead of a random radius (control run).
  bool control = false;
};

/// Each scan spreads `points` powers uniformly over power_range, draws a
/// random entry radius and a fresh ensemble per point, fits centers on the
/// slope window and extrapolates to zero power.
[[nodiscard]] FrozenNozzleResult frozen_nozzle_study(const StudySettings& settings,
                                                     const FrozenNozzleOptions& options,
                                                     std::uint64_t seed);

/// Laser linewidth from the zero-power width budget: (exp - sim) / 4.
/// Throws DomainError when the experimental intercept is below the simulated one.
[[nodiscard]] double linewidth_budget(double width_intercept_sim, double width_intercept_exp);

}  // namespace h1s2s
