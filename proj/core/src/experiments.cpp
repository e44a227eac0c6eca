#include "h1s2s/experiments.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "h1s2s/beamline.hpp"
#include "h1s2s/random.hpp"

namespace h1s2s {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool in_window(double p, std::pair<double, double> w) { return p >= w.first && p <= w.second; }

void check_scan_powers(std::span<const double> powers, std::pair<double, double> window) {
  if (powers.size() < 4) {
    throw DomainError("power scan needs at least 4 powers, got " + std::to_string(powers.size()));
  }
  int inside = 0;
  for (double p : powers) {
    if (!(p >= 0.0)) throw DomainError("scan powers must be non-negative");
    if (in_window(p, window)) ++inside;
  }
  if (inside < 3) {
    throw DomainError("power scan needs at least 3 powers inside the slope window, got " +
                      std::to_string(inside));
  }
}

std::vector<TrendPoint> trend_points(const std::vector<double>& powers,
                                     const std::vector<double>& values) {
  std::vector<TrendPoint> pts;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (std::isfinite(values[i])) pts.push_back({powers[i], values[i]});
  }
  return pts;
}

}  // namespace

std::vector<double> default_scan_powers() {
  return {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9, 1.2};
}

PowerScanResult power_scan(std::span<const double> powers, const StudySettings& settings,
                           const ScenarioSwitches& scenario, std::uint64_t seed) {
  check_scan_powers(powers, settings.slope_window);
  const Ensemble ensemble =
      draw_ensemble(settings.config, settings.model.geometry, settings.model.constants, seed);
  return power_scan(powers, settings, scenario, ensemble);
}

PowerScanResult power_scan(std::span<const double> powers, const StudySettings& settings,
                           const ScenarioSwitches& scenario, const Ensemble& ensemble) {
  check_scan_powers(powers, settings.slope_window);
  PowerScanResult result;
  result.scenario = scenario;
  result.seed = ensemble.seed;
  const GaussianMode mode = settings.model.mode();
  LineOptions options;
  options.threads = settings.threads;
  options.config_fingerprint = settings.config_fingerprint;

  for (double power : powers) {
    const auto grid =
        detuning_grid_for(settings.config.grid, power, settings.model.coefficients, mode);
    Spectrum spectrum =
        simulate_line(ensemble, power, grid, scenario, settings.model, options).spectrum;
    result.powers.push_back(power);
    try {
      const LorentzianFit fit = fit_lorentzian(spectrum);
      result.fits.push_back(fit);
      result.centers.push_back(fit.converged ? fit.center : kNaN);
      result.widths.push_back(fit.converged ? fit.fwhm : kNaN);
      result.failures.emplace_back(fit.converged ? "" : "fit did not converge");
    } catch (const FitError& e) {
      result.fits.emplace_back();
      result.centers.push_back(kNaN);
      result.widths.push_back(kNaN);
      result.failures.emplace_back(e.what());
    }
    result.spectra.push_back(std::move(spectrum));
  }

  const auto centers = trend_points(result.powers, result.centers);
  const auto widths = trend_points(result.powers, result.widths);
  const std::pair<double, double> full{0.0, std::numeric_limits<double>::infinity()};
  result.center_linear = fit_trend(centers, 1, settings.slope_window);
  result.width_linear = fit_trend(widths, 1, settings.slope_window);
  result.center_quadratic = fit_trend(centers, 2, full);
  result.width_quadratic = fit_trend(widths, 2, full);
  result.k_shift = result.center_linear.slope_hz_per_mw();
  result.k_broad = result.width_linear.slope_hz_per_mw();
  result.center_intercept = result.center_linear.intercept();
  result.width_intercept = result.width_linear.intercept();
  return result;
}

std::array<ScenarioSwitches, 4> scenario_combinations(double noise_fraction) {
  return {ScenarioSwitches{true, true, noise_fraction}, ScenarioSwitches{false, true, noise_fraction},
          ScenarioSwitches{true, false, noise_fraction},
          ScenarioSwitches{false, false, noise_fraction}};
}

std::array<PowerScanResult, 4> scenario_matrix(std::span<const double> powers,
                                               const StudySettings& settings, std::uint64_t seed) {
  check_scan_powers(powers, settings.slope_window);
  const Ensemble ensemble =
      draw_ensemble(settings.config, settings.model.geometry, settings.model.constants, seed);
  std::array<PowerScanResult, 4> out;
  const auto combos = scenario_combinations();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    out[i] = power_scan(powers, settings, combos[i], ensemble);
  }
  return out;
}

DopplerStudyResult doppler_exponent_study(const StudySettings& settings, std::uint64_t seed) {
  if (!(settings.config.detection_delay > 0.0)) {
    throw DomainError("Doppler exponent study needs a positive detection delay");
  }
  DopplerStudyResult result;
  result.delay = settings.config.detection_delay;
  for (int exponent : {3, 4}) {
    RunConfig config = settings.config;
    config.velocity_exponent = exponent;
    const Ensemble ensemble =
        draw_ensemble(config, settings.model.geometry, settings.model.constants, seed);
    std::vector<AtomRecord> records(ensemble.atoms.size());
    for (std::size_t a = 0; a < records.size(); ++a) {
      records[a].trajectory = ensemble.atoms[a];
      records[a].detection_weight = detection_weight(ensemble.atoms[a].speed(), ensemble.v_max);
    }
    const double mean = mean_doppler_of_detected(records, DopplerWeighting::kUniform,
                                                 settings.model.coefficients,
                                                 settings.model.constants);
    if (exponent == 3) {
      result.mean_v3 = mean;
      result.acceptance_v3 = ensemble.acceptance_fraction();
    } else {
      result.mean_v4 = mean;
      result.acceptance_v4 = ensemble.acceptance_fraction();
    }
  }
  return result;
}

FrozenNozzleResult frozen_nozzle_study(const StudySettings& settings,
                                       const FrozenNozzleOptions& options, std::uint64_t seed) {
  const auto [r_lo, r_hi] = options.radius_range;
  if (!options.control &&
      !(r_lo > 0.0 && r_lo <= r_hi && r_hi <= settings.model.geometry.d1_radius)) {
    throw DomainError("frozen nozzle radius range must lie in (0, d1_radius]");
  }
  if (options.scans < 1 || options.points < 2) {
    throw DomainError("frozen nozzle study needs at least 1 scan and 2 points");
  }
  const auto [p_lo, p_hi] = options.power_range;
  if (!(p_lo >= 0.0 && p_lo < p_hi)) throw DomainError("invalid frozen nozzle power range");

  const GaussianMode mode = settings.model.mode();
  LineOptions line_options;
  line_options.threads = settings.threads;
  line_options.config_fingerprint = settings.config_fingerprint;

  FrozenNozzleResult result;
  for (int s = 0; s < options.scans; ++s) {
    FrozenNozzleScan scan;
    for (int i = 0; i < options.points; ++i) {
      const double power = p_lo + (p_hi - p_lo) * i / (options.points - 1);
      SimulationModel model = settings.model;
      double radius = model.geometry.entry_radius();
      if (!options.control) {
        RandomStream stream(seed, StreamDomain::kNozzleRadius, static_cast<std::uint64_t>(s),
                            static_cast<std::uint32_t>(i));
        radius = r_lo + (r_hi - r_lo) * stream.uniform();
        model.geometry.frozen_nozzle_radius = radius;
      }
      const std::uint64_t point_seed =
          derive_seed(seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(i));
      const Ensemble ensemble =
          draw_ensemble(settings.config, model.geometry, model.constants, point_seed);
      const auto grid = detuning_grid_for(settings.config.grid, power, model.coefficients, mode);
      const Spectrum spectrum =
          simulate_line(ensemble, power, grid, ScenarioSwitches{}, model, line_options).spectrum;
      double center = kNaN;
      try {
        const LorentzianFit fit = fit_lorentzian(spectrum);
        if (fit.converged) center = fit.center;
      } catch (const FitError&) {
      }
      scan.powers.push_back(power);
      scan.radii.push_back(radius);
      scan.centers.push_back(center);
    }
    scan.center_linear = fit_trend(trend_points(scan.powers, scan.centers), 1,
                                   settings.slope_window);
    scan.intercept = scan.center_linear.intercept();
    scan.k_shift = scan.center_linear.slope_hz_per_mw();
    result.intercepts.push_back(scan.intercept);
    result.scans.push_back(std::move(scan));
  }
  const auto [mean, sd] = mean_and_stddev(result.intercepts);
  result.intercept_mean = mean;
  result.intercept_stddev = sd;
  return result;
}

double linewidth_budget(double width_intercept_sim, double width_intercept_exp) {
  if (!std::isfinite(width_intercept_sim) || !std::isfinite(width_intercept_exp)) {
    throw DomainError("linewidth budget inputs must be finite");
  }
  const double laser = (width_intercept_exp - width_intercept_sim) / 4.0;
  if (laser < 0.0) {
    throw DomainError("experimental width intercept is below the simulated one");
  }
  return laser;
}

}  // namespace h1s2s
