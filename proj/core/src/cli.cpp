#include "h1s2s/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "h1s2s/bloch.hpp"
#include "h1s2s/config.hpp"
#include "h1s2s/ensemble.hpp"
#include "h1s2s/experiments.hpp"
#include "h1s2s/fitting.hpp"
#include "h1s2s/output.hpp"
#include "json.hpp"

namespace h1s2s {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

Configuration load(const CommandRequest& request) {
  Configuration config =
      request.config_path.empty() ? Configuration{} : parse_config_file(request.config_path);
  for (const std::string& o : request.overrides) apply_override(config, o);
  if (request.seed_override) config.run.rng_seed = *request.seed_override;
  config.validate();
  return config;
}

void write_echo(const fs::path& dir, const Configuration& config) {
  write_text_file(dir / "config_echo.conf", echo_config(config));
}

ordered_json run_line(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const SimulationModel model = config.model();
  const Ensemble ensemble =
      draw_ensemble(config.run, model.geometry, model.constants, config.run.rng_seed);
  const auto grid = detuning_grid_for(config.run.grid, config.run.power_per_direction,
                                      model.coefficients, model.mode());
  LineOptions options;
  options.threads = config.threads;
  options.keep_records = config.record_atoms;
  options.config_fingerprint = config_fingerprint(config, config.scenario);
  const LineResult line = simulate_line(ensemble, config.run.power_per_direction, grid,
                                        config.scenario, model, options);
  write_text_file(dir / "line.csv", spectrum_csv(line.spectrum));
  write_text_file(dir / "line.json", spectrum_sidecar_json(line.spectrum));

  ordered_json summary;
  summary["command"] = "line";
  summary["scenario"] = config.scenario.tag();
  summary["power_w"] = num(config.run.power_per_direction);
  summary["acceptance"] = num(ensemble.acceptance_fraction());
  try {
    const LorentzianFit fit = fit_lorentzian(line.spectrum);
    write_text_file(dir / "line_fit.json", fit_json(fit));
    out << "line " << config.scenario.tag() << " at "
        << format_number(config.run.power_per_direction * 1e3)
        << " mW: center = " << format_number(fit.center)
        << " Hz, fwhm = " << format_number(fit.fwhm) << " Hz\n";
    summary["center_hz"] = num(fit.center);
    summary["fwhm_hz"] = num(fit.fwhm);
    summary["converged"] = fit.converged;
  } catch (const FitError& e) {
    out << "line " << config.scenario.tag() << ": no fit (" << e.what() << ")\n";
    summary["fit_error"] = e.what();
  }

  if (config.record_atoms) {
    std::string csv = "atom,speed_m_s,detection_weight,peak_response\n";
    for (std::size_t a = 0; a < line.records.size(); ++a) {
      const AtomRecord& r = line.records[a];
      csv += std::to_string(a) + ',' + format_number(r.trajectory.speed()) + ',' +
             format_number(r.detection_weight) + ',' + format_number(r.peak_response()) + '\n';
    }
    write_text_file(dir / "atoms.csv", csv);
    const double uniform = mean_doppler_of_detected(line.records, DopplerWeighting::kUniform,
                                                    model.coefficients, model.constants);
    const double weighted = mean_doppler_of_detected(line.records, DopplerWeighting::kSignal,
                                                     model.coefficients, model.constants);
    out << "mean second-order Doppler shift: " << format_number(uniform)
        << " Hz (detected), " << format_number(weighted) << " Hz (signal weighted)\n";
    summary["mean_doppler_hz"] = num(uniform);
    summary["mean_doppler_signal_weighted_hz"] = num(weighted);
  }
  return summary;
}

ordered_json run_rect(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const auto grid =
      uniform_grid(config.run.grid.half_span, std::max(config.run.grid.points, 201));
  ordered_json summary;
  summary["command"] = "rect-pulse";
  summary["intensity_w_m2"] = num(config.rect_intensity);
  summary["duration_s"] = num(config.rect_duration);
  for (bool ion : {true, false}) {
    ScenarioSwitches s = config.scenario;
    s.ionization_on = ion;
    Spectrum spec = rect_pulse_response(config.rect_intensity, config.rect_duration, grid, s,
                                        config.coefficients, config.constants, config.integrator);
    spec.config_fingerprint = config_fingerprint(config, s);
    spec.seed = config.run.rng_seed;
    const std::string stem = ion ? "rect_ion1" : "rect_ion0";
    write_text_file(dir / (stem + ".csv"), spectrum_csv(spec));
    write_text_file(dir / (stem + ".json"), spectrum_sidecar_json(spec));
    double fwhm = std::nan("");
    try {
      fwhm = sampled_fwhm(spec.detunings, spec.signal);
    } catch (const DomainError&) {
    }
    const double peak = *std::max_element(spec.signal.begin(), spec.signal.end());
    out << "rect-pulse ionization " << (ion ? "on" : "off") << ": fwhm = " << format_number(fwhm)
        << " Hz, peak = " << format_number(peak) << "\n";
    summary[ion ? "fwhm_ion_on_hz" : "fwhm_ion_off_hz"] = num(fwhm);
    summary[ion ? "peak_ion_on" : "peak_ion_off"] = num(peak);
  }
  return summary;
}

void print_scan(const PowerScanResult& scan, std::ostream& out) {
  out << "power-scan " << scan.scenario.tag() << ": k_shift = " << format_number(scan.k_shift)
      << " Hz/mW, k_broad = " << format_number(scan.k_broad)
      << " Hz/mW, center intercept = " << format_number(scan.center_intercept)
      << " Hz, width intercept = " << format_number(scan.width_intercept) << " Hz\n";
  for (std::size_t i = 0; i < scan.powers.size(); ++i) {
    if (!scan.failures[i].empty()) {
      out << "  fit failed at " << format_number(scan.powers[i]) << " W: " << scan.failures[i]
          << "\n";
    }
  }
}

ordered_json scan_brief(const PowerScanResult& scan) {
  return {{"scenario", scan.scenario.tag()},
          {"k_shift_hz_per_mw", num(scan.k_shift)},
          {"k_broad_hz_per_mw", num(scan.k_broad)},
          {"center_intercept_hz", num(scan.center_intercept)},
          {"width_intercept_hz", num(scan.width_intercept)}};
}

ordered_json run_scan(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const StudySettings settings = config.study();
  const PowerScanResult scan =
      power_scan(config.powers, settings, config.scenario, config.run.rng_seed);
  write_text_file(dir / "scan.csv", scan_csv(scan));
  write_text_file(dir / "scan_summary.json",
                  scan_summary_json(scan, settings.config_fingerprint));
  for (std::size_t i = 0; i < scan.powers.size(); ++i) {
    write_text_file(dir / (line_file_stem(scan.powers[i]) + ".csv"),
                    spectrum_csv(scan.spectra[i]));
  }
  print_scan(scan, out);
  ordered_json summary = scan_brief(scan);
  summary["command"] = "power-scan";
  return summary;
}

ordered_json run_matrix(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const StudySettings settings = config.study();
  const auto scans = scenario_matrix(config.powers, settings, config.run.rng_seed);
  for (const PowerScanResult& scan : scans) {
    write_text_file(dir / ("scan_" + scan.scenario.tag() + ".csv"), scan_csv(scan));
    print_scan(scan, out);
  }
  write_text_file(dir / "matrix_summary.json",
                  scenario_matrix_json(scans, settings.config_fingerprint));
  ordered_json summary;
  summary["command"] = "scenario-matrix";
  ordered_json list = ordered_json::array();
  for (const auto& scan : scans) list.push_back(scan_brief(scan));
  summary["scenarios"] = list;
  return summary;
}

ordered_json run_doppler(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const StudySettings settings = config.study();
  const DopplerStudyResult r = doppler_exponent_study(settings, config.run.rng_seed);
  const DopplerStudyResult rows[] = {r};
  write_text_file(dir / "doppler.csv", doppler_study_csv(rows));
  write_text_file(dir / "doppler_summary.json", doppler_study_json(rows, config.run.rng_seed));
  out << "doppler-study at " << format_number(r.delay * 1e6)
      << " us: v^3 mean = " << format_number(r.mean_v3)
      << " Hz, v^4 mean = " << format_number(r.mean_v4) << " Hz\n";
  return {{"command", "doppler-study"},
          {"delay_us", num(r.delay * 1e6)},
          {"mean_doppler_v3_hz", num(r.mean_v3)},
          {"mean_doppler_v4_hz", num(r.mean_v4)}};
}

ordered_json run_frozen(const Configuration& config, const fs::path& dir, std::ostream& out) {
  const StudySettings settings = config.study();
  FrozenNozzleOptions options;
  options.scans = config.frozen_scans;
  options.points = config.frozen_points;
  options.power_range = config.frozen_power_range;
  options.radius_range = config.frozen_radius_range;
  const FrozenNozzleResult random = frozen_nozzle_study(settings, options, config.run.rng_seed);
  options.control = true;
  const FrozenNozzleResult control = frozen_nozzle_study(settings, options, config.run.rng_seed);
  write_text_file(dir / "frozen_points.csv", frozen_points_csv(random));
  write_text_file(dir / "frozen_scans.csv", frozen_scans_csv(random));
  write_text_file(dir / "frozen_control_scans.csv", frozen_scans_csv(control));
  write_text_file(dir / "frozen_summary.json",
                  frozen_summary_json(random, control, config.run.rng_seed));
  out << "frozen-nozzle: intercept scatter = " << format_number(random.intercept_stddev)
      << " Hz (random radius), " << format_number(control.intercept_stddev)
      << " Hz (control)\n";
  return {{"command", "frozen-nozzle"},
          {"intercept_stddev_hz", num(random.intercept_stddev)},
          {"control_intercept_stddev_hz", num(control.intercept_stddev)}};
}

double parse_double_argument(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("'" + text + "' is not a number");
  }
  return v;
}

ordered_json run_budget(const CommandRequest& request, std::ostream& out) {
  if (request.arguments.size() != 2) {
    throw DomainError("budget expects two values: simulated and experimental width intercepts (Hz)");
  }
  const double sim = parse_double_argument(request.arguments[0]);
  const double exp = parse_double_argument(request.arguments[1]);
  const double laser = linewidth_budget(sim, exp);
  out << "laser linewidth: " << format_number(laser) << " Hz\n";
  return {{"command", "budget"},
          {"width_intercept_sim_hz", num(sim)},
          {"width_intercept_exp_hz", num(exp)},
          {"laser_linewidth_hz", num(laser)}};
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands = {
      "line", "rect-pulse", "power-scan", "scenario-matrix", "doppler-study", "frozen-nozzle",
      "budget"};
  return commands;
}

int run(const CommandRequest& request, std::ostream& out, std::ostream& err) {
  const auto& commands = known_commands();
  if (std::find(commands.begin(), commands.end(), request.command) == commands.end()) {
    err << "error: unknown command '" << request.command << "'\n";
    return 2;
  }
  try {
    ordered_json summary;
    if (request.command == "budget") {
      summary = run_budget(request, out);
    } else {
      const Configuration config = load(request);
      const fs::path& dir = request.output_dir;
      write_echo(dir, config);
      if (request.command == "line") {
        summary = run_line(config, dir, out);
      } else if (request.command == "rect-pulse") {
        summary = run_rect(config, dir, out);
      } else if (request.command == "power-scan") {
        summary = run_scan(config, dir, out);
      } else if (request.command == "scenario-matrix") {
        summary = run_matrix(config, dir, out);
      } else if (request.command == "doppler-study") {
        summary = run_doppler(config, dir, out);
      } else {
        summary = run_frozen(config, dir, out);
      }
      summary["seed"] = config.run.rng_seed;
      summary["config_fingerprint"] = config_fingerprint(config, config.scenario);
    }
    out << summary.dump() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error in " << request.command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace h1s2s
