#include "h1s2s/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "json.hpp"

namespace h1s2s {

namespace {

using nlohmann::ordered_json;

// Value as it appears when printed with 6 significant digits; null if not finite.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

ordered_json nums(std::span<const double> values) {
  ordered_json a = ordered_json::array();
  for (double v : values) a.push_back(num(v));
  return a;
}

ordered_json fit_object(const LorentzianFit& fit) {
  ordered_json j;
  j["center_hz"] = num(fit.center);
  j["fwhm_hz"] = num(fit.fwhm);
  j["amplitude"] = num(fit.amplitude);
  j["offset"] = num(fit.offset);
  j["uncertainties"] = nums(fit.parameter_uncertainties);
  j["residual_norm"] = num(fit.residual_norm);
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  return j;
}

ordered_json trend_object(const TrendFit& fit) {
  ordered_json j;
  j["degree"] = fit.degree;
  j["coefficients"] = nums(fit.coefficients);
  j["uncertainties"] = nums(fit.coefficient_uncertainties);
  j["range_w"] = {num(fit.fit_range.first),
                  std::isfinite(fit.fit_range.second) ? num(fit.fit_range.second) : nullptr};
  j["points_used"] = fit.points_used;
  return j;
}

ordered_json scan_object(const PowerScanResult& scan) {
  ordered_json j;
  j["scenario"] = scan.scenario.tag();
  j["ionization_on"] = scan.scenario.ionization_on;
  j["ac_stark_on"] = scan.scenario.ac_stark_on;
  j["noise_fraction"] = num(scan.scenario.intensity_noise_fraction);
  j["seed"] = scan.seed;
  j["k_shift_hz_per_mw"] = num(scan.k_shift);
  j["k_shift_uncertainty"] = num(scan.center_linear.slope_uncertainty_hz_per_mw());
  j["k_broad_hz_per_mw"] = num(scan.k_broad);
  j["k_broad_uncertainty"] = num(scan.width_linear.slope_uncertainty_hz_per_mw());
  j["center_intercept_hz"] = num(scan.center_intercept);
  j["center_intercept_uncertainty"] = num(scan.center_linear.coefficient_uncertainties.at(0));
  j["width_intercept_hz"] = num(scan.width_intercept);
  j["width_intercept_uncertainty"] = num(scan.width_linear.coefficient_uncertainties.at(0));
  j["center_linear"] = trend_object(scan.center_linear);
  j["width_linear"] = trend_object(scan.width_linear);
  j["center_quadratic"] = trend_object(scan.center_quadratic);
  j["width_quadratic"] = trend_object(scan.width_quadratic);
  j["powers_w"] = nums(scan.powers);
  j["centers_hz"] = nums(scan.centers);
  j["widths_hz"] = nums(scan.widths);
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < scan.failures.size(); ++i) {
    if (!scan.failures[i].empty()) {
      failures.push_back({{"power_w", num(scan.powers[i])}, {"error", scan.failures[i]}});
    }
  }
  j["failures"] = failures;
  return j;
}

ordered_json frozen_object(const FrozenNozzleResult& r) {
  ordered_json j;
  j["scans"] = r.scans.size();
  j["intercepts_hz"] = nums(r.intercepts);
  j["intercept_mean_hz"] = num(r.intercept_mean);
  j["intercept_stddev_hz"] = num(r.intercept_stddev);
  std::vector<double> slopes;
  for (const auto& s : r.scans) slopes.push_back(s.k_shift);
  j["k_shift_hz_per_mw"] = nums(slopes);
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out = kSpectrumCsvHeader;
  out += '\n';
  const std::string atoms = std::to_string(spectrum.atoms_used);
  for (std::size_t i = 0; i < spectrum.detunings.size(); ++i) {
    out += format_number(spectrum.detunings[i]);
    out += ',';
    out += format_number(spectrum.signal.at(i));
    out += ',';
    out += atoms;
    out += '\n';
  }
  return out;
}

std::string spectrum_sidecar_json(const Spectrum& spectrum) {
  ordered_json j;
  j["config_fingerprint"] = spectrum.config_fingerprint;
  j["seed"] = spectrum.seed;
  j["atoms_used"] = spectrum.atoms_used;
  j["points"] = spectrum.detunings.size();
  return dump(j);
}

std::string fit_json(const LorentzianFit& fit) { return dump(fit_object(fit)); }

std::string trend_json(const TrendFit& fit) { return dump(trend_object(fit)); }

std::string scan_csv(const PowerScanResult& scan) {
  std::string out = kFitCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < scan.powers.size(); ++i) {
    const LorentzianFit& f = scan.fits[i];
    const bool ok = scan.failures[i].empty();
    out += format_number(scan.powers[i]) + ',' + format_number(ok ? f.center : NAN) + ',' +
           format_number(ok ? f.fwhm : NAN) + ',' + format_number(ok ? f.amplitude : NAN) + ',' +
           format_number(ok ? f.offset : NAN) + ',' + (f.converged ? "true" : "false") + '\n';
  }
  return out;
}

std::string scan_summary_json(const PowerScanResult& scan, std::uint64_t config_fingerprint) {
  ordered_json j = scan_object(scan);
  j["config_fingerprint"] = config_fingerprint;
  return dump(j);
}

std::string scenario_matrix_json(std::span<const PowerScanResult> scans,
                                 std::uint64_t config_fingerprint) {
  ordered_json j;
  j["config_fingerprint"] = config_fingerprint;
  ordered_json list = ordered_json::array();
  for (const auto& s : scans) list.push_back(scan_object(s));
  j["scenarios"] = list;
  return dump(j);
}

std::string doppler_study_csv(std::span<const DopplerStudyResult> rows) {
  std::string out = "delay_us,mean_doppler_v3_hz,mean_doppler_v4_hz,acceptance_v3,acceptance_v4\n";
  for (const auto& r : rows) {
    out += format_number(r.delay * 1e6) + ',' + format_number(r.mean_v3) + ',' +
           format_number(r.mean_v4) + ',' + format_number(r.acceptance_v3) + ',' +
           format_number(r.acceptance_v4) + '\n';
  }
  return out;
}

std::string doppler_study_json(std::span<const DopplerStudyResult> rows, std::uint64_t seed) {
  ordered_json j;
  j["seed"] = seed;
  ordered_json list = ordered_json::array();
  for (const auto& r : rows) {
    list.push_back({{"delay_us", num(r.delay * 1e6)},
                    {"mean_doppler_v3_hz", num(r.mean_v3)},
                    {"mean_doppler_v4_hz", num(r.mean_v4)},
                    {"difference_hz", num(r.mean_v4 - r.mean_v3)}});
  }
  j["delays"] = list;
  return dump(j);
}

std::string frozen_points_csv(const FrozenNozzleResult& result) {
  std::string out = "scan,power_w,radius_um,center_hz\n";
  for (std::size_t s = 0; s < result.scans.size(); ++s) {
    const auto& scan = result.scans[s];
    for (std::size_t i = 0; i < scan.powers.size(); ++i) {
      out += std::to_string(s) + ',' + format_number(scan.powers[i]) + ',' +
             format_number(scan.radii[i] * 1e6) + ',' + format_number(scan.centers[i]) + '\n';
    }
  }
  return out;
}

std::string frozen_scans_csv(const FrozenNozzleResult& result) {
  std::string out = "scan,intercept_hz,k_shift_hz_per_mw\n";
  for (std::size_t s = 0; s < result.scans.size(); ++s) {
    out += std::to_string(s) + ',' + format_number(result.scans[s].intercept) + ',' +
           format_number(result.scans[s].k_shift) + '\n';
  }
  return out;
}

std::string frozen_summary_json(const FrozenNozzleResult& random,
                                const FrozenNozzleResult& control, std::uint64_t seed) {
  ordered_json j;
  j["seed"] = seed;
  j["random_radius"] = frozen_object(random);
  j["control"] = frozen_object(control);
  j["scatter_ratio"] = control.intercept_stddev > 0.0
                           ? num(random.intercept_stddev / control.intercept_stddev)
                           : ordered_json(nullptr);
  return dump(j);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " +
                        ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::string line_file_stem(double power_w) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "line_%.6g", power_w * 1e3);
  return buf;
}

}  // namespace h1s2s
