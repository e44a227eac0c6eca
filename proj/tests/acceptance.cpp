// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// Sizes are chosen for a single core; H1S2S_ACCEPTANCE_ATOMS overrides the
// atoms per line of the power scans.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "h1s2s/beamline.hpp"
#include "h1s2s/bloch.hpp"
#include "h1s2s/cli.hpp"
#include "h1s2s/experiments.hpp"
#include "h1s2s/fitting.hpp"
#include "h1s2s/optics.hpp"
#include "h1s2s/random.hpp"

using namespace h1s2s;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::int64_t scan_atoms() {
  if (const char* env = std::getenv("H1S2S_ACCEPTANCE_ATOMS")) return std::atoll(env);
  return 4000;
}

const std::vector<double>& scan_powers() {
  static const std::vector<double> p = default_scan_powers();
  return p;
}

// The scenario matrix backs criteria 4, 5 and 6; computed once.
const std::array<PowerScanResult, 4>& matrix() {
  static const std::array<PowerScanResult, 4> m = [] {
    StudySettings s;
    s.config.atoms_per_line = scan_atoms();
    return scenario_matrix(scan_powers(), s, s.config.rng_seed);
  }();
  return m;
}

Outcome ionization_anchor() {
  const double g = ionization_rate(4e6, AtomicCoefficients{}, PhysicalConstants{});
  return {std::abs(g / 480.8 - 1.0) <= 0.005, "gamma_i(4 MW/m^2) = " + fmt("%.2f Hz", g)};
}

Outcome focal_intensity() {
  const GaussianMode mode = GaussianMode::from_geometry(BeamlineGeometry{});
  const double i0 = intensity(mode, 0.0, 0.0, 1.0);
  return {std::abs(i0 / 16e6 - 1.0) <= 0.02, "I(0, waist, 1 W) = " + fmt("%.4g W/m^2", i0)};
}

Outcome rabi_oracle() {
  const AtomicCoefficients co;
  const PhysicalConstants pc;
  RandomStream rng(2024, StreamDomain::kTest, 1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double intensity_value = 1e5 + 3e7 * rng.uniform();
    const double t = 1e-5 + 3e-3 * rng.uniform();
    const DensityState s = evolve_constant(DensityState::ground(), intensity_value, 0.0, 0.0, t,
                                           ScenarioSwitches{false, false, 0.0}, co, pc);
    const double expected =
        std::pow(std::sin(std::numbers::pi * rabi_frequency(intensity_value, co, pc) * t), 2);
    worst = std::max(worst, std::abs(s.rho_ee - expected));
  }
  double trace_dev = 0.0;
  evolve(DensityState::ground(), [](double) { return 1e7; }, 250.0, 0.0, 2e-3,
         ScenarioSwitches{false, true, 0.0}, co, pc, IntegratorSettings{}, nullptr,
         [&](double, const DensityState& s) {
           trace_dev = std::max(trace_dev, std::abs(s.trace() - 1.0));
         });
  double previous = 1.0;
  bool monotone = true;
  evolve(DensityState::ground(), [](double t) { return 1e7 * (1.0 + std::sin(3e3 * t)); }, 250.0,
         0.0, 2e-3, ScenarioSwitches{true, true, 0.0}, co, pc, IntegratorSettings{}, nullptr,
         [&](double, const DensityState& s) {
           if (s.trace() > previous + 1e-12) monotone = false;
           previous = s.trace();
         });
  return {worst <= 1e-6 && trace_dev <= 1e-8 && monotone,
          "max |rho_ee - sin^2| = " + fmt("%.2e", worst) + ", trace drift " +
              fmt("%.2e", trace_dev) + ", ionizing trace " +
              (monotone ? "non-increasing" : "increased")};
}

Outcome zero_power_intercept() {
  const auto& m = matrix();
  double lo = m[0].center_intercept;
  double hi = lo;
  std::string list;
  for (const auto& scan : m) {
    lo = std::min(lo, scan.center_intercept);
    hi = std::max(hi, scan.center_intercept);
    list += " " + scan.scenario.tag() + "=" + fmt("%.1f", scan.center_intercept);
  }
  const bool physical_ok = std::abs(m[0].center_intercept + 20.0) <= 5.0;
  const bool converge_ok = hi - lo <= 6.0;
  return {physical_ok && converge_ok,
          "intercepts (Hz):" + list + "; spread " + fmt("%.1f Hz", hi - lo)};
}

Outcome slopes() {
  const auto& s = matrix()[0];
  const bool ok = s.k_shift >= 1.37 && s.k_shift <= 1.85 && s.k_broad >= 1.85 && s.k_broad <= 2.66;
  return {ok, "k_shift = " + fmt("%.3f", s.k_shift) + " Hz/mW, k_broad = " +
                  fmt("%.3f Hz/mW", s.k_broad)};
}

Outcome width_intercept() {
  const auto& s = matrix()[0];
  return {std::abs(s.width_intercept - 550.0) <= 25.0,
          "width intercept = " + fmt("%.1f Hz", s.width_intercept)};
}

Outcome doppler_exponent() {
  StudySettings s;
  s.config.atoms_per_line = 20000;
  const auto a = doppler_exponent_study(s, s.config.rng_seed);
  s.config.detection_delay = 2210e-6;
  const auto b = doppler_exponent_study(s, s.config.rng_seed);
  const bool values = std::abs(a.mean_v3 + 20.0) <= 2.0 && std::abs(a.mean_v4 + 23.0) <= 2.0;
  const bool shrinks = std::abs(b.mean_v4 - b.mean_v3) < std::abs(a.mean_v4 - a.mean_v3);
  return {values && shrinks, "1210 us: (" + fmt("%.1f", a.mean_v3) + ", " +
                                 fmt("%.1f", a.mean_v4) + ") Hz; 2210 us: (" +
                                 fmt("%.1f", b.mean_v3) + ", " + fmt("%.1f", b.mean_v4) +
                                 ") Hz; gap " + (shrinks ? "shrinks" : "does not shrink")};
}

Outcome budget() {
  const double g = linewidth_budget(550.0, 775.0);
  return {g == 56.25 && std::abs(g - 56.0) <= 5.0, "Gamma_laser = " + fmt("%.2f Hz", g)};
}

Outcome rect_pulse() {
  const auto grid = uniform_grid(3000.0, 1201);
  double fwhm[2];
  for (int ion = 0; ion < 2; ++ion) {
    const Spectrum s = rect_pulse_response(4e6, 1e-3, grid, ScenarioSwitches{ion == 1, true, 0.0},
                                           AtomicCoefficients{});
    fwhm[ion] = sampled_fwhm(s.detunings, s.signal);
  }
  const double excess = fwhm[1] / fwhm[0] - 1.0;
  return {excess >= 0.0 && excess < 0.15, "FWHM off/on = " + fmt("%.1f", fwhm[0]) + " / " +
                                              fmt("%.1f Hz", fwhm[1]) + " (+" +
                                              fmt("%.1f%%)", 100.0 * excess)};
}

Outcome frozen_nozzle() {
  StudySettings s;
  s.config.atoms_per_line = 1000;
  s.model.integrator.relative_tolerance = 1e-7;
  s.model.integrator.absolute_tolerance = 1e-10;
  FrozenNozzleOptions o;
  o.scans = 10;
  o.points = 20;
  o.radius_range = {s.model.geometry.waist_radius, s.model.geometry.d1_radius};
  const auto random = frozen_nozzle_study(s, o, s.config.rng_seed);
  o.control = true;
  const auto control = frozen_nozzle_study(s, o, s.config.rng_seed);
  const bool band = random.intercept_stddev >= 10.0 && random.intercept_stddev <= 100.0;
  const bool ratio = control.intercept_stddev * 3.0 <= random.intercept_stddev;
  return {band && ratio, "intercept sd random radius = " + fmt("%.1f Hz", random.intercept_stddev) +
                             ", control = " + fmt("%.1f Hz", control.intercept_stddev)};
}

double ks_speed(int exponent) {
  const double v0 = most_probable_speed(5.0, PhysicalConstants{});
  RandomStream rng(77, StreamDomain::kTest, static_cast<std::uint64_t>(exponent));
  std::vector<double> v(100000);
  for (double& x : v) x = sample_speed(rng, v0, exponent);
  std::sort(v.begin(), v.end());
  double d = 0.0;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = (v[i] / v0) * (v[i] / v0);
    const double rs = std::sqrt(s);
    const double cdf = exponent == 3 ? 1.0 - (1.0 + s) * std::exp(-s)
                                     : std::erf(rs) - 2.0 / std::sqrt(std::numbers::pi) * rs *
                                                          std::exp(-s) * (1.0 + 2.0 * s / 3.0);
    d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome properties() {
  const double ks3 = ks_speed(3);
  const double ks4 = ks_speed(4);

  const auto x = uniform_grid(2500.0, 51);
  RandomStream rng(5, StreamDomain::kTest, 9);
  std::vector<double> y;
  for (double d : x) y.push_back(0.1 + 250000.0 / ((d - 80.0) * (d - 80.0) + 250000.0) +
                                   0.01 * rng.normal());
  const LorentzianFit base = fit_lorentzian(x, y);
  std::vector<double> xs;
  std::vector<double> ys;
  for (double d : x) xs.push_back(d + 321.5);
  for (double v : y) ys.push_back(7.5 * v);
  const LorentzianFit shifted = fit_lorentzian(xs, y);
  const LorentzianFit scaled = fit_lorentzian(x, ys);
  const double shift_err = std::max({std::abs(shifted.center - base.center - 321.5),
                                     std::abs(shifted.fwhm - base.fwhm) / base.fwhm,
                                     std::abs(shifted.amplitude - base.amplitude) / base.amplitude});
  const double scale_err =
      std::max({std::abs(scaled.center - base.center) / std::abs(base.center),
                std::abs(scaled.fwhm - base.fwhm) / base.fwhm,
                std::abs(scaled.amplitude - 7.5 * base.amplitude) / (7.5 * base.amplitude),
                std::abs(scaled.offset - 7.5 * base.offset) / (7.5 * base.offset)});

  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "h1s2s_acceptance_repro";
  fs::remove_all(root);
  bool identical = true;
  std::ostringstream sink;
  const char* files[] = {"scan.csv", "scan_summary.json", "line_50.csv", "line_300.csv"};
  std::string reference[4];
  int run_index = 0;
  for (const char* threads : {"threads=1", "threads=4", "threads=1"}) {
    CommandRequest r;
    r.command = "power-scan";
    r.output_dir = root / std::to_string(run_index);
    r.overrides = {"atoms_per_line=40", "powers_w=0.05,0.1,0.3,0.5", "noise_fraction=0.05",
                   threads};
    if (run(r, sink, sink) != 0) identical = false;
    for (int f = 0; f < 4; ++f) {
      const std::string content = slurp(r.output_dir / files[f]);
      if (run_index == 0) {
        reference[f] = content;
        if (content.empty()) identical = false;
      } else if (content != reference[f]) {
        identical = false;
      }
    }
    ++run_index;
  }
  fs::remove_all(root);

  const bool ok = ks3 < 0.01 && ks4 < 0.01 && shift_err <= 1e-10 && scale_err <= 1e-10 && identical;
  return {ok, "KS v^3 " + fmt("%.4f", ks3) + ", v^4 " + fmt("%.4f", ks4) +
                  "; equivariance err shift " + fmt("%.1e", shift_err) + ", scale " +
                  fmt("%.1e", scale_err) + "; outputs " +
                  (identical ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "ionization-rate anchor", ionization_anchor},
      {2, "focal-intensity anchor", focal_intensity},
      {3, "Rabi oracle and trace", rabi_oracle},
      {4, "zero-power Doppler intercept", zero_power_intercept},
      {5, "slope reproduction", slopes},
      {6, "TOF width intercept", width_intercept},
      {7, "Doppler exponent study", doppler_exponent},
      {8, "linewidth budget", budget},
      {9, "single-atom rectangular pulse", rect_pulse},
      {10, "frozen-nozzle scatter", frozen_nozzle},
      {11, "property suite", properties},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %-30s %s  [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
