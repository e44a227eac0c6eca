#include "h1s2s/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace h1s2s {

void IntegratorSettings::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
    throw DomainError("integrator tolerances must be positive");
  }
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
  if (!(initial_step_fraction > 0.0 && initial_step_fraction <= 1.0)) {
    throw DomainError("initial step fraction must be in (0, 1]");
  }
}

double rabi_frequency(double intensity, const AtomicCoefficients& coefficients,
                      const PhysicalConstants& constants) {
  if (!(intensity >= 0.0)) throw DomainError("intensity must be non-negative");
  return 2.0 * coefficients.beta_ge * reduced_mass_correction(constants) * intensity;
}

double ionization_rate(double intensity, const AtomicCoefficients& coefficients,
                       const PhysicalConstants& constants) {
  if (!(intensity >= 0.0)) throw DomainError("intensity must be non-negative");
  return coefficients.beta_ioni * reduced_mass_correction(constants) * intensity;
}

double ac_stark_shift(double intensity, const AtomicCoefficients& coefficients) {
  return coefficients.beta_ac * intensity;
}

double total_detuning(double laser_detuning, double speed, double intensity,
                      const AtomicCoefficients& coefficients, const PhysicalConstants& constants) {
  // The Doppler term raises the atom-frame detuning, i.e. red-shifts the line.
  return laser_detuning - second_order_doppler_shift(speed, coefficients, constants) -
         ac_stark_shift(intensity, coefficients);
}

DriveSample drive_sample(double time, double intensity, double laser_detuning, double speed,
                         const ScenarioSwitches& switches,
                         const AtomicCoefficients& coefficients,
                         const PhysicalConstants& constants) {
  DriveSample s;
  s.time = time;
  s.intensity = intensity;
  s.rabi = rabi_frequency(intensity, coefficients, constants);
  s.ion_rate = switches.ionization_on ? ionization_rate(intensity, coefficients, constants) : 0.0;
  s.total_detuning = total_detuning(laser_detuning, speed,
                                    switches.ac_stark_on ? intensity : 0.0, coefficients,
                                    constants);
  return s;
}

DensityState evolve_constant(const DensityState& initial, double intensity,
                             double laser_detuning, double speed, double t_span,
                             const ScenarioSwitches& switches,
                             const AtomicCoefficients& coefficients,
                             const PhysicalConstants& constants,
                             const IntegratorSettings& settings) {
  if (!(intensity >= 0.0)) throw DomainError("intensity must be non-negative");
  return evolve(initial, [intensity](double) { return intensity; }, laser_detuning, speed, t_span,
                switches, coefficients, constants, settings);
}

DensityState evolve_along(const Trajectory& trajectory, const GaussianMode& mode, double power,
                          double laser_detuning, const ScenarioSwitches& switches,
                          const AtomicCoefficients& coefficients,
                          const PhysicalConstants& constants, const IntegratorSettings& settings,
                          IntensityNoise* noise) {
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  const auto drive = [&mode, &trajectory, power](double t) {
    return intensity_along_unchecked(mode, trajectory, t, power);
  };
  return evolve(DensityState::ground(), drive, laser_detuning, trajectory.speed(),
                trajectory.transit_time(), switches, coefficients, constants, settings, noise);
}

Spectrum rect_pulse_response(double intensity, double duration, std::span<const double> detunings,
                             const ScenarioSwitches& switches,
                             const AtomicCoefficients& coefficients,
                             const PhysicalConstants& constants,
                             const IntegratorSettings& settings) {
  if (!(duration > 0.0)) throw DomainError("pulse duration must be positive");
  Spectrum out;
  out.detunings.assign(detunings.begin(), detunings.end());
  out.signal.reserve(detunings.size());
  ScenarioSwitches no_noise = switches;
  no_noise.intensity_noise_fraction = 0.0;
  for (double delta : detunings) {
    const DensityState s = evolve_constant(DensityState::ground(), intensity, delta, 0.0,
                                           duration, no_noise, coefficients, constants, settings);
    out.signal.push_back(std::max(s.rho_ee, 0.0));
  }
  out.atoms_used = 1;
  return out;
}

double sampled_fwhm(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw DomainError("sampled_fwhm needs matching arrays with at least 3 points");
  }
  const auto peak_it = std::max_element(y.begin(), y.end());
  const auto peak = static_cast<std::size_t>(std::distance(y.begin(), peak_it));
  const double half = 0.5 * *peak_it;
  if (!(half > 0.0)) throw DomainError("sampled_fwhm needs a positive peak");

  std::size_t i = peak;
  while (i > 0 && y[i - 1] >= half) --i;
  if (i == 0) throw DomainError("left half-maximum crossing outside the grid");
  const double left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);

  std::size_t j = peak;
  while (j + 1 < y.size() && y[j + 1] >= half) ++j;
  if (j + 1 == y.size()) throw DomainError("right half-maximum crossing outside the grid");
  const double right = x[j] + (y[j] - half) * (x[j + 1] - x[j]) / (y[j] - y[j + 1]);
  return right - left;
}

}  // namespace h1s2s
