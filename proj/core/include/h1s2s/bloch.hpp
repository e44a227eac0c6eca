#pragma once

// Two-photon Bloch equations with photoionization loss of the upper state.
//
//   d rho_gg/dt = -Omega Im(rho_ge)
//   d rho_ge/dt = -i dw rho_ge + i (Omega/2)(rho_gg - rho_ee) - (gamma/2) rho_ge
//   d rho_ee/dt =  Omega Im(rho_ge) - gamma rho_ee
//
// Omega, gamma and dw are angular; the helpers below return them in Hz and
// BlochRhs converts once.

#include <array>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "h1s2s/dopri5.hpp"
#include "h1s2s/model.hpp"
#include "h1s2s/optics.hpp"
#include "h1s2s/spectrum.hpp"
#include "h1s2s/trajectory.hpp"

namespace h1s2s {

/// Two-photon Rabi frequency Omega/2pi = 2 beta_ge (m_e/mu)^3 I.
[[nodiscard]] double rabi_frequency(double intensity, const AtomicCoefficients& coefficients,
                                    const PhysicalConstants& constants = {});

/// Photoionization rate gamma/2pi = beta_ioni (m_e/mu)^3 I.
[[nodiscard]] double ionization_rate(double intensity, const AtomicCoefficients& coefficients,
                                     const PhysicalConstants& constants = {});

/// Light shift of the transition, beta_ac I (beta_ac carries its mass factor).
[[nodiscard]] double ac_stark_shift(double intensity, const AtomicCoefficients& coefficients);

/// Atom-frame detuning dw/2pi = delta + (nu/2)(v/c)^2 - beta_ac I.
[[nodiscard]] double total_detuning(double laser_detuning, double speed, double intensity,
                                    const AtomicCoefficients& coefficients,
                                    const PhysicalConstants& constants = {});

struct DriveSample {
  double time = 0.0;
  double intensity = 0.0;
  double rabi = 0.0;            // Hz
  double ion_rate = 0.0;        // Hz
  double total_detuning = 0.0;  // Hz
};

[[nodiscard]] DriveSample drive_sample(double time, double intensity, double laser_detuning,
                                       double speed, const ScenarioSwitches& switches,
                                       const AtomicCoefficients& coefficients,
                                       const PhysicalConstants& constants = {});

/// Right-hand side on the real state (rho_gg, Re rho_ge, Im rho_ge, rho_ee).
template <class Drive>
class BlochRhs {
 public:
  BlochRhs(Drive drive, double laser_detuning, double speed, const ScenarioSwitches& switches,
           const AtomicCoefficients& coefficients, const PhysicalConstants& constants,
           const IntensityNoise* noise)
      : drive_(std::move(drive)), noise_(noise) {
    const double mass = reduced_mass_correction(constants);
    rabi_per_intensity_ = kTwoPi * 2.0 * coefficients.beta_ge * mass;
    ion_per_intensity_ = switches.ionization_on ? kTwoPi * coefficients.beta_ioni * mass : 0.0;
    stark_per_intensity_ = switches.ac_stark_on ? kTwoPi * coefficients.beta_ac : 0.0;
    const double beta = speed / constants.speed_of_light;
    static_detuning_ =
        kTwoPi * (laser_detuning + 0.5 * coefficients.transition_frequency * beta * beta);
  }

  void operator()(double t, const std::array<double, 4>& y, std::array<double, 4>& dydt) const {
    double intensity = drive_(t);
    if (noise_ != nullptr) intensity *= noise_->factor();
    const double omega = rabi_per_intensity_ * intensity;
    const double gamma = ion_per_intensity_ * intensity;
    const double dw = static_detuning_ - stark_per_intensity_ * intensity;
    const double re = y[1];
    const double im = y[2];
    dydt[0] = -omega * im;
    dydt[1] = dw * im - 0.5 * gamma * re;
    dydt[2] = -dw * re + 0.5 * omega * (y[0] - y[3]) - 0.5 * gamma * im;
    dydt[3] = omega * im - gamma * y[3];
  }

 private:
  Drive drive_;
  const IntensityNoise* noise_;
  double rabi_per_intensity_ = 0.0;
  double ion_per_intensity_ = 0.0;
  double stark_per_intensity_ = 0.0;
  double static_detuning_ = 0.0;
};

inline std::array<double, 4> to_array(const DensityState& s) {
  return {s.rho_gg, s.rho_ge.real(), s.rho_ge.imag(), s.rho_ee};
}

inline DensityState from_array(const std::array<double, 4>& y) {
  return {y[0], {y[1], y[2]}, y[3]};
}

/// Integrates the Bloch equations over [0, t_span] for the intensity profile
/// `drive(t)` (W/m^2). With `noise`, the intensity is multiplied by a factor
/// redrawn after every accepted step. `observe(t, state)` sees every step.
template <class Drive, class Observer = NoObserver>
DensityState evolve(const DensityState& initial, Drive&& drive, double laser_detuning,
                    double speed, double t_span, const ScenarioSwitches& switches,
                    const AtomicCoefficients& coefficients, const PhysicalConstants& constants,
                    const IntegratorSettings& settings, IntensityNoise* noise = nullptr,
                    Observer&& observe = {}) {
  if (!(t_span > 0.0)) throw DomainError("evolve needs a positive time span");
  if (!initial.is_physical(1e-9)) throw DomainError("initial density state is not physical");
  const IntensityNoise* active_noise = (noise != nullptr && noise->enabled()) ? noise : nullptr;
  BlochRhs<std::decay_t<Drive>> rhs(std::forward<Drive>(drive), laser_detuning, speed, switches,
                                     coefficients, constants, active_noise);
  auto y = to_array(initial);
  auto on_accept = [active_noise, noise]() {
    if (active_noise == nullptr) return false;
    noise->advance();
    return true;
  };
  auto observer = [&observe](double t, const std::array<double, 4>& state) {
    observe(t, from_array(state));
  };
  try {
    integrate_dopri5(rhs, y, 0.0, t_span, settings, on_accept, observer);
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string(e.what()) + " (detuning " +
                           std::to_string(laser_detuning) + " Hz, speed " +
                           std::to_string(speed) + " m/s, span " + std::to_string(t_span) +
                           " s)");
  }
  return from_array(y);
}

/// Constant intensity for the whole span.
[[nodiscard]] DensityState evolve_constant(const DensityState& initial, double intensity,
                                           double laser_detuning, double speed, double t_span,
                                           const ScenarioSwitches& switches,
                                           const AtomicCoefficients& coefficients,
                                           const PhysicalConstants& constants = {},
                                           const IntegratorSettings& settings = {});

/// Ground-state atom flying along `trajectory` through the mode from D1 to D2.
[[nodiscard]] DensityState evolve_along(const Trajectory& trajectory, const GaussianMode& mode,
                                        double power, double laser_detuning,
                                        const ScenarioSwitches& switches,
                                        const AtomicCoefficients& coefficients,
                                        const PhysicalConstants& constants,
                                        const IntegratorSettings& settings,
                                        IntensityNoise* noise = nullptr);

/// Final rho_ee of an atom at rest after a rectangular pulse, per detuning.
[[nodiscard]] Spectrum rect_pulse_response(double intensity, double duration,
                                           std::span<const double> detunings,
                                           const ScenarioSwitches& switches,
                                           const AtomicCoefficients& coefficients,
                                           const PhysicalConstants& constants = {},
                                           const IntegratorSettings& settings = {});

/// Full width at half maximum of a sampled peak, by linear interpolation of
/// the half-maximum crossings around the largest sample.
[[nodiscard]] double sampled_fwhm(std::span<const double> x, std::span<const double> y);

}  // namespace h1s2s
