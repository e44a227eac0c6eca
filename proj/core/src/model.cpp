#include "h1s2s/model.hpp"

#include <algorithm>
#include <cmath>

namespace h1s2s {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void PhysicalConstants::validate() const {
  require(positive_finite(speed_of_light), "speed_of_light must be positive");
  require(positive_finite(boltzmann), "boltzmann must be positive");
  require(positive_finite(hydrogen_mass), "hydrogen_mass must be positive");
  require(positive_finite(electron_proton_mass_ratio) && electron_proton_mass_ratio < 1e-3,
          "electron_proton_mass_ratio must be in (0, 1e-3)");
}

void AtomicCoefficients::validate() const {
  require(std::isfinite(beta_ge) && beta_ge >= 0.0, "beta_ge must be non-negative");
  require(std::isfinite(beta_ioni) && beta_ioni >= 0.0, "beta_ioni must be non-negative");
  require(std::isfinite(beta_ac), "beta_ac must be finite");
  require(positive_finite(transition_frequency), "transition_frequency_hz must be positive");
}

double BeamlineGeometry::entry_radius() const {
  double r = std::min(d1_radius, nozzle_radius);
  if (frozen_nozzle_radius) r = std::min(d1_radius, *frozen_nozzle_radius);
  return r;
}

void BeamlineGeometry::validate() const {
  require(positive_finite(nozzle_radius), "nozzle_radius_mm must be positive");
  require(positive_finite(d1_radius), "d1_radius_mm must be positive");
  require(positive_finite(d2_radius), "d2_radius_mm must be positive");
  require(positive_finite(d1_d2_separation), "separation_cm must be positive");
  require(positive_finite(interaction_length), "interaction_length_cm must be positive");
  require(interaction_length >= d1_d2_separation,
          "interaction_length_cm must not be shorter than separation_cm");
  // Trajectory angles stay below 0.05 rad.
  require((d1_radius + d2_radius) / d1_d2_separation < 0.05,
          "diaphragm radii must be small compared with separation_cm");
  require(positive_finite(waist_radius), "waist_um must be positive");
  require(positive_finite(wavelength), "wavelength_nm must be positive");
  require(std::isfinite(d1_axial_position), "d1_axial_position_cm must be finite");
  if (frozen_nozzle_radius) {
    require(positive_finite(*frozen_nozzle_radius),
            "frozen_nozzle_radius_mm must be positive");
  }
}

void ScenarioSwitches::validate() const {
  require(std::isfinite(intensity_noise_fraction) && intensity_noise_fraction >= 0.0 &&
              intensity_noise_fraction <= 0.2,
          "noise_fraction must be in [0, 0.2]");
}

std::string ScenarioSwitches::tag() const {
  std::string t = std::string("ion") + (ionization_on ? "1" : "0") + "_ac" +
                  (ac_stark_on ? "1" : "0");
  if (intensity_noise_fraction > 0.0) t += "_noise";
  return t;
}

void DetuningGrid::validate() const {
  require(positive_finite(half_span), "detuning_span_hz must be positive");
  require(points >= 2, "detuning_points must be at least 2");
}

void RunConfig::validate() const {
  require(std::isfinite(power_per_direction) && power_per_direction >= 0.0,
          "power_per_direction_w must be non-negative");
  require(positive_finite(temperature), "temperature_k must be positive");
  require(std::isfinite(detection_delay) && detection_delay >= 0.0,
          "detection_delay_us must be non-negative");
  grid.validate();
  require(atoms_per_line >= 1, "atoms_per_line must be at least 1");
  require(velocity_exponent == 3 || velocity_exponent == 4,
          "velocity_exponent must be 3 or 4");
}

bool DensityState::is_physical(double tolerance) const {
  if (!std::isfinite(rho_gg) || !std::isfinite(rho_ee) || !std::isfinite(std::abs(rho_ge))) {
    return false;
  }
  if (rho_gg < -tolerance || rho_gg > 1.0 + tolerance) return false;
  if (rho_ee < -tolerance || rho_ee > 1.0 + tolerance) return false;
  if (rho_gg + rho_ee > 1.0 + tolerance) return false;
  return std::norm(rho_ge) <= rho_gg * rho_ee + tolerance;
}

double reduced_mass_correction(const PhysicalConstants& constants) {
  const double m = 1.0 + constants.electron_proton_mass_ratio;
  return m * m * m;
}

double most_probable_speed(double temperature, const PhysicalConstants& constants) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be positive, got " + std::to_string(temperature));
  }
  return std::sqrt(2.0 * constants.boltzmann * temperature / constants.hydrogen_mass);
}

double second_order_doppler_shift(double speed, const AtomicCoefficients& coefficients,
                                  const PhysicalConstants& constants) {
  const double beta = speed / constants.speed_of_light;
  return -0.5 * coefficients.transition_frequency * beta * beta;
}

std::vector<double> uniform_grid(double half_span, int points) {
  if (points < 2) throw DomainError("detuning grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = 2.0 * half_span / (points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = -half_span + step * i;
  // Exact symmetry around the centre point.
  for (int i = 0; i < points / 2; ++i) {
    grid[static_cast<std::size_t>(points - 1 - i)] = -grid[static_cast<std::size_t>(i)];
  }
  if (points % 2 == 1) grid[static_cast<std::size_t>(points / 2)] = 0.0;
  return grid;
}

}  // namespace h1s2s
