#include "h1s2s/optics.hpp"

#include <cmath>
#include <string>

namespace h1s2s {

GaussianMode::GaussianMode(double waist_radius, double wavelength, double waist_axial_position)
    : waist_radius_(waist_radius), wavelength_(wavelength), waist_z_(waist_axial_position) {
  if (!(waist_radius > 0.0) || !(wavelength > 0.0)) {
    throw DomainError("Gaussian mode needs positive waist radius and wavelength");
  }
  rayleigh_range_ = std::numbers::pi * waist_radius * waist_radius / wavelength;
}

GaussianMode GaussianMode::from_geometry(const BeamlineGeometry& geometry) {
  return {geometry.waist_radius, geometry.wavelength, 0.0};
}

double GaussianMode::radius_at(double z) const { return std::sqrt(radius_squared_at(z)); }

double mode_radius(const GaussianMode& mode, double z) { return mode.radius_at(z); }

double intensity(const GaussianMode& mode, double r, double z, double power) {
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  return intensity_r2(mode, r * r, z, power);
}

IntensityNoise::IntensityNoise(double fraction, std::uint64_t seed, std::uint64_t atom,
                               std::uint32_t detuning_index)
    : fraction_(fraction), stream_(seed, StreamDomain::kIntensityNoise, atom, detuning_index) {
  if (!(fraction >= 0.0 && fraction <= 0.2)) {
    throw DomainError("intensity noise fraction must be in [0, 0.2]");
  }
  advance();
}

void IntensityNoise::advance() {
  if (fraction_ == 0.0) return;
  factor_ = 1.0 + fraction_ * (2.0 * stream_.uniform() - 1.0);
}

double intensity_along(const GaussianMode& mode, const Trajectory& trajectory, double t,
                       double power, const IntensityNoise* noise) {
  const double transit = trajectory.transit_time();
  const double slack = 1e-12 * transit;
  if (!(t >= -slack && t <= transit + slack)) {
    throw DomainError("time " + std::to_string(t) + " s outside the transit interval [0, " +
                      std::to_string(transit) + "] s");
  }
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  const double base = intensity_along_unchecked(mode, trajectory, t, power);
  return noise != nullptr ? base * noise->factor() : base;
}

}  // namespace h1s2s
