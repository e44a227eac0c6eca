#pragma once

// TEM00 mode of the enhancement cavity and the cycle-averaged standing-wave
// intensity seen by an atom.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "h1s2s/model.hpp"
#include "h1s2s/random.hpp"
#include "h1s2s/trajectory.hpp"

namespace h1s2s {

class GaussianMode {
 public:
  GaussianMode(double waist_radius, double wavelength, double waist_axial_position = 0.0);

  /// Mode of the default geometry: waist on the incoupler plane at z = 0.
  static GaussianMode from_geometry(const BeamlineGeometry& geometry);

  [[nodiscard]] double waist_radius() const { return waist_radius_; }
  [[nodiscard]] double wavelength() const { return wavelength_; }
  [[nodiscard]] double waist_axial_position() const { return waist_z_; }
  [[nodiscard]] double rayleigh_range() const { return rayleigh_range_; }

  /// w(z) = w0 sqrt(1 + ((z - z_waist)/z_R)^2).
  [[nodiscard]] double radius_at(double z) const;

  /// Squared radius; avoids the square root in the hot path.
  [[nodiscard]] double radius_squared_at(double z) const {
    const double u = (z - waist_z_) / rayleigh_range_;
    return waist_radius_ * waist_radius_ * (1.0 + u * u);
  }

 private:
  double waist_radius_;
  double wavelength_;
  double waist_z_;
  double rayleigh_range_;
};

[[nodiscard]] double mode_radius(const GaussianMode& mode, double z);

/// Cycle-averaged standing-wave intensity (W/m^2) at radius r and axial
/// position z for `power` per direction: (4P / pi w^2) exp(-2 r^2 / w^2).
[[nodiscard]] double intensity(const GaussianMode& mode, double r, double z, double power);

/// Same as intensity() with the squared radius; no argument checks.
[[nodiscard]] inline double intensity_r2(const GaussianMode& mode, double r2, double z,
                                         double power) {
  const double w2 = mode.radius_squared_at(z);
  return 4.0 * power / (std::numbers::pi * w2) * std::exp(-2.0 * r2 / w2);
}

/// Multiplicative white intensity noise, held constant over each integrator
/// step. factor() is 1 + fraction * u with u uniform in [-1, 1].
class IntensityNoise {
 public:
  IntensityNoise() = default;
  IntensityNoise(double fraction, std::uint64_t seed, std::uint64_t atom,
                 std::uint32_t detuning_index);

  [[nodiscard]] bool enabled() const { return fraction_ > 0.0; }
  [[nodiscard]] double factor() const { return factor_; }

  /// Draws the sample for the next integrator step.
  void advance();

 private:
  double fraction_ = 0.0;
  double factor_ = 1.0;
  RandomStream stream_{0, StreamDomain::kIntensityNoise, 0};
};

/// Intensity at time t (since the D1 crossing) along the trajectory, times
/// the current noise factor. Throws DomainError for t outside the transit.
[[nodiscard]] double intensity_along(const GaussianMode& mode, const Trajectory& trajectory,
                                     double t, double power,
                                     const IntensityNoise* noise = nullptr);

/// Unchecked variant used inside the integrator.
[[nodiscard]] inline double intensity_along_unchecked(const GaussianMode& mode,
                                                      const Trajectory& trajectory, double t,
                                                      double power) {
  const Vec3 p = trajectory.position_at(t);
  return intensity_r2(mode, p.x * p.x + p.y * p.y, p.z, power);
}

}  // namespace h1s2s
