#include "h1s2s/beamline.hpp"

#include <cmath>
#include <limits>

namespace h1s2s {

Vec2 sample_disk_point(RandomStream& stream, double radius) {
  if (!(radius >= 0.0)) throw DomainError("disk radius must be non-negative");
  const double r = radius * std::sqrt(stream.uniform());
  const double phi = kTwoPi * stream.uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

double sample_speed(RandomStream& stream, double v0, int exponent) {
  if (!(v0 > 0.0)) throw DomainError("most probable speed must be positive");
  double s = -std::log(stream.uniform_positive()) - std::log(stream.uniform_positive());
  if (exponent == 4) {
    const double z = stream.normal();
    s += 0.5 * z * z;
  } else if (exponent != 3) {
    throw DomainError("velocity exponent must be 3 or 4");
  }
  return v0 * std::sqrt(s);
}

double beam_speed_density(double v, double v0, int exponent) {
  if (v <= 0.0) return 0.0;
  const double x = v / v0;
  return std::pow(x, exponent) * std::exp(-x * x);
}

double cutoff_speed(double interaction_length, double delay) {
  if (!(delay >= 0.0)) throw DomainError("detection delay must be non-negative");
  if (delay == 0.0) return std::numeric_limits<double>::infinity();
  return interaction_length / delay;
}

bool survives_gate(const Trajectory& trajectory, double delay, double interaction_length) {
  return interaction_length / trajectory.speed() >= delay;
}

double detection_weight(double speed, double v_max) {
  if (std::isinf(v_max)) return 1.0;
  if (speed >= v_max) return 0.0;
  return 1.0 - speed / v_max;
}

double detected_speed_density(double v, double v_max, double v0, int exponent) {
  if (v < 0.0) throw DomainError("speed must be non-negative");
  return beam_speed_density(v, v0, exponent) * detection_weight(v, v_max);
}

Trajectory sample_trajectory(RandomStream& stream, const BeamlineGeometry& geometry, double v0,
                             int exponent) {
  const Vec2 entry = sample_disk_point(stream, geometry.entry_radius());
  const Vec2 exit = sample_disk_point(stream, geometry.d2_radius);
  const double speed = sample_speed(stream, v0, exponent);
  return {entry, exit, speed, geometry.d1_axial_position, geometry.d1_d2_separation,
          geometry.interaction_length};
}

}  // namespace h1s2s
