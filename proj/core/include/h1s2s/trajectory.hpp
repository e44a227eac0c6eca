#pragma once

#include <cmath>

namespace h1s2s {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Straight flight from a point on the D1 plane to a point on the D2 plane.
///
/// The light interaction lasts from D1 to D2 (transit_time); the detection gate
/// uses the axial distance from D1 to the detector (arrival_time).
class Trajectory {
 public:
  Trajectory() = default;

  /// `entry_z` is the axial coordinate of D1 relative to the mode waist.
  Trajectory(Vec2 entry, Vec2 exit, double speed, double entry_z, double separation,
             double gate_length)
      : entry_(entry), exit_(exit), speed_(speed), entry_z_(entry_z),
        separation_(separation), gate_length_(gate_length) {
    const double dx = exit.x - entry.x;
    const double dy = exit.y - entry.y;
    length_ = std::sqrt(dx * dx + dy * dy + separation * separation);
    direction_ = {dx / length_, dy / length_, separation / length_};
  }

  [[nodiscard]] Vec2 entry_point() const { return entry_; }
  [[nodiscard]] Vec2 exit_point() const { return exit_; }
  [[nodiscard]] double speed() const { return speed_; }
  [[nodiscard]] double entry_z() const { return entry_z_; }
  [[nodiscard]] Vec3 direction() const { return direction_; }
  [[nodiscard]] double path_length() const { return length_; }

  /// Time spent between the D1 and D2 planes.
  [[nodiscard]] double transit_time() const { return length_ / speed_; }

  /// Time from D1 to the detector.
  [[nodiscard]] double arrival_time() const { return gate_length_ / speed_; }

  /// Angle between the path and the cavity axis.
  [[nodiscard]] double angle() const { return std::acos(direction_.z); }

  [[nodiscard]] Vec3 position_at(double t) const {
    const double s = speed_ * t;
    return {entry_.x + direction_.x * s, entry_.y + direction_.y * s,
            entry_z_ + direction_.z * s};
  }

 private:
  Vec2 entry_{};
  Vec2 exit_{};
  double speed_ = 1.0;
  double entry_z_ = 0.0;
  double separation_ = 1.0;
  double gate_length_ = 1.0;
  double length_ = 1.0;
  Vec3 direction_{0.0, 0.0, 1.0};
};

}  // namespace h1s2s
