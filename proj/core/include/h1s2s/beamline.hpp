#pragma once

// Atom trajectories, thermal speeds and the time-of-flight detection gate.

#include <cstdint>

#include "h1s2s/model.hpp"
#include "h1s2s/random.hpp"
#include "h1s2s/trajectory.hpp"

namespace h1s2s {

/// Uniform point on a disk of the given radius.
[[nodiscard]] Vec2 sample_disk_point(RandomStream& stream, double radius);

/// Speed drawn from f(v) ∝ (v/v0)^n exp(-(v/v0)^2) for n = 3 or 4.
///
/// v^2/v0^2 is Gamma distributed with shape (n+1)/2: shape 2 is the sum of two
/// unit exponentials, shape 5/2 adds the square of a half-normal deviate.
[[nodiscard]] double sample_speed(RandomStream& stream, double v0, int exponent);

/// Unnormalized beam speed density (v/v0)^n exp(-(v/v0)^2).
[[nodiscard]] double beam_speed_density(double v, double v0, int exponent = 3);

/// v_max = l' / delay; +infinity when delay is zero (no gate).
[[nodiscard]] double cutoff_speed(double interaction_length, double delay);

/// True iff the atom reaches the detector no earlier than the detection start.
[[nodiscard]] bool survives_gate(const Trajectory& trajectory, double delay,
                                 double interaction_length);

/// Probability that a gated atom of this speed is still in flight when the
/// detection window opens: 1 - v/v_max, clamped to [0, 1].
[[nodiscard]] double detection_weight(double speed, double v_max);

/// Unnormalized density of detected speeds, f(v)(1 - v/v_max) below v_max.
[[nodiscard]] double detected_speed_density(double v, double v_max, double v0,
                                            int exponent = 3);

/// One trajectory: entry uniform on the effective D1 disk, exit uniform on D2,
/// speed from the thermal distribution.
[[nodiscard]] Trajectory sample_trajectory(RandomStream& stream, const BeamlineGeometry& geometry,
                                           double v0, int exponent);

}  // namespace h1s2s
