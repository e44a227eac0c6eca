#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta integrator with FSAL and
// standard step-size control (Hairer, Norsett & Wanner, Solving ODE I, II.4).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "h1s2s/model.hpp"

namespace h1s2s {

struct IntegratorSettings {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-12;
  std::int64_t max_steps = 1'000'000;
  /// Initial step as a fraction of the integration span.
  double initial_step_fraction = 1e-4;

  void validate() const;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

struct IntegrationStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
};

namespace dopri5_detail {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace dopri5_detail

/// No-op hooks for integrate_dopri5.
struct NoStepHook {
  bool operator()() const { return false; }
};
struct NoObserver {
  template <class State>
  void operator()(double, const State&) const {}
};

/// Integrates y' = rhs(t, y, dydt) from t0 to t1 in place.
///
/// `on_accept()` runs after every accepted step and returns true when the
/// right-hand side changed (piecewise-constant forcing); the first stage is
/// then re-evaluated instead of reusing the last one. `observe(t, y)` sees
/// the state after each accepted step.
template <std::size_t N, class Rhs, class StepHook = NoStepHook, class Observer = NoObserver>
IntegrationStats integrate_dopri5(Rhs&& rhs, std::array<double, N>& y, double t0, double t1,
                                  const IntegratorSettings& settings,
                                  StepHook&& on_accept = {}, Observer&& observe = {}) {
  using namespace dopri5_detail;
  using State = std::array<double, N>;

  IntegrationStats stats;
  const double span = t1 - t0;
  if (!(span > 0.0)) return stats;

  State k1, k2, k3, k4, k5, k6, k7, yt, yn;
  double t = t0;
  double h = std::max(span * settings.initial_step_fraction, 1e-300);
  const double h_min = 1e-14 * span;
  rhs(t, y, k1);

  while (t < t1) {
    if (stats.accepted + stats.rejected >= settings.max_steps) {
      throw IntegrationError("step limit " + std::to_string(settings.max_steps) +
                             " reached at t = " + std::to_string(t) + " of " +
                             std::to_string(t1));
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }

    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, yt, k3);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, yt, k4);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, yt, k5);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = last ? t1 : t + h;
    rhs(t_new, yt, k6);
    for (std::size_t i = 0; i < N; ++i)
      yn[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t_new, yn, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = settings.absolute_tolerance +
                        settings.relative_tolerance * std::max(std::abs(y[i]), std::abs(yn[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) {
      throw IntegrationError("non-finite error estimate at t = " + std::to_string(t));
    }

    if (err <= 1.0) {
      ++stats.accepted;
      t = t_new;
      y = yn;
      observe(t, y);
      if (last) break;
      if (on_accept()) {
        rhs(t, y, k1);
      } else {
        k1 = k7;
      }
      const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < h_min) {
        throw IntegrationError("step size underflow at t = " + std::to_string(t));
      }
    }
  }
  return stats;
}

}  // namespace h1s2s
