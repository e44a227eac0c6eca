#pragma once

// Lorentzian line fits and polynomial power trends.

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "h1s2s/model.hpp"
#include "h1s2s/spectrum.hpp"

namespace h1s2s {

class FitError : public Error {
 public:
  using Error::Error;
};

/// S(d) = offset + amplitude (G/2)^2 / ((d - center)^2 + (G/2)^2), G = fwhm.
struct LorentzianFit {
  double center = 0.0;  // Hz
  double fwhm = 0.0;    // Hz
  double amplitude = 0.0;
  double offset = 0.0;
  /// 1-sigma uncertainties of (center, fwhm, amplitude, offset).
  std::array<double, 4> parameter_uncertainties{};
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;

  [[nodiscard]] double evaluate(double detuning) const;
};

/// Damped Gauss-Newton fit. Throws FitError for fewer than 8 points or a flat
/// signal; returns converged = false with the best parameters if the
/// iteration limit is hit.
[[nodiscard]] LorentzianFit fit_lorentzian(std::span<const double> detunings,
                                           std::span<const double> signal);
[[nodiscard]] LorentzianFit fit_lorentzian(const Spectrum& spectrum);

struct TrendPoint {
  double power = 0.0;  // W
  double value = 0.0;  // Hz
};

struct TrendFit {
  int degree = 1;
  /// c0 + c1 P + c2 P^2 with P in W.
  std::vector<double> coefficients;
  std::vector<double> coefficient_uncertainties;
  std::pair<double, double> fit_range{0.0, 0.0};  // W, inclusive
  int points_used = 0;

  [[nodiscard]] double intercept() const { return coefficients.at(0); }
  /// Linear coefficient in Hz/mW.
  [[nodiscard]] double slope_hz_per_mw() const { return coefficients.at(1) * 1e-3; }
  [[nodiscard]] double slope_uncertainty_hz_per_mw() const {
    return coefficient_uncertainties.at(1) * 1e-3;
  }
  [[nodiscard]] double evaluate(double power) const;
};

/// Ordinary least squares on the points with power in [range.first, range.second].
/// Needs at least degree + 1 points in range; uncertainties are zero when the
/// fit has no residual degrees of freedom.
[[nodiscard]] TrendFit fit_trend(std::span<const TrendPoint> points, int degree,
                                 std::pair<double, double> range);

/// Reduced chi-squared of the weighted mean.
[[nodiscard]] double birge_ratio(std::span<const double> values,
                                 std::span<const double> uncertainties);

/// Mean and sample standard deviation.
[[nodiscard]] std::pair<double, double> mean_and_stddev(std::span<const double> values);

}  // namespace h1s2s
