#include "h1s2s/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace h1s2s {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelativeTolerance = 1e-8;
constexpr double kDampingFloor = 1e-6;

using Params = Eigen::Vector4d;  // center, fwhm, amplitude, offset (normalized units)

double model_value(const Params& p, double x) {
  const double h = 0.5 * p[1];
  const double u = x - p[0];
  return p[3] + p[2] * h * h / (u * u + h * h);
}

double sum_squares(const Params& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = y[i] - model_value(p, x[i]);
    s += r * r;
  }
  return s;
}

void jacobian(const Params& p, const Eigen::VectorXd& x, Eigen::MatrixXd& jac) {
  const double h = 0.5 * p[1];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = x[i] - p[0];
    const double d = u * u + h * h;
    const double d2 = d * d;
    jac(i, 0) = p[2] * h * h * 2.0 * u / d2;
    jac(i, 1) = p[2] * h * u * u / d2;
    jac(i, 2) = h * h / d;
    jac(i, 3) = 1.0;
  }
}

// Width between the half-maximum crossings around the peak sample.
double initial_width(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Eigen::Index peak,
                     double half) {
  const Eigen::Index n = x.size();
  double left = std::nan("");
  double right = std::nan("");
  for (Eigen::Index i = peak; i > 0; --i) {
    if (y[i - 1] <= half) {
      const double f = (y[i] - half) / (y[i] - y[i - 1]);
      left = x[i] - f * (x[i] - x[i - 1]);
      break;
    }
  }
  for (Eigen::Index i = peak; i + 1 < n; ++i) {
    if (y[i + 1] <= half) {
      const double f = (y[i] - half) / (y[i] - y[i + 1]);
      right = x[i] + f * (x[i + 1] - x[i]);
      break;
    }
  }
  if (std::isfinite(left) && std::isfinite(right)) return right - left;
  if (std::isfinite(left)) return 2.0 * (x[peak] - left);
  if (std::isfinite(right)) return 2.0 * (right - x[peak]);
  return 0.5 * (x[n - 1] - x[0]);
}

}  // namespace

double LorentzianFit::evaluate(double detuning) const {
  const double h = 0.5 * fwhm;
  const double u = detuning - center;
  return offset + amplitude * h * h / (u * u + h * h);
}

LorentzianFit fit_lorentzian(std::span<const double> detunings, std::span<const double> signal) {
  if (detunings.size() != signal.size()) {
    throw FitError("detuning and signal lengths differ (" + std::to_string(detunings.size()) +
                   " vs " + std::to_string(signal.size()) + ")");
  }
  const auto n = static_cast<Eigen::Index>(detunings.size());
  if (n < 8) throw FitError("Lorentzian fit needs at least 8 points, got " + std::to_string(n));

  const auto [x_lo_it, x_hi_it] = std::minmax_element(detunings.begin(), detunings.end());
  const auto [y_lo_it, y_hi_it] = std::minmax_element(signal.begin(), signal.end());
  const double x_mid = 0.5 * (*x_lo_it + *x_hi_it);
  const double x_scale = 0.5 * (*x_hi_it - *x_lo_it);
  const double y_min = *y_lo_it;
  const double y_scale = *y_hi_it - *y_lo_it;
  if (!std::isfinite(y_scale) || !std::isfinite(x_scale)) {
    throw FitError("non-finite input to Lorentzian fit");
  }
  if (!(x_scale > 0.0)) throw FitError("detuning grid has zero extent");
  if (!(y_scale > 0.0)) throw FitError("signal is flat; nothing to fit");

  Eigen::VectorXd x(n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = (detunings[static_cast<std::size_t>(i)] - x_mid) / x_scale;
    y[i] = (signal[static_cast<std::size_t>(i)] - y_min) / y_scale;
  }

  Eigen::Index peak = 0;
  y.maxCoeff(&peak);
  Params p;
  p << x[peak], initial_width(x, y, peak, 0.5), 1.0, 0.0;

  Eigen::MatrixXd jac(n, 4);
  Eigen::VectorXd residual(n);
  double ssr = sum_squares(p, x, y);
  double damping = 1.0;
  bool converged = false;
  int iteration = 0;

  for (; iteration < kMaxIterations && !converged; ++iteration) {
    jacobian(p, x, jac);
    for (Eigen::Index i = 0; i < n; ++i) residual[i] = y[i] - model_value(p, x[i]);
    const Params delta = jac.colPivHouseholderQr().solve(residual);
    if (!delta.allFinite()) break;

    bool accepted = false;
    while (damping >= kDampingFloor) {
      Params trial = p + damping * delta;
      trial[1] = std::abs(trial[1]);
      const double trial_ssr = sum_squares(trial, x, y);
      if (std::isfinite(trial_ssr) && trial_ssr <= ssr) {
        double change = 0.0;
        for (int j = 0; j < 4; ++j) {
          const double ref = std::max(std::abs(p[j]), j == 0 || j == 3 ? 1.0 : 1e-12);
          change = std::max(change, std::abs(trial[j] - p[j]) / ref);
        }
        p = trial;
        ssr = trial_ssr;
        accepted = true;
        converged = change < kRelativeTolerance;
        damping = std::min(1.0, 2.0 * damping);
        break;
      }
      damping *= 0.5;
    }
    // No downhill step down to the damping floor: at the minimum to rounding.
    if (!accepted) {
      converged = true;
      damping = 1.0;
    }
  }

  LorentzianFit fit;
  fit.center = x_mid + x_scale * p[0];
  fit.fwhm = x_scale * std::abs(p[1]);
  fit.amplitude = y_scale * p[2];
  fit.offset = y_min + y_scale * p[3];
  fit.residual_norm = y_scale * std::sqrt(ssr);
  fit.iterations = iteration;
  fit.converged = converged && fit.fwhm > 0.0 && std::isfinite(fit.center);

  if (n > 4) {
    jacobian(p, x, jac);
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
    if (lu.isInvertible()) {
      const Eigen::Matrix4d cov = lu.inverse() * (ssr / static_cast<double>(n - 4));
      const std::array<double, 4> scale{x_scale, x_scale, y_scale, y_scale};
      for (int j = 0; j < 4; ++j) {
        fit.parameter_uncertainties[j] = scale[j] * std::sqrt(std::max(0.0, cov(j, j)));
      }
    }
  }
  return fit;
}

LorentzianFit fit_lorentzian(const Spectrum& spectrum) {
  return fit_lorentzian(spectrum.detunings, spectrum.signal);
}

double TrendFit::evaluate(double power) const {
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * power + *it;
  return v;
}

TrendFit fit_trend(std::span<const TrendPoint> points, int degree,
                   std::pair<double, double> range) {
  if (degree != 1 && degree != 2) throw FitError("trend degree must be 1 or 2");
  if (!(range.first <= range.second)) throw FitError("trend fit range is empty");

  std::vector<TrendPoint> used;
  for (const TrendPoint& pt : points) {
    if (pt.power >= range.first && pt.power <= range.second && std::isfinite(pt.value)) {
      used.push_back(pt);
    }
  }
  const auto m = static_cast<Eigen::Index>(used.size());
  const int terms = degree + 1;
  if (m < terms) {
    throw FitError("trend fit of degree " + std::to_string(degree) + " needs at least " +
                   std::to_string(terms) + " points in range, got " + std::to_string(m));
  }

  Eigen::MatrixXd design(m, terms);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double pw = 1.0;
    for (int j = 0; j < terms; ++j) {
      design(i, j) = pw;
      pw *= used[static_cast<std::size_t>(i)].power;
    }
    rhs[i] = used[static_cast<std::size_t>(i)].value;
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < terms) throw FitError("trend fit is rank deficient (repeated powers?)");
  const Eigen::VectorXd coef = qr.solve(rhs);

  TrendFit fit;
  fit.degree = degree;
  fit.fit_range = range;
  fit.points_used = static_cast<int>(m);
  fit.coefficients.assign(coef.data(), coef.data() + terms);
  fit.coefficient_uncertainties.assign(static_cast<std::size_t>(terms), 0.0);
  if (m > terms) {
    const double ssr = (design * coef - rhs).squaredNorm();
    const Eigen::MatrixXd cov =
        (design.transpose() * design).inverse() * (ssr / static_cast<double>(m - terms));
    for (int j = 0; j < terms; ++j) {
      fit.coefficient_uncertainties[static_cast<std::size_t>(j)] =
          std::sqrt(std::max(0.0, cov(j, j)));
    }
  }
  return fit;
}

double birge_ratio(std::span<const double> values, std::span<const double> uncertainties) {
  if (values.size() != uncertainties.size()) {
    throw DomainError("values and uncertainties differ in length");
  }
  if (values.size() < 2) throw DomainError("Birge ratio needs at least 2 values");
  double sw = 0.0;
  double swx = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(uncertainties[i] > 0.0)) throw DomainError("uncertainties must be positive");
    const double w = 1.0 / (uncertainties[i] * uncertainties[i]);
    sw += w;
    swx += w * values[i];
  }
  const double mean = swx / sw;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = (values[i] - mean) / uncertainties[i];
    chi2 += r * r;
  }
  return chi2 / static_cast<double>(values.size() - 1);
}

std::pair<double, double> mean_and_stddev(std::span<const double> values) {
  if (values.empty()) throw DomainError("no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace h1s2s
